#pragma once

#include <complex>
#include <cstddef>
#include <string_view>

namespace faa::kernels {

// Hot inner loops, implemented once as scalar reference code and once per
// SIMD ISA. A backend is a table of function pointers; the active one is
// picked at startup from CPU features (override with set_backend() or the
// FAA_KERNELS environment variable, values "scalar" / "avx2" / "auto").
//
// Backends agree with the scalar reference to ~1 ulp per operation, not
// bit-exactly: SIMD reductions reassociate sums. Everything downstream is
// tolerance-tested, and a given backend is fully deterministic run to run.
struct Backend {
    const char* name;

    // out[i] = a[i] + b[i] + c[i], evaluated as (a + b) + c
    void (*add3)(const double* a, const double* b, const double* c, double* out, std::size_t n);

    // y[i] += s * x[i]
    void (*axpy)(double s, const double* x, double* y, std::size_t n);

    // out[i] = in[i] * s
    void (*scale)(const double* in, double s, double* out, std::size_t n);

    // out[i] = max(in[i], 0)
    void (*relu)(const double* in, double* out, std::size_t n);

    // out[i] = r0[i] + t * (r1[i] - r0[i])
    void (*lerp)(const double* r0, const double* r1, double t, double* out, std::size_t n);

    // Multiply a row of a checkerboard-signed image: out[i] = in[i] * (-1)^(i + parity)
    void (*alternate_sign)(const double* in, double* out, std::size_t n, int parity);

    // out[i] = |z[i]|^2 for interleaved complex doubles
    void (*squared_magnitude)(const std::complex<double>* z, double* out, std::size_t n);

    // sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);

    // y[r] = bias[r] + sum_c m[r * cols + c] * x[c]; pass bias = nullptr for pure matvec
    void (*matvec)(const double* m, const double* x, const double* bias, double* y,
                   std::size_t rows, std::size_t cols);

    // Bilinear samples along a line through an h x w image:
    //   out[i] = sample(img, x = x0 + i * dx, y = y0 + i * dy)
    // Taps outside [0, w-1] x [0, h-1] contribute zero.
    void (*bilinear_line)(const double* img, int h, int w,
                          double x0, double y0, double dx, double dy,
                          double* out, std::size_t n);
};

const Backend& scalar_backend();

#if defined(__x86_64__) || defined(_M_X64)
bool avx2_available();
const Backend& avx2_backend();
#endif

/// The backend used by the library; selected once on first use.
const Backend& active();

/// Force a backend by name ("scalar", "avx2", "auto"). Returns false if the
/// name is unknown or the ISA is not available on this machine.
bool set_backend(std::string_view name);

} // namespace faa::kernels
