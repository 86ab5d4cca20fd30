#include "faa/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace faa::kernels {
namespace {

void add3_scalar(const double* a, const double* b, const double* c, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = (a[i] + b[i]) + c[i];
}

void axpy_scalar(double s, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void scale_scalar(const double* in, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] * s;
}

void relu_scalar(const double* in, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void lerp_scalar(const double* r0, const double* r1, double t, double* out, std::size_t n) {
    // Difference form keeps constants exact: r0 == r1 gives out == r0.
    for (std::size_t i = 0; i < n; ++i) out[i] = r0[i] + t * (r1[i] - r0[i]);
}

void alternate_sign_scalar(const double* in, double* out, std::size_t n, int parity) {
    double sign = (parity & 1) ? -1.0 : 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = in[i] * sign;
        sign = -sign;
    }
}

void squared_magnitude_scalar(const std::complex<double>* z, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        out[i] = re * re + im * im;
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void matvec_scalar(const double* m, const double* x, const double* bias, double* y,
                   std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = bias ? bias[r] : 0.0;
        const double* row = m + r * cols;
        for (std::size_t c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

// One bilinear tap with zero outside the image.
inline double tap(const double* img, int h, int w, int y, int x) {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0;
    return img[static_cast<std::size_t>(y) * w + x];
}

void bilinear_line_scalar(const double* img, int h, int w,
                          double x0, double y0, double dx, double dy,
                          double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double sx = x0 + static_cast<double>(i) * dx;
        const double sy = y0 + static_cast<double>(i) * dy;
        const double fx = std::floor(sx);
        const double fy = std::floor(sy);
        const int ix = static_cast<int>(fx);
        const int iy = static_cast<int>(fy);
        const double tx = sx - fx;
        const double ty = sy - fy;
        const double v00 = tap(img, h, w, iy, ix);
        const double v01 = tap(img, h, w, iy, ix + 1);
        const double v10 = tap(img, h, w, iy + 1, ix);
        const double v11 = tap(img, h, w, iy + 1, ix + 1);
        const double top = v00 + tx * (v01 - v00);
        const double bot = v10 + tx * (v11 - v10);
        out[i] = top + ty * (bot - top);
    }
}

} // namespace

const Backend& scalar_backend() {
    static const Backend b{
        "scalar",
        add3_scalar,
        axpy_scalar,
        scale_scalar,
        relu_scalar,
        lerp_scalar,
        alternate_sign_scalar,
        squared_magnitude_scalar,
        dot_scalar,
        matvec_scalar,
        bilinear_line_scalar,
    };
    return b;
}

} // namespace faa::kernels
