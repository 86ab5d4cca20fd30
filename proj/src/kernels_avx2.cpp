#include "faa/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace faa::kernels {
namespace {

void add3_avx2(const double* a, const double* b, const double* c, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d va = _mm256_loadu_pd(a + i);
        __m256d vb = _mm256_loadu_pd(b + i);
        __m256d vc = _mm256_loadu_pd(c + i);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_add_pd(va, vb), vc));
    }
    for (; i < n; ++i) out[i] = (a[i] + b[i]) + c[i];
}

void axpy_avx2(double s, const double* x, double* y, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vs, vx, vy));
    }
    for (; i < n; ++i) y[i] += s * x[i];
}

void scale_avx2(const double* in, double s, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(in + i), vs));
    for (; i < n; ++i) out[i] = in[i] * s;
}

void relu_avx2(const double* in, double* out, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_max_pd(_mm256_loadu_pd(in + i), zero));
    for (; i < n; ++i) out[i] = in[i] > 0.0 ? in[i] : 0.0;
}

void lerp_avx2(const double* r0, const double* r1, double t, double* out, std::size_t n) {
    const __m256d vt = _mm256_set1_pd(t);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(r0 + i);
        __m256d v1 = _mm256_loadu_pd(r1 + i);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vt, _mm256_sub_pd(v1, v0), v0));
    }
    for (; i < n; ++i) out[i] = r0[i] + t * (r1[i] - r0[i]);
}

void alternate_sign_avx2(const double* in, double* out, std::size_t n, int parity) {
    // Lane signs (-1)^(i+parity); a stride of 4 keeps lane parity fixed.
    const __m256d signs = (parity & 1)
        ? _mm256_set_pd(0.0, -0.0, 0.0, -0.0)
        : _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_xor_pd(_mm256_loadu_pd(in + i), signs));
    double sign = ((i + static_cast<std::size_t>(parity)) & 1) ? -1.0 : 1.0;
    for (; i < n; ++i) {
        out[i] = in[i] * sign;
        sign = -sign;
    }
}

void squared_magnitude_avx2(const std::complex<double>* z, double* out, std::size_t n) {
    const double* p = reinterpret_cast<const double*>(z);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d a = _mm256_loadu_pd(p + 2 * i);     // re0 im0 re1 im1
        __m256d b = _mm256_loadu_pd(p + 2 * i + 4); // re2 im2 re3 im3
        __m256d h = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
        // h = |z0|^2 |z2|^2 |z1|^2 |z3|^2
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; i < n; ++i) {
        const double re = z[i].real(), im = z[i].imag();
        out[i] = re * re + im * im;
    }
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double sum = hsum(acc);
    for (; i < n; ++i) sum += a[i] * b[i];
    return sum;
}

void matvec_avx2(const double* m, const double* x, const double* bias, double* y,
                 std::size_t rows, std::size_t cols) {
    for (std::size_t r = 0; r < rows; ++r) {
        const double* row = m + r * cols;
        __m256d acc = _mm256_setzero_pd();
        std::size_t c = 0;
        for (; c + 4 <= cols; c += 4)
            acc = _mm256_fmadd_pd(_mm256_loadu_pd(row + c), _mm256_loadu_pd(x + c), acc);
        double sum = (bias ? bias[r] : 0.0) + hsum(acc);
        for (; c < cols; ++c) sum += row[c] * x[c];
        y[r] = sum;
    }
}

// Gathers are made safe by clamping indices into the image; a tap's
// contribution is then zeroed when the unclamped index was out of range.
void bilinear_line_avx2(const double* img, int h, int w,
                        double x0, double y0, double dx, double dy,
                        double* out, std::size_t n) {
    const __m256d vx0 = _mm256_set1_pd(x0);
    const __m256d vy0 = _mm256_set1_pd(y0);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d vdy = _mm256_set1_pd(dy);
    const __m256d lo = _mm256_set1_pd(-2.0);
    const __m256d hix = _mm256_set1_pd(static_cast<double>(w) + 1.0);
    const __m256d hiy = _mm256_set1_pd(static_cast<double>(h) + 1.0);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d xmax = _mm256_set1_pd(static_cast<double>(w - 1));
    const __m256d ymax = _mm256_set1_pd(static_cast<double>(h - 1));
    const __m128i ixmax = _mm_set1_epi32(w - 1);
    const __m128i iymax = _mm_set1_epi32(h - 1);
    const __m128i izero = _mm_setzero_si128();
    const __m128i ivw = _mm_set1_epi32(w);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d idx = _mm256_set_pd(static_cast<double>(i + 3), static_cast<double>(i + 2),
                                          static_cast<double>(i + 1), static_cast<double>(i));
        __m256d sx = _mm256_fmadd_pd(idx, vdx, vx0);
        __m256d sy = _mm256_fmadd_pd(idx, vdy, vy0);
        __m256d fx = _mm256_floor_pd(sx);
        __m256d fy = _mm256_floor_pd(sy);
        const __m256d tx = _mm256_sub_pd(sx, fx);
        const __m256d ty = _mm256_sub_pd(sy, fy);

        // Tap validity from the unclamped floor coordinates.
        const __m256d vx_lo = _mm256_cmp_pd(fx, zero, _CMP_GE_OQ);
        const __m256d vx_hi = _mm256_cmp_pd(fx, xmax, _CMP_LE_OQ);
        const __m256d vx1_lo = _mm256_cmp_pd(fx, _mm256_set1_pd(-1.0), _CMP_GE_OQ);
        const __m256d vx1_hi = _mm256_cmp_pd(fx, _mm256_set1_pd(static_cast<double>(w - 2)), _CMP_LE_OQ);
        const __m256d vy_lo = _mm256_cmp_pd(fy, zero, _CMP_GE_OQ);
        const __m256d vy_hi = _mm256_cmp_pd(fy, ymax, _CMP_LE_OQ);
        const __m256d vy1_lo = _mm256_cmp_pd(fy, _mm256_set1_pd(-1.0), _CMP_GE_OQ);
        const __m256d vy1_hi = _mm256_cmp_pd(fy, _mm256_set1_pd(static_cast<double>(h - 2)), _CMP_LE_OQ);
        const __m256d valx0 = _mm256_and_pd(vx_lo, vx_hi);
        const __m256d valx1 = _mm256_and_pd(vx1_lo, vx1_hi);
        const __m256d valy0 = _mm256_and_pd(vy_lo, vy_hi);
        const __m256d valy1 = _mm256_and_pd(vy1_lo, vy1_hi);

        // Clamp before int conversion so the gather indices stay in range.
        fx = _mm256_min_pd(_mm256_max_pd(fx, lo), hix);
        fy = _mm256_min_pd(_mm256_max_pd(fy, lo), hiy);
        __m128i ix = _mm256_cvtpd_epi32(fx);
        __m128i iy = _mm256_cvtpd_epi32(fy);
        __m128i cx0 = _mm_min_epi32(_mm_max_epi32(ix, izero), ixmax);
        __m128i cx1 = _mm_min_epi32(_mm_max_epi32(_mm_add_epi32(ix, _mm_set1_epi32(1)), izero), ixmax);
        __m128i cy0 = _mm_min_epi32(_mm_max_epi32(iy, izero), iymax);
        __m128i cy1 = _mm_min_epi32(_mm_max_epi32(_mm_add_epi32(iy, _mm_set1_epi32(1)), izero), iymax);

        __m128i row0 = _mm_mullo_epi32(cy0, ivw);
        __m128i row1 = _mm_mullo_epi32(cy1, ivw);
        __m256d v00 = _mm256_i32gather_pd(img, _mm_add_epi32(row0, cx0), 8);
        __m256d v01 = _mm256_i32gather_pd(img, _mm_add_epi32(row0, cx1), 8);
        __m256d v10 = _mm256_i32gather_pd(img, _mm_add_epi32(row1, cx0), 8);
        __m256d v11 = _mm256_i32gather_pd(img, _mm_add_epi32(row1, cx1), 8);
        v00 = _mm256_and_pd(v00, _mm256_and_pd(valy0, valx0));
        v01 = _mm256_and_pd(v01, _mm256_and_pd(valy0, valx1));
        v10 = _mm256_and_pd(v10, _mm256_and_pd(valy1, valx0));
        v11 = _mm256_and_pd(v11, _mm256_and_pd(valy1, valx1));

        const __m256d top = _mm256_fmadd_pd(tx, _mm256_sub_pd(v01, v00), v00);
        const __m256d bot = _mm256_fmadd_pd(tx, _mm256_sub_pd(v11, v10), v10);
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(ty, _mm256_sub_pd(bot, top), top));
    }
    for (; i < n; ++i) {
        const double sx = x0 + static_cast<double>(i) * dx;
        const double sy = y0 + static_cast<double>(i) * dy;
        const double fx = std::floor(sx);
        const double fy = std::floor(sy);
        const int ix = static_cast<int>(fx);
        const int iy = static_cast<int>(fy);
        const double tx = sx - fx;
        const double ty = sy - fy;
        auto tap = [&](int yy, int xx) -> double {
            if (xx < 0 || xx >= w || yy < 0 || yy >= h) return 0.0;
            return img[static_cast<std::size_t>(yy) * w + xx];
        };
        const double v00 = tap(iy, ix), v01 = tap(iy, ix + 1);
        const double v10 = tap(iy + 1, ix), v11 = tap(iy + 1, ix + 1);
        const double top = v00 + tx * (v01 - v00);
        const double bot = v10 + tx * (v11 - v10);
        out[i] = top + ty * (bot - top);
    }
}

} // namespace

bool avx2_available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

const Backend& avx2_backend() {
    static const Backend b{
        "avx2",
        add3_avx2,
        axpy_avx2,
        scale_avx2,
        relu_avx2,
        lerp_avx2,
        alternate_sign_avx2,
        squared_magnitude_avx2,
        dot_avx2,
        matvec_avx2,
        bilinear_line_avx2,
    };
    return b;
}

} // namespace faa::kernels

#endif // x86_64
