#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "faa/kernels.hpp"
#include "oracles.hpp"

using faa::kernels::Backend;

namespace {

std::vector<const Backend*> all_backends() {
    std::vector<const Backend*> v{&faa::kernels::scalar_backend()};
#if defined(__x86_64__) || defined(_M_X64)
    if (faa::kernels::avx2_available()) v.push_back(&faa::kernels::avx2_backend());
#endif
    return v;
}

std::vector<double> random_vec(std::size_t n, std::uint64_t seed, double lo = -10.0,
                               double hi = 10.0) {
    oracle::Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

// Awkward lengths on purpose: remainder loops must agree too.
const std::size_t kLengths[] = {1, 2, 3, 4, 5, 7, 8, 15, 16, 17, 64, 101};

} // namespace

TEST_CASE("kernel backends agree with scalar reference") {
    const Backend& ref = faa::kernels::scalar_backend();
    for (const Backend* be : all_backends()) {
        CAPTURE(be->name);
        for (std::size_t n : kLengths) {
            const auto a = random_vec(n, 11 * n + 1);
            const auto b = random_vec(n, 11 * n + 2);
            const auto c = random_vec(n, 11 * n + 3);

            std::vector<double> got(n), want(n);

            be->add3(a.data(), b.data(), c.data(), got.data(), n);
            ref.add3(a.data(), b.data(), c.data(), want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));

            got = c;
            want = c;
            be->axpy(1.7, a.data(), got.data(), n);
            ref.axpy(1.7, a.data(), want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));

            be->scale(a.data(), -0.37, got.data(), n);
            ref.scale(a.data(), -0.37, want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == want[i]);

            be->relu(a.data(), got.data(), n);
            ref.relu(a.data(), want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == want[i]);

            be->lerp(a.data(), b.data(), 0.31, got.data(), n);
            ref.lerp(a.data(), b.data(), 0.31, want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14));

            for (int parity : {0, 1}) {
                be->alternate_sign(a.data(), got.data(), n, parity);
                ref.alternate_sign(a.data(), want.data(), n, parity);
                for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == want[i]);
            }

            std::vector<std::complex<double>> z(n);
            for (std::size_t i = 0; i < n; ++i) z[i] = {a[i], b[i]};
            be->squared_magnitude(z.data(), got.data(), n);
            ref.squared_magnitude(z.data(), want.data(), n);
            for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == want[i]);

            const double dg = be->dot(a.data(), b.data(), n);
            const double dw = ref.dot(a.data(), b.data(), n);
            CHECK(dg == doctest::Approx(dw).epsilon(1e-12));
        }
    }
}

TEST_CASE("matvec matches a plain triple loop") {
    const std::size_t rows = 7, cols = 13;
    const auto m = random_vec(rows * cols, 42);
    const auto x = random_vec(cols, 43);
    const auto bias = random_vec(rows, 44);

    std::vector<double> want(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        double acc = bias[r];
        for (std::size_t c = 0; c < cols; ++c) acc += m[r * cols + c] * x[c];
        want[r] = acc;
    }

    for (const Backend* be : all_backends()) {
        CAPTURE(be->name);
        std::vector<double> got(rows);
        be->matvec(m.data(), x.data(), bias.data(), got.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            CHECK(got[r] == doctest::Approx(want[r]).epsilon(1e-12));
        // nullptr bias means zero bias
        be->matvec(m.data(), x.data(), nullptr, got.data(), rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            CHECK(got[r] == doctest::Approx(want[r] - bias[r]).epsilon(1e-10));
    }
}

TEST_CASE("bilinear_line matches the standalone oracle") {
    const faa::Grid img = oracle::random_grid(9, 11, 7);
    struct Line {
        double x0, y0, dx, dy;
        std::size_t n;
    };
    // Interior, boundary-grazing, and far out-of-bounds lines.
    const Line lines[] = {
        {1.25, 2.5, 0.6, 0.3, 12},
        {-3.0, -1.5, 0.9, 0.7, 14},
        {10.5, 8.2, -1.1, -0.9, 13},
        {0.0, 0.0, 1.0, 1.0, 9},
        {8.0, 4.0, -0.261799, 0.966, 11},
        {5.0, 20.0, 0.1, -0.05, 8},
    };

    for (const Backend* be : all_backends()) {
        CAPTURE(be->name);
        for (const Line& ln : lines) {
            std::vector<double> got(ln.n);
            be->bilinear_line(img.data.data(), img.height, img.width, ln.x0, ln.y0, ln.dx, ln.dy,
                              got.data(), ln.n);
            for (std::size_t i = 0; i < ln.n; ++i) {
                const double sx = ln.x0 + static_cast<double>(i) * ln.dx;
                const double sy = ln.y0 + static_cast<double>(i) * ln.dy;
                CHECK(got[i] == doctest::Approx(oracle::bilinear_at(img, sx, sy)).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("backend selection") {
    CHECK(faa::kernels::set_backend("scalar"));
    CHECK(std::string(faa::kernels::active().name) == "scalar");
    CHECK_FALSE(faa::kernels::set_backend("no-such-isa"));
    CHECK(std::string(faa::kernels::active().name) == "scalar");
    CHECK(faa::kernels::set_backend("auto"));
#if defined(__x86_64__) || defined(_M_X64)
    if (faa::kernels::avx2_available()) {
        CHECK(faa::kernels::set_backend("avx2"));
        CHECK(std::string(faa::kernels::active().name) == "avx2");
        CHECK(faa::kernels::set_backend("auto"));
    }
#endif
}
