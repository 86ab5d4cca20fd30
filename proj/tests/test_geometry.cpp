#include <doctest.h>

#include <cmath>
#include <numbers>

#include "faa/geometry.hpp"
#include "faa/synthbench.hpp"
#include "oracles.hpp"

using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;

double max_abs_diff_interior(const faa::Grid& a, const faa::Grid& b, double radius) {
    const double cy = (a.height - 1) / 2.0, cx = (a.width - 1) / 2.0;
    double m = 0.0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            const double dy = y - cy, dx = x - cx;
            if (dx * dx + dy * dy > radius * radius) continue;
            m = std::max(m, std::abs(a.at(y, x) - b.at(y, x)));
        }
    return m;
}

faa::RectSpec centered_rect(int H, double a, double b, double phi) {
    faa::RectSpec spec;
    spec.canvas = H;
    spec.a = a;
    spec.b = b;
    spec.phi = phi;
    spec.center = {{(H - 1) / 2.0, (H - 1) / 2.0}}; // on the rotation center
    return spec;
}

} // namespace

TEST_CASE("rotate: exact paths") {
    const faa::Grid g = oracle::random_grid(8, 8, 12);

    SUBCASE("angle 0 is bit-identical") {
        const faa::Grid r = faa::rotate(g, 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(r.data[i] == g.data[i]);
    }

    SUBCASE("spec overload matches the angle overload") {
        const faa::Grid a = faa::rotate(g, 0.4);
        const faa::Grid b = faa::rotate(g, faa::RotationSpec{0.4});
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(a.data[i] == b.data[i]);
    }

    SUBCASE("quarter turns are pure permutations") {
        const faa::Grid r90 = faa::rotate(g, pi / 2.0);
        const faa::Grid r180 = faa::rotate(g, pi);
        const faa::Grid r270 = faa::rotate(g, -pi / 2.0);
        const int H = g.height;
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < H; ++x) {
                CHECK(r90.at(y, x) == g.at(H - 1 - x, y));
                CHECK(r180.at(y, x) == g.at(H - 1 - y, H - 1 - x));
                CHECK(r270.at(y, x) == g.at(x, H - 1 - y));
            }
    }

    SUBCASE("two quarter turns compose into a half turn exactly") {
        const faa::Grid twice = faa::rotate(faa::rotate(g, pi / 2.0), pi / 2.0);
        const faa::Grid half = faa::rotate(g, pi);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(twice.data[i] == half.data[i]);
    }
}

TEST_CASE("rotate: resampling path") {
    SUBCASE("agrees with the per-pixel oracle") {
        const faa::Grid g = oracle::random_grid(16, 16, 9);
        for (double angle : {0.3, -1.2, 2.4}) {
            const faa::Grid got = faa::rotate(g, angle);
            const faa::Grid want = oracle::rotate_reference(g, angle);
            for (std::size_t i = 0; i < g.size(); ++i)
                CHECK(got.data[i] == Approx(want.data[i]).epsilon(1e-12));
        }
    }

    SUBCASE("rotate there and back recovers the interior") {
        // Very smooth content: two long-wavelength waves under the radial
        // envelope, so two bilinear passes cost only a few percent.
        const int H = 64;
        const double c = (H - 1) / 2.0, R = H / 2.0 - 2.0;
        faa::Grid g(H, H, 0.0);
        for (int y = 0; y < H; ++y)
            for (int x = 0; x < H; ++x) {
                const double dx = x - c, dy = y - c;
                const double r = std::hypot(dx, dy);
                if (r > R) continue;
                const double env = 0.5 * (1.0 + std::cos(pi * r / R));
                g.at(y, x) = env * (std::cos(2.0 * pi * 2.3 * (0.8 * dx + 0.6 * dy) / H) +
                                    0.4 * std::cos(2.0 * pi * 3.1 * (0.2 * dx - 0.98 * dy) / H + 0.7));
            }
        const double angle = 30.0 * pi / 180.0;
        const faa::Grid back = faa::rotate(faa::rotate(g, angle), -angle);
        CHECK(max_abs_diff_interior(g, back, 30.0) < 0.05);
    }

    SUBCASE("approximately preserves mass of interior shapes") {
        const faa::Grid g = faa::make_rectangle(centered_rect(64, 14.0, 5.0, 0.2));
        double sum_in = 0.0;
        for (double v : g.data) sum_in += v;
        for (double angle : {0.4, 1.1, 2.0, 2.9}) {
            const faa::Grid r = faa::rotate(g, angle);
            double sum_out = 0.0;
            for (double v : r.data) sum_out += v;
            CHECK(std::abs(sum_out - sum_in) / sum_in < 0.02);
        }
    }

    SUBCASE("rejects non-finite input") {
        faa::Grid bad(4, 4, 0.0);
        bad.at(1, 1) = std::numeric_limits<double>::infinity();
        CHECK_THROWS_AS(faa::rotate(bad, 0.1), faa::ShapeError);
    }
}

TEST_CASE("faa_align") {
    faa::FaeConfig cfg;

    SUBCASE("constant grid passes through untouched") {
        const faa::Grid g(16, 16, 2.5);
        const faa::AlignResult res = faa::faa_align(g, 1.0, cfg);
        CHECK(res.estimate.degenerate);
        CHECK(res.delta_theta == 0.0);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(res.aligned.data[i] == g.data[i]);
    }

    SUBCASE("horizontal rectangle aligned to 0 becomes vertical") {
        const faa::Grid g = faa::make_rectangle(centered_rect(64, 20.0, 6.0, 0.0));
        const faa::AlignResult res = faa::faa_align(g, 0.0, cfg);
        CHECK_FALSE(res.estimate.degenerate);
        // theta_hat ~ 90 deg, so the applied rotation is ~ +-90 deg
        CHECK(std::abs(std::abs(res.delta_theta) - pi / 2.0) < 2.0 * pi / 180.0);
        const auto re = faa::fae(res.aligned, cfg);
        const double deg = re.theta_hat * 180.0 / pi;
        CHECK(faa::circular_distance_deg(deg, 0.0, 180.0) <= 2.0);
    }

    SUBCASE("re-aligning an aligned grid is a no-op within tolerance") {
        const faa::Grid g = faa::make_rectangle(centered_rect(64, 20.0, 6.0, 0.6));
        const faa::AlignResult first = faa::faa_align(g, 0.0, cfg);
        const faa::AlignResult second = faa::faa_align(first.aligned, 0.0, cfg);
        CHECK(std::abs(second.delta_theta) <= pi / 180.0); // at most one bin
        CHECK(max_abs_diff_interior(first.aligned, second.aligned, 30.0) < 0.05);
    }

    SUBCASE("delta is always the smallest equivalent rotation") {
        for (double phi : {0.0, 0.7, 1.4, 2.4, 3.0}) {
            const faa::Grid g = faa::make_rectangle(centered_rect(64, 16.0, 4.0, phi));
            const faa::AlignResult res = faa::faa_align(g, 0.0, cfg);
            CHECK(res.delta_theta > -pi / 2.0);
            CHECK(res.delta_theta <= pi / 2.0);
        }
    }
}

TEST_CASE("faa_align rotation invariance mod 180") {
    faa::FaeConfig cfg;
    const double poses[] = {0.0, 30.0, 60.0, 120.0};
    std::vector<faa::Grid> aligned;
    for (double pose : poses) {
        const faa::Grid g = faa::make_rectangle(centered_rect(64, 20.0, 6.0, pose * pi / 180.0));
        aligned.push_back(faa::faa_align(g, 0.0, cfg).aligned);
    }
    for (std::size_t i = 0; i < aligned.size(); ++i)
        for (std::size_t j = i + 1; j < aligned.size(); ++j) {
            CAPTURE(i);
            CAPTURE(j);
            CHECK(faa::ncc_disk_mod180(aligned[i], aligned[j], 30.0) >= 0.9);
        }
}

TEST_CASE("upsample2x") {
    SUBCASE("a constant stays constant, exactly") {
        const faa::FeatureMap f(2, 3, 5, 1.25);
        const faa::FeatureMap up = faa::upsample2x(f);
        CHECK(up.height == 6);
        CHECK(up.width == 10);
        for (double v : up.data) CHECK(v == 1.25);
    }

    SUBCASE("1x2x2 matches the closed-form oracle") {
        faa::FeatureMap f(1, 2, 2);
        f.data = {1.0, 2.0, 3.0, 5.0};
        const faa::FeatureMap up = faa::upsample2x(f);
        REQUIRE(up.height == 4);
        REQUIRE(up.width == 4);
        const faa::Grid in = f.channel(0);
        for (int y = 0; y < 4; ++y)
            for (int x = 0; x < 4; ++x)
                CHECK(up.at(0, y, x) == Approx(oracle::upsample2x_at(in, y, x)).epsilon(1e-12));
    }

    SUBCASE("random multi-channel agrees with the oracle per channel") {
        const faa::FeatureMap f = oracle::random_feature_map(3, 5, 7, 23);
        const faa::FeatureMap up = faa::upsample2x(f);
        CHECK(up.channels == 3);
        CHECK(up.height == 10);
        CHECK(up.width == 14);
        for (int c = 0; c < 3; ++c) {
            const faa::Grid in = f.channel(c);
            for (int y = 0; y < up.height; ++y)
                for (int x = 0; x < up.width; ++x)
                    CHECK(up.at(c, y, x) == Approx(oracle::upsample2x_at(in, y, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("unfold") {
    SUBCASE("tiled 4x4 with k=2 partitions the input") {
        const faa::FeatureMap f = oracle::random_feature_map(1, 4, 4, 3);
        const faa::PatchSet ps = faa::unfold(f, faa::PatchSpec::tiled(2));
        REQUIRE(ps.patches.size() == 4);
        CHECK(ps.rows == 2);
        CHECK(ps.cols == 2);
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                const faa::FeatureMap& p = ps.patches[static_cast<std::size_t>(r) * 2 + c];
                for (int y = 0; y < 2; ++y)
                    for (int x = 0; x < 2; ++x)
                        CHECK(p.at(0, y, x) == f.at(0, 2 * r + y, 2 * c + x));
            }
    }

    SUBCASE("dense 4x4 with k=3 yields one patch per pixel, zero-padded") {
        const faa::FeatureMap f = oracle::random_feature_map(1, 4, 4, 5);
        const faa::PatchSet ps = faa::unfold(f, faa::PatchSpec::dense(3));
        REQUIRE(ps.patches.size() == 16);
        const faa::FeatureMap& corner = ps.patches[0]; // origin (-1, -1)
        for (int x = 0; x < 3; ++x) CHECK(corner.at(0, 0, x) == 0.0);
        for (int y = 0; y < 3; ++y) CHECK(corner.at(0, y, 0) == 0.0);
        CHECK(corner.at(0, 1, 1) == f.at(0, 0, 0));
    }

    SUBCASE("tiled divisibility enforced") {
        const faa::FeatureMap f(1, 6, 6, 1.0);
        CHECK_THROWS_AS(faa::unfold(f, faa::PatchSpec::tiled(4)), faa::ShapeError);
    }

    SUBCASE("dense factory rejects even kernels") {
        CHECK_THROWS_AS(faa::PatchSpec::dense(4), faa::ShapeError);
    }
}

TEST_CASE("fold") {
    SUBCASE("tiled round trip is exact") {
        const faa::FeatureMap f = oracle::random_feature_map(2, 8, 8, 7);
        const faa::PatchSpec spec = faa::PatchSpec::tiled(4);
        const faa::FeatureMap back = faa::fold(faa::unfold(f, spec), spec, 8, 8);
        for (std::size_t i = 0; i < f.data.size(); ++i) CHECK(back.data[i] == f.data[i]);
    }

    SUBCASE("dense normalized round trip within 1e-12") {
        const faa::FeatureMap f = oracle::random_feature_map(1, 16, 16, 8);
        const faa::PatchSpec spec = faa::PatchSpec::dense(5);
        const faa::PatchSet ps = faa::unfold(f, spec);
        CHECK(ps.patches.size() == 256); // one patch per pixel
        const faa::FeatureMap back = faa::fold(ps, spec, 16, 16);
        for (std::size_t i = 0; i < f.data.size(); ++i)
            CHECK(back.data[i] == Approx(f.data[i]).epsilon(1e-12));
    }

    SUBCASE("unnormalized all-ones fold produces the contribution counts") {
        const faa::FeatureMap ones(1, 6, 6, 1.0);
        faa::PatchSpec spec = faa::PatchSpec::dense(3);
        spec.normalize_fold = false;
        faa::PatchSet ps = faa::unfold(ones, spec);
        for (auto& p : ps.patches) std::fill(p.data.begin(), p.data.end(), 1.0);
        const faa::FeatureMap counts = faa::fold(ps, spec, 6, 6);
        // Interior pixels receive k^2 = 9 contributions, corners only 4.
        CHECK(counts.at(0, 2, 2) == 9.0);
        CHECK(counts.at(0, 0, 0) == 4.0);
        CHECK(counts.at(0, 0, 2) == 6.0);
    }

    SUBCASE("inconsistent patch set rejected") {
        const faa::FeatureMap f = oracle::random_feature_map(1, 8, 8, 2);
        const faa::PatchSpec spec = faa::PatchSpec::tiled(4);
        faa::PatchSet ps = faa::unfold(f, spec);
        ps.patches.pop_back();
        ps.origins.pop_back();
        CHECK_THROWS_AS(faa::fold(ps, spec, 8, 8), faa::ShapeError);
        CHECK_THROWS_AS(faa::fold(faa::unfold(f, spec), spec, 12, 8), faa::ShapeError);
    }
}
