#include "faa/synthbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <json.hpp>

#include "faa/geometry.hpp"

namespace faa {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;

double deg_to_rad(double d) { return d * pi / 180.0; }
double rad_to_deg(double r) { return r * 180.0 / pi; }

} // namespace

Grid make_rectangle(const RectSpec& spec) {
    const int H = spec.canvas;
    if (H < 4 || H % 2 != 0) throw ShapeError("make_rectangle: canvas must be even and >= 4");
    if (!(spec.b > 0.0 && spec.b <= spec.a && spec.a < H / 2.0 - 2.0))
        throw ShapeError("make_rectangle: need 0 < b <= a < H/2 - 2");

    // Pose mod pi: a rectangle and its half-turn are the same shape, and
    // normalizing first makes phi and phi+pi produce identical grids.
    double phi = std::fmod(spec.phi, pi);
    if (phi < 0.0) phi += pi;
    const double cy = spec.center ? spec.center->first : H / 2.0;
    const double cx = spec.center ? spec.center->second : H / 2.0;
    // Snap quarter-turn poses to exact axes so the 90-degree symmetry
    // holds pixel for pixel.
    double ct, st;
    if (std::abs(phi) < 1e-12 || std::abs(phi - pi) < 1e-12) {
        ct = 1.0;
        st = 0.0;
    } else if (std::abs(phi - pi / 2.0) < 1e-12) {
        ct = 0.0;
        st = 1.0;
    } else {
        ct = std::cos(phi);
        st = std::sin(phi);
    }

    const auto inside = [&](double px, double py) {
        const double dx = px - cx, dy = py - cy;
        const double rx = dx * ct + dy * st;  // R(-phi) applied to (dx, dy)
        const double ry = -dx * st + dy * ct;
        return std::abs(rx) <= spec.a && std::abs(ry) <= spec.b;
    };

    Grid g(H, H, 0.0);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < H; ++x) {
            double cov = 0.0;
            if (spec.antialias) {
                for (int sy = 0; sy < 4; ++sy)
                    for (int sx = 0; sx < 4; ++sx)
                        if (inside(x + (sx + 0.5) / 4.0 - 0.5, y + (sy + 0.5) / 4.0 - 0.5))
                            cov += 1.0;
                cov /= 16.0;
            } else {
                cov = inside(static_cast<double>(x), static_cast<double>(y)) ? 1.0 : 0.0;
            }
            g.at(y, x) = spec.amplitude * cov;
        }
    }
    return g;
}

Grid dirichlet_rect_spectrum(int H, int a_px, int b_px) {
    if (H < 2 || H % 2 != 0) throw ShapeError("dirichlet_rect_spectrum: H must be even and >= 2");
    if (a_px < 0 || b_px < 0 || 2 * a_px + 1 > H || 2 * b_px + 1 > H)
        throw ShapeError("dirichlet_rect_spectrum: extents (2a+1, 2b+1) must fit in H");

    const auto dirichlet = [H](int n, int k) {
        if (k == 0) return static_cast<double>(n);
        return std::sin(pi * n * k / H) / std::sin(pi * k / H);
    };

    const int na = 2 * a_px + 1, nb = 2 * b_px + 1;
    Grid g(H, H);
    for (int v = 0; v < H; ++v) {
        const int vc = v - H / 2;
        const double dv = dirichlet(nb, vc);
        for (int u = 0; u < H; ++u) {
            const int uc = u - H / 2;
            const double du = dirichlet(na, uc);
            const double m = du * dv;
            g.at(v, u) = m * m;
        }
    }
    return g;
}

double oracle_angle_dense(const Grid& g, double step_deg) {
    if (!g.square() || g.height % 2 != 0)
        throw ShapeError("oracle_angle_dense: grid must be square with even side");
    if (!(step_deg > 0.0)) throw ShapeError("oracle_angle_dense: step must be positive");

    const int H = g.height;
    const PowerSpectrum p = power_spectrum(dft2_centered(g));

    const int n_full = std::max(2, 2 * static_cast<int>(std::llround(180.0 / step_deg)));
    const double step = two_pi / n_full;
    const double c = H / 2.0;
    // The orientation signal lives in the high-frequency regime. The main
    // lobe around DC is huge and nearly isotropic but only exists at a few
    // lattice angles, so including it pins the argmax to 0/45/90 degrees.
    const double rho_min = H / 8.0;
    const double rho_max = H / 2.0 - 1.0;

    std::vector<double> acc(static_cast<std::size_t>(n_full), 0.0);
    for (int v = 0; v < H; ++v) {
        const double dy = v - c;
        for (int u = 0; u < H; ++u) {
            const double dx = u - c;
            const double rho = std::hypot(dx, dy);
            if (rho < rho_min || rho > rho_max) continue;
            double theta = std::atan2(dy, dx);
            if (theta < 0.0) theta += two_pi;
            int bin = static_cast<int>(theta / step);
            if (bin >= n_full) bin = n_full - 1;
            acc[bin] += rho * p.values.at(v, u);
        }
    }

    const int m = n_full / 2;
    std::vector<double> folded(static_cast<std::size_t>(m));
    double total = 0.0;
    for (int j = 0; j < m; ++j) {
        folded[j] = acc[j] + acc[j + m];
        total += folded[j];
    }
    if (total == 0.0) return 0.0;

    // Fine bins hold one or two pixels each, so locate the ridge in two
    // steps: argmax of a ~2 degree boxcar aggregate, then the centroid of
    // the raw bins inside that window.
    const int w = std::max(1, static_cast<int>(std::llround(2.0 / step_deg)));
    std::vector<double> agg(static_cast<std::size_t>(m), 0.0);
    for (int j = 0; j < m; ++j)
        for (int k = -w; k <= w; ++k) agg[j] += folded[((j + k) % m + m) % m];
    int best = 0;
    for (int j = 1; j < m; ++j)
        if (agg[j] > agg[best]) best = j;

    double num = 0.0, den = 0.0;
    for (int k = -w; k <= w; ++k) {
        const double v = folded[((best + k) % m + m) % m];
        num += v * (best + k + 0.5);
        den += v;
    }
    double angle = (den > 0.0 ? num / den : best + 0.5) * pi / m;
    if (angle < 0.0) angle += pi;
    if (angle >= pi) angle -= pi;
    return angle;
}

Grid make_test_image(int H, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    // A smooth oriented Gaussian bar plus a weak low-frequency wave. The
    // bar's spectral ridge spans all radii, so the angular peak tracks
    // rotations to about a bin. Its orientation is kept >= 5 degrees away
    // from the lattice axes, where exact-lattice polar rays carry a small
    // systematic bias.
    double bar_deg = 6.0 + 18.0 * unit();
    if (unit() < 0.5) bar_deg += 90.0;
    const double ang = bar_deg * pi / 180.0;
    const double sigma_along = 12.0, sigma_across = 1.5;
    const double wave_freq = 2.0 + 1.5 * unit();
    const double wave_dir = pi * unit();
    const double wave_phase = two_pi * unit();

    const double c = (H - 1) / 2.0; // rotation center: rotated copies keep support
    const double R = H / 2.0 - 2.0;
    const double ca = std::cos(ang), sn = std::sin(ang);
    Grid g(H, H, 0.0);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < H; ++x) {
            const double dx = x - c, dy = y - c;
            const double r = std::hypot(dx, dy);
            if (r > R) continue;
            const double env = 0.5 * (1.0 + std::cos(pi * r / R));
            const double xr = dx * ca + dy * sn;
            const double yr = -dx * sn + dy * ca;
            const double bar = std::exp(
                -0.5 * (xr * xr / (sigma_along * sigma_along) + yr * yr / (sigma_across * sigma_across)));
            const double proj = dx * std::cos(wave_dir) + dy * std::sin(wave_dir);
            const double wave = 0.1 * std::cos(two_pi * wave_freq * proj / H + wave_phase);
            g.at(y, x) = env * (bar + wave);
        }
    }
    return g;
}

double ncc_disk(const Grid& a, const Grid& b, double radius,
                std::optional<std::pair<double, double>> center) {
    if (a.height != b.height || a.width != b.width)
        throw ShapeError("ncc_disk: grids must share a shape");
    const double cy = center ? center->first : (a.height - 1) / 2.0;
    const double cx = center ? center->second : (a.width - 1) / 2.0;
    const double r2 = radius * radius;

    double sa = 0.0, sb = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            const double dy = y - cy, dx = x - cx;
            if (dy * dy + dx * dx > r2) continue;
            sa += a.at(y, x);
            sb += b.at(y, x);
            ++n;
        }
    if (n == 0) return 0.0;
    const double ma = sa / n, mb = sb / n;

    double cross = 0.0, va = 0.0, vb = 0.0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            const double dy = y - cy, dx = x - cx;
            if (dy * dy + dx * dx > r2) continue;
            const double da = a.at(y, x) - ma;
            const double db = b.at(y, x) - mb;
            cross += da * db;
            va += da * da;
            vb += db * db;
        }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cross / std::sqrt(va * vb);
}

double ncc_disk_mod180(const Grid& a, const Grid& b, double radius) {
    return std::max(ncc_disk(a, b, radius), ncc_disk(a, rotate(b, pi), radius));
}

double circular_distance_deg(double a_deg, double b_deg, double period_deg) {
    double d = std::fmod(std::abs(a_deg - b_deg), period_deg);
    return std::min(d, period_deg - d);
}

BenchReport bench_angle_sweep(int H, double a, double b,
                              const std::vector<double>& angles_deg, const FaeConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    BenchReport r;
    r.config.canvas = H;
    r.config.a = a;
    r.config.b = b;
    r.config.n_theta = cfg.n_theta;
    r.config.n_rho = cfg.n_rho > 0 ? cfg.n_rho : std::max(1, H / 2 - 1);
    r.config.energy_floor = cfg.energy_floor;
    r.config.window = cfg.window == Window::hann ? "hann" : "none";

    std::vector<double> errors;
    for (double phi_deg : angles_deg) {
        RectSpec spec;
        spec.canvas = H;
        spec.a = a;
        spec.b = b;
        spec.phi = deg_to_rad(phi_deg);
        const Grid g = make_rectangle(spec);
        const AngleEstimate est = fae(g, cfg);

        BenchAngleRow row;
        row.phi_deg = phi_deg;
        row.theta_hat_deg = rad_to_deg(est.theta_hat);
        row.expected_deg = std::fmod(std::fmod(phi_deg + 90.0, 180.0) + 180.0, 180.0);
        row.abs_error_deg = circular_distance_deg(row.theta_hat_deg, row.expected_deg, 180.0);
        row.fae_degenerate = est.degenerate;
        row.orientation_degenerate = a == b;
        if (!row.orientation_degenerate) errors.push_back(row.abs_error_deg);
        r.rows.push_back(row);
    }

    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        const std::size_t n = errors.size();
        r.summary.median_error_deg =
            n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
        const std::size_t rank = static_cast<std::size_t>(std::ceil(0.9 * n));
        r.summary.p90_error_deg = errors[std::min(n - 1, rank == 0 ? 0 : rank - 1)];
        r.summary.max_error_deg = errors.back();
        r.summary.count = static_cast<int>(n);
    }

    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0).count();
    return r;
}

EquivarianceReport bench_equivariance(const Grid& g, const std::vector<double>& angles_deg,
                                      const FaeConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();

    const auto peak = [](const std::vector<double>& h) {
        int best = 0;
        for (std::size_t j = 1; j < h.size(); ++j)
            if (h[j] > h[best]) best = static_cast<int>(j);
        return best;
    };

    EquivarianceReport r;
    const AngleEstimate base = fae(g, cfg);
    const int m = static_cast<int>(base.histogram.size());
    const double bin_width_deg = 180.0 / m;
    const int base_peak = peak(base.histogram);

    for (double phi_deg : angles_deg) {
        const AngleEstimate est = fae(rotate(g, deg_to_rad(phi_deg)), cfg);
        EquivarianceRow row;
        row.phi_deg = phi_deg;
        row.base_peak_bin = base_peak;
        row.rotated_peak_bin = peak(est.histogram);
        const int shift = static_cast<int>(std::llround(phi_deg / bin_width_deg));
        row.expected_bin = ((base_peak + shift) % m + m) % m;
        const int d = std::abs(row.rotated_peak_bin - row.expected_bin) % m;
        row.displacement_bins = std::min(d, m - d);
        r.max_displacement_bins = std::max(r.max_displacement_bins, row.displacement_bins);
        r.rows.push_back(row);
    }

    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

nlohmann::ordered_json summary_json(const BenchReport& r) {
    return {{"median_error_deg", r.summary.median_error_deg},
            {"p90_error_deg", r.summary.p90_error_deg},
            {"max_error_deg", r.summary.max_error_deg},
            {"count", r.summary.count}};
}

} // namespace

std::string bench_report_to_json(const BenchReport& r, bool include_runtime) {
    nlohmann::ordered_json j;
    j["config"] = {{"canvas", r.config.canvas}, {"a", r.config.a},     {"b", r.config.b},
                   {"n_theta", r.config.n_theta}, {"n_rho", r.config.n_rho},
                   {"energy_floor", r.config.energy_floor}, {"window", r.config.window}};
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"phi_deg", row.phi_deg},
                             {"theta_hat_deg", row.theta_hat_deg},
                             {"expected_deg", row.expected_deg},
                             {"abs_error_deg", row.abs_error_deg},
                             {"fae_degenerate", row.fae_degenerate},
                             {"orientation_degenerate", row.orientation_degenerate}});
    j["summary"] = summary_json(r);
    if (include_runtime) j["runtime_ms"] = r.runtime_ms;
    return j.dump(2) + "\n";
}

std::string bench_report_to_csv(const BenchReport& r) {
    std::string out =
        "phi_deg,theta_hat_deg,expected_deg,abs_error_deg,fae_degenerate,orientation_degenerate\n";
    char buf[160];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%d,%d\n", row.phi_deg,
                      row.theta_hat_deg, row.expected_deg, row.abs_error_deg,
                      row.fae_degenerate ? 1 : 0, row.orientation_degenerate ? 1 : 0);
        out += buf;
    }
    return out;
}

std::string equivariance_report_to_json(const EquivarianceReport& r, bool include_runtime) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows)
        j["rows"].push_back({{"phi_deg", row.phi_deg},
                             {"base_peak_bin", row.base_peak_bin},
                             {"rotated_peak_bin", row.rotated_peak_bin},
                             {"expected_bin", row.expected_bin},
                             {"displacement_bins", row.displacement_bins}});
    j["summary"] = {{"max_displacement_bins", r.max_displacement_bins}};
    if (include_runtime) j["runtime_ms"] = r.runtime_ms;
    return j.dump(2) + "\n";
}

std::string equivariance_report_to_csv(const EquivarianceReport& r) {
    std::string out = "phi_deg,base_peak_bin,rotated_peak_bin,expected_bin,displacement_bins\n";
    char buf[120];
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof(buf), "%.17g,%d,%d,%d,%d\n", row.phi_deg, row.base_peak_bin,
                      row.rotated_peak_bin, row.expected_bin, row.displacement_bins);
        out += buf;
    }
    return out;
}

} // namespace faa
