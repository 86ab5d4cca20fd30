#include "faa/spectral.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "faa/kernels.hpp"

namespace faa {
namespace {

using cd = std::complex<double>;
constexpr double two_pi = 2.0 * std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Forward twiddles e^(-2*pi*i*j/n), j = 0..n-1.
std::vector<cd> make_twiddles(int n) {
    std::vector<cd> w(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double ang = -two_pi * j / n;
        w[j] = cd(std::cos(ang), std::sin(ang));
    }
    return w;
}

// Iterative radix-2 Cooley-Tukey, in place, n a power of two.
void fft_pow2(cd* x, int n, const std::vector<cd>& w) {
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const int step = n / len;
        for (int i = 0; i < n; i += len) {
            for (int k = 0; k < len / 2; ++k) {
                const cd t = x[i + k + len / 2] * w[static_cast<std::size_t>(k) * step];
                x[i + k + len / 2] = x[i + k] - t;
                x[i + k] = x[i + k] + t;
            }
        }
    }
}

// Direct O(n^2) transform for non-power-of-two sizes.
void dft_naive(const cd* in, cd* out, int n, const std::vector<cd>& w) {
    for (int k = 0; k < n; ++k) {
        cd acc(0.0, 0.0);
        for (int j = 0; j < n; ++j) acc += in[j] * w[(static_cast<std::size_t>(k) * j) % n];
        out[k] = acc;
    }
}

void validate_finite(const Grid& g, const char* who) {
    if (!g.all_finite()) throw ShapeError(std::string(who) + ": input contains non-finite values");
}

void validate_config(const FaeConfig& cfg) {
    if (cfg.n_theta < 4 || cfg.n_theta % 2 != 0)
        throw ConfigError("n_theta must be even and >= 4, got " + std::to_string(cfg.n_theta));
    if (cfg.n_rho < 0) throw ConfigError("n_rho must be >= 0");
    if (!(cfg.energy_floor >= 0.0)) throw ConfigError("energy_floor must be >= 0");
}

} // namespace

double PolarEnergy::theta(int j) const {
    const double span = full_turn ? two_pi : std::numbers::pi;
    return j * span / n_theta;
}

Spectrum dft2(const Grid& g) {
    if (!g.square()) throw ShapeError("dft2: grid must be square, got " + std::to_string(g.height) +
                                      "x" + std::to_string(g.width));
    validate_finite(g, "dft2");
    const int H = g.height;
    const auto w = make_twiddles(H);
    const bool pow2 = is_pow2(H);

    // Row pass: R(y, u) = sum_x g(y, x) e^(-2 pi i u x / H)
    std::vector<cd> rows(static_cast<std::size_t>(H) * H);
    std::vector<cd> buf(static_cast<std::size_t>(H));
    std::vector<cd> buf2(static_cast<std::size_t>(H));
    for (int y = 0; y < H; ++y) {
        const double* src = g.row(y);
        for (int x = 0; x < H; ++x) buf[x] = cd(src[x], 0.0);
        cd* dst = rows.data() + static_cast<std::size_t>(y) * H;
        if (pow2) {
            fft_pow2(buf.data(), H, w);
            std::copy(buf.begin(), buf.end(), dst);
        } else {
            dft_naive(buf.data(), dst, H, w);
        }
    }

    // Column pass: F(u, v) = sum_y R(y, u) e^(-2 pi i v y / H)
    Spectrum s(H, false);
    for (int u = 0; u < H; ++u) {
        for (int y = 0; y < H; ++y) buf[y] = rows[static_cast<std::size_t>(y) * H + u];
        const cd* col;
        if (pow2) {
            fft_pow2(buf.data(), H, w);
            col = buf.data();
        } else {
            dft_naive(buf.data(), buf2.data(), H, w);
            col = buf2.data();
        }
        for (int v = 0; v < H; ++v) s.at(u, v) = col[v];
    }
    return s;
}

Grid center_spectrum(const Grid& g) {
    validate_finite(g, "center_spectrum");
    Grid out(g.height, g.width);
    const auto& k = kernels::active();
    for (int y = 0; y < g.height; ++y)
        k.alternate_sign(g.row(y), out.row(y), static_cast<std::size_t>(g.width), y & 1);
    return out;
}

Spectrum dft2_centered(const Grid& g) {
    Spectrum s = dft2(center_spectrum(g));
    s.centered = true;
    return s;
}

PowerSpectrum power_spectrum(const Spectrum& s) {
    PowerSpectrum p;
    p.centered = s.centered;
    p.values = Grid(s.size, s.size);
    kernels::active().squared_magnitude(s.data.data(), p.values.data.data(), s.data.size());
    return p;
}

PolarEnergy polar_resample(const PowerSpectrum& p, const FaeConfig& cfg) {
    if (!p.centered) throw ShapeError("polar_resample: power grid must come from a centered spectrum");
    if (!p.values.square()) throw ShapeError("polar_resample: power grid must be square");
    validate_config(cfg);
    // DC is excluded from the polar domain. Clearing the center pixel keeps
    // it out of the bilinear support of the innermost radii too; otherwise
    // the centered DC spike leaks into every small-rho sample.
    Grid g = p.values;
    const int H = g.height;
    g.at(H / 2, H / 2) = 0.0;
    const double rho_max = static_cast<double>(H / 2 - 1);
    const int n_rho = cfg.n_rho > 0 ? cfg.n_rho : std::max(1, H / 2 - 1);
    const int n_theta = cfg.n_theta;

    PolarEnergy pe;
    pe.n_rho = n_rho;
    pe.n_theta = n_theta;
    pe.rho_max = rho_max;
    pe.full_turn = true;
    pe.data.assign(static_cast<std::size_t>(n_rho) * n_theta, 0.0);

    const double c = H / 2.0;
    const double d_rho = rho_max / n_rho;
    const auto& k = kernels::active();
    std::vector<double> ray(static_cast<std::size_t>(n_rho));
    for (int j = 0; j < n_theta; ++j) {
        const double theta = two_pi * j / n_theta;
        const double ct = std::cos(theta), st = std::sin(theta);
        // Samples along the ray at rho = (i+1) * d_rho.
        k.bilinear_line(g.data.data(), H, H,
                        c + d_rho * ct, c + d_rho * st, d_rho * ct, d_rho * st,
                        ray.data(), static_cast<std::size_t>(n_rho));
        for (int i = 0; i < n_rho; ++i) pe.at(i, j) = ray[i];
    }
    return pe;
}

std::vector<double> angular_energy(const PolarEnergy& pe) {
    if (pe.n_theta % 2 != 0)
        throw ShapeError("angular_energy: n_theta must be even, got " + std::to_string(pe.n_theta));
    const auto& k = kernels::active();
    std::vector<double> full(static_cast<std::size_t>(pe.n_theta), 0.0);
    for (int i = 0; i < pe.n_rho; ++i)
        k.axpy(pe.rho(i), &pe.data[static_cast<std::size_t>(i) * pe.n_theta], full.data(),
               static_cast<std::size_t>(pe.n_theta));
    const int half = pe.n_theta / 2;
    std::vector<double> folded(static_cast<std::size_t>(half));
    for (int j = 0; j < half; ++j) folded[j] = full[j] + full[j + half];
    return folded;
}

AngleEstimate estimate_angle(const std::vector<double>& folded, const FaeConfig& cfg,
                             double total_energy) {
    if (folded.size() < 2) throw ShapeError("estimate_angle: histogram needs at least 2 bins");
    AngleEstimate est;
    est.histogram = folded;
    est.total_energy = total_energy;

    double sum = 0.0;
    for (double v : folded) sum += v;
    if (sum <= cfg.energy_floor * std::max(total_energy, DBL_EPSILON)) {
        est.degenerate = true;
        est.theta_hat = 0.0;
        return est;
    }

    std::size_t best = 0;
    for (std::size_t j = 1; j < folded.size(); ++j)
        if (folded[j] > folded[best]) best = j;
    est.theta_hat = static_cast<double>(best) * std::numbers::pi / static_cast<double>(folded.size());
    return est;
}

Grid apply_hann(const Grid& g) {
    Grid out(g.height, g.width);
    std::vector<double> wy(static_cast<std::size_t>(g.height)), wx(static_cast<std::size_t>(g.width));
    for (int y = 0; y < g.height; ++y)
        wy[y] = g.height > 1 ? 0.5 * (1.0 - std::cos(two_pi * y / (g.height - 1))) : 1.0;
    for (int x = 0; x < g.width; ++x)
        wx[x] = g.width > 1 ? 0.5 * (1.0 - std::cos(two_pi * x / (g.width - 1))) : 1.0;
    for (int y = 0; y < g.height; ++y)
        for (int x = 0; x < g.width; ++x) out.at(y, x) = g.at(y, x) * wy[y] * wx[x];
    return out;
}

AngleEstimate fae(const Grid& g, const FaeConfig& cfg) {
    if (!g.square()) throw ShapeError("fae: grid must be square, got " + std::to_string(g.height) +
                                      "x" + std::to_string(g.width));
    if (g.height < 4) throw ShapeError("fae: grid must be at least 4x4");
    if (g.height % 2 != 0) throw ShapeError("fae: grid side must be even");
    validate_finite(g, "fae");
    validate_config(cfg);

    const Grid* input = &g;
    Grid windowed;
    if (cfg.window == Window::hann) {
        windowed = apply_hann(g);
        input = &windowed;
    }

    const Spectrum s = dft2_centered(*input);
    const PowerSpectrum p = power_spectrum(s);
    double total = 0.0;
    for (double v : p.values.data) total += v;

    const PolarEnergy pe = polar_resample(p, cfg);
    const std::vector<double> folded = angular_energy(pe);
    return estimate_angle(folded, cfg, total);
}

} // namespace faa
