#include "faa/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "faa/kernels.hpp"

namespace faa {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double half_pi = pi / 2.0;

// Lossless path for quarter-turn multiples: the inverse map lands on
// lattice points, so no interpolation happens.
Grid rotate_quarter(const Grid& g, int k) {
    const int h = g.height, w = g.width;
    if (k == 0) return g;
    Grid out(h, w);
    if (k == 2) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) out.at(y, x) = g.at(h - 1 - y, w - 1 - x);
        return out;
    }
    // k = 1 or 3; caller guarantees a square grid here.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (k == 1) out.at(y, x) = g.at(h - 1 - x, y);
            else out.at(y, x) = g.at(x, w - 1 - y);
        }
    }
    return out;
}

} // namespace

Grid rotate(const Grid& g, const RotationSpec& spec) { return rotate(g, spec.angle); }

Grid rotate(const Grid& g, double angle) {
    if (!g.all_finite()) throw ShapeError("rotate: input contains non-finite values");
    if (!std::isfinite(angle)) throw ShapeError("rotate: angle must be finite");

    const double rem = std::remainder(angle, half_pi);
    if (std::abs(rem) < 1e-12) {
        int k = static_cast<int>(std::llround(angle / half_pi)) % 4;
        if (k < 0) k += 4;
        if (k % 2 == 0 || g.square()) return rotate_quarter(g, k);
        // Odd quarter-turn of a non-square grid: fall through to resampling.
    }

    const int h = g.height, w = g.width;
    const double cy = (h - 1) / 2.0, cx = (w - 1) / 2.0;
    const double ct = std::cos(angle), st = std::sin(angle);

    Grid out(h, w);
    const auto& k = kernels::active();
    for (int y = 0; y < h; ++y) {
        // Inverse map: source = R(-angle) * (p - c) + c, linear in x.
        const double x0 = cx - cx * ct + (y - cy) * st;
        const double y0 = cy + cx * st + (y - cy) * ct;
        k.bilinear_line(g.data.data(), h, w, x0, y0, ct, -st, out.row(y),
                        static_cast<std::size_t>(w));
    }
    return out;
}

AlignResult faa_align(const Grid& g, double theta0, const FaeConfig& cfg) {
    AlignResult res;
    res.estimate = fae(g, cfg);
    if (res.estimate.degenerate) {
        res.aligned = g;
        res.delta_theta = 0.0;
        return res;
    }
    // Orientations live mod pi; use the smallest rotation that aligns them.
    double delta = std::remainder(theta0 - res.estimate.theta_hat, pi);
    if (delta <= -half_pi) delta += pi;
    res.delta_theta = delta;
    res.aligned = rotate(g, delta);
    return res;
}

FeatureMap upsample2x(const FeatureMap& f) {
    const int H = f.height, W = f.width;
    FeatureMap out(f.channels, 2 * H, 2 * W);
    const auto& k = kernels::active();

    std::vector<double> tmp(static_cast<std::size_t>(W));
    for (int c = 0; c < f.channels; ++c) {
        const double* src = f.channel_data(c);
        for (int yo = 0; yo < 2 * H; ++yo) {
            const double sy = (yo + 0.5) / 2.0 - 0.5;
            const double fy = std::floor(sy);
            const double ty = sy - fy;
            const int r0 = std::clamp(static_cast<int>(fy), 0, H - 1);
            const int r1 = std::clamp(static_cast<int>(fy) + 1, 0, H - 1);
            k.lerp(src + static_cast<std::size_t>(r0) * W, src + static_cast<std::size_t>(r1) * W,
                   ty, tmp.data(), static_cast<std::size_t>(W));

            double* dst = out.channel_data(c) + static_cast<std::size_t>(yo) * 2 * W;
            for (int xo = 0; xo < 2 * W; ++xo) {
                const double sx = (xo + 0.5) / 2.0 - 0.5;
                const double fx = std::floor(sx);
                const double tx = sx - fx;
                const int c0 = std::clamp(static_cast<int>(fx), 0, W - 1);
                const int c1 = std::clamp(static_cast<int>(fx) + 1, 0, W - 1);
                dst[xo] = tmp[c0] + tx * (tmp[c1] - tmp[c0]);
            }
        }
    }
    return out;
}

PatchSet unfold(const FeatureMap& f, const PatchSpec& spec) {
    const int k = spec.kernel;
    const int stride = spec.effective_stride();
    const int pad = spec.padding;
    if (k < 1 || stride < 1 || pad < 0) throw ShapeError("unfold: invalid patch spec");

    const bool tiled = stride == k && pad == 0;
    if (tiled && (f.height % k != 0 || f.width % k != 0))
        throw ShapeError("unfold: tiled mode requires dimensions divisible by kernel, got " +
                         std::to_string(f.height) + "x" + std::to_string(f.width) + " with k=" +
                         std::to_string(k));
    if (f.height + 2 * pad < k || f.width + 2 * pad < k)
        throw ShapeError("unfold: kernel larger than padded input");

    PatchSet ps;
    ps.kernel = k;
    ps.channels = f.channels;
    ps.rows = (f.height + 2 * pad - k) / stride + 1;
    ps.cols = (f.width + 2 * pad - k) / stride + 1;
    ps.origins.reserve(static_cast<std::size_t>(ps.rows) * ps.cols);
    ps.patches.reserve(static_cast<std::size_t>(ps.rows) * ps.cols);

    for (int r = 0; r < ps.rows; ++r) {
        for (int c = 0; c < ps.cols; ++c) {
            const int oy = r * stride - pad;
            const int ox = c * stride - pad;
            FeatureMap patch(f.channels, k, k, 0.0);
            for (int ch = 0; ch < f.channels; ++ch) {
                for (int y = 0; y < k; ++y) {
                    const int gy = oy + y;
                    if (gy < 0 || gy >= f.height) continue;
                    for (int x = 0; x < k; ++x) {
                        const int gx = ox + x;
                        if (gx < 0 || gx >= f.width) continue;
                        patch.at(ch, y, x) = f.at(ch, gy, gx);
                    }
                }
            }
            ps.origins.emplace_back(oy, ox);
            ps.patches.push_back(std::move(patch));
        }
    }
    return ps;
}

FeatureMap fold(const PatchSet& ps, const PatchSpec& spec, int out_h, int out_w) {
    const int k = spec.kernel;
    const int stride = spec.effective_stride();
    const int pad = spec.padding;
    if (ps.kernel != k) throw ShapeError("fold: patch set kernel does not match spec");
    const int exp_rows = (out_h + 2 * pad - k) / stride + 1;
    const int exp_cols = (out_w + 2 * pad - k) / stride + 1;
    if (ps.rows != exp_rows || ps.cols != exp_cols ||
        ps.patches.size() != static_cast<std::size_t>(ps.rows) * ps.cols ||
        ps.origins.size() != ps.patches.size())
        throw ShapeError("fold: inconsistent patch set for output shape " +
                         std::to_string(out_h) + "x" + std::to_string(out_w));

    FeatureMap out(ps.channels, out_h, out_w, 0.0);
    Grid counts(out_h, out_w, 0.0);
    for (std::size_t i = 0; i < ps.patches.size(); ++i) {
        const FeatureMap& patch = ps.patches[i];
        if (patch.channels != ps.channels || patch.height != k || patch.width != k)
            throw ShapeError("fold: inconsistent patch at index " + std::to_string(i));
        const auto [oy, ox] = ps.origins[i];
        for (int y = 0; y < k; ++y) {
            const int gy = oy + y;
            if (gy < 0 || gy >= out_h) continue;
            for (int x = 0; x < k; ++x) {
                const int gx = ox + x;
                if (gx < 0 || gx >= out_w) continue;
                counts.at(gy, gx) += 1.0;
                for (int ch = 0; ch < ps.channels; ++ch)
                    out.at(ch, gy, gx) += patch.at(ch, y, x);
            }
        }
    }
    if (spec.normalize_fold) {
        for (int y = 0; y < out_h; ++y) {
            for (int x = 0; x < out_w; ++x) {
                const double n = counts.at(y, x);
                if (n > 0.0)
                    for (int ch = 0; ch < ps.channels; ++ch) out.at(ch, y, x) /= n;
            }
        }
    }
    return out;
}

} // namespace faa
