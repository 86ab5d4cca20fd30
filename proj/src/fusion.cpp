#include "faa/fusion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "faa/kernels.hpp"

namespace faa {
namespace {

constexpr double pi = std::numbers::pi;

// Smallest rotation taking orientation theta_from onto theta_to, in
// (-pi/2, pi/2]; orientations live mod pi.
double orientation_delta(double theta_to, double theta_from) {
    double d = std::remainder(theta_to - theta_from, pi);
    if (d <= -pi / 2.0) d += pi;
    return d;
}

// Fill a defaulted (out_channels == 0) non-matrix projection with the
// target channel count so c_mid drives truncation/averaging directly.
ProjectionSpec resolved(ProjectionSpec p, int target_out) {
    if (p.kind != ProjectionSpec::Kind::explicit_matrix && p.out_channels == 0)
        p.out_channels = target_out;
    return p;
}

} // namespace

int ProjectionSpec::resolve_out(int in_channels) const {
    if (kind == Kind::explicit_matrix) {
        if (!matrix) throw ConfigError("projection: explicit_matrix requires a matrix");
        return matrix->height;
    }
    return out_channels > 0 ? out_channels : in_channels;
}

FeatureMap project_channels(const FeatureMap& f, const ProjectionSpec& p) {
    const int in = f.channels;
    const int out = p.resolve_out(in);
    const std::size_t plane = static_cast<std::size_t>(f.height) * f.width;

    switch (p.kind) {
    case ProjectionSpec::Kind::identity_truncate: {
        if (out > in)
            throw ShapeError("projection: identity_truncate cannot expand " + std::to_string(in) +
                             " -> " + std::to_string(out) + " channels");
        if (out == in) return f;
        FeatureMap r(out, f.height, f.width);
        std::copy(f.data.begin(), f.data.begin() + static_cast<std::ptrdiff_t>(plane * out),
                  r.data.begin());
        return r;
    }
    case ProjectionSpec::Kind::average_groups: {
        if (out > in || in % out != 0)
            throw ShapeError("projection: average_groups needs out dividing in, got " +
                             std::to_string(in) + " -> " + std::to_string(out));
        const int group = in / out;
        const double inv = 1.0 / group;
        FeatureMap r(out, f.height, f.width, 0.0);
        const auto& k = kernels::active();
        for (int oc = 0; oc < out; ++oc) {
            double* dst = r.channel_data(oc);
            for (int g = 0; g < group; ++g)
                k.axpy(inv, f.channel_data(oc * group + g), dst, plane);
        }
        return r;
    }
    case ProjectionSpec::Kind::explicit_matrix: {
        const Grid& m = *p.matrix;
        if (m.width != in)
            throw ShapeError("projection: matrix has " + std::to_string(m.width) +
                             " columns, input has " + std::to_string(in) + " channels");
        FeatureMap r(out, f.height, f.width, 0.0);
        const auto& k = kernels::active();
        for (int oc = 0; oc < out; ++oc) {
            double* dst = r.channel_data(oc);
            for (int ic = 0; ic < in; ++ic) {
                const double w = m.at(oc, ic);
                if (w != 0.0) k.axpy(w, f.channel_data(ic), dst, plane);
            }
        }
        return r;
    }
    }
    throw ConfigError("projection: unknown kind");
}

FusionResult faafusion(const FeatureMap& low, const FeatureMap& high, const FusionConfig& cfg) {
    if (low.channels != high.channels)
        throw ShapeError("faafusion: channel counts differ: " + std::to_string(low.channels) +
                         " vs " + std::to_string(high.channels));
    if (low.height != 2 * high.height || low.width != 2 * high.width)
        throw ShapeError("faafusion: low must be exactly 2x high spatially, got " +
                         std::to_string(low.height) + "x" + std::to_string(low.width) + " vs " +
                         std::to_string(high.height) + "x" + std::to_string(high.width));
    if (low.height % 2 != 0 || low.width % 2 != 0)
        throw ShapeError("faafusion: spatial dimensions must be even");
    if (cfg.patch.kernel < 4 || cfg.patch.kernel % 2 != 0)
        throw ConfigError("faafusion: patch kernel must be even and >= 4 for angle estimation");
    const int c_mid = cfg.c_mid > 0 ? cfg.c_mid : low.channels;
    if (c_mid > low.channels)
        throw ConfigError("faafusion: c_mid exceeds channel count");

    // upsample, project, unfold, per-patch estimate + rotate, fold,
    // project back, residual sum
    const FeatureMap up = upsample2x(high);

    const FeatureMap proj_high = project_channels(up, resolved(cfg.proj_high, c_mid));
    const FeatureMap proj_low = project_channels(low, resolved(cfg.proj_low, c_mid));
    if (proj_high.channels != c_mid || proj_low.channels != c_mid)
        throw ConfigError("faafusion: projections must produce c_mid=" + std::to_string(c_mid) +
                          " channels");

    const PatchSet p_high = unfold(proj_high, cfg.patch);
    const PatchSet p_low = unfold(proj_low, cfg.patch);

    FusionResult res;
    res.theta_low.reserve(p_low.patches.size());
    res.theta_high.reserve(p_high.patches.size());

    PatchSet rotated = p_high;
    for (std::size_t i = 0; i < p_high.patches.size(); ++i) {
        const AngleEstimate est_low = fae(p_low.patches[i].channel_mean(), cfg.fae);
        const AngleEstimate est_high = fae(p_high.patches[i].channel_mean(), cfg.fae);
        if (!est_low.degenerate && !est_high.degenerate) {
            const double delta = orientation_delta(est_low.theta_hat, est_high.theta_hat);
            FeatureMap& patch = rotated.patches[i];
            for (int c = 0; c < patch.channels; ++c)
                patch.set_channel(c, rotate(patch.channel(c), delta));
        }
        res.theta_low.push_back(est_low);
        res.theta_high.push_back(est_high);
    }

    const FeatureMap recon_mid = fold(rotated, cfg.patch, low.height, low.width);
    const FeatureMap recon = project_channels(recon_mid, resolved(cfg.proj_out, low.channels));
    if (recon.channels != low.channels)
        throw ConfigError("faafusion: proj_out must restore " + std::to_string(low.channels) +
                          " channels, produced " + std::to_string(recon.channels));

    res.output = FeatureMap(low.channels, low.height, low.width);
    kernels::active().add3(low.data.data(), up.data.data(), recon.data.data(),
                           res.output.data.data(), low.data.size());
    return res;
}

} // namespace faa
