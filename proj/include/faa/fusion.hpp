#pragma once

#include <optional>
#include <vector>

#include "faa/geometry.hpp"
#include "faa/grid.hpp"
#include "faa/spectral.hpp"

namespace faa {

/// Per-pixel linear channel map standing in for a 1x1 convolution.
/// Weights are supplied (or trivial), never trained.
struct ProjectionSpec {
    enum class Kind { identity_truncate, average_groups, explicit_matrix };

    Kind kind = Kind::identity_truncate;
    int out_channels = 0;      // 0 = keep input channel count (identity no-op)
    std::optional<Grid> matrix; // rows = out channels, cols = in channels

    static ProjectionSpec identity() { return {}; }
    static ProjectionSpec truncate(int out) { return {Kind::identity_truncate, out, {}}; }
    static ProjectionSpec averaged(int out) { return {Kind::average_groups, out, {}}; }
    static ProjectionSpec from_matrix(Grid m) {
        return {Kind::explicit_matrix, m.height, std::move(m)};
    }

    int resolve_out(int in_channels) const;
};

FeatureMap project_channels(const FeatureMap& f, const ProjectionSpec& p);

struct FusionConfig {
    int c_mid = 0; // 0 = keep C
    PatchSpec patch = PatchSpec::tiled(8);
    FaeConfig fae;
    ProjectionSpec proj_low;
    ProjectionSpec proj_high;
    ProjectionSpec proj_out;
};

struct FusionResult {
    FeatureMap output;
    // Per-patch estimates in patch order, from the channel-mean grids.
    std::vector<AngleEstimate> theta_low;
    std::vector<AngleEstimate> theta_high;
};

/// Orientation-consistent lateral merge: upsample the high-level feature,
/// rotate each of its patches so its dominant direction matches the
/// corresponding low-level patch, and sum low + upsampled + reconstructed.
/// low must be exactly twice high in both spatial dimensions.
FusionResult faafusion(const FeatureMap& low, const FeatureMap& high, const FusionConfig& cfg);

} // namespace faa
