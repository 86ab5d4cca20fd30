#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "faa/grid.hpp"
#include "faa/spectral.hpp"

namespace faa {

/// Affine-chain weights for the head: flatten -> d1 -> d2 -> branches.
/// Matrices are Grids (rows = output dim, cols = input dim).
struct LinearWeights {
    Grid w1; std::vector<double> b1;
    Grid w2; std::vector<double> b2;
    Grid w_cls; std::vector<double> b_cls;
    Grid w_reg; std::vector<double> b_reg;
};

struct HeadConfig {
    FaeConfig fae;
    int d1 = 1280; // 1024 + 256
    int d2 = 1024;
    int num_classes = 0;
    std::optional<LinearWeights> weights;
};

/// Rotate the RoI to the canonical 0-degree pose (one shared angle from the
/// channel-mean grid, applied to every channel) and add the original back:
/// returns aligned + roi. Degenerate estimates skip the rotation, so the
/// result is exactly 2 * roi.
FeatureMap faa_head_features(const FeatureMap& roi, const HeadConfig& cfg);

struct HeadOutput {
    std::vector<double> class_scores;       // num_classes
    std::vector<double> box_deltas;         // 5 per class: dx, dy, dw, dh, dtheta
};

/// z = affine2(relu(affine1(flatten(faa_head_features(roi)))));
/// scores = affine_cls(z), deltas = affine_reg(z).
HeadOutput head_forward(const FeatureMap& roi, const HeadConfig& cfg);

/// Deterministic pseudo-random weights for tests and demos; identical
/// across platforms for a given seed.
LinearWeights make_seeded_weights(int flatten_len, int d1, int d2, int num_classes,
                                  std::uint64_t seed);

/// Load a weight bundle from a manifest of key=path lines (paths relative
/// to the manifest). Required keys: w1 b1 w2 b2 w_cls b_cls w_reg b_reg.
LinearWeights weights_from_manifest(const std::string& manifest_path);

} // namespace faa
