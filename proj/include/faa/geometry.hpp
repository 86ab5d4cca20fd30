#pragma once

#include <utility>
#include <vector>

#include "faa/grid.hpp"
#include "faa/spectral.hpp"

namespace faa {

/// Rotation parameters. Everything but the angle is a fixed convention:
/// the center is the pixel center ((H-1)/2, (W-1)/2), samples outside the
/// grid read as zero, and interpolation is bilinear.
struct RotationSpec {
    double angle = 0.0; // radians, counterclockwise positive
};

/// Center rotation in the (x, y) frame shared with the spectral module.
/// Inverse mapping; angles that are exact multiples of 90 degrees take a
/// lossless permutation path.
Grid rotate(const Grid& g, double angle);
Grid rotate(const Grid& g, const RotationSpec& spec);

struct AlignResult {
    Grid aligned;
    AngleEstimate estimate;
    double delta_theta = 0.0; // applied rotation, reduced to (-pi/2, pi/2]
};

/// Estimate the dominant orientation and rotate it onto theta0. The
/// rotation theta0 - theta_hat is reduced mod pi into (-pi/2, pi/2] (a
/// half-turn is the same orientation), so re-aligning an aligned grid is
/// a no-op. Degenerate estimates leave the grid untouched.
AlignResult faa_align(const Grid& g, double theta0, const FaeConfig& cfg = {});

/// Per-channel bilinear 2x upsampling, align-corners=false, edge-clamped.
FeatureMap upsample2x(const FeatureMap& f);

/// Patch extraction config. Tiled mode (stride = kernel, no padding)
/// partitions the canvas; dense mode (stride 1, padding (k-1)/2, odd k)
/// yields one patch per pixel.
struct PatchSpec {
    int kernel = 8;
    int stride = 0;  // 0 = kernel (tiled)
    int padding = 0;
    bool normalize_fold = true;

    int effective_stride() const { return stride == 0 ? kernel : stride; }

    static PatchSpec tiled(int k) { return PatchSpec{k, k, 0, true}; }
    static PatchSpec dense(int k) {
        if (k % 2 == 0) throw ShapeError("dense patches need an odd kernel so (k-1)/2 pads evenly");
        return PatchSpec{k, 1, (k - 1) / 2, true};
    }
};

struct PatchSet {
    int kernel = 0;
    int channels = 0;
    int rows = 0; // patch grid dimensions
    int cols = 0;
    std::vector<std::pair<int, int>> origins; // top-left (y, x); may be negative
    std::vector<FeatureMap> patches;          // rows * cols entries, row-major
};

/// Extract k x k patches at top-left positions (r*stride - padding,
/// c*stride - padding), zero-filled outside the canvas.
PatchSet unfold(const FeatureMap& f, const PatchSpec& spec);

/// Overlap-add the patches back onto an out_h x out_w canvas. With
/// normalize_fold each pixel is divided by its contribution count.
FeatureMap fold(const PatchSet& ps, const PatchSpec& spec, int out_h, int out_w);

} // namespace faa
