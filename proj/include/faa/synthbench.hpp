#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "faa/grid.hpp"
#include "faa/spectral.hpp"

namespace faa {

/// Rotated-rectangle test pattern. The canonical region |x'| <= a,
/// |y'| <= b is rotated by phi (pose taken mod pi; a rectangle and its
/// half-turn are the same shape) about (cy, cx), default (H/2, H/2) so that
/// hard axis-aligned rectangles cover odd pixel extents (2a+1) x (2b+1).
struct RectSpec {
    int canvas = 0;      // H (even)
    double a = 0.0;      // major semi-axis, pixels
    double b = 0.0;      // minor semi-axis
    double phi = 0.0;    // major-axis angle, radians CCW from x-axis
    double amplitude = 1.0;
    bool antialias = true; // 4x4 supersampling
    std::optional<std::pair<double, double>> center; // (cy, cx) override
};

Grid make_rectangle(const RectSpec& spec);

/// Closed-form centered power spectrum of a hard axis-aligned rectangle of
/// extent (2*a_px+1) x (2*b_px+1): |D_{2a+1}(u) * D_{2b+1}(v)|^2 with
/// D_n(u) = sin(pi*n*u/H) / sin(pi*u/H) (value n at u = 0). This is the
/// exact discrete analog of the sinc-product spectrum and the validation
/// oracle for the dft2 -> center -> power chain.
Grid dirichlet_rect_spectrum(int H, int a_px, int b_px);

/// Brute-force dominant angle: bins every centered-power pixel with
/// H/8 <= rho <= H/2-1 by atan2 at step_deg resolution, weights by rho,
/// folds to [0, pi), then reads the peak as the centroid of the raw bins
/// under the ~2 degree boxcar argmax. No polar resampling and no image
/// interpolation. An all-zero accumulation returns 0.
double oracle_angle_dense(const Grid& g, double step_deg = 0.25);

/// Smooth band-limited test image: a seeded oriented Gaussian bar plus a
/// weak low-frequency wave under a radial envelope supported inside the
/// central disk, so rotations about the grid center lose nothing. The bar
/// orientation avoids the +-5 degree band around the lattice axes.
Grid make_test_image(int H, std::uint64_t seed = 1);

/// Normalized cross-correlation of two same-shape grids over the disk of
/// given radius about (cy, cx) (defaults to the rotation center).
double ncc_disk(const Grid& a, const Grid& b, double radius,
                std::optional<std::pair<double, double>> center = {});

/// NCC quotiented by the 180-degree pose ambiguity: max of ncc(a, b) and
/// ncc(a, rot180(b)).
double ncc_disk_mod180(const Grid& a, const Grid& b, double radius);

struct BenchAngleRow {
    double phi_deg = 0.0;
    double theta_hat_deg = 0.0;
    double expected_deg = 0.0;  // (phi + 90) mod 180
    double abs_error_deg = 0.0; // circular distance mod 180
    bool fae_degenerate = false;
    bool orientation_degenerate = false; // a == b: no major axis
};

struct BenchSummary {
    double median_error_deg = 0.0;
    double p90_error_deg = 0.0;
    double max_error_deg = 0.0;
    int count = 0; // rows contributing to the stats
};

struct BenchConfigEcho {
    int canvas = 0;
    double a = 0.0;
    double b = 0.0;
    int n_theta = 0;
    int n_rho = 0;
    double energy_floor = 0.0;
    std::string window;
};

struct BenchReport {
    BenchConfigEcho config;
    std::vector<BenchAngleRow> rows;
    BenchSummary summary;
    double runtime_ms = 0.0;
};

/// Sweep rectangle poses and score theta_hat against (phi + 90) mod 180.
/// Orientation-degenerate rows (a == b) are flagged and excluded from the
/// summary statistics.
BenchReport bench_angle_sweep(int H, double a, double b,
                              const std::vector<double>& angles_deg,
                              const FaeConfig& cfg = {});

struct EquivarianceRow {
    double phi_deg = 0.0;
    int base_peak_bin = 0;
    int rotated_peak_bin = 0;
    int expected_bin = 0;
    int displacement_bins = 0; // circular distance mod folded bin count
};

struct EquivarianceReport {
    std::vector<EquivarianceRow> rows;
    int max_displacement_bins = 0;
    double runtime_ms = 0.0;
};

/// Rotate g by each angle and compare the folded-histogram peak against the
/// circularly shifted peak of the unrotated image.
EquivarianceReport bench_equivariance(const Grid& g, const std::vector<double>& angles_deg,
                                      const FaeConfig& cfg = {});

/// Circular distance between two angles in degrees, modulo `period_deg`.
double circular_distance_deg(double a_deg, double b_deg, double period_deg);

std::string bench_report_to_json(const BenchReport& r, bool include_runtime = false);
std::string bench_report_to_csv(const BenchReport& r);
std::string equivariance_report_to_json(const EquivarianceReport& r, bool include_runtime = false);
std::string equivariance_report_to_csv(const EquivarianceReport& r);

} // namespace faa
