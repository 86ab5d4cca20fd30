#pragma once

#include <vector>

#include "faa/grid.hpp"

namespace faa {

// Orientation conventions used throughout:
//   - spatial point (x, y) lives at grid index (row = y, col = x)
//   - frequency (u, v): u pairs with x (columns), v pairs with y (rows)
//   - polar angle theta = atan2(v - H/2, u - H/2) on the centered spectrum
//   - angles are radians internally; degrees appear only at the CLI boundary

/// Polar resampling of a centered power spectrum. Radius index i maps to
/// rho_i = (i + 1) * rho_max / n_rho (DC excluded by construction); angle
/// index j maps to theta_j = j * span / n_theta.
struct PolarEnergy {
    int n_rho = 0;
    int n_theta = 0;
    double rho_max = 0.0;
    bool full_turn = true; // span = 2*pi when true, pi otherwise
    std::vector<double> data; // row-major (rho index, theta index)

    double& at(int i_rho, int j_theta) {
        return data[static_cast<std::size_t>(i_rho) * n_theta + j_theta];
    }
    double at(int i_rho, int j_theta) const {
        return data[static_cast<std::size_t>(i_rho) * n_theta + j_theta];
    }

    double rho(int i) const { return (i + 1) * rho_max / n_rho; }
    double theta(int j) const;
};

/// Dominant-orientation estimate. theta_hat is the angle of the
/// maximizing histogram bin, in [0, pi); bins are centered on their
/// sample angles j * pi / histogram.size(). When the folded angular
/// energy falls below the relative floor, degenerate is set and
/// theta_hat is 0.
struct AngleEstimate {
    double theta_hat = 0.0;
    std::vector<double> histogram; // folded angular energy over [0, pi)
    bool degenerate = false;
    double total_energy = 0.0; // sum of the full power spectrum
};

enum class Window { none, hann };

struct FaeConfig {
    int n_theta = 360;          // angular bins over [0, 2*pi); must be even
    int n_rho = 0;              // radial bins; 0 = auto (floor(H/2) - 1)
    double energy_floor = 1e-8; // relative degenerate threshold
    Window window = Window::none;
};

/// Power spectrum values plus the centering flag carried from the Spectrum
/// that produced them; polar resampling requires a centered one.
struct PowerSpectrum {
    Grid values;
    bool centered = false;
};

/// Unnormalized forward 2D DFT of a square grid:
///   F(u, v) = sum_{x,y} g(y, x) * exp(-2*pi*i*(u*x + v*y) / H)
/// Runs in O(H^2 log H) for power-of-two H, O(H^3) otherwise.
Spectrum dft2(const Grid& g);

/// Spatial pre-multiplication by (-1)^(x+y). dft2 of the result has its
/// zero-frequency bin at (H/2, H/2) for even H.
Grid center_spectrum(const Grid& g);

/// dft2(center_spectrum(g)) with the centered flag set.
Spectrum dft2_centered(const Grid& g);

PowerSpectrum power_spectrum(const Spectrum& s);

/// Bilinear polar resampling of a centered H x H power grid. Sample points
/// are (u, v) = (H/2 + rho*cos(theta), H/2 + rho*sin(theta)); points whose
/// taps fall outside the grid contribute zero. The DC pixel at (H/2, H/2)
/// is excluded: it is cleared before sampling so it cannot leak into the
/// innermost radii through the interpolation support.
PolarEnergy polar_resample(const PowerSpectrum& p, const FaeConfig& cfg);

/// Radially weighted angular energy, folded to [0, pi):
///   h(j) = sum_i rho_i * E(rho_i, theta_j), then h(j) + h(j + n/2).
/// Requires an even full-turn bin count.
std::vector<double> angular_energy(const PolarEnergy& pe);

/// Argmax of the folded histogram with the relative energy floor applied.
/// Ties break toward the smaller bin index.
AngleEstimate estimate_angle(const std::vector<double>& folded, const FaeConfig& cfg,
                             double total_energy);

/// Fourier angle estimation: the full chain
///   window? -> center -> dft2 -> power -> polar -> angular energy -> argmax.
/// Requires a finite square grid with even H >= 4.
AngleEstimate fae(const Grid& g, const FaeConfig& cfg = {});

/// Separable Hann window, multiplied into a copy of g.
Grid apply_hann(const Grid& g);

} // namespace faa
