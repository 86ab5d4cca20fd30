#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "faa/errors.hpp"

namespace faa {

/// Single-channel 2D array of doubles, row-major. Index order is
/// (row = y, col = x) everywhere in this library; the signal value at
/// spatial point (x, y) is g.at(y, x).
struct Grid {
    int height = 0;
    int width = 0;
    std::vector<double> data;

    Grid() = default;
    Grid(int h, int w, double fill = 0.0)
        : height(h), width(w), data(static_cast<std::size_t>(h) * w, fill) {
        if (h <= 0 || w <= 0) throw ShapeError("Grid dimensions must be positive");
    }

    double& at(int y, int x) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return data[static_cast<std::size_t>(y) * width + x]; }

    const double* row(int y) const { return data.data() + static_cast<std::size_t>(y) * width; }
    double* row(int y) { return data.data() + static_cast<std::size_t>(y) * width; }

    bool square() const { return height == width; }
    std::size_t size() const { return data.size(); }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

/// H x H complex spectrum. Entry for frequency (u, v) lives at
/// data[v * size + u]: u indexes columns (pairs with spatial x) and
/// v indexes rows (pairs with spatial y). When centered is true the
/// zero-frequency bin sits at (u, v) = (H/2, H/2).
struct Spectrum {
    int size = 0;
    bool centered = false;
    std::vector<std::complex<double>> data;

    Spectrum() = default;
    Spectrum(int h, bool is_centered)
        : size(h), centered(is_centered),
          data(static_cast<std::size_t>(h) * h, std::complex<double>(0.0, 0.0)) {
        if (h <= 0) throw ShapeError("Spectrum size must be positive");
    }

    std::complex<double>& at(int u, int v) { return data[static_cast<std::size_t>(v) * size + u]; }
    std::complex<double> at(int u, int v) const { return data[static_cast<std::size_t>(v) * size + u]; }
};

/// C x H x W real tensor; each channel is a valid Grid view.
struct FeatureMap {
    int channels = 0;
    int height = 0;
    int width = 0;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(int c, int h, int w, double fill = 0.0)
        : channels(c), height(h), width(w),
          data(static_cast<std::size_t>(c) * h * w, fill) {
        if (c <= 0 || h <= 0 || w <= 0) throw ShapeError("FeatureMap dimensions must be positive");
    }

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    const double* channel_data(int c) const {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }
    double* channel_data(int c) {
        return data.data() + static_cast<std::size_t>(c) * height * width;
    }

    Grid channel(int c) const {
        Grid g(height, width);
        const double* src = channel_data(c);
        std::copy(src, src + static_cast<std::size_t>(height) * width, g.data.begin());
        return g;
    }

    void set_channel(int c, const Grid& g) {
        if (g.height != height || g.width != width)
            throw ShapeError("set_channel: grid shape does not match feature map");
        std::copy(g.data.begin(), g.data.end(), channel_data(c));
    }

    static FeatureMap from_grid(const Grid& g) {
        FeatureMap f(1, g.height, g.width);
        std::copy(g.data.begin(), g.data.end(), f.data.begin());
        return f;
    }

    /// Mean over channels, as a Grid.
    Grid channel_mean() const {
        Grid g(height, width, 0.0);
        for (int c = 0; c < channels; ++c) {
            const double* src = channel_data(c);
            for (std::size_t i = 0; i < g.size(); ++i) g.data[i] += src[i];
        }
        const double inv = 1.0 / channels;
        for (double& v : g.data) v *= inv;
        return g;
    }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

} // namespace faa
