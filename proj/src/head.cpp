#include "faa/head.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "faa/geometry.hpp"
#include "faa/grid_io.hpp"
#include "faa/kernels.hpp"

namespace faa {
namespace {

void check_dims(const char* name, const Grid& w, int rows, int cols) {
    if (w.height != rows || w.width != cols)
        throw ShapeError(std::string("head: ") + name + " must be " + std::to_string(rows) + "x" +
                         std::to_string(cols) + ", got " + std::to_string(w.height) + "x" +
                         std::to_string(w.width));
}

void check_len(const char* name, const std::vector<double>& b, int len) {
    if (static_cast<int>(b.size()) != len)
        throw ShapeError(std::string("head: ") + name + " must have length " + std::to_string(len) +
                         ", got " + std::to_string(b.size()));
}

std::vector<double> affine(const Grid& w, const std::vector<double>& b,
                           const std::vector<double>& x) {
    std::vector<double> y(static_cast<std::size_t>(w.height));
    kernels::active().matvec(w.data.data(), x.data(), b.data(), y.data(),
                             static_cast<std::size_t>(w.height), static_cast<std::size_t>(w.width));
    return y;
}

} // namespace

FeatureMap faa_head_features(const FeatureMap& roi, const HeadConfig& cfg) {
    if (roi.height != roi.width)
        throw ShapeError("head: RoI must be square, got " + std::to_string(roi.height) + "x" +
                         std::to_string(roi.width));

    const AngleEstimate est = fae(roi.channel_mean(), cfg.fae);

    FeatureMap out(roi.channels, roi.height, roi.width);
    if (est.degenerate) {
        // Aligned copy is the RoI itself; the residual doubles it exactly.
        for (std::size_t i = 0; i < roi.data.size(); ++i) out.data[i] = roi.data[i] + roi.data[i];
        return out;
    }

    // One shared rotation per RoI keeps cross-channel correspondence.
    double delta = std::remainder(0.0 - est.theta_hat, std::numbers::pi);
    if (delta <= -std::numbers::pi / 2.0) delta += std::numbers::pi;
    for (int c = 0; c < roi.channels; ++c) {
        const Grid aligned = rotate(roi.channel(c), delta);
        const double* orig = roi.channel_data(c);
        double* dst = out.channel_data(c);
        for (std::size_t i = 0; i < aligned.data.size(); ++i) dst[i] = aligned.data[i] + orig[i];
    }
    return out;
}

HeadOutput head_forward(const FeatureMap& roi, const HeadConfig& cfg) {
    if (!cfg.weights) throw ConfigError("head: weights are required for head_forward");
    if (cfg.num_classes < 1) throw ConfigError("head: num_classes must be positive");
    const LinearWeights& w = *cfg.weights;

    const int flat_len = roi.channels * roi.height * roi.width;
    check_dims("w1", w.w1, cfg.d1, flat_len);
    check_len("b1", w.b1, cfg.d1);
    check_dims("w2", w.w2, cfg.d2, cfg.d1);
    check_len("b2", w.b2, cfg.d2);
    check_dims("w_cls", w.w_cls, cfg.num_classes, cfg.d2);
    check_len("b_cls", w.b_cls, cfg.num_classes);
    check_dims("w_reg", w.w_reg, 5 * cfg.num_classes, cfg.d2);
    check_len("b_reg", w.b_reg, 5 * cfg.num_classes);

    const FeatureMap feat = faa_head_features(roi, cfg);
    // Flatten in (channel, row, col) order.
    std::vector<double> z1 = affine(w.w1, w.b1, feat.data);
    kernels::active().relu(z1.data(), z1.data(), z1.size());
    const std::vector<double> z2 = affine(w.w2, w.b2, z1);

    HeadOutput out;
    out.class_scores = affine(w.w_cls, w.b_cls, z2);
    out.box_deltas = affine(w.w_reg, w.b_reg, z2);
    return out;
}

LinearWeights make_seeded_weights(int flatten_len, int d1, int d2, int num_classes,
                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    // Map to [-s, s] without distribution objects so results are identical
    // across standard libraries.
    auto uniform = [&rng](double s) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
        return s * (2.0 * u - 1.0);
    };
    auto fill_matrix = [&](int rows, int cols) {
        Grid m(rows, cols);
        const double s = 1.0 / std::sqrt(static_cast<double>(cols));
        for (double& v : m.data) v = uniform(s);
        return m;
    };
    auto fill_vector = [&](int len) {
        std::vector<double> b(static_cast<std::size_t>(len));
        for (double& v : b) v = uniform(0.1);
        return b;
    };

    LinearWeights w;
    w.w1 = fill_matrix(d1, flatten_len);
    w.b1 = fill_vector(d1);
    w.w2 = fill_matrix(d2, d1);
    w.b2 = fill_vector(d2);
    w.w_cls = fill_matrix(num_classes, d2);
    w.b_cls = fill_vector(num_classes);
    w.w_reg = fill_matrix(5 * num_classes, d2);
    w.b_reg = fill_vector(5 * num_classes);
    return w;
}

namespace {

std::vector<double> flatten_vector(const Grid& g, const std::string& key) {
    if (g.height != 1 && g.width != 1)
        throw ConfigError("weights manifest: '" + key + "' must be a single row or column");
    return g.data;
}

} // namespace

LinearWeights weights_from_manifest(const std::string& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open manifest '" + manifest_path + "'");
    const std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();

    std::map<std::string, Grid> loaded;
    std::string line;
    int lineno = 0;
    static const std::set<std::string> known = {"w1", "b1", "w2", "b2",
                                                "w_cls", "b_cls", "w_reg", "b_reg"};
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("weights manifest line " + std::to_string(lineno) +
                              ": expected key=path");
        const std::string key = line.substr(0, eq);
        const std::string rel = line.substr(eq + 1);
        if (!known.count(key))
            throw ConfigError("weights manifest line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
        loaded[key] = grid_from_csv((base / rel).string());
    }
    for (const auto& key : known)
        if (!loaded.count(key))
            throw ConfigError("weights manifest: missing key '" + key + "'");

    LinearWeights w;
    w.w1 = std::move(loaded["w1"]);
    w.b1 = flatten_vector(loaded["b1"], "b1");
    w.w2 = std::move(loaded["w2"]);
    w.b2 = flatten_vector(loaded["b2"], "b2");
    w.w_cls = std::move(loaded["w_cls"]);
    w.b_cls = flatten_vector(loaded["b_cls"], "b_cls");
    w.w_reg = std::move(loaded["w_reg"]);
    w.b_reg = flatten_vector(loaded["b_reg"], "b_reg");
    return w;
}

} // namespace faa
