// faa: frequency-domain orientation estimation and alignment toolbox.
//
// Exit codes: 0 ok, 2 I/O failure, 3 shape/precondition violation,
// 4 configuration error. Diagnostics go to stderr; with --json - the JSON
// document is the only thing on stdout.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "faa/errors.hpp"
#include "faa/fusion.hpp"
#include "faa/geometry.hpp"
#include "faa/grid.hpp"
#include "faa/grid_io.hpp"
#include "faa/head.hpp"
#include "faa/kernels.hpp"
#include "faa/spectral.hpp"
#include "faa/synthbench.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

enum class Format { auto_detect, pgm, csv };

Format detect_format(const std::string& path, Format requested) {
    if (requested != Format::auto_detect) return requested;
    const std::string ext = fs::path(path).extension().string();
    if (ext == ".pgm") return Format::pgm;
    if (ext == ".csv") return Format::csv;
    throw faa::ConfigError("cannot infer format of '" + path + "'; pass --format pgm|csv");
}

struct LoadedGrid {
    faa::Grid grid;
    Format format = Format::csv;
    faa::PgmVariant pgm_variant = faa::PgmVariant::ascii;
};

LoadedGrid load_grid(const std::string& path, Format requested) {
    LoadedGrid lg;
    lg.format = detect_format(path, requested);
    if (lg.format == Format::pgm) lg.grid = faa::grid_from_pgm(path, lg.pgm_variant);
    else lg.grid = faa::grid_from_csv(path);
    return lg;
}

void save_like(const faa::Grid& g, const LoadedGrid& ref, const std::string& path) {
    if (ref.format == Format::pgm) faa::grid_to_pgm(g, path, false, ref.pgm_variant);
    else faa::grid_to_csv(g, path);
}

void emit_text(const std::string& text, const std::string& target) {
    if (target == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(target, std::ios::binary | std::ios::trunc);
    if (!out) throw faa::IoError("cannot open '" + target + "' for writing");
    out << text;
    if (!out) throw faa::IoError("write failure on '" + target + "'");
}

void emit_json(const ordered_json& doc, const std::string& target) {
    if (target.empty()) return;
    emit_text(doc.dump(2) + "\n", target);
}

ordered_json input_json(const std::string& path, const faa::Grid& g) {
    return {{"path", path}, {"height", g.height}, {"width", g.width}};
}

std::string default_output(const std::string& input, const std::string& suffix) {
    fs::path p(input);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

double rad_to_deg(double r) { return r * 180.0 / kPi; }

// ---------------------------------------------------------------------------
// shared flags

struct FaeFlags {
    int bins = 360;
    int rho_bins = 0;
    double energy_floor = 1e-8;
    std::string window = "none";

    void attach(CLI::App* cmd) {
        cmd->add_option("--bins", bins, "angular bins over the full turn (default 360)");
        cmd->add_option("--rho-bins", rho_bins, "radial bins, 0 = auto");
        cmd->add_option("--energy-floor", energy_floor, "relative degenerate threshold");
        cmd->add_option("--window", window, "pre-window: none|hann")
            ->check(CLI::IsMember({"none", "hann"}));
    }

    faa::FaeConfig config() const {
        faa::FaeConfig cfg;
        cfg.n_theta = bins;
        cfg.n_rho = rho_bins;
        cfg.energy_floor = energy_floor;
        cfg.window = window == "hann" ? faa::Window::hann : faa::Window::none;
        return cfg;
    }
};

// ---------------------------------------------------------------------------
// estimate

struct EstimateArgs {
    std::string input;
    Format format = Format::auto_detect;
    FaeFlags fae;
    std::string json_out = "-";
};

int run_estimate(const EstimateArgs& a) {
    const LoadedGrid lg = load_grid(a.input, a.format);
    const faa::AngleEstimate est = faa::fae(lg.grid, a.fae.config());

    ordered_json doc;
    doc["command"] = "estimate";
    doc["input"] = input_json(a.input, lg.grid);
    doc["theta_hat_deg"] = rad_to_deg(est.theta_hat);
    doc["degenerate"] = est.degenerate;
    doc["total_energy"] = est.total_energy;
    doc["histogram"] = est.histogram;
    emit_json(doc, a.json_out);
    return 0;
}

// ---------------------------------------------------------------------------
// align

struct AlignArgs {
    std::string input;
    Format format = Format::auto_detect;
    double theta0_deg = 0.0;
    std::string out;
    std::string json_out;
    FaeFlags fae;
};

int run_align(const AlignArgs& a) {
    const LoadedGrid lg = load_grid(a.input, a.format);
    const faa::AlignResult res = faa::faa_align(lg.grid, a.theta0_deg * kPi / 180.0, a.fae.config());
    save_like(res.aligned, lg, a.out);

    ordered_json doc;
    doc["command"] = "align";
    doc["input"] = input_json(a.input, lg.grid);
    doc["theta0_deg"] = a.theta0_deg;
    doc["theta_hat_deg"] = rad_to_deg(res.estimate.theta_hat);
    doc["delta_theta_deg"] = rad_to_deg(res.delta_theta);
    doc["degenerate"] = res.estimate.degenerate;
    doc["outputs"] = ordered_json::array({{{"path", a.out}, {"kind", "grid"}}});
    emit_json(doc, a.json_out.empty() ? a.out + ".json" : a.json_out);
    return 0;
}

// ---------------------------------------------------------------------------
// spectrum

struct SpectrumArgs {
    std::string input;
    Format format = Format::auto_detect;
    std::string out_power;
    std::string out_polar;
    std::string json_out;
    FaeFlags fae;
};

int run_spectrum(const SpectrumArgs& a) {
    const LoadedGrid lg = load_grid(a.input, a.format);
    const faa::Grid& g = lg.grid;
    if (!g.square() || g.height % 2 != 0)
        throw faa::ShapeError("spectrum: grid must be square with even side");

    const faa::PowerSpectrum p = faa::power_spectrum(faa::dft2_centered(g));
    double total = 0.0;
    for (double v : p.values.data) total += v;

    faa::Grid log_power(p.values.height, p.values.width);
    for (std::size_t i = 0; i < p.values.size(); ++i)
        log_power.data[i] = std::log1p(p.values.data[i]);

    const std::string power_path =
        a.out_power.empty() ? default_output(a.input, "_power.pgm") : a.out_power;
    const std::string polar_path =
        a.out_polar.empty() ? default_output(a.input, "_polar.csv") : a.out_polar;

    faa::grid_to_pgm(log_power, power_path, true);

    const faa::PolarEnergy pe = faa::polar_resample(p, a.fae.config());
    faa::Grid polar_grid(pe.n_rho, pe.n_theta);
    polar_grid.data = pe.data;
    faa::grid_to_csv(polar_grid, polar_path);

    ordered_json doc;
    doc["command"] = "spectrum";
    doc["input"] = input_json(a.input, g);
    doc["outputs"] = ordered_json::array({{{"path", power_path}, {"kind", "power_pgm"}},
                                          {{"path", polar_path}, {"kind", "polar_csv"}}});
    doc["metrics"] = {{"total_energy", total}, {"n_rho", pe.n_rho}, {"n_theta", pe.n_theta}};
    emit_json(doc, a.json_out);
    return 0;
}

// ---------------------------------------------------------------------------
// fuse

faa::ProjectionSpec parse_projection(const std::string& kind, const std::string& matrix_path,
                                     int lineno) {
    if (!matrix_path.empty()) {
        if (!kind.empty() && kind != "explicit_matrix")
            throw faa::ConfigError("config line " + std::to_string(lineno) +
                                   ": projection kind conflicts with matrix path");
        return faa::ProjectionSpec::from_matrix(faa::grid_from_csv(matrix_path));
    }
    if (kind.empty() || kind == "identity" || kind == "identity_truncate")
        return faa::ProjectionSpec::identity();
    if (kind == "average_groups") return faa::ProjectionSpec{faa::ProjectionSpec::Kind::average_groups, 0, {}};
    throw faa::ConfigError("config line " + std::to_string(lineno) + ": unknown projection kind '" +
                           kind + "'");
}

faa::FusionConfig parse_fusion_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw faa::IoError("cannot open config '" + path + "'");

    faa::FusionConfig cfg;
    std::string proj_kind[3];
    std::string proj_matrix[3];
    int proj_line[3] = {0, 0, 0};

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = line;
        trimmed.erase(0, trimmed.find_first_not_of(" \t"));
        if (trimmed.empty() || trimmed[0] == '#') continue;
        const std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw faa::ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trimmed.substr(0, eq);
        const std::string value = trimmed.substr(eq + 1);

        const auto as_int = [&](int min_v) {
            try {
                const int v = std::stoi(value);
                if (v < min_v) throw std::out_of_range("");
                return v;
            } catch (...) {
                throw faa::ConfigError("config line " + std::to_string(lineno) +
                                       ": bad integer value '" + value + "'");
            }
        };
        const auto as_double = [&] {
            try {
                return std::stod(value);
            } catch (...) {
                throw faa::ConfigError("config line " + std::to_string(lineno) +
                                       ": bad numeric value '" + value + "'");
            }
        };
        const auto as_bool = [&] {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw faa::ConfigError("config line " + std::to_string(lineno) + ": bad boolean value '" +
                                   value + "'");
        };

        if (key == "kernel") cfg.patch.kernel = as_int(1);
        else if (key == "stride") cfg.patch.stride = as_int(0);
        else if (key == "padding") cfg.patch.padding = as_int(0);
        else if (key == "normalize_fold") cfg.patch.normalize_fold = as_bool();
        else if (key == "c_mid") cfg.c_mid = as_int(0);
        else if (key == "n_theta") cfg.fae.n_theta = as_int(4);
        else if (key == "n_rho") cfg.fae.n_rho = as_int(0);
        else if (key == "energy_floor") cfg.fae.energy_floor = as_double();
        else if (key == "window") {
            if (value == "none") cfg.fae.window = faa::Window::none;
            else if (value == "hann") cfg.fae.window = faa::Window::hann;
            else
                throw faa::ConfigError("config line " + std::to_string(lineno) +
                                       ": unknown window '" + value + "'");
        } else if (key == "proj_low") { proj_kind[0] = value; proj_line[0] = lineno; }
        else if (key == "proj_high") { proj_kind[1] = value; proj_line[1] = lineno; }
        else if (key == "proj_out") { proj_kind[2] = value; proj_line[2] = lineno; }
        else if (key == "proj_low_matrix") { proj_matrix[0] = value; proj_line[0] = lineno; }
        else if (key == "proj_high_matrix") { proj_matrix[1] = value; proj_line[1] = lineno; }
        else if (key == "proj_out_matrix") { proj_matrix[2] = value; proj_line[2] = lineno; }
        else
            throw faa::ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                                   key + "'");
    }

    cfg.proj_low = parse_projection(proj_kind[0], proj_matrix[0], proj_line[0]);
    cfg.proj_high = parse_projection(proj_kind[1], proj_matrix[1], proj_line[1]);
    cfg.proj_out = parse_projection(proj_kind[2], proj_matrix[2], proj_line[2]);
    return cfg;
}

struct FuseArgs {
    std::string low;
    std::string high;
    std::string config;
    std::string out;
    std::string json_out;
};

int run_fuse(const FuseArgs& a) {
    const LoadedGrid low = load_grid(a.low, Format::auto_detect);
    const LoadedGrid high = load_grid(a.high, Format::auto_detect);
    const faa::FusionConfig cfg = a.config.empty() ? faa::FusionConfig{} : parse_fusion_config(a.config);

    const faa::FusionResult res = faa::faafusion(faa::FeatureMap::from_grid(low.grid),
                                                 faa::FeatureMap::from_grid(high.grid), cfg);
    faa::grid_to_csv(res.output.channel(0), a.out);

    int degenerate_low = 0, degenerate_high = 0;
    for (const auto& e : res.theta_low) degenerate_low += e.degenerate ? 1 : 0;
    for (const auto& e : res.theta_high) degenerate_high += e.degenerate ? 1 : 0;

    ordered_json doc;
    doc["command"] = "fuse";
    doc["inputs"] = {{"low", input_json(a.low, low.grid)}, {"high", input_json(a.high, high.grid)}};
    doc["outputs"] = ordered_json::array({{{"path", a.out}, {"kind", "grid_csv"}}});
    doc["metrics"] = {{"patches", static_cast<int>(res.theta_low.size())},
                      {"degenerate_low", degenerate_low},
                      {"degenerate_high", degenerate_high}};
    emit_json(doc, a.json_out);
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
    std::string suite = "angles";
    std::string json_out = "-";
    std::string csv_out;
    int size = 64;
    double a = 20.0;
    double b = 6.0;
    double step_deg = 5.0;
    std::string angles; // equivariance suite, comma-separated degrees
    std::uint64_t seed = 1;
    bool timing = false;
    FaeFlags fae;
};

std::vector<double> parse_angle_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t comma = text.find(',', pos);
        const std::string tok =
            text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw faa::ConfigError("bad angle '" + tok + "' in --angles");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

int run_bench(const BenchArgs& a) {
    if (a.suite == "angles") {
        std::vector<double> angles;
        if (!a.angles.empty()) angles = parse_angle_list(a.angles);
        else
            for (double phi = 0.0; phi < 180.0; phi += a.step_deg) angles.push_back(phi);
        const faa::BenchReport r = faa::bench_angle_sweep(a.size, a.a, a.b, angles, a.fae.config());
        emit_text(faa::bench_report_to_json(r, a.timing), a.json_out);
        if (!a.csv_out.empty()) emit_text(faa::bench_report_to_csv(r), a.csv_out);
        return 0;
    }
    if (a.suite == "equivariance") {
        const faa::Grid g = faa::make_test_image(a.size, a.seed);
        const std::vector<double> angles =
            a.angles.empty() ? std::vector<double>{15, 30, 45, 60, 90} : parse_angle_list(a.angles);
        const faa::EquivarianceReport r = faa::bench_equivariance(g, angles, a.fae.config());
        emit_text(faa::equivariance_report_to_json(r, a.timing), a.json_out);
        if (!a.csv_out.empty()) emit_text(faa::equivariance_report_to_csv(r), a.csv_out);
        return 0;
    }
    throw faa::ConfigError("unknown bench suite '" + a.suite + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier angle estimation and alignment toolbox"};
    app.require_subcommand(1);

    std::string backend = "auto";
    app.add_option("--kernels", backend, "kernel backend: auto|scalar|avx2")
        ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

    const std::map<std::string, Format> format_map{
        {"auto", Format::auto_detect}, {"pgm", Format::pgm}, {"csv", Format::csv}};

    EstimateArgs est;
    auto* cmd_est = app.add_subcommand("estimate", "estimate the dominant orientation of a grid");
    cmd_est->add_option("--input", est.input, "input grid (PGM or CSV)")->required();
    cmd_est->add_option("--format", est.format, "input format")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    est.fae.attach(cmd_est);
    cmd_est->add_option("--json", est.json_out, "JSON output path, - for stdout");

    AlignArgs aln;
    auto* cmd_aln = app.add_subcommand("align", "rotate the dominant orientation onto theta0");
    cmd_aln->add_option("--input", aln.input, "input grid (PGM or CSV)")->required();
    cmd_aln->add_option("--format", aln.format, "input format")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    cmd_aln->add_option("--theta0", aln.theta0_deg, "reference angle in degrees")->required();
    cmd_aln->add_option("--out", aln.out, "aligned grid path (input's format)")->required();
    cmd_aln->add_option("--json", aln.json_out, "JSON sidecar path (default <out>.json)");
    aln.fae.attach(cmd_aln);

    SpectrumArgs spc;
    auto* cmd_spc = app.add_subcommand("spectrum", "export power spectrum and polar energy");
    cmd_spc->add_option("--input", spc.input, "input grid (PGM or CSV)")->required();
    cmd_spc->add_option("--format", spc.format, "input format")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    cmd_spc->add_option("--out-power", spc.out_power, "log-power PGM path");
    cmd_spc->add_option("--out-polar", spc.out_polar, "polar energy CSV path");
    cmd_spc->add_option("--json", spc.json_out, "JSON output path, - for stdout");
    spc.fae.attach(cmd_spc);

    FuseArgs fus;
    auto* cmd_fus = app.add_subcommand("fuse", "orientation-consistent cross-scale fusion");
    cmd_fus->add_option("--low", fus.low, "low-level grid, 2H x 2W")->required();
    cmd_fus->add_option("--high", fus.high, "high-level grid, H x W")->required();
    cmd_fus->add_option("--config", fus.config, "key=value fusion config file");
    cmd_fus->add_option("--out", fus.out, "fused grid CSV path")->required();
    cmd_fus->add_option("--json", fus.json_out, "JSON output path, - for stdout");

    BenchArgs ben;
    auto* cmd_ben = app.add_subcommand("bench", "synthetic benchmark suites");
    cmd_ben->add_option("--suite", ben.suite, "angles|equivariance")
        ->check(CLI::IsMember({"angles", "equivariance"}));
    cmd_ben->add_option("--json", ben.json_out, "JSON output path, - for stdout");
    cmd_ben->add_option("--csv", ben.csv_out, "CSV output path");
    cmd_ben->add_option("--size", ben.size, "canvas side (default 64)");
    cmd_ben->add_option("--a", ben.a, "rectangle major semi-axis");
    cmd_ben->add_option("--b", ben.b, "rectangle minor semi-axis");
    cmd_ben->add_option("--step-deg", ben.step_deg, "angle sweep step in degrees");
    cmd_ben->add_option("--angles", ben.angles, "comma-separated angle list in degrees");
    cmd_ben->add_option("--seed", ben.seed, "test image seed (equivariance)");
    cmd_ben->add_flag("--timing", ben.timing, "include runtime_ms in reports");
    ben.fae.attach(cmd_ben);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 4;
    }

    try {
        if (!faa::kernels::set_backend(backend))
            throw faa::ConfigError("kernel backend '" + backend + "' is not available");
        if (cmd_est->parsed()) return run_estimate(est);
        if (cmd_aln->parsed()) return run_align(aln);
        if (cmd_spc->parsed()) return run_spectrum(spc);
        if (cmd_fus->parsed()) return run_fuse(fus);
        if (cmd_ben->parsed()) return run_bench(ben);
        return 4;
    } catch (const faa::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const faa::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const faa::ShapeError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
