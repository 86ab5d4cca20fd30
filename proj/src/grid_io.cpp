#include "faa/grid_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "faa/errors.hpp"

namespace faa {
namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failure on '" + path + "'");
}

// 17 significant digits round-trips every finite double.
void append_double(std::string& s, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    s += buf;
}

double parse_cell(const std::string& cell, int row, int col) {
    const char* b = cell.data();
    const char* e = b + cell.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr != e || b == e)
        throw IoError("non-numeric cell at row " + std::to_string(row + 1) + ", column " +
                      std::to_string(col + 1) + ": '" + cell + "'");
    if (!std::isfinite(v))
        throw IoError("non-finite value at row " + std::to_string(row + 1) + ", column " +
                      std::to_string(col + 1));
    return v;
}

} // namespace

Grid grid_from_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<double> values;
    int width = -1;
    int rows = 0;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
        pos = eol == std::string::npos ? text.size() : eol + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() && pos >= text.size()) break; // trailing newline
        if (line.empty())
            throw IoError("empty row " + std::to_string(rows + 1) + " in '" + path + "'");

        int col = 0;
        std::size_t cpos = 0;
        while (true) {
            std::size_t comma = line.find(',', cpos);
            const std::string cell =
                line.substr(cpos, comma == std::string::npos ? std::string::npos : comma - cpos);
            values.push_back(parse_cell(cell, rows, col));
            ++col;
            if (comma == std::string::npos) break;
            cpos = comma + 1;
        }
        if (width < 0) width = col;
        else if (col != width)
            throw IoError("ragged row " + std::to_string(rows + 1) + ": " + std::to_string(col) +
                          " columns, expected " + std::to_string(width));
        ++rows;
    }
    if (rows == 0) throw IoError("'" + path + "' contains no rows");

    Grid g(rows, width);
    g.data = std::move(values);
    return g;
}

void grid_to_csv(const Grid& g, const std::string& path) {
    std::string out;
    out.reserve(g.size() * 20);
    for (int y = 0; y < g.height; ++y) {
        for (int x = 0; x < g.width; ++x) {
            if (x) out += ',';
            append_double(out, g.at(y, x));
        }
        out += '\n';
    }
    write_file(path, out);
}

namespace {

// Whitespace-and-comment-aware token scanner for PGM headers.
struct PgmScanner {
    const std::string& text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size()) {
            if (std::isspace(static_cast<unsigned char>(text[pos]))) { ++pos; continue; }
            if (text[pos] == '#') {
                while (pos < text.size() && text[pos] != '\n') ++pos;
                continue;
            }
            break;
        }
    }

    int next_int(const char* what) {
        skip_space();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw IoError(std::string("malformed PGM header: expected ") + what);
        try {
            return std::stoi(text.substr(start, pos - start));
        } catch (const std::out_of_range&) {
            throw IoError(std::string("malformed PGM header: ") + what + " out of range");
        }
    }
};

} // namespace

Grid grid_from_pgm(const std::string& path) {
    PgmVariant v;
    return grid_from_pgm(path, v);
}

Grid grid_from_pgm(const std::string& path, PgmVariant& variant_out) {
    const std::string text = read_file(path);
    if (text.size() < 2 || text[0] != 'P' || (text[1] != '2' && text[1] != '5'))
        throw IoError("malformed PGM header in '" + path + "': missing P2/P5 magic");
    const bool binary = text[1] == '5';
    variant_out = binary ? PgmVariant::binary : PgmVariant::ascii;

    PgmScanner sc{text, 2};
    const int width = sc.next_int("width");
    const int height = sc.next_int("height");
    const int maxval = sc.next_int("maxval");
    if (width <= 0 || height <= 0 || maxval <= 0)
        throw IoError("malformed PGM header in '" + path + "'");
    if (width > 16384 || height > 16384)
        throw IoError("implausible PGM dimensions " + std::to_string(width) + "x" +
                      std::to_string(height) + " in '" + path + "'");
    if (binary && maxval > 255)
        throw IoError("P5 maxval " + std::to_string(maxval) + " > 255 unsupported in '" + path + "'");

    Grid g(height, width);
    const std::size_t count = g.size();
    if (binary) {
        // Exactly one whitespace byte separates the header from the payload.
        if (sc.pos >= text.size() || !std::isspace(static_cast<unsigned char>(text[sc.pos])))
            throw IoError("malformed PGM header in '" + path + "'");
        std::size_t data_start = sc.pos + 1;
        if (text.size() - data_start < count)
            throw IoError("truncated payload in '" + path + "'");
        for (std::size_t i = 0; i < count; ++i)
            g.data[i] = static_cast<double>(static_cast<unsigned char>(text[data_start + i]));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            sc.skip_space();
            if (sc.pos >= text.size()) throw IoError("truncated payload in '" + path + "'");
            int value;
            try {
                value = sc.next_int("sample");
            } catch (const IoError&) {
                throw IoError("non-numeric sample in '" + path + "'");
            }
            if (value < 0 || value > maxval)
                throw IoError("sample " + std::to_string(value) + " out of range in '" + path + "'");
            g.data[i] = static_cast<double>(value);
        }
    }
    return g;
}

void grid_to_pgm(const Grid& g, const std::string& path, bool normalize, PgmVariant variant) {
    std::vector<int> pixels(g.size());
    if (normalize) {
        double mn = g.data[0], mx = g.data[0];
        for (double v : g.data) {
            mn = std::min(mn, v);
            mx = std::max(mx, v);
        }
        if (mx == mn) {
            std::fill(pixels.begin(), pixels.end(), 0);
        } else {
            const double s = 255.0 / (mx - mn);
            for (std::size_t i = 0; i < g.size(); ++i) {
                int p = static_cast<int>(std::llround((g.data[i] - mn) * s));
                pixels[i] = std::min(255, std::max(0, p));
            }
        }
    } else {
        for (std::size_t i = 0; i < g.size(); ++i) {
            int p = static_cast<int>(std::llround(g.data[i]));
            pixels[i] = std::min(255, std::max(0, p));
        }
    }

    std::string out;
    out.reserve(g.size() * 4 + 32);
    out += variant == PgmVariant::binary ? "P5\n" : "P2\n";
    out += std::to_string(g.width) + " " + std::to_string(g.height) + "\n255\n";
    if (variant == PgmVariant::binary) {
        for (int p : pixels) out += static_cast<char>(static_cast<unsigned char>(p));
    } else {
        for (int y = 0; y < g.height; ++y) {
            for (int x = 0; x < g.width; ++x) {
                if (x) out += ' ';
                out += std::to_string(pixels[static_cast<std::size_t>(y) * g.width + x]);
            }
            out += '\n';
        }
    }
    write_file(path, out);
}

} // namespace faa
