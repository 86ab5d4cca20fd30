#pragma once

#include <string>

#include "faa/grid.hpp"

namespace faa {

/// Comma-separated rows of decimal values; written with 17 significant
/// digits so the read side reproduces every finite double bit-exactly.
Grid grid_from_csv(const std::string& path);
void grid_to_csv(const Grid& g, const std::string& path);

enum class PgmVariant { ascii, binary }; // P2 / P5

/// P2 (ASCII) or P5 (binary, maxval <= 255) PGM.
Grid grid_from_pgm(const std::string& path);
Grid grid_from_pgm(const std::string& path, PgmVariant& variant_out);

/// With normalize, [min, max] maps affinely onto [0, 255] (a constant grid
/// maps to 0); without it, values are rounded and clamped to [0, 255].
void grid_to_pgm(const Grid& g, const std::string& path, bool normalize,
                 PgmVariant variant = PgmVariant::ascii);

} // namespace faa
