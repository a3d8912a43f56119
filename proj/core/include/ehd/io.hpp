#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ehd/grid.hpp"

namespace ehd {

/// Plain-text matrix: one line per row, values separated by single spaces,
/// 17 significant digits. Row r holds data[r*cols .. r*cols+cols-1].
void write_matrix(const std::filesystem::path& path, std::span<const double> data, int rows,
                  int cols);

/// Reads a matrix written by write_matrix; every row must have the same length.
std::vector<double> read_matrix(const std::filesystem::path& path, int& rows, int& cols);

/// Rows are grid rows j = 0..ny-1, columns i = 0..nx-1.
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path, const Grid2D& grid);

/// Writes <stem>_ux.txt ((nx+1) columns) and <stem>_uy.txt (nx columns).
void write_velocity(const std::filesystem::path& dir, const std::string& stem,
                    const MacVectorField& u);

/// Formats with 17 significant digits (round-trippable).
std::string format_real(double x);

}  // namespace ehd
