#include "ehd/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "ehd/error.hpp"

namespace ehd {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_matrix(const std::filesystem::path& path, std::span<const double> data, int rows,
                  int cols) {
  if (static_cast<std::size_t>(rows) * cols != data.size())
    throw InvalidArgument("matrix shape does not match data length");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  std::string line;
  for (int r = 0; r < rows; ++r) {
    line.clear();
    for (int c = 0; c < cols; ++c) {
      if (c) line += ' ';
      line += format_real(data[static_cast<std::size_t>(r) * cols + c]);
    }
    line += '\n';
    out << line;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<double> read_matrix(const std::filesystem::path& path, int& rows, int& cols) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<double> data;
  std::string line;
  rows = 0;
  cols = -1;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    int n = 0;
    double x;
    while (ss >> x) {
      data.push_back(x);
      ++n;
    }
    if (!ss.eof()) throw IoError("malformed number in " + path.string());
    if (cols < 0) cols = n;
    if (n != cols) throw IoError("ragged rows in " + path.string());
    ++rows;
  }
  if (rows == 0) throw IoError("empty matrix file " + path.string());
  return data;
}

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  write_matrix(path, f.values(), f.grid().ny(), f.grid().nx());
}

ScalarField read_field(const std::filesystem::path& path, const Grid2D& grid) {
  int rows = 0, cols = 0;
  auto data = read_matrix(path, rows, cols);
  if (rows != grid.ny() || cols != grid.nx())
    throw IoError(path.string() + ": matrix shape does not match the grid");
  return ScalarField(grid, std::move(data));
}

void write_velocity(const std::filesystem::path& dir, const std::string& stem,
                    const MacVectorField& u) {
  const Grid2D& g = u.grid();
  write_matrix(dir / (stem + "_ux.txt"), u.ux_values(), g.ny(), g.nx() + 1);
  write_matrix(dir / (stem + "_uy.txt"), u.uy_values(), g.ny() + 1, g.nx());
}

}  // namespace ehd
