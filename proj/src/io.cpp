#include "msfv/io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace msfv {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << std::setprecision(17);
  return out;
}

}  // namespace

void write_vtk_cell_scalars(
    const Grid& grid, const std::string& path,
    const std::vector<std::pair<std::string, std::span<const double>>>& fields) {
  std::ofstream out = open_out(path);
  const int nx = grid.cell_counts[0], ny = grid.cell_counts[1];
  const int nz = grid.dim == 3 ? grid.cell_counts[2] : 1;
  out << "# vtk DataFile Version 3.0\n";
  out << "msfv cell fields\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_GRID\n";
  out << "DIMENSIONS " << nx + 1 << ' ' << ny + 1 << ' ' << (grid.dim == 3 ? nz + 1 : 1) << "\n";
  out << "POINTS " << grid.num_nodes() << " double\n";
  for (const Vec3& p : grid.node_coords) {
    out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  }
  out << "CELL_DATA " << grid.num_cells() << "\n";
  for (const auto& [name, values] : fields) {
    out << "SCALARS " << name << " double 1\n";
    out << "LOOKUP_TABLE default\n";
    for (double v : values) out << v << '\n';
  }
}

void write_cell_csv(const Grid& grid, std::span<const double> values, const std::string& path) {
  std::ofstream out = open_out(path);
  out << (grid.dim == 3 ? "cell,x,y,z,value\n" : "cell,x,y,value\n");
  for (int c = 0; c < grid.num_cells(); ++c) {
    const Vec3& x = grid.cell_centroids[c];
    out << c << ',' << x[0] << ',' << x[1] << ',';
    if (grid.dim == 3) out << x[2] << ',';
    out << values[c] << '\n';
  }
}

void write_residual_csv(std::span<const double> history, const std::string& path) {
  std::ofstream out = open_out(path);
  out << "cycle,relative_residual\n";
  for (size_t i = 0; i < history.size(); ++i) {
    out << i + 1 << ',' << history[i] << '\n';
  }
}

void write_basis_txt(const CsrMatrix& prolongation, const std::string& path) {
  std::ofstream out = open_out(path);
  for (int i = 0; i < prolongation.rows(); ++i) {
    auto cols = prolongation.row_cols(i);
    auto vals = prolongation.row_values(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      out << cols[k] << ' ' << i << ' ' << vals[k] << '\n';
    }
  }
}

void write_matrix_coo(const CsrMatrix& matrix, const std::string& path) {
  std::ofstream out = open_out(path);
  matrix.write_coordinate(out);
}

}  // namespace msfv
