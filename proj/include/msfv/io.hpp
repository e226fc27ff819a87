#pragma once

#include <span>
#include <string>
#include <vector>

#include "msfv/csr.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Legacy structured-grid text format: dimensions header, point coordinates,
/// then one scalar array per named cell field.
void write_vtk_cell_scalars(const Grid& grid, const std::string& path,
                            const std::vector<std::pair<std::string, std::span<const double>>>&
                                fields);

/// Plain CSV: cell index, centroid x, y(, z), value.
void write_cell_csv(const Grid& grid, std::span<const double> values, const std::string& path);

/// Rows of "cycle,relative_residual".
void write_residual_csv(std::span<const double> history, const std::string& path);

/// One "block cell value" line per stored basis entry.
void write_basis_txt(const CsrMatrix& prolongation, const std::string& path);

/// One "row col value" line per entry, 1-based.
void write_matrix_coo(const CsrMatrix& matrix, const std::string& path);

}  // namespace msfv
