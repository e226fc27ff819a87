#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "msfv/assembly.hpp"
#include "msfv/errors.hpp"
#include "msfv/field.hpp"

namespace msfv {

namespace {

// Gaussian elimination with partial pivoting on an n x n system with multiple
// right-hand sides, sized for interaction regions (n <= 4). Returns false on a
// (near-)singular pivot.
template <int MaxN, int MaxRhs>
bool solve_dense(int n, int nrhs, std::array<std::array<double, MaxN>, MaxN>& a,
                 std::array<std::array<double, MaxRhs>, MaxN>& b) {
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    }
    if (std::abs(a[piv][k]) < 1e-300) return false;
    if (piv != k) {
      std::swap(a[piv], a[k]);
      std::swap(b[piv], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      if (f == 0.0) continue;
      for (int j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      for (int j = 0; j < nrhs; ++j) b[i][j] -= f * b[k][j];
    }
  }
  for (int k = n - 1; k >= 0; --k) {
    for (int j = 0; j < nrhs; ++j) {
      double s = b[k][j];
      for (int i = k + 1; i < n; ++i) s -= a[k][i] * b[i][j];
      b[k][j] = s / a[k][k];
    }
  }
  return true;
}

struct HalfFlux {
  // Flux out of `cell` through the vertex half of an edge, as
  // (w0 + w1) * p_cell - w0 * pi[edge_slot[0]] - w1 * pi[edge_slot[1]]
  // where pi are the continuity-point pressures of the cell's two edges at
  // the vertex.
  int cell = -1;
  std::array<int, 2> edge_local{-1, -1};
  std::array<double, 2> w{0.0, 0.0};
};

}  // namespace

SparseSystem assemble_mpfa_o(const Grid& grid, const TensorField& field, const BoundarySpec& bc) {
  if (grid.dim != 2) throw std::invalid_argument("assemble_mpfa_o: 2-D grids only");
  if (field.dim() != 2 || field.num_cells() != grid.num_cells()) {
    throw std::invalid_argument("assemble_mpfa_o: grid/field dimension mismatch");
  }
  const int ncell = grid.num_cells();
  if (!bc.source.empty() && static_cast<int>(bc.source.size()) != ncell) {
    throw std::invalid_argument("assemble_mpfa_o: source vector size mismatch");
  }

  const auto dirichlet = bc.resolve(grid);
  std::vector<double> face_pressure(grid.num_faces(), 0.0);
  std::vector<char> face_is_dirichlet(grid.num_faces(), 0);
  for (const auto& [f, p] : dirichlet) {
    face_is_dirichlet[f] = 1;
    face_pressure[f] = p;
  }

  // Node incidence.
  std::vector<std::vector<int>> node_cells(grid.num_nodes());
  for (int c = 0; c < ncell; ++c) {
    for (int k = 0; k < 4; ++k) node_cells[grid.cell_nodes[c][k]].push_back(c);
  }
  std::vector<std::vector<int>> node_faces(grid.num_nodes());
  for (int f = 0; f < grid.num_faces(); ++f) {
    node_faces[grid.faces[f].nodes[0]].push_back(f);
    node_faces[grid.faces[f].nodes[1]].push_back(f);
  }

  std::vector<CsrMatrix::Triplet> trip;
  trip.reserve(static_cast<size_t>(ncell) * 12);
  std::vector<double> rhs(bc.source.empty() ? std::vector<double>(ncell, 0.0) : bc.source);

  constexpr int kMax = 4;  // cells / edges per vertex on a quad grid
  for (int v = 0; v < grid.num_nodes(); ++v) {
    const auto& cells = node_cells[v];
    const auto& edges = node_faces[v];
    if (cells.empty()) continue;
    const int nc = static_cast<int>(cells.size());
    const int ne = static_cast<int>(edges.size());
    if (nc > kMax || ne > kMax) {
      throw AssemblyError("assemble_mpfa_o: unexpected topology at vertex " + std::to_string(v));
    }

    auto local_edge = [&](int face) {
      for (int e = 0; e < ne; ++e) {
        if (edges[e] == face) return e;
      }
      return -1;
    };
    auto local_cell = [&](int cell) {
      for (int c = 0; c < nc; ++c) {
        if (cells[c] == cell) return c;
      }
      return -1;
    };

    // One sub-cell flux expression per (cell, incident edge) pair.
    std::vector<HalfFlux> fluxes;
    fluxes.reserve(2 * nc);
    for (int lc = 0; lc < nc; ++lc) {
      const int cell = cells[lc];
      std::array<int, 2> cell_edges{-1, -1};
      int found = 0;
      for (int le = 0; le < ne; ++le) {
        const Face& face = grid.faces[edges[le]];
        if (face.owner == cell || face.neighbor == cell) {
          if (found == 2) {
            throw AssemblyError("assemble_mpfa_o: cell with more than two edges at vertex " +
                                std::to_string(v));
          }
          cell_edges[found++] = le;
        }
      }
      if (found != 2) {
        throw AssemblyError("assemble_mpfa_o: cell with fewer than two edges at vertex " +
                            std::to_string(v));
      }

      const Vec3& xc = grid.cell_centroids[cell];
      std::array<std::array<double, 2>, 2> m{};
      for (int s = 0; s < 2; ++s) {
        const Face& face = grid.faces[edges[cell_edges[s]]];
        m[s][0] = face.centroid[0] - xc[0];
        m[s][1] = face.centroid[1] - xc[1];
      }
      const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
      const double scale = std::max({std::abs(m[0][0]), std::abs(m[0][1]), std::abs(m[1][0]),
                                     std::abs(m[1][1])});
      if (std::abs(det) < 1e-14 * scale * scale) {
        throw AssemblyError("assemble_mpfa_o: singular interaction system at vertex " +
                            std::to_string(v));
      }
      const std::array<std::array<double, 2>, 2> minv = {
          std::array<double, 2>{m[1][1] / det, -m[0][1] / det},
          std::array<double, 2>{-m[1][0] / det, m[0][0] / det}};

      const Tensor2& k = field.tensor2(cell);
      for (int s = 0; s < 2; ++s) {
        const Face& face = grid.faces[edges[cell_edges[s]]];
        const double sign = face.owner == cell ? 0.5 : -0.5;
        const double nx = sign * face.area_normal[0];
        const double ny = sign * face.area_normal[1];
        const double ux = k.xx * nx + k.xy * ny;
        const double uy = k.xy * nx + k.yy * ny;
        HalfFlux hf;
        hf.cell = cell;
        hf.edge_local = {cell_edges[0], cell_edges[1]};
        hf.w = {ux * minv[0][0] + uy * minv[1][0], ux * minv[0][1] + uy * minv[1][1]};
        fluxes.push_back(hf);
      }
    }

    // fluxes[2*lc + s] measures the flux of cell lc through its slot-s edge.
    auto flux_of = [&](int lc, int le) -> const HalfFlux& {
      for (int s = 0; s < 2; ++s) {
        const HalfFlux& hf = fluxes[2 * lc + s];
        if (hf.edge_local[s] == le) return hf;
      }
      throw AssemblyError("assemble_mpfa_o: internal edge lookup failure at vertex " +
                          std::to_string(v));
    };

    // Unknown continuity-point pressures: interior and no-flow edges.
    std::array<int, kMax> unknown_of_edge{};
    unknown_of_edge.fill(-1);
    int nu = 0;
    for (int le = 0; le < ne; ++le) {
      const Face& face = grid.faces[edges[le]];
      if (face.neighbor >= 0 || !face_is_dirichlet[edges[le]]) unknown_of_edge[le] = nu++;
    }

    // Local system rows: flux continuity (interior) / zero flux (no-flow).
    std::array<std::array<double, kMax>, kMax> a_loc{};
    // Right-hand sides: one column per local cell plus a constant column
    // carrying the Dirichlet data.
    std::array<std::array<double, kMax + 1>, kMax> b_loc{};
    for (auto& row : a_loc) row.fill(0.0);
    for (auto& row : b_loc) row.fill(0.0);

    int neq = 0;
    std::array<int, kMax> eq_of_edge{};
    eq_of_edge.fill(-1);
    auto add_flux_to_equation = [&](int eq, int lc, int le) {
      const HalfFlux& hf = flux_of(lc, le);
      // (w0 + w1) p_c - w0 pi_0 - w1 pi_1 = contribution
      b_loc[eq][lc] -= hf.w[0] + hf.w[1];  // move p terms to the RHS
      for (int s = 0; s < 2; ++s) {
        const int es = hf.edge_local[s];
        if (unknown_of_edge[es] >= 0) {
          a_loc[eq][unknown_of_edge[es]] -= hf.w[s];
        } else {
          b_loc[eq][nc] += hf.w[s] * face_pressure[edges[es]];
        }
      }
    };

    for (int le = 0; le < ne; ++le) {
      const Face& face = grid.faces[edges[le]];
      if (face.neighbor >= 0) {
        eq_of_edge[le] = neq;
        add_flux_to_equation(neq, local_cell(face.owner), le);
        add_flux_to_equation(neq, local_cell(face.neighbor), le);
        ++neq;
      } else if (!face_is_dirichlet[edges[le]]) {
        eq_of_edge[le] = neq;
        add_flux_to_equation(neq, local_cell(face.owner), le);
        ++neq;
      }
    }
    if (neq != nu) {
      throw AssemblyError("assemble_mpfa_o: unbalanced interaction system at vertex " +
                          std::to_string(v));
    }
    if (nu > 0 && !solve_dense<kMax, kMax + 1>(nu, nc + 1, a_loc, b_loc)) {
      throw AssemblyError("assemble_mpfa_o: singular interaction system at vertex " +
                          std::to_string(v));
    }
    // Now b_loc[u] holds pi_u = sum_c b_loc[u][c] p_c + b_loc[u][nc].

    // Scatter the half-edge fluxes: interior edges into both rows, Dirichlet
    // boundary edges into the owner row. No-flow edges carry zero flux.
    std::array<double, kMax> cell_coef{};
    for (int le = 0; le < ne; ++le) {
      const Face& face = grid.faces[edges[le]];
      const bool interior = face.neighbor >= 0;
      if (!interior && !face_is_dirichlet[edges[le]]) continue;

      const int lo = local_cell(face.owner);
      const HalfFlux& hf = flux_of(lo, le);
      cell_coef.fill(0.0);
      double constant = 0.0;
      cell_coef[lo] += hf.w[0] + hf.w[1];
      for (int s = 0; s < 2; ++s) {
        const int es = hf.edge_local[s];
        const int u = unknown_of_edge[es];
        if (u >= 0) {
          for (int lc = 0; lc < nc; ++lc) cell_coef[lc] -= hf.w[s] * b_loc[u][lc];
          constant -= hf.w[s] * b_loc[u][nc];
        } else {
          constant -= hf.w[s] * face_pressure[edges[es]];
        }
      }

      for (int lc = 0; lc < nc; ++lc) {
        if (cell_coef[lc] == 0.0) continue;
        trip.push_back({face.owner, cells[lc], cell_coef[lc]});
        if (interior) trip.push_back({face.neighbor, cells[lc], -cell_coef[lc]});
      }
      rhs[face.owner] -= constant;
      if (interior) rhs[face.neighbor] += constant;
    }
  }

  SparseSystem sys;
  sys.matrix = CsrMatrix::from_triplets(ncell, ncell, std::move(trip), /*ensure_diagonal=*/true);
  sys.rhs = std::move(rhs);
  sys.scheme = Scheme::MpfaO;
  sys.dirichlet_faces.reserve(dirichlet.size());
  for (const auto& [f, p] : dirichlet) sys.dirichlet_faces.push_back({f, p});
  return sys;
}

}  // namespace msfv
