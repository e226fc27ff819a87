#include <doctest.h>

#include <cmath>
#include <vector>

#include "msfv/assembly.hpp"
#include "msfv/errors.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"
#include "msfv/linalg.hpp"

using namespace msfv;

namespace {

TensorField constant_k(const Grid& g, double k) {
  return TensorField::homogeneous2(Tensor2{k, 0.0, k}, g.num_cells());
}

double max_abs_entry(const CsrMatrix& m) { return m.max_abs(); }

// Worst interior (no Dirichlet face, no source) row sum relative to the row's
// largest entry.
double worst_interior_row_sum(const Grid& g, const SparseSystem& sys) {
  std::vector<char> touches_dirichlet(g.num_cells(), 0);
  for (const DirichletFace& d : sys.dirichlet_faces) {
    touches_dirichlet[g.faces[d.face].owner] = 1;
  }
  double worst = 0.0;
  for (int i = 0; i < sys.matrix.rows(); ++i) {
    if (touches_dirichlet[i]) continue;
    double sum = 0.0, rowmax = 0.0;
    for (double v : sys.matrix.row_values(i)) {
      sum += v;
      rowmax = std::max(rowmax, std::abs(v));
    }
    if (rowmax > 0.0) worst = std::max(worst, std::abs(sum) / rowmax);
  }
  return worst;
}

}  // namespace

TEST_CASE("tpfa on two unit cells, unit permeability, no boundary data") {
  const Grid g = build_cartesian_grid({2.0, 1.0}, {2, 1});
  const SparseSystem sys = assemble_tpfa(g, constant_k(g, 1.0), {});
  CHECK(sys.matrix.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sys.matrix.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sys.matrix.at(1, 0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sys.matrix.at(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sys.rhs == std::vector<double>{0.0, 0.0});
}

TEST_CASE("tpfa Dirichlet system solves to the linear profile") {
  const Grid g = build_cartesian_grid({2.0, 1.0}, {2, 1});
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);
  const SparseSystem sys = assemble_tpfa(g, constant_k(g, 1.0), bc);
  CHECK(sys.matrix.at(0, 0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sys.matrix.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(sys.matrix.at(1, 1) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(sys.rhs[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sys.rhs[1] == doctest::Approx(0.0).epsilon(0.0));
  const auto x = direct_solve(sys.matrix, sys.rhs);
  CHECK(x[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(x[1] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("tpfa harmonic interface transmissibility for piecewise k") {
  const Grid g = build_cartesian_grid({2.0, 1.0}, {2, 1});
  const TensorField k = TensorField::cellwise2({Tensor2{1.0, 0.0, 1.0}, Tensor2{4.0, 0.0, 4.0}});
  const SparseSystem sys = assemble_tpfa(g, k, {});
  // half transmissibilities 2 and 8 -> 2*8/(2+8)
  CHECK(sys.matrix.at(0, 1) == doctest::Approx(-1.6).epsilon(1e-14));
}

TEST_CASE("tpfa matrices are symmetric M-matrices on heterogeneous fields") {
  const Grid g = build_cartesian_grid({5.0, 3.0}, {20, 12});
  const TensorField k = lognormal_field(g, 21, 0.0, 3.0);
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);
  const SparseSystem sys = assemble_tpfa(g, k, bc);
  const CsrMatrix& a = sys.matrix;
  for (int i = 0; i < a.rows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    double offsum = 0.0;
    double diag = 0.0;
    for (size_t kk = 0; kk < cols.size(); ++kk) {
      if (cols[kk] == i) {
        diag = vals[kk];
      } else {
        CHECK(vals[kk] <= 0.0);
        offsum += std::abs(vals[kk]);
        CHECK(a.at(cols[kk], i) == doctest::Approx(vals[kk]).epsilon(1e-14));
      }
    }
    CHECK(diag > 0.0);
    CHECK(diag >= offsum * (1.0 - 1e-12));
  }
  CHECK(worst_interior_row_sum(g, sys) <= 1e-12);
}

TEST_CASE("tpfa rejects non-positive half-transmissibility, naming the face") {
  Grid g = build_cartesian_grid({2.0, 1.0}, {2, 1});
  // Drag the interior face centroid past the owner centroid so n.K d < 0.
  for (int f = 0; f < g.num_faces(); ++f) {
    if (g.faces[f].neighbor >= 0) {
      g.faces[f].centroid = {0.2, 0.5, 0.0};
      try {
        assemble_tpfa(g, constant_k(g, 1.0), {});
        FAIL("expected AssemblyError");
      } catch (const AssemblyError& e) {
        CHECK(std::string(e.what()).find(std::to_string(f)) != std::string::npos);
      }
    }
  }
}

TEST_CASE("boundary spec rejects duplicate face entries") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {2, 2});
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMin, 0.5);
  CHECK_THROWS_AS(assemble_tpfa(g, constant_k(g, 1.0), bc), std::invalid_argument);
}

TEST_CASE("mpfa-o equals tpfa on a K-orthogonal grid") {
  const Grid g = build_cartesian_grid({3.0, 2.0}, {6, 5});
  const TensorField k = TensorField::homogeneous2(Tensor2{25.0, 0.0, 4.0}, g.num_cells());
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);

  const SparseSystem tpfa = assemble_tpfa(g, k, bc);
  const SparseSystem mpfa = assemble_mpfa_o(g, k, bc);
  const double scale = max_abs_entry(tpfa.matrix);
  for (int i = 0; i < g.num_cells(); ++i) {
    for (int j = 0; j < g.num_cells(); ++j) {
      CHECK(std::abs(mpfa.matrix.at(i, j) - tpfa.matrix.at(i, j)) <= 1e-10 * scale);
    }
    CHECK(std::abs(mpfa.rhs[i] - tpfa.rhs[i]) <= 1e-10 * scale);
  }
}

TEST_CASE("mpfa-o reproduces linear fields exactly on perturbed grids") {
  const Grid base = build_cartesian_grid({2.0, 1.5}, {12, 9});
  const Grid g = perturb_interior_nodes(base, 0.35, 3);
  const TensorField k = rotated_tensor(30.0, 50.0, 5.0, g.num_cells());

  const double a = 0.7, b = 1.3, c = -0.4;
  auto p_exact = [&](const Vec3& x) { return a + b * x[0] + c * x[1]; };

  BoundarySpec bc;
  for (int f = 0; f < g.num_faces(); ++f) {
    if (g.faces[f].neighbor < 0) bc.dirichlet_face(f, p_exact(g.faces[f].centroid));
  }
  const SparseSystem sys = assemble_mpfa_o(g, k, bc);
  const auto p = direct_solve(sys.matrix, sys.rhs);

  double pmax = 0.0;
  for (int i = 0; i < g.num_cells(); ++i) {
    pmax = std::max(pmax, std::abs(p_exact(g.cell_centroids[i])));
  }
  for (int i = 0; i < g.num_cells(); ++i) {
    CHECK(std::abs(p[i] - p_exact(g.cell_centroids[i])) <= 1e-9 * pmax);
  }
}

TEST_CASE("mpfa-o interior rows have zero row sum") {
  const Grid base = build_cartesian_grid({20.0, 150.0}, {15, 15});
  const Grid g = perturb_interior_nodes(base, 0.3, 5);
  const TensorField k = TensorField::homogeneous2(Tensor2{100.0, 75.0, 100.0}, g.num_cells());
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);
  const SparseSystem sys = assemble_mpfa_o(g, k, bc);
  CHECK(worst_interior_row_sum(g, sys) <= 1e-12);
}

TEST_CASE("mpfa-o produces positive off-diagonals on rough anisotropic cases") {
  const Grid base = build_cartesian_grid({200.0, 20.0}, {40, 40});
  const Grid g = perturb_interior_nodes(base, 0.35, 11);
  const TensorField k = rotated_tensor(60.0, 1000.0, 100.0, g.num_cells());
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);
  const SparseSystem sys = assemble_mpfa_o(g, k, bc);
  int positives = 0;
  for (int i = 0; i < sys.matrix.rows(); ++i) {
    auto cols = sys.matrix.row_cols(i);
    auto vals = sys.matrix.row_values(i);
    for (size_t kk = 0; kk < cols.size(); ++kk) {
      if (cols[kk] != i && vals[kk] > 0.0) ++positives;
    }
  }
  CHECK(positives > 0);
}

TEST_CASE("constant Dirichlet data reproduces the constant for both schemes") {
  const Grid base = build_cartesian_grid({2.0, 2.0}, {10, 10});
  const Grid g = perturb_interior_nodes(base, 0.25, 13);
  const TensorField k = rotated_tensor(45.0, 100.0, 10.0, g.num_cells());
  const double value = 3.25;
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, value).dirichlet(Side::XMax, value);
  bc.dirichlet(Side::YMin, value).dirichlet(Side::YMax, value);

  for (const bool use_mpfa : {false, true}) {
    const SparseSystem sys =
        use_mpfa ? assemble_mpfa_o(g, k, bc) : assemble_tpfa(base, k, bc);
    const auto p = direct_solve(sys.matrix, sys.rhs);
    for (double v : p) CHECK(v == doctest::Approx(value).epsilon(1e-10));
  }
}

TEST_CASE("mpfa-o rejects singular interaction regions, naming the vertex") {
  Grid g = build_cartesian_grid({1.0, 1.0}, {1, 1});
  // Degenerate geometry: centroid coincides with a face midpoint.
  g.cell_centroids[0] = g.faces[0].centroid;
  CHECK_THROWS_AS(assemble_mpfa_o(g, constant_k(g, 1.0), {}), AssemblyError);
  try {
    assemble_mpfa_o(g, constant_k(g, 1.0), {});
  } catch (const AssemblyError& e) {
    CHECK(std::string(e.what()).find("vertex") != std::string::npos);
  }
}

TEST_CASE("mpfa-o requires a 2-D grid") {
  const Grid g = build_cartesian_grid({1.0, 1.0, 1.0}, {2, 2, 2});
  const TensorField k = lognormal_field(g, 1, 0.0, 0.0);
  CHECK_THROWS_AS(assemble_mpfa_o(g, k, {}), std::invalid_argument);
}

TEST_CASE("3-D tpfa on a diagonal field") {
  const Grid g = build_cartesian_grid({2.0, 1.0, 1.0}, {2, 1, 1});
  const TensorField k = lognormal_field(g, 1, 0.0, 0.0);
  const SparseSystem sys = assemble_tpfa(g, k, {});
  // unit cells, k = 1: T = 1/2 ... half-transmissibilities are 2, T = 1.
  CHECK(sys.matrix.at(0, 1) == doctest::Approx(-1.0).epsilon(1e-14));
  BoundarySpec bc;
  bc.dirichlet(Side::XMin, 1.0).dirichlet(Side::XMax, 0.0);
  const SparseSystem d = assemble_tpfa(g, k, bc);
  const auto p = direct_solve(d.matrix, d.rhs);
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-12));
}
