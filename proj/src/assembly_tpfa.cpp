#include <cmath>
#include <stdexcept>
#include <string>

#include "msfv/assembly.hpp"
#include "msfv/errors.hpp"
#include "msfv/field.hpp"

namespace msfv {

std::vector<std::pair<int, double>> BoundarySpec::resolve(const Grid& grid) const {
  std::vector<std::pair<int, double>> out;
  std::vector<char> seen(grid.num_faces(), 0);
  auto push = [&](int face, double pressure) {
    if (grid.faces[face].neighbor >= 0) {
      throw std::invalid_argument("BoundarySpec: face " + std::to_string(face) +
                                  " is not a boundary face");
    }
    if (seen[face]) {
      throw std::invalid_argument("BoundarySpec: face " + std::to_string(face) +
                                  " appears in more than one Dirichlet entry");
    }
    seen[face] = 1;
    out.emplace_back(face, pressure);
  };
  for (const SideValue& sv : side_values) {
    for (int f = 0; f < grid.num_faces(); ++f) {
      if (grid.faces[f].boundary_side == static_cast<int>(sv.side)) push(f, sv.pressure);
    }
  }
  for (const FaceValue& fv : face_values) push(fv.face, fv.pressure);
  return out;
}

namespace {

// t = |A_f| (n^T K d) / |d|^2 for the cell on one side of the face;
// n is the unit normal pointing out of the cell, d runs from the cell
// centroid to the face centroid.
double half_transmissibility(const Grid& grid, const TensorField& field, int face, int cell,
                             bool outward_is_face_normal) {
  const Face& f = grid.faces[face];
  const double area = std::hypot(f.area_normal[0], f.area_normal[1], f.area_normal[2]);
  const double sign = outward_is_face_normal ? 1.0 : -1.0;
  const Vec3 n = {sign * f.area_normal[0] / area, sign * f.area_normal[1] / area,
                  sign * f.area_normal[2] / area};
  const Vec3& xc = grid.cell_centroids[cell];
  const Vec3 d = {f.centroid[0] - xc[0], f.centroid[1] - xc[1], f.centroid[2] - xc[2]};
  const double d2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];

  double nkd;
  if (field.dim() == 2) {
    const Tensor2& k = field.tensor2(cell);
    nkd = n[0] * (k.xx * d[0] + k.xy * d[1]) + n[1] * (k.xy * d[0] + k.yy * d[1]);
  } else {
    const auto& k = field.diag3(cell);
    nkd = n[0] * k[0] * d[0] + n[1] * k[1] * d[1] + n[2] * k[2] * d[2];
  }
  return area * nkd / d2;
}

}  // namespace

SparseSystem assemble_tpfa(const Grid& grid, const TensorField& field, const BoundarySpec& bc) {
  if (field.dim() != grid.dim || field.num_cells() != grid.num_cells()) {
    throw std::invalid_argument("assemble_tpfa: grid/field dimension mismatch");
  }
  const int n = grid.num_cells();
  if (!bc.source.empty() && static_cast<int>(bc.source.size()) != n) {
    throw std::invalid_argument("assemble_tpfa: source vector size mismatch");
  }

  const auto dirichlet = bc.resolve(grid);
  std::vector<double> face_pressure(grid.num_faces(), 0.0);
  std::vector<char> is_dirichlet(grid.num_faces(), 0);
  for (const auto& [f, p] : dirichlet) {
    is_dirichlet[f] = 1;
    face_pressure[f] = p;
  }

  std::vector<CsrMatrix::Triplet> trip;
  trip.reserve(static_cast<size_t>(grid.num_faces()) * 4);
  std::vector<double> rhs(bc.source.empty() ? std::vector<double>(n, 0.0) : bc.source);

  for (int f = 0; f < grid.num_faces(); ++f) {
    const Face& face = grid.faces[f];
    if (face.neighbor >= 0) {
      const double ti = half_transmissibility(grid, field, f, face.owner, true);
      const double tj = half_transmissibility(grid, field, f, face.neighbor, false);
      if (!(ti > 0.0) || !(tj > 0.0)) {
        throw AssemblyError("assemble_tpfa: non-positive half-transmissibility at face " +
                            std::to_string(f));
      }
      const double t = ti * tj / (ti + tj);
      trip.push_back({face.owner, face.owner, t});
      trip.push_back({face.owner, face.neighbor, -t});
      trip.push_back({face.neighbor, face.neighbor, t});
      trip.push_back({face.neighbor, face.owner, -t});
    } else if (is_dirichlet[f]) {
      const double t = half_transmissibility(grid, field, f, face.owner, true);
      if (!(t > 0.0)) {
        throw AssemblyError("assemble_tpfa: non-positive half-transmissibility at face " +
                            std::to_string(f));
      }
      trip.push_back({face.owner, face.owner, t});
      rhs[face.owner] += t * face_pressure[f];
    }
  }

  SparseSystem sys;
  sys.matrix = CsrMatrix::from_triplets(n, n, std::move(trip), /*ensure_diagonal=*/true);
  sys.rhs = std::move(rhs);
  sys.scheme = Scheme::Tpfa;
  sys.dirichlet_faces.reserve(dirichlet.size());
  for (const auto& [f, p] : dirichlet) sys.dirichlet_faces.push_back({f, p});
  return sys;
}

}  // namespace msfv
