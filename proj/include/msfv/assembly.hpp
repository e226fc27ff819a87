#pragma once

#include <vector>

#include "msfv/csr.hpp"
#include "msfv/grid.hpp"

namespace msfv {

class TensorField;

enum class Scheme { Tpfa, MpfaO };

/// Dirichlet data plus an optional per-cell source vector. Sides are expanded
/// to their boundary faces at assembly time; a face may carry at most one
/// prescribed value. Boundary faces with no entry are no-flow.
struct BoundarySpec {
  struct SideValue {
    Side side;
    double pressure;
  };
  struct FaceValue {
    int face;
    double pressure;
  };
  std::vector<SideValue> side_values;
  std::vector<FaceValue> face_values;
  std::vector<double> source;  ///< empty means zero

  BoundarySpec& dirichlet(Side side, double pressure) {
    side_values.push_back({side, pressure});
    return *this;
  }
  BoundarySpec& dirichlet_face(int face, double pressure) {
    face_values.push_back({face, pressure});
    return *this;
  }

  /// Expands side entries to faces; throws if any face carries two values.
  std::vector<std::pair<int, double>> resolve(const Grid& grid) const;
};

struct DirichletFace {
  int face;
  double pressure;
};

/// Assembled fine-scale system A p = q.
struct SparseSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
  std::vector<DirichletFace> dirichlet_faces;
  Scheme scheme = Scheme::Tpfa;
};

SparseSystem assemble_tpfa(const Grid& grid, const TensorField& field, const BoundarySpec& bc);

/// MPFA O-variant with continuity points at face midpoints. Both interior and
/// boundary vertices carry interaction regions; Dirichlet values enter as
/// known continuity-point pressures and no-flow sides as zero-flux conditions,
/// which keeps the scheme exact for linear pressure fields with constant K.
SparseSystem assemble_mpfa_o(const Grid& grid, const TensorField& field, const BoundarySpec& bc);

}  // namespace msfv
