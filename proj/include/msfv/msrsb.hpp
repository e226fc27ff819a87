#pragma once

#include <stdexcept>
#include <vector>

#include "msfv/csr.hpp"
#include "msfv/grid.hpp"

namespace msfv {

/// Raised when the restricted smoothing breaks down (renormalization factor
/// 1 + s <= 0 or non-finite values); expected only on non-M fine matrices.
struct BasisDivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sparse n x m basis operator. Rows sum to 1; column j is structurally zero
/// outside support region I_j.
struct Prolongation {
  CsrMatrix matrix;
  int iterations = 0;
  double final_increment = 0.0;
};

enum class RestrictionKind { ControlVolume, Galerkin };

struct Restriction {
  CsrMatrix matrix;  ///< m x n
  RestrictionKind kind = RestrictionKind::ControlVolume;
};

/// Block indicator: P_ij = 1 iff block_of_cell(i) = j.
Prolongation init_prolongation(const CoarsePartition& partition);

/// Copy of A with each diagonal replaced by the negated off-diagonal row sum,
/// adjusted so that the in-order row sum (hence A_conn * 1) is exactly zero.
CsrMatrix connectivity_matrix(const CsrMatrix& a);

struct SmoothingOptions {
  double omega = 2.0 / 3.0;
  double tolerance = 1e-3;  ///< on the max entry change per sweep
  int max_iterations = 250;
};

/// Restricted weighted-Jacobi smoothing of the basis columns. Each sweep
/// computes d = -omega D^-1 (A_conn P) from the previous sweep's P, truncates
/// it to the support pattern, applies plain updates away from the support
/// halos and the rescaled update (P + d) / (1 + s) on halo cells, and holds
/// block-center rows fixed at their indicator values. Unit row sums are
/// asserted after every sweep.
Prolongation smooth_prolongation(const CsrMatrix& a_conn, const Prolongation& initial,
                                 const SupportRegions& supports,
                                 const CoarsePartition& partition,
                                 const SmoothingOptions& options);

Restriction restriction_cv(const CoarsePartition& partition);
Restriction restriction_galerkin(const Prolongation& p);

/// Max row-sum deviation from 1.
double partition_of_unity_error(const CsrMatrix& p);

}  // namespace msfv
