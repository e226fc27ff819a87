#pragma once

#include <vector>

#include "msfv/csr.hpp"

namespace msfv {

/// Positive off-diagonal entries whose ratio to the row diagonal exceeds the
/// threshold, scanned over the original operator only.
struct FlaggedEntries {
  struct Entry {
    int row;
    int col;
    double value;  ///< original a_ij
    double zeta;   ///< a_ij / a_ii
  };
  std::vector<Entry> entries;
  double epsilon = 0.0;
};

/// Null-space-neutral perturbation: B*1 = 0 and B^T*1 = 0 by construction.
struct Perturbation {
  CsrMatrix matrix;
  double weight = 1.0;
};

FlaggedEntries flag_positive_offdiagonals(const CsrMatrix& a, double epsilon);

/// Accumulates, for every flagged (i, j) with original value a_ij:
/// b_ii += w a_ij, b_ij -= w a_ij, b_ji -= w a_ij, b_jj += w a_ij.
Perturbation build_perturbation(const CsrMatrix& a, const FlaggedEntries& entries, double w);

/// Repaired coarse operator A_m = A_c + B. Preserves row and column sums of
/// A_c; with w = 1 every flagged off-diagonal is eliminated.
CsrMatrix am_operator(const CsrMatrix& a_c, double epsilon, double w);

/// Fine-scale M-matrix enforcement for basis construction: redistributes all
/// positive off-diagonals (w = 1, no threshold). The result is used only for
/// computing basis functions; the coarse system is always built from the
/// intact fine matrix.
CsrMatrix m_matrix_fine(const CsrMatrix& a_f);

/// max(||(A_m - A_c) 1||_inf, ||(A_m - A_c)^T 1||_inf)
double nullspace_drift(const CsrMatrix& a_c, const CsrMatrix& a_m);

struct RepairReport {
  int positive_offdiagonals = 0;
  int flagged = 0;
  double max_zeta = 0.0;
  double epsilon = 0.0;
  double weight = 1.0;
  double drift = 0.0;  ///< null-space drift of the repaired operator
};

RepairReport repair_report(const CsrMatrix& a_c, double epsilon, double w);

}  // namespace msfv
