#include "msfv/monotone.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "msfv/errors.hpp"

namespace msfv {

namespace {

FlaggedEntries scan(const CsrMatrix& a, double epsilon, bool use_threshold) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("flag_positive_offdiagonals: square input required");
  }
  FlaggedEntries out;
  out.epsilon = epsilon;
  for (int i = 0; i < a.rows(); ++i) {
    const int d = a.diag_index(i);
    const double aii = d >= 0 ? a.values()[d] : 0.0;
    if (use_threshold && !(aii > 0.0)) {
      throw DataError("flag_positive_offdiagonals: non-positive diagonal at row " +
                      std::to_string(i));
    }
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == i || !(vals[k] > 0.0)) continue;
      const double zeta = aii != 0.0 ? vals[k] / aii : 0.0;
      if (!use_threshold || zeta > epsilon) out.entries.push_back({i, cols[k], vals[k], zeta});
    }
  }
  return out;
}

CsrMatrix perturbation_matrix(const FlaggedEntries& entries, double w, int n) {
  std::vector<CsrMatrix::Triplet> trip;
  trip.reserve(entries.entries.size() * 4);
  for (const auto& e : entries.entries) {
    const double x = w * e.value;
    trip.push_back({e.row, e.row, x});
    trip.push_back({e.row, e.col, -x});
    trip.push_back({e.col, e.row, -x});
    trip.push_back({e.col, e.col, x});
  }
  return CsrMatrix::from_triplets(n, n, std::move(trip));
}

}  // namespace

FlaggedEntries flag_positive_offdiagonals(const CsrMatrix& a, double epsilon) {
  return scan(a, epsilon, /*use_threshold=*/true);
}

Perturbation build_perturbation(const CsrMatrix& a, const FlaggedEntries& entries, double w) {
  Perturbation b{perturbation_matrix(entries, w, a.rows()), w};
  // Row and column sums vanish in matched pairs; anything beyond rounding in
  // the accumulation indicates a broken stencil.
  const std::vector<double> ones(a.rows(), 1.0);
  const double scale = std::max(1.0, b.matrix.max_abs());
  if (b.matrix.rows() > 0) {
    auto row_sums = b.matrix.multiply_vector(ones);
    auto col_sums = b.matrix.transposed().multiply_vector(ones);
    for (int i = 0; i < a.rows(); ++i) {
      if (std::abs(row_sums[i]) > 1e-13 * scale || std::abs(col_sums[i]) > 1e-13 * scale) {
        throw std::logic_error("build_perturbation: nonzero row/column sum at index " +
                               std::to_string(i));
      }
    }
  }
  return b;
}

CsrMatrix am_operator(const CsrMatrix& a_c, double epsilon, double w) {
  const FlaggedEntries flags = flag_positive_offdiagonals(a_c, epsilon);
  if (flags.entries.empty()) return a_c;
  const Perturbation b = build_perturbation(a_c, flags, w);
  return a_c.add(b.matrix);
}

CsrMatrix m_matrix_fine(const CsrMatrix& a_f) {
  // No threshold and unit weight: every positive off-diagonal is
  // redistributed onto the two diagonals.
  const FlaggedEntries flags = scan(a_f, 0.0, /*use_threshold=*/false);
  if (flags.entries.empty()) return a_f;
  const Perturbation b = build_perturbation(a_f, flags, 1.0);
  return a_f.add(b.matrix);
}

double nullspace_drift(const CsrMatrix& a_c, const CsrMatrix& a_m) {
  if (a_c.rows() != a_m.rows() || a_c.cols() != a_m.cols()) {
    throw std::invalid_argument("nullspace_drift: dimension mismatch");
  }
  const CsrMatrix diff = a_m.add(a_c, -1.0);
  const std::vector<double> ones(a_c.rows(), 1.0);
  auto row = diff.multiply_vector(ones);
  auto col = diff.transposed().multiply_vector(ones);
  double drift = 0.0;
  for (double v : row) drift = std::max(drift, std::abs(v));
  for (double v : col) drift = std::max(drift, std::abs(v));
  return drift;
}

RepairReport repair_report(const CsrMatrix& a_c, double epsilon, double w) {
  RepairReport r;
  r.epsilon = epsilon;
  r.weight = w;
  const FlaggedEntries all = flag_positive_offdiagonals(a_c, 0.0);
  r.positive_offdiagonals = static_cast<int>(all.entries.size());
  for (const auto& e : all.entries) r.max_zeta = std::max(r.max_zeta, e.zeta);
  const FlaggedEntries flagged = flag_positive_offdiagonals(a_c, epsilon);
  r.flagged = static_cast<int>(flagged.entries.size());
  r.drift = nullspace_drift(a_c, am_operator(a_c, epsilon, w));
  return r;
}

}  // namespace msfv
