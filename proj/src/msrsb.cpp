#include "msfv/msrsb.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace msfv {

Prolongation init_prolongation(const CoarsePartition& partition) {
  const int n = static_cast<int>(partition.block_of_cell.size());
  std::vector<int> row_ptr(n + 1), col_idx(n);
  std::vector<double> values(n, 1.0);
  for (int i = 0; i < n; ++i) {
    row_ptr[i] = i;
    col_idx[i] = partition.block_of_cell[i];
  }
  row_ptr[n] = n;
  return Prolongation{CsrMatrix(n, partition.num_blocks(), std::move(row_ptr),
                                std::move(col_idx), std::move(values))};
}

CsrMatrix connectivity_matrix(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("connectivity_matrix: square input");
  CsrMatrix c = a;
  auto row_ptr = c.row_ptr();
  auto col_idx = c.col_idx();
  auto val = c.values();
  for (int i = 0; i < a.rows(); ++i) {
    const int d = c.diag_index(i);
    if (d < 0) throw std::invalid_argument("connectivity_matrix: missing diagonal in row " +
                                           std::to_string(i));
    double off = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (k != d) off += val[k];
    }
    val[d] = -off;
    // Nudge the diagonal until the in-order row sum cancels exactly; this
    // makes A_conn * 1 = 0 bitwise and keeps constant columns fixed points of
    // the smoother.
    for (int pass = 0; pass < 4; ++pass) {
      double s = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k];
      if (s == 0.0) break;
      val[d] -= s;
    }
  }
  return c;
}

Prolongation smooth_prolongation(const CsrMatrix& a_conn, const Prolongation& initial,
                                 const SupportRegions& supports,
                                 const CoarsePartition& partition,
                                 const SmoothingOptions& options) {
  const int n = a_conn.rows();
  const int m = partition.num_blocks();
  if (initial.matrix.rows() != n || initial.matrix.cols() != m) {
    throw std::invalid_argument("smooth_prolongation: operator dimensions mismatch");
  }
  if (!(options.omega > 0.0) || options.omega > 1.0) {
    throw std::invalid_argument("smooth_prolongation: omega must be in (0, 1]");
  }

  // Structural pattern: row i covers every block whose support contains i.
  std::vector<int> row_ptr(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    row_ptr[i + 1] = row_ptr[i] + static_cast<int>(supports.covering[i].size());
  }
  std::vector<int> col_idx(row_ptr[n]);
  std::vector<double> values(row_ptr[n], 0.0);
  for (int i = 0; i < n; ++i) {
    std::copy(supports.covering[i].begin(), supports.covering[i].end(),
              col_idx.begin() + row_ptr[i]);
  }
  // Seed from the initial operator (indicator or a previously smoothed basis).
  for (int i = 0; i < n; ++i) {
    auto cols = initial.matrix.row_cols(i);
    auto vals = initial.matrix.row_values(i);
    for (size_t k = 0; k < cols.size(); ++k) {
      const auto begin = col_idx.begin() + row_ptr[i];
      const auto end = col_idx.begin() + row_ptr[i + 1];
      const auto it = std::lower_bound(begin, end, cols[k]);
      if (it == end || *it != cols[k]) {
        throw std::invalid_argument("smooth_prolongation: initial operator outside supports");
      }
      values[it - col_idx.begin()] = vals[k];
    }
  }

  std::vector<char> in_halo(n, 0);
  for (int c : supports.global_boundary) in_halo[c] = 1;
  std::vector<char> pinned(n, 0);
  for (int c : partition.block_center_cell) pinned[c] = 1;

  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) {
    const int d = a_conn.diag_index(i);
    const double v = d >= 0 ? a_conn.values()[d] : 0.0;
    if (v == 0.0 && !pinned[i]) {
      // Isolated row: no connections, nothing to smooth.
      diag[i] = 1.0;
    } else {
      diag[i] = v;
    }
  }

  std::vector<double> next(values.size());
  std::vector<double> scratch(m, 0.0);
  std::vector<char> mark(m, 0);
  std::vector<int> touched;
  touched.reserve(16);

  CsrMatrix p(n, m, row_ptr, col_idx, values);
  int iter = 0;
  double max_increment = 0.0;

  for (iter = 0; iter < options.max_iterations; ++iter) {
    max_increment = 0.0;
    auto pval = p.values();
    for (int i = 0; i < n; ++i) {
      const int begin = row_ptr[i], end = row_ptr[i + 1];
      if (pinned[i]) {
        for (int k = begin; k < end; ++k) next[k] = pval[k];
        continue;
      }
      // Jacobi increment restricted to the row pattern, read from the
      // previous sweep only.
      touched.clear();
      auto acols = a_conn.row_cols(i);
      auto avals = a_conn.row_values(i);
      for (size_t ka = 0; ka < acols.size(); ++ka) {
        const int row = acols[ka];
        const double aik = avals[ka];
        if (aik == 0.0) continue;
        auto pcols = p.row_cols(row);
        auto pvrow = p.row_values(row);
        for (size_t kp = 0; kp < pcols.size(); ++kp) {
          const int j = pcols[kp];
          if (!mark[j]) {
            mark[j] = 1;
            scratch[j] = 0.0;
            touched.push_back(j);
          }
          scratch[j] += aik * pvrow[kp];
        }
      }
      const double scale = -options.omega / diag[i];
      auto increment = [&](int k) {
        const int j = col_idx[k];
        return mark[j] ? scale * scratch[j] : 0.0;
      };
      if (in_halo[i]) {
        double s = 0.0;
        for (int k = begin; k < end; ++k) s += increment(k);
        const double denom = 1.0 + s;
        if (!(denom > 0.0) || !std::isfinite(denom)) {
          throw BasisDivergenceError(
              "smooth_prolongation: renormalization breakdown at cell " + std::to_string(i) +
              " (1 + s = " + std::to_string(denom) + ")");
        }
        for (int k = begin; k < end; ++k) next[k] = (pval[k] + increment(k)) / denom;
      } else {
        for (int k = begin; k < end; ++k) next[k] = pval[k] + increment(k);
      }
      for (int j : touched) mark[j] = 0;
    }

    for (size_t k = 0; k < next.size(); ++k) {
      max_increment = std::max(max_increment, std::abs(next[k] - pval[k]));
      pval[k] = next[k];
    }
    if (!std::isfinite(max_increment)) {
      throw BasisDivergenceError("smooth_prolongation: non-finite basis update at sweep " +
                                 std::to_string(iter + 1));
    }

    const double pou = partition_of_unity_error(p);
    if (pou > 1e-12) {
      throw std::logic_error("smooth_prolongation: partition of unity violated (" +
                             std::to_string(pou) + ") at sweep " + std::to_string(iter + 1));
    }
    if (max_increment < options.tolerance) {
      ++iter;
      break;
    }
  }

  return Prolongation{std::move(p), iter, max_increment};
}

Restriction restriction_cv(const CoarsePartition& partition) {
  const int n = static_cast<int>(partition.block_of_cell.size());
  const int m = partition.num_blocks();
  std::vector<int> row_ptr(m + 1, 0);
  std::vector<int> col_idx;
  col_idx.reserve(n);
  std::vector<double> values(n, 1.0);
  for (int b = 0; b < m; ++b) {
    for (int c : partition.cells_of_block[b]) col_idx.push_back(c);
    row_ptr[b + 1] = static_cast<int>(col_idx.size());
  }
  return Restriction{CsrMatrix(m, n, std::move(row_ptr), std::move(col_idx), std::move(values)),
                     RestrictionKind::ControlVolume};
}

Restriction restriction_galerkin(const Prolongation& p) {
  return Restriction{p.matrix.transposed(), RestrictionKind::Galerkin};
}

double partition_of_unity_error(const CsrMatrix& p) {
  double worst = 0.0;
  for (int i = 0; i < p.rows(); ++i) {
    double s = 0.0;
    for (double v : p.row_values(i)) s += v;
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

}  // namespace msfv
