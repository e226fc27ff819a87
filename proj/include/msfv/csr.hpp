#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace msfv {

/// Sparse matrix in compressed-row layout. Column indices are sorted and
/// unique within each row; this is relied upon by the ILU0 factorization and
/// the merge-based products below.
class CsrMatrix {
public:
  struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
  };

  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
            std::vector<double> values);

  /// Builds a matrix from (row, col, value) triplets. Duplicate positions are
  /// summed in the order given; entries whose final magnitude is below the
  /// structural-zero threshold are dropped. If ensure_diagonal is set, a
  /// diagonal slot is materialized for every row even when its value is zero.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets,
                                 bool ensure_diagonal = false);

  static CsrMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  std::span<const int> row_ptr() const { return row_ptr_; }
  std::span<const int> col_idx() const { return col_idx_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::span<const int> row_cols(int i) const;
  std::span<const double> row_values(int i) const;

  /// Value at (i, j), zero if the position is not stored.
  double at(int i, int j) const;

  /// Index into values() of the diagonal entry of row i, or -1 if absent.
  int diag_index(int i) const;

  /// y = A * x with a fixed (stored-order) accumulation per row.
  void multiply_vector(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply_vector(std::span<const double> x) const;

  CsrMatrix transposed() const;

  /// Sparse product this * other; structural zeros (|v| < 1e-300) dropped.
  CsrMatrix multiply(const CsrMatrix& other) const;

  /// Entrywise this + alpha * other over the union pattern.
  CsrMatrix add(const CsrMatrix& other, double alpha = 1.0) const;

  double max_abs() const;

  bool same_pattern(const CsrMatrix& other) const;

  /// Writes one "row col value" line per entry, 1-based indices.
  void write_coordinate(std::ostream& os) const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// Magnitude below which a computed entry is treated as structurally zero.
inline constexpr double kStructuralZero = 1e-300;

/// R * (A * P) with deterministic accumulation. Dimensions m x n, n x n, n x m.
CsrMatrix triple_product(const CsrMatrix& restriction, const CsrMatrix& a,
                         const CsrMatrix& prolongation);

}  // namespace msfv
