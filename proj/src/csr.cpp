#include "msfv/csr.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace msfv {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                     std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0 || row_ptr_.size() != static_cast<size_t>(rows_) + 1 ||
      col_idx_.size() != values_.size() ||
      row_ptr_.back() != static_cast<int>(values_.size())) {
    throw std::invalid_argument("CsrMatrix: inconsistent layout arrays");
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets,
                                   bool ensure_diagonal) {
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("CsrMatrix::from_triplets: index out of range");
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });

  CsrMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.row_ptr_.assign(static_cast<size_t>(rows) + 1, 0);
  m.col_idx_.reserve(triplets.size());
  m.values_.reserve(triplets.size());

  size_t k = 0;
  for (int i = 0; i < rows; ++i) {
    bool has_diag = false;
    while (k < triplets.size() && triplets[k].row == i) {
      const int col = triplets[k].col;
      double sum = 0.0;
      while (k < triplets.size() && triplets[k].row == i && triplets[k].col == col) {
        sum += triplets[k].value;
        ++k;
      }
      if (ensure_diagonal && col >= i && !has_diag) {
        if (col > i) {
          m.col_idx_.push_back(i);
          m.values_.push_back(0.0);
        }
        has_diag = true;
        if (col == i) {
          m.col_idx_.push_back(col);
          m.values_.push_back(sum);
          continue;
        }
      }
      if (std::abs(sum) >= kStructuralZero || (col == i && ensure_diagonal)) {
        m.col_idx_.push_back(col);
        m.values_.push_back(sum);
      }
    }
    if (ensure_diagonal && !has_diag && i < cols) {
      m.col_idx_.push_back(i);
      m.values_.push_back(0.0);
    }
    m.row_ptr_[static_cast<size_t>(i) + 1] = static_cast<int>(m.values_.size());
  }
  return m;
}

CsrMatrix CsrMatrix::identity(int n) {
  CsrMatrix m;
  m.rows_ = m.cols_ = n;
  m.row_ptr_.resize(static_cast<size_t>(n) + 1);
  m.col_idx_.resize(n);
  m.values_.assign(n, 1.0);
  for (int i = 0; i <= n; ++i) m.row_ptr_[i] = i;
  for (int i = 0; i < n; ++i) m.col_idx_[i] = i;
  return m;
}

std::span<const int> CsrMatrix::row_cols(int i) const {
  return {col_idx_.data() + row_ptr_[i], static_cast<size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

std::span<const double> CsrMatrix::row_values(int i) const {
  return {values_.data() + row_ptr_[i], static_cast<size_t>(row_ptr_[i + 1] - row_ptr_[i])};
}

double CsrMatrix::at(int i, int j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_ptr_[i] + (it - cols.begin())];
}

int CsrMatrix::diag_index(int i) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), i);
  if (it == cols.end() || *it != i) return -1;
  return row_ptr_[i] + static_cast<int>(it - cols.begin());
}

void CsrMatrix::multiply_vector(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
    throw std::invalid_argument("CsrMatrix::multiply_vector: dimension mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double acc = 0.0;
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      acc += values_[k] * x[col_idx_[k]];
    }
    y[i] = acc;
  }
}

std::vector<double> CsrMatrix::multiply_vector(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply_vector(x, y);
  return y;
}

CsrMatrix CsrMatrix::transposed() const {
  CsrMatrix t;
  t.rows_ = cols_;
  t.cols_ = rows_;
  t.row_ptr_.assign(static_cast<size_t>(cols_) + 1, 0);
  for (int idx : col_idx_) ++t.row_ptr_[static_cast<size_t>(idx) + 1];
  for (int i = 0; i < cols_; ++i) t.row_ptr_[i + 1] += t.row_ptr_[i];
  t.col_idx_.resize(col_idx_.size());
  t.values_.resize(values_.size());
  std::vector<int> next(t.row_ptr_.begin(), t.row_ptr_.end() - 1);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const int pos = next[col_idx_[k]]++;
      t.col_idx_[pos] = i;
      t.values_[pos] = values_[k];
    }
  }
  return t;
}

CsrMatrix CsrMatrix::multiply(const CsrMatrix& other) const {
  if (cols_ != other.rows_) {
    throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
  }
  CsrMatrix r;
  r.rows_ = rows_;
  r.cols_ = other.cols_;
  r.row_ptr_.assign(static_cast<size_t>(rows_) + 1, 0);

  // Row-by-row accumulation into a dense scratch, gathered in sorted column
  // order so the result is deterministic regardless of input row ordering.
  std::vector<double> scratch(other.cols_, 0.0);
  std::vector<char> touched(other.cols_, 0);
  std::vector<int> cols_in_row;
  cols_in_row.reserve(64);

  for (int i = 0; i < rows_; ++i) {
    cols_in_row.clear();
    for (int ka = row_ptr_[i]; ka < row_ptr_[i + 1]; ++ka) {
      const int k = col_idx_[ka];
      const double a = values_[ka];
      for (int kb = other.row_ptr_[k]; kb < other.row_ptr_[k + 1]; ++kb) {
        const int j = other.col_idx_[kb];
        if (!touched[j]) {
          touched[j] = 1;
          scratch[j] = 0.0;
          cols_in_row.push_back(j);
        }
        scratch[j] += a * other.values_[kb];
      }
    }
    std::sort(cols_in_row.begin(), cols_in_row.end());
    for (int j : cols_in_row) {
      if (std::abs(scratch[j]) >= kStructuralZero) {
        r.col_idx_.push_back(j);
        r.values_.push_back(scratch[j]);
      }
      touched[j] = 0;
    }
    r.row_ptr_[static_cast<size_t>(i) + 1] = static_cast<int>(r.values_.size());
  }
  return r;
}

CsrMatrix CsrMatrix::add(const CsrMatrix& other, double alpha) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) {
    throw std::invalid_argument("CsrMatrix::add: dimension mismatch");
  }
  CsrMatrix r;
  r.rows_ = rows_;
  r.cols_ = cols_;
  r.row_ptr_.assign(static_cast<size_t>(rows_) + 1, 0);
  for (int i = 0; i < rows_; ++i) {
    int ka = row_ptr_[i], kb = other.row_ptr_[i];
    const int ea = row_ptr_[i + 1], eb = other.row_ptr_[i + 1];
    while (ka < ea || kb < eb) {
      int col;
      double v;
      if (kb >= eb || (ka < ea && col_idx_[ka] < other.col_idx_[kb])) {
        col = col_idx_[ka];
        v = values_[ka++];
      } else if (ka >= ea || other.col_idx_[kb] < col_idx_[ka]) {
        col = other.col_idx_[kb];
        v = alpha * other.values_[kb++];
      } else {
        col = col_idx_[ka];
        v = values_[ka++] + alpha * other.values_[kb++];
      }
      if (std::abs(v) >= kStructuralZero) {
        r.col_idx_.push_back(col);
        r.values_.push_back(v);
      }
    }
    r.row_ptr_[static_cast<size_t>(i) + 1] = static_cast<int>(r.values_.size());
  }
  return r;
}

double CsrMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ &&
         col_idx_ == other.col_idx_;
}

void CsrMatrix::write_coordinate(std::ostream& os) const {
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      os << i + 1 << ' ' << col_idx_[k] + 1 << ' ' << values_[k] << '\n';
    }
  }
}

CsrMatrix triple_product(const CsrMatrix& restriction, const CsrMatrix& a,
                         const CsrMatrix& prolongation) {
  if (restriction.cols() != a.rows() || a.cols() != prolongation.rows() ||
      restriction.rows() != prolongation.cols()) {
    throw std::invalid_argument("triple_product: dimension mismatch");
  }
  return restriction.multiply(a.multiply(prolongation));
}

}  // namespace msfv
