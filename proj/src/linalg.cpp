#include "msfv/linalg.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>
#include <string>

#include "msfv/errors.hpp"

namespace msfv {

struct DirectSolver::Impl {
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
};

DirectSolver::DirectSolver(const CsrMatrix& a) : impl_(std::make_unique<Impl>()) {
  if (a.rows() != a.cols()) throw std::invalid_argument("DirectSolver: matrix must be square");
  using RowMajor = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
  const Eigen::Map<const RowMajor> view(a.rows(), a.cols(), a.nnz(), a.row_ptr().data(),
                                        a.col_idx().data(), a.values().data());
  impl_->matrix = view;
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("direct_solve: numerically singular matrix (" +
                              impl_->lu.lastErrorMessage() + ")");
  }
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

std::vector<double> DirectSolver::solve(std::span<const double> b) const {
  if (static_cast<int>(b.size()) != impl_->matrix.rows()) {
    throw std::invalid_argument("DirectSolver::solve: dimension mismatch");
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), b.size());
  Eigen::VectorXd x = impl_->lu.solve(rhs);
  if (impl_->lu.info() != Eigen::Success) {
    throw SingularMatrixError("direct_solve: solve failed after factorization");
  }
  return {x.data(), x.data() + x.size()};
}

std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b) {
  return DirectSolver(a).solve(b);
}

Ilu0Factors ilu0_factor(const CsrMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("ilu0_factor: matrix must be square");
  const int n = a.rows();
  Ilu0Factors f{a};
  auto row_ptr = f.lu.row_ptr();
  auto col_idx = f.lu.col_idx();
  auto val = f.lu.values();

  std::vector<int> diag(n);
  for (int i = 0; i < n; ++i) {
    diag[i] = f.lu.diag_index(i);
    if (diag[i] < 0 || a.values()[diag[i]] == 0.0) {
      throw FactorizationError("ilu0_factor: zero diagonal at row " + std::to_string(i), i);
    }
  }

  for (int i = 0; i < n; ++i) {
    for (int ki = row_ptr[i]; ki < row_ptr[i + 1] && col_idx[ki] < i; ++ki) {
      const int k = col_idx[ki];
      const double pivot = val[diag[k]];
      if (pivot == 0.0) {
        throw FactorizationError("ilu0_factor: zero pivot at row " + std::to_string(k), k);
      }
      const double factor = val[ki] / pivot;
      val[ki] = factor;
      // Subtract factor * (strict upper part of row k), restricted to row i's
      // pattern; both index lists are sorted.
      int p = ki + 1;
      for (int kk = diag[k] + 1; kk < row_ptr[k + 1]; ++kk) {
        const int j = col_idx[kk];
        while (p < row_ptr[i + 1] && col_idx[p] < j) ++p;
        if (p >= row_ptr[i + 1]) break;
        if (col_idx[p] == j) val[p] -= factor * val[kk];
      }
    }
    if (val[diag[i]] == 0.0) {
      throw FactorizationError("ilu0_factor: zero pivot at row " + std::to_string(i), i);
    }
  }
  return f;
}

std::vector<double> ilu0_apply(const Ilu0Factors& factors, std::span<const double> r) {
  const CsrMatrix& lu = factors.lu;
  const int n = lu.rows();
  if (static_cast<int>(r.size()) != n) {
    throw std::invalid_argument("ilu0_apply: dimension mismatch");
  }
  auto row_ptr = lu.row_ptr();
  auto col_idx = lu.col_idx();
  auto val = lu.values();

  std::vector<double> z(r.begin(), r.end());
  for (int i = 0; i < n; ++i) {
    double s = z[i];
    int k = row_ptr[i];
    for (; k < row_ptr[i + 1] && col_idx[k] < i; ++k) s -= val[k] * z[col_idx[k]];
    z[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = z[i];
    const int d = lu.diag_index(i);
    for (int k = d + 1; k < row_ptr[i + 1]; ++k) s -= val[k] * z[col_idx[k]];
    z[i] = s / val[d];
  }
  return z;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace msfv
