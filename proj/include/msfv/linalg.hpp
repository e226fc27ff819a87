#pragma once

#include <memory>
#include <span>
#include <vector>

#include "msfv/csr.hpp"

namespace msfv {

/// Sparse LU with partial pivoting; factors once, solves many.
class DirectSolver {
public:
  explicit DirectSolver(const CsrMatrix& a);
  ~DirectSolver();
  DirectSolver(DirectSolver&&) noexcept;
  DirectSolver& operator=(DirectSolver&&) noexcept;

  std::vector<double> solve(std::span<const double> b) const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> direct_solve(const CsrMatrix& a, std::span<const double> b);

/// Combined L\U factor on the sparsity pattern of the input (zero fill);
/// the unit lower diagonal is implicit.
struct Ilu0Factors {
  CsrMatrix lu;
};

Ilu0Factors ilu0_factor(const CsrMatrix& a);

/// z = U^-1 (L^-1 r) by forward/backward substitution on the stored pattern.
std::vector<double> ilu0_apply(const Ilu0Factors& factors, std::span<const double> r);

double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace msfv
