#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "msfv/csr.hpp"
#include "msfv/msrsb.hpp"

namespace msfv {

struct BoundsCensus {
  int below = 0;
  int above = 0;
  double worst_low = 0.0;   ///< most negative excursion value (valid if below > 0)
  double worst_high = 0.0;  ///< largest excursion value (valid if above > 0)
  int worst_low_cell = -1;
  int worst_high_cell = -1;

  int total() const { return below + above; }
};

struct ErrorNorms {
  double l2 = 0.0;
  double linf = 0.0;
};

struct SolveReport {
  std::vector<double> residual_history;  ///< relative 2-norm per cycle
  int iterations = 0;
  bool converged = false;
  bool breakdown = false;  ///< residual became non-finite
  double wall_time_seconds = 0.0;
  std::optional<ErrorNorms> error_norms;
  std::optional<BoundsCensus> bounds;
  double nullspace_drift = 0.0;
  // configuration echo
  std::string restriction_kind;
  std::string scheme;
  std::string repair_mode;
  double epsilon = 0.0;
  double weight = 0.0;
  int smoothing_steps = 0;
  std::vector<int> coarsening_ratio;
  std::string solve_mode;
};

/// Thrown when the residual becomes non-finite; carries the partial history.
struct DivergenceError : std::runtime_error {
  DivergenceError(const std::string& msg, SolveReport partial)
      : std::runtime_error(msg), report(std::move(partial)) {}
  SolveReport report;
};

/// p = P * coarse_solve(R * q)
std::vector<double> one_step_multiscale(const CsrMatrix& a_f, std::span<const double> q,
                                        const CsrMatrix& prolongation,
                                        const CsrMatrix& restriction,
                                        const CsrMatrix& coarse_op);

struct IterativeOptions {
  int smoothing_steps = 1;
  double tolerance = 1e-8;
  int max_cycles = 300;
  bool finalize_cv = false;
};

/// Final coarse correction applied with the control-volume restriction when
/// finalize_cv is requested on a Galerkin-restricted solve.
struct CvFinalizer {
  const CsrMatrix* restriction = nullptr;
  const CsrMatrix* coarse_op = nullptr;
};

/// Two-level iterative solve from p = 0: per cycle, `smoothing_steps` ILU0
/// updates followed by one coarse correction; the relative residual is
/// recorded after the correction. Non-convergence returns converged = false
/// with the full history; a non-finite residual throws DivergenceError.
std::pair<std::vector<double>, SolveReport> iterative_multiscale(
    const CsrMatrix& a_f, std::span<const double> q, const CsrMatrix& prolongation,
    const CsrMatrix& restriction, const CsrMatrix& coarse_op, const IterativeOptions& options,
    const CvFinalizer& finalizer = {});

/// Scaled norms: l2 = sqrt(sum|d|^2 / sum|ref|^2), linf = max|d| / max|ref|.
ErrorNorms error_norms(std::span<const double> p_ref, std::span<const double> p_ms);

BoundsCensus bound_check(std::span<const double> p, double lo, double hi);

}  // namespace msfv
