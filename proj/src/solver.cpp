#include "msfv/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "msfv/linalg.hpp"

namespace msfv {

std::vector<double> one_step_multiscale(const CsrMatrix& a_f, std::span<const double> q,
                                        const CsrMatrix& prolongation,
                                        const CsrMatrix& restriction,
                                        const CsrMatrix& coarse_op) {
  if (a_f.rows() != static_cast<int>(q.size()) || restriction.cols() != a_f.rows() ||
      prolongation.rows() != a_f.rows() || coarse_op.rows() != restriction.rows() ||
      prolongation.cols() != coarse_op.rows()) {
    throw std::invalid_argument("one_step_multiscale: dimension mismatch");
  }
  const auto q_c = restriction.multiply_vector(q);
  const auto p_c = direct_solve(coarse_op, q_c);
  return prolongation.multiply_vector(p_c);
}

std::pair<std::vector<double>, SolveReport> iterative_multiscale(
    const CsrMatrix& a_f, std::span<const double> q, const CsrMatrix& prolongation,
    const CsrMatrix& restriction, const CsrMatrix& coarse_op, const IterativeOptions& options,
    const CvFinalizer& finalizer) {
  const int n = a_f.rows();
  if (n != static_cast<int>(q.size())) {
    throw std::invalid_argument("iterative_multiscale: dimension mismatch");
  }
  if (options.smoothing_steps < 1) {
    throw std::invalid_argument("iterative_multiscale: smoothing_steps must be >= 1");
  }

  const Ilu0Factors smoother = ilu0_factor(a_f);
  const DirectSolver coarse(coarse_op);

  SolveReport report;
  report.smoothing_steps = options.smoothing_steps;

  const double qnorm = norm2(q);
  const double scale = qnorm > 0.0 ? qnorm : 1.0;

  std::vector<double> p(n, 0.0);
  std::vector<double> r(q.begin(), q.end());
  std::vector<double> ap(n);

  auto update_residual = [&] {
    a_f.multiply_vector(p, ap);
    for (int i = 0; i < n; ++i) r[i] = q[i] - ap[i];
  };

  auto coarse_correction = [&](const CsrMatrix& rmat, const DirectSolver& solver) {
    const auto rc = rmat.multiply_vector(r);
    const auto pc = solver.solve(rc);
    const auto dp = prolongation.multiply_vector(pc);
    for (int i = 0; i < n; ++i) p[i] += dp[i];
  };

  for (int cycle = 1; cycle <= options.max_cycles; ++cycle) {
    for (int s = 0; s < options.smoothing_steps; ++s) {
      const auto z = ilu0_apply(smoother, r);
      for (int i = 0; i < n; ++i) p[i] += z[i];
      update_residual();
    }
    coarse_correction(restriction, coarse);
    update_residual();

    const double rel = norm2(r) / scale;
    report.residual_history.push_back(rel);
    report.iterations = cycle;
    if (!std::isfinite(rel)) {
      report.breakdown = true;
      throw DivergenceError("iterative_multiscale: non-finite residual at cycle " +
                                std::to_string(cycle),
                            report);
    }
    if (rel <= options.tolerance) {
      report.converged = true;
      break;
    }
  }

  if (options.finalize_cv && finalizer.restriction != nullptr && finalizer.coarse_op != nullptr) {
    const DirectSolver cv_coarse(*finalizer.coarse_op);
    coarse_correction(*finalizer.restriction, cv_coarse);
    update_residual();
    report.residual_history.push_back(norm2(r) / scale);
  }

  return {std::move(p), std::move(report)};
}

ErrorNorms error_norms(std::span<const double> p_ref, std::span<const double> p_ms) {
  if (p_ref.size() != p_ms.size()) {
    throw std::invalid_argument("error_norms: length mismatch");
  }
  double num2 = 0.0, den2 = 0.0, numi = 0.0, deni = 0.0;
  for (size_t i = 0; i < p_ref.size(); ++i) {
    const double d = p_ref[i] - p_ms[i];
    num2 += d * d;
    den2 += p_ref[i] * p_ref[i];
    numi = std::max(numi, std::abs(d));
    deni = std::max(deni, std::abs(p_ref[i]));
  }
  if (den2 == 0.0) throw std::invalid_argument("error_norms: zero reference norm");
  return {std::sqrt(num2 / den2), numi / deni};
}

BoundsCensus bound_check(std::span<const double> p, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("bound_check: lo > hi");
  BoundsCensus c;
  for (size_t i = 0; i < p.size(); ++i) {
    if (p[i] < lo) {
      ++c.below;
      if (c.worst_low_cell < 0 || p[i] < c.worst_low) {
        c.worst_low = p[i];
        c.worst_low_cell = static_cast<int>(i);
      }
    } else if (p[i] > hi) {
      ++c.above;
      if (c.worst_high_cell < 0 || p[i] > c.worst_high) {
        c.worst_high = p[i];
        c.worst_high_cell = static_cast<int>(i);
      }
    }
  }
  return c;
}

}  // namespace msfv
