#include "msfv/case_runner.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "msfv/errors.hpp"
#include "msfv/io.hpp"
#include "msfv/linalg.hpp"

namespace msfv {

namespace {

Grid make_grid(const CaseConfig& c, std::uint64_t seed_override, bool has_seed_override) {
  Grid g = build_cartesian_grid(c.extent, c.cells);
  if (c.grid_type == GridType::Perturbed) {
    const std::uint64_t seed = has_seed_override ? seed_override : c.perturb_seed;
    g = perturb_interior_nodes(g, c.perturb_amplitude, seed);
  }
  return g;
}

TensorField make_field(const CaseConfig& c, const Grid& g, std::uint64_t seed_override,
                       bool has_seed_override) {
  switch (c.perm_type) {
    case PermType::Spe10: {
      Spe10Dims dims{c.spe10_nx, c.spe10_ny, c.spe10_nz};
      return read_spe10(c.spe10_path, c.spe10_layer_lo, c.spe10_layer_hi, c.spe10_use_ky, dims);
    }
    case PermType::Rotated:
      return rotated_tensor(c.theta_deg, c.k1, c.k2, g.num_cells());
    case PermType::Lognormal: {
      const std::uint64_t seed = has_seed_override ? seed_override : c.lognormal_seed;
      return lognormal_field(g, seed, c.mu_log, c.sigma_log);
    }
  }
  throw ConfigError("unknown permeability type");
}

BoundarySpec make_bc(const CaseConfig& c) {
  BoundarySpec bc;
  for (int s = 0; s < 6; ++s) {
    if (c.bc[s]) bc.dirichlet(static_cast<Side>(s), *c.bc[s]);
  }
  return bc;
}

std::string restriction_name(RestrictionType r) {
  return r == RestrictionType::ControlVolume ? "cv" : "galerkin";
}

std::string repair_name(RepairMode m) {
  switch (m) {
    case RepairMode::Off: return "off";
    case RepairMode::Coarse: return "coarse";
    case RepairMode::Fine: return "fine";
    case RepairMode::Both: return "both";
  }
  return "off";
}

}  // namespace

namespace {

CaseSetup build_case_with_seed(const CaseConfig& config, std::uint64_t seed, bool has_seed) {
  config.validate();
  CaseSetup s;
  s.grid = make_grid(config, seed, has_seed);
  s.field = make_field(config, s.grid, seed, has_seed);
  if (s.field.num_cells() != s.grid.num_cells()) {
    throw ConfigError("config: permeability field size does not match the grid");
  }

  const BoundarySpec bc = make_bc(config);
  s.system = config.scheme == SchemeType::Tpfa ? assemble_tpfa(s.grid, s.field, bc)
                                               : assemble_mpfa_o(s.grid, s.field, bc);

  s.partition = partition_uniform(s.grid, config.ratio);
  s.supports = build_support_regions(s.grid, s.partition);

  // Basis functions come from the (optionally M-matrix-enforced) fine matrix;
  // the coarse system below is always built from the intact one.
  s.fine_repaired =
      config.repair_mode == RepairMode::Fine || config.repair_mode == RepairMode::Both;
  const CsrMatrix basis_matrix =
      s.fine_repaired ? m_matrix_fine(s.system.matrix) : s.system.matrix;
  const CsrMatrix a_conn = connectivity_matrix(basis_matrix);

  SmoothingOptions smopt;
  smopt.omega = config.basis_omega;
  smopt.tolerance = config.basis_tolerance;
  smopt.max_iterations = config.basis_max_sweeps;
  s.basis = smooth_prolongation(a_conn, init_prolongation(s.partition), s.supports, s.partition,
                                smopt);

  s.restriction = config.restriction == RestrictionType::ControlVolume
                      ? restriction_cv(s.partition)
                      : restriction_galerkin(s.basis);

  s.coarse_raw = triple_product(s.restriction.matrix, s.system.matrix, s.basis.matrix);
  s.coarse_repaired =
      config.repair_mode == RepairMode::Coarse || config.repair_mode == RepairMode::Both;
  if (s.coarse_repaired) {
    s.coarse_op = am_operator(s.coarse_raw, config.repair_epsilon, config.repair_weight);
    s.drift = nullspace_drift(s.coarse_raw, s.coarse_op);
  } else {
    s.coarse_op = s.coarse_raw;
  }
  return s;
}

}  // namespace

CaseSetup build_case(const CaseConfig& config) {
  return build_case_with_seed(config, 0, false);
}

RunResult run_case(const CaseConfig& config, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();

  CaseSetup setup = build_case_with_seed(config, options.seed.value_or(0),
                                         options.seed.has_value());

  RunResult result;
  SolveReport& report = result.report;

  if (config.solve_mode == SolveMode::OneStep) {
    result.pressure = one_step_multiscale(setup.system.matrix, setup.system.rhs,
                                          setup.basis.matrix, setup.restriction.matrix,
                                          setup.coarse_op);
    report.iterations = 0;
    report.converged = true;
  } else {
    IterativeOptions it;
    it.smoothing_steps = config.solve_smoothing_steps;
    it.tolerance = config.solve_tolerance;
    it.max_cycles = config.solve_max_cycles;
    it.finalize_cv = config.solve_finalize_cv;

    std::optional<Restriction> cv;
    std::optional<CsrMatrix> cv_op;
    CvFinalizer finalizer;
    if (it.finalize_cv && config.restriction == RestrictionType::Galerkin) {
      cv = restriction_cv(setup.partition);
      CsrMatrix raw = triple_product(cv->matrix, setup.system.matrix, setup.basis.matrix);
      cv_op = setup.coarse_repaired
                  ? am_operator(raw, config.repair_epsilon, config.repair_weight)
                  : raw;
      finalizer.restriction = &cv->matrix;
      finalizer.coarse_op = &*cv_op;
    }

    try {
      auto [p, rep] = iterative_multiscale(setup.system.matrix, setup.system.rhs,
                                           setup.basis.matrix, setup.restriction.matrix,
                                           setup.coarse_op, it, finalizer);
      result.pressure = std::move(p);
      report = std::move(rep);
    } catch (const DivergenceError& e) {
      // Divergence is an outcome, not a failure of the run.
      report = e.report;
      report.converged = false;
      report.breakdown = true;
      result.pressure.assign(setup.grid.num_cells(), 0.0);
      if (!options.quiet) std::cerr << config.name << ": " << e.what() << "\n";
    }
  }

  report.scheme = config.scheme == SchemeType::Tpfa ? "tpfa" : "mpfa-o";
  report.restriction_kind = restriction_name(config.restriction);
  report.repair_mode = repair_name(config.repair_mode);
  report.epsilon = config.repair_epsilon;
  report.weight = config.repair_weight;
  report.coarsening_ratio = config.ratio;
  report.nullspace_drift = setup.drift;
  report.solve_mode = config.solve_mode == SolveMode::OneStep ? "one-step" : "iterative";
  report.smoothing_steps =
      config.solve_mode == SolveMode::Iterative ? config.solve_smoothing_steps : 0;

  // Maximum-principle census against the Dirichlet data range; the bundled
  // cases are all source-free and boundary-driven.
  std::vector<double> dvals;
  for (const DirichletFace& d : setup.system.dirichlet_faces) dvals.push_back(d.pressure);
  if (!dvals.empty() && !report.breakdown) {
    const auto [lo, hi] = std::minmax_element(dvals.begin(), dvals.end());
    report.bounds = bound_check(result.pressure, *lo, *hi);
  }

  if (config.reference_direct && !report.breakdown) {
    const auto p_ref = direct_solve(setup.system.matrix, setup.system.rhs);
    report.error_norms = error_norms(p_ref, result.pressure);
  }

  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  result.output_dir = options.output_dir.value_or(config.output_dir);
  if (options.write_outputs) {
    namespace fs = std::filesystem;
    fs::create_directories(result.output_dir);
    const fs::path dir(result.output_dir);

    std::vector<double> kxx(setup.grid.num_cells());
    for (int c = 0; c < setup.grid.num_cells(); ++c) {
      kxx[c] = setup.field.dim() == 2 ? setup.field.tensor2(c).xx : setup.field.diag3(c)[0];
    }
    write_vtk_cell_scalars(setup.grid, (dir / "fields.vtk").string(),
                           {{"pressure", result.pressure}, {"perm_xx", kxx}});
    result.manifest.push_back("fields.vtk");
    write_cell_csv(setup.grid, result.pressure, (dir / "pressure.csv").string());
    result.manifest.push_back("pressure.csv");
    if (config.solve_mode == SolveMode::Iterative) {
      write_residual_csv(report.residual_history, (dir / "residual.csv").string());
      result.manifest.push_back("residual.csv");
    }
    result.manifest.push_back("report.json");
    std::ofstream out(dir / "report.json");
    out << report_to_json(result, config) << "\n";
  }

  if (!options.quiet) {
    std::cout << config.name << ": " << report.solve_mode;
    if (config.solve_mode == SolveMode::Iterative) {
      std::cout << (report.converged ? " converged in " : " stopped after ")
                << report.iterations << " cycles";
      if (!report.residual_history.empty()) {
        std::cout << ", residual " << report.residual_history.back();
      }
    }
    if (report.error_norms) {
      std::cout << ", l2 " << report.error_norms->l2 << ", linf " << report.error_norms->linf;
    }
    if (report.bounds) {
      std::cout << ", out-of-bound cells " << report.bounds->total();
    }
    std::cout << "\n";
  }
  return result;
}

std::string report_to_json(const RunResult& result, const CaseConfig& config) {
  using nlohmann::json;
  const SolveReport& r = result.report;
  json j;
  j["case"] = config.name;
  j["solve_mode"] = r.solve_mode;
  j["scheme"] = r.scheme;
  j["restriction"] = r.restriction_kind;
  j["repair"] = {{"mode", r.repair_mode}, {"epsilon", r.epsilon}, {"weight", r.weight}};
  j["coarsening_ratio"] = r.coarsening_ratio;
  j["smoothing_steps"] = r.smoothing_steps;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["breakdown"] = r.breakdown;
  j["residual_history"] = r.residual_history;
  j["nullspace_drift"] = r.nullspace_drift;
  j["wall_time_seconds"] = r.wall_time_seconds;
  if (r.error_norms) {
    j["error_norms"] = {{"l2", r.error_norms->l2}, {"linf", r.error_norms->linf}};
  }
  if (r.bounds) {
    json b;
    b["below"] = r.bounds->below;
    b["above"] = r.bounds->above;
    if (r.bounds->below > 0) {
      b["worst_low"] = r.bounds->worst_low;
      b["worst_low_cell"] = r.bounds->worst_low_cell;
    }
    if (r.bounds->above > 0) {
      b["worst_high"] = r.bounds->worst_high;
      b["worst_high_cell"] = r.bounds->worst_high_cell;
    }
    j["bounds"] = b;
  }
  j["manifest"] = result.manifest;
  return j.dump(2);
}

}  // namespace msfv
