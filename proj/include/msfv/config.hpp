#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace msfv {

enum class GridType { Cartesian, Perturbed };
enum class PermType { Spe10, Rotated, Lognormal };
enum class SchemeType { Tpfa, MpfaO };
enum class RestrictionType { ControlVolume, Galerkin };
enum class RepairMode { Off, Coarse, Fine, Both };
enum class SolveMode { OneStep, Iterative };

/// Flat key-value case description; unknown keys are errors.
struct CaseConfig {
  GridType grid_type = GridType::Cartesian;
  std::vector<double> extent;  ///< 2 or 3 entries
  std::vector<int> cells;
  double perturb_amplitude = 0.3;
  std::uint64_t perturb_seed = 0;

  PermType perm_type = PermType::Lognormal;
  std::string spe10_path;
  int spe10_layer_lo = 85;
  int spe10_layer_hi = 85;
  bool spe10_use_ky = true;
  int spe10_nx = 60, spe10_ny = 220, spe10_nz = 85;
  double theta_deg = 0.0, k1 = 1.0, k2 = 1.0;
  std::uint64_t lognormal_seed = 0;
  double mu_log = 0.0, sigma_log = 0.0;

  SchemeType scheme = SchemeType::Tpfa;
  std::vector<int> ratio;

  RestrictionType restriction = RestrictionType::ControlVolume;

  RepairMode repair_mode = RepairMode::Off;
  double repair_epsilon = 0.01;
  double repair_weight = 1.0;
  bool repair_fine_override = false;

  double basis_omega = 2.0 / 3.0;
  double basis_tolerance = 1e-3;
  int basis_max_sweeps = 250;

  SolveMode solve_mode = SolveMode::OneStep;
  double solve_tolerance = 1e-8;
  int solve_max_cycles = 300;
  int solve_smoothing_steps = 1;
  bool solve_finalize_cv = false;

  /// Dirichlet values per side, indexed by Side; unset sides are no-flow.
  std::optional<double> bc[6];
  bool bc_given = false;

  bool reference_direct = true;
  std::string output_dir = "out";
  std::string name = "case";

  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment. Unknown keys raise
/// ConfigError naming the key.
CaseConfig parse_config(const std::string& text, const std::string& name = "case");
CaseConfig load_config(const std::string& path);

}  // namespace msfv
