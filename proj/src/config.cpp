#include "msfv/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "msfv/errors.hpp"

namespace msfv {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: invalid number for key '" + key + "': " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: invalid integer for key '" + key + "': " + v);
  }
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: invalid seed for key '" + key + "': " + v);
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: invalid boolean for key '" + key + "': " + v);
}

}  // namespace

void CaseConfig::validate() const {
  const size_t dim = extent.size();
  if ((dim != 2 && dim != 3) || cells.size() != dim || ratio.size() != dim) {
    throw ConfigError("config: grid extent/cells/ratio must all be 2-D or all 3-D");
  }
  for (double e : extent) {
    if (!(e > 0.0)) throw ConfigError("config: grid extents must be positive");
  }
  for (int c : cells) {
    if (c < 1) throw ConfigError("config: cell counts must be >= 1");
  }
  for (int r : ratio) {
    if (r < 1) throw ConfigError("config: coarsening ratios must be >= 1");
  }
  if (grid_type == GridType::Perturbed && dim != 2) {
    throw ConfigError("config: perturbed grids are 2-D only");
  }
  if (scheme == SchemeType::MpfaO && dim != 2) {
    throw ConfigError("config: scheme mpfa-o requires a 2-D grid");
  }
  if ((repair_mode == RepairMode::Fine || repair_mode == RepairMode::Both) &&
      scheme != SchemeType::MpfaO && !repair_fine_override) {
    throw ConfigError(
        "config: fine repair requires scheme mpfa-o (set repair.fine_override to force)");
  }
  if (perm_type == PermType::Spe10 && spe10_path.empty()) {
    throw ConfigError("config: perm.spe10_path is required for perm.type = spe10");
  }
  if (perm_type == PermType::Rotated && dim != 2) {
    throw ConfigError("config: rotated tensors are 2-D only");
  }
}

CaseConfig parse_config(const std::string& text, const std::string& name) {
  CaseConfig c;
  c.name = name;
  double ext[3] = {0, 0, 0};
  int cel[3] = {0, 0, 0}, rat[3] = {0, 0, 0};
  bool has_z = false;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) {
      throw ConfigError("config line " + std::to_string(lineno) + ": empty key or value");
    }

    if (key == "grid.type") {
      if (val == "cartesian") c.grid_type = GridType::Cartesian;
      else if (val == "perturbed") c.grid_type = GridType::Perturbed;
      else throw ConfigError("config: unknown grid.type '" + val + "'");
    } else if (key == "grid.extent_x") ext[0] = to_double(key, val);
    else if (key == "grid.extent_y") ext[1] = to_double(key, val);
    else if (key == "grid.extent_z") { ext[2] = to_double(key, val); has_z = true; }
    else if (key == "grid.cells_x") cel[0] = to_int(key, val);
    else if (key == "grid.cells_y") cel[1] = to_int(key, val);
    else if (key == "grid.cells_z") { cel[2] = to_int(key, val); has_z = true; }
    else if (key == "grid.perturb_amplitude") c.perturb_amplitude = to_double(key, val);
    else if (key == "grid.perturb_seed") c.perturb_seed = to_seed(key, val);
    else if (key == "perm.type") {
      if (val == "spe10") c.perm_type = PermType::Spe10;
      else if (val == "rotated") c.perm_type = PermType::Rotated;
      else if (val == "lognormal") c.perm_type = PermType::Lognormal;
      else throw ConfigError("config: unknown perm.type '" + val + "'");
    } else if (key == "perm.spe10_path") c.spe10_path = val;
    else if (key == "perm.spe10_layer_lo") c.spe10_layer_lo = to_int(key, val);
    else if (key == "perm.spe10_layer_hi") c.spe10_layer_hi = to_int(key, val);
    else if (key == "perm.spe10_use_ky") c.spe10_use_ky = to_bool(key, val);
    else if (key == "perm.spe10_nx") c.spe10_nx = to_int(key, val);
    else if (key == "perm.spe10_ny") c.spe10_ny = to_int(key, val);
    else if (key == "perm.spe10_nz") c.spe10_nz = to_int(key, val);
    else if (key == "perm.theta_deg") c.theta_deg = to_double(key, val);
    else if (key == "perm.k1") c.k1 = to_double(key, val);
    else if (key == "perm.k2") c.k2 = to_double(key, val);
    else if (key == "perm.lognormal_seed") c.lognormal_seed = to_seed(key, val);
    else if (key == "perm.mu_log") c.mu_log = to_double(key, val);
    else if (key == "perm.sigma_log") c.sigma_log = to_double(key, val);
    else if (key == "scheme") {
      if (val == "tpfa") c.scheme = SchemeType::Tpfa;
      else if (val == "mpfa-o") c.scheme = SchemeType::MpfaO;
      else throw ConfigError("config: unknown scheme '" + val + "'");
    } else if (key == "coarsen.ratio_x") rat[0] = to_int(key, val);
    else if (key == "coarsen.ratio_y") rat[1] = to_int(key, val);
    else if (key == "coarsen.ratio_z") rat[2] = to_int(key, val);
    else if (key == "restriction") {
      if (val == "cv") c.restriction = RestrictionType::ControlVolume;
      else if (val == "galerkin") c.restriction = RestrictionType::Galerkin;
      else throw ConfigError("config: unknown restriction '" + val + "'");
    } else if (key == "repair.mode") {
      if (val == "off") c.repair_mode = RepairMode::Off;
      else if (val == "coarse") c.repair_mode = RepairMode::Coarse;
      else if (val == "fine") c.repair_mode = RepairMode::Fine;
      else if (val == "both") c.repair_mode = RepairMode::Both;
      else throw ConfigError("config: unknown repair.mode '" + val + "'");
    } else if (key == "repair.epsilon") c.repair_epsilon = to_double(key, val);
    else if (key == "repair.weight") c.repair_weight = to_double(key, val);
    else if (key == "repair.fine_override") c.repair_fine_override = to_bool(key, val);
    else if (key == "basis.omega") c.basis_omega = to_double(key, val);
    else if (key == "basis.tolerance") c.basis_tolerance = to_double(key, val);
    else if (key == "basis.max_sweeps") c.basis_max_sweeps = to_int(key, val);
    else if (key == "solve.mode") {
      if (val == "one-step") c.solve_mode = SolveMode::OneStep;
      else if (val == "iterative") c.solve_mode = SolveMode::Iterative;
      else throw ConfigError("config: unknown solve.mode '" + val + "'");
    } else if (key == "solve.tolerance") c.solve_tolerance = to_double(key, val);
    else if (key == "solve.max_cycles") c.solve_max_cycles = to_int(key, val);
    else if (key == "solve.smoothing_steps") c.solve_smoothing_steps = to_int(key, val);
    else if (key == "solve.finalize_cv") c.solve_finalize_cv = to_bool(key, val);
    else if (key == "bc.left") { c.bc[0] = to_double(key, val); c.bc_given = true; }
    else if (key == "bc.right") { c.bc[1] = to_double(key, val); c.bc_given = true; }
    else if (key == "bc.bottom") { c.bc[2] = to_double(key, val); c.bc_given = true; }
    else if (key == "bc.top") { c.bc[3] = to_double(key, val); c.bc_given = true; }
    else if (key == "bc.front") { c.bc[4] = to_double(key, val); c.bc_given = true; }
    else if (key == "bc.back") { c.bc[5] = to_double(key, val); c.bc_given = true; }
    else if (key == "reference") {
      if (val == "direct") c.reference_direct = true;
      else if (val == "none") c.reference_direct = false;
      else throw ConfigError("config: unknown reference '" + val + "'");
    } else if (key == "output.dir") c.output_dir = val;
    else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  const int dim = has_z ? 3 : 2;
  c.extent.assign(ext, ext + dim);
  c.cells.assign(cel, cel + dim);
  c.ratio.assign(rat, rat + dim);
  // Default drive when no boundary condition is given: unit pressure drop
  // from the left side to the right side, no-flow elsewhere.
  if (!c.bc_given) {
    c.bc[0] = 1.0;
    c.bc[1] = 0.0;
  }
  c.validate();
  return c;
}

CaseConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::filesystem::path(path).stem().string());
}

}  // namespace msfv
