#pragma once

#include <optional>
#include <string>

#include "msfv/assembly.hpp"
#include "msfv/config.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"
#include "msfv/monotone.hpp"
#include "msfv/msrsb.hpp"
#include "msfv/solver.hpp"

namespace msfv {

/// Everything assembled for a case up to (but not including) the solve; kept
/// around so diagnostics and the CLI inspection commands can reuse the parts.
struct CaseSetup {
  Grid grid;
  TensorField field;
  SparseSystem system;
  CoarsePartition partition;
  SupportRegions supports;
  Prolongation basis;
  Restriction restriction;
  CsrMatrix coarse_raw;       ///< R A_f P from the intact fine matrix
  CsrMatrix coarse_op;        ///< repaired when the config asks for it
  bool fine_repaired = false;
  bool coarse_repaired = false;
  double drift = 0.0;         ///< null-space drift of the repaired coarse operator
};

CaseSetup build_case(const CaseConfig& config);

struct RunOptions {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;  ///< overrides config seeds
  bool quiet = false;
  bool write_outputs = true;
};

struct RunResult {
  SolveReport report;
  std::vector<double> pressure;
  std::vector<std::string> manifest;
  std::string output_dir;
};

/// Executes grid -> field -> assembly -> (fine repair) -> basis ->
/// restriction -> coarse system -> (coarse repair) -> solve, and writes field
/// exports, the residual history (iterative mode) and the report JSON.
RunResult run_case(const CaseConfig& config, const RunOptions& options = {});

/// The report serialized exactly as written to report.json.
std::string report_to_json(const RunResult& result, const CaseConfig& config);

}  // namespace msfv
