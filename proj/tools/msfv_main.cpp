#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <thread>
#include <vector>

#include "msfv/case_runner.hpp"
#include "msfv/config.hpp"
#include "msfv/errors.hpp"
#include "msfv/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string output;
  std::uint64_t seed = 0;
  bool has_seed = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--output", flags.output, "Output directory (overrides output.dir)");
  cmd->add_option("--seed", flags.seed, "Overrides config seeds")
      ->each([&flags](const std::string&) { flags.has_seed = true; });
  cmd->add_flag("--quiet", flags.quiet, "Suppress progress output");
}

msfv::RunOptions to_options(const CommonFlags& flags) {
  msfv::RunOptions opt;
  if (!flags.output.empty()) opt.output_dir = flags.output;
  if (flags.has_seed) opt.seed = flags.seed;
  opt.quiet = flags.quiet;
  return opt;
}

int run_one(const std::string& config_path, const msfv::RunOptions& options) {
  const msfv::CaseConfig config = msfv::load_config(config_path);
  msfv::run_case(config, options);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale finite-volume pressure solver with monotone operator repair"};
  app.require_subcommand(1);

  std::string config_path, batch_dir;
  int jobs = 1;
  CommonFlags run_flags, batch_flags, report_flags, basis_flags;

  CLI::App* run = app.add_subcommand("run", "Run a single case from a config file");
  run->add_option("config", config_path, "Case config file")->required();
  add_common(run, run_flags);

  CLI::App* batch = app.add_subcommand("batch", "Run every *.cfg case in a directory");
  batch->add_option("dir", batch_dir, "Directory of case configs")->required();
  batch->add_option("--jobs", jobs, "Concurrent cases")->check(CLI::PositiveNumber);
  add_common(batch, batch_flags);

  std::string report_config;
  CLI::App* repair = app.add_subcommand(
      "repair-report", "Print coarse-operator repair diagnostics without solving");
  repair->add_option("config", report_config, "Case config file")->required();
  add_common(repair, report_flags);

  std::string basis_config;
  CLI::App* basis = app.add_subcommand("export-basis", "Dump smoothed basis columns");
  basis->add_option("config", basis_config, "Case config file")->required();
  add_common(basis, basis_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_one(config_path, to_options(run_flags));
    }

    if (batch->parsed()) {
      std::vector<fs::path> configs;
      for (const auto& entry : fs::directory_iterator(batch_dir)) {
        if (entry.path().extension() == ".cfg") configs.push_back(entry.path());
      }
      std::sort(configs.begin(), configs.end());
      if (configs.empty()) {
        std::cerr << "batch: no .cfg files in " << batch_dir << "\n";
        return 1;
      }
      std::atomic<size_t> next{0};
      std::atomic<int> failures{0};
      auto worker = [&] {
        for (size_t i = next++; i < configs.size(); i = next++) {
          try {
            msfv::RunOptions opt = to_options(batch_flags);
            // Per-case output directory keeps concurrent cases independent.
            const std::string base = batch_flags.output.empty() ? std::string("out")
                                                                : batch_flags.output;
            opt.output_dir = (fs::path(base) / configs[i].stem()).string();
            msfv::run_case(msfv::load_config(configs[i].string()), opt);
          } catch (const std::exception& e) {
            std::cerr << configs[i].filename().string() << ": " << e.what() << "\n";
            ++failures;
          }
        }
      };
      const int nthreads = std::min<int>(jobs, static_cast<int>(configs.size()));
      std::vector<std::thread> pool;
      for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      return failures == 0 ? 0 : 1;
    }

    if (repair->parsed()) {
      const msfv::CaseConfig config = msfv::load_config(report_config);
      const msfv::CaseSetup setup = msfv::build_case(config);
      const msfv::RepairReport rr =
          msfv::repair_report(setup.coarse_raw, config.repair_epsilon, config.repair_weight);
      nlohmann::json j;
      j["case"] = config.name;
      j["coarse_size"] = setup.coarse_raw.rows();
      j["positive_offdiagonals"] = rr.positive_offdiagonals;
      j["flagged"] = rr.flagged;
      j["max_zeta"] = rr.max_zeta;
      j["epsilon"] = rr.epsilon;
      j["weight"] = rr.weight;
      j["nullspace_drift"] = rr.drift;
      std::cout << j.dump(2) << "\n";
      return 0;
    }

    if (basis->parsed()) {
      const msfv::CaseConfig config = msfv::load_config(basis_config);
      const msfv::CaseSetup setup = msfv::build_case(config);
      const std::string dir = basis_flags.output.empty() ? config.output_dir
                                                         : basis_flags.output;
      fs::create_directories(dir);
      const std::string path = (fs::path(dir) / "basis.txt").string();
      msfv::write_basis_txt(setup.basis.matrix, path);
      if (!basis_flags.quiet) {
        std::cout << config.name << ": " << setup.basis.matrix.cols() << " basis columns ("
                  << setup.basis.iterations << " sweeps) -> " << path << "\n";
      }
      return 0;
    }
  } catch (const msfv::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
