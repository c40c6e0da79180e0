// eqobs: run observer scenarios, gain sweeps and the algebraic verification
// suite from the command line.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "eqobs/output.hpp"
#include "eqobs/scenario.hpp"
#include "eqobs/serialization.hpp"
#include "eqobs/verify.hpp"

namespace fs = std::filesystem;

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::string& integrator) {
  eqobs::ScenarioConfig cfg = eqobs::load_config(config_path);
  if (!integrator.empty()) cfg.integrator = eqobs::parse_integrator(integrator);
  const auto records = eqobs::run_scenario(cfg);
  const auto hash = eqobs::config_hash(cfg);
  eqobs::emit_outputs(records, out_dir, hash);
  const auto s = eqobs::summarize(records);
  std::cout << "records " << s.records << ", L(0) " << s.initial_lyapunov << ", L(T) "
            << s.final_lyapunov << ", |I-A~| " << s.final_err_A_norm << ", |a~| "
            << s.final_err_a_norm << ", max residual " << s.max_constraint_residual << '\n';
  std::cout << "wrote " << out_dir << " (config " << hash << ")\n";
  return 0;
}

int verify_command(const std::string& group, int cases, std::uint64_t seed, bool corrupt) {
  eqobs::VerifyOptions options;
  options.group = group;
  options.cases = cases;
  options.seed = seed;
  options.corrupt_input_action = corrupt;
  const auto report = eqobs::verify_suite(options);
  std::cout << eqobs::format_report(report);
  return report.passed() ? 0 : 1;
}

int sweep_command(const std::string& config_path, const std::vector<double>& k1s,
                  const std::vector<double>& k2s, const std::string& out_dir, bool serial) {
  const eqobs::ScenarioConfig cfg = eqobs::load_config(config_path);
  const auto entries =
      serial ? eqobs::run_sweep_serial(cfg, k1s, k2s) : eqobs::run_sweep(cfg, k1s, k2s);
  fs::create_directories(out_dir);
  std::ofstream table(fs::path(out_dir) / "sweep.csv");
  if (!table) throw eqobs::Error("cannot write sweep.csv in '" + out_dir + "'");
  table << "k1,k2,config_hash,final_lyapunov,final_err_A_norm,final_err_a_norm,"
           "log_lyapunov_slope,error\n";
  int failures = 0;
  for (const auto& e : entries) {
    if (e.error.empty()) {
      eqobs::emit_outputs(e.records, fs::path(out_dir) / ("run_" + e.config_hash), e.config_hash);
    } else {
      ++failures;
    }
    table.precision(17);
    table << e.k1 << ',' << e.k2 << ',' << e.config_hash << ',' << e.summary.final_lyapunov << ','
          << e.summary.final_err_A_norm << ',' << e.summary.final_err_a_norm << ','
          << e.summary.log_lyapunov_slope << ",\"" << e.error << "\"\n";
    std::cout << "k1 " << e.k1 << " k2 " << e.k2 << " -> "
              << (e.error.empty() ? "L(T) " + std::to_string(e.summary.final_lyapunov)
                                  : "error: " + e.error)
              << '\n';
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant observer for second-order kinematics on matrix Lie groups"};
  app.require_subcommand(1);

  std::string config_path, out_dir, integrator;
  auto* run = app.add_subcommand("run", "Simulate one scenario and write its outputs");
  run->add_option("--config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--integrator", integrator, "Override the integrator")
      ->check(CLI::IsMember({"euler", "exp", "heun"}));

  std::string group = "se2";
  int cases = 1000;
  std::uint64_t seed = 0;
  bool corrupt = false;
  auto* verify = app.add_subcommand("verify", "Run the randomized algebraic verification suite");
  verify->add_option("--group", group, "se2, so3, se3 or a group descriptor JSON file");
  verify->add_option("--cases", cases, "Random cases")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Seed");
  verify->add_flag("--corrupt-input-action", corrupt,
                   "Use the input action without the +a shift (mutation check)");

  std::vector<double> k1s, k2s;
  bool serial = false;
  auto* sweep = app.add_subcommand("sweep", "Run a k1 x k2 gain grid");
  sweep->add_option("--config", config_path, "Scenario JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--k1", k1s, "k1 values")->required()->delimiter(',');
  sweep->add_option("--k2", k2s, "k2 values")->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory")->required();
  sweep->add_flag("--serial", serial, "Run the grid on one thread");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(config_path, out_dir, integrator);
    if (*verify) return verify_command(group, cases, seed, corrupt);
    if (*sweep) return sweep_command(config_path, k1s, k2s, out_dir, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
