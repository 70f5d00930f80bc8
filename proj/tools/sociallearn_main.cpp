// Command-line driver: run scenario files, sweep one parameter over a grid,
// validate configs, and reproduce the published reference figures.
//
// Exit codes: 0 success, 1 reference-value check failure, 2 validation
// failure, 3 non-convergence.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sociallearn/experiments.hpp"
#include "sociallearn/scenario.hpp"

namespace {

std::vector<double> parse_grid_spec(const std::string& grid, const std::string& values) {
  std::vector<double> out;
  if (!grid.empty()) {
    // start:step:end, inclusive of the endpoint within half a step.
    double start = 0.0, step = 0.0, end = 0.0;
    if (std::sscanf(grid.c_str(), "%lf:%lf:%lf", &start, &step, &end) != 3 || step <= 0.0) {
      throw sociallearn::ScenarioError("--grid", 0, "expected start:step:end with step > 0");
    }
    const long count = static_cast<long>(std::floor((end - start) / step + 0.5));
    for (long k = 0; k <= count; ++k) out.push_back(start + static_cast<double>(k) * step);
  }
  if (!values.empty()) {
    std::string token;
    std::istringstream in(values);
    while (std::getline(in, token, ',')) {
      if (token.empty()) continue;
      out.push_back(std::stod(token));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social learning of a drifting state on directed graphs"};
  app.require_subcommand(1);

  std::string out_dir = ".";
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  double tol_override = 0.0;
  bool tol_set = false;
  long max_iters = 200000;
  bool quiet = false;

  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--seed", seed_override, "Override the scenario seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--tol", tol_override, "Override the scenario tolerance")
      ->each([&](const std::string&) { tol_set = true; });
  app.add_option("--max-iters", max_iters, "Iteration cap for steady-state solvers")
      ->capture_default_str();
  app.add_flag("--quiet", quiet, "Suppress progress output");

  std::string scenario_path;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
  run_cmd->add_option("scenario", scenario_path, "Scenario config file")->required();

  std::string sweep_path, sweep_param, sweep_grid, sweep_values;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter over a grid");
  sweep_cmd->add_option("scenario", sweep_path, "Scenario config file")->required();
  sweep_cmd->add_option("--param", sweep_param, "Parameter path (for example rule.alpha)")
      ->required();
  sweep_cmd->add_option("--grid", sweep_grid, "start:step:end");
  sweep_cmd->add_option("--values", sweep_values, "Comma-separated values");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a scenario file");
  validate_cmd->add_option("scenario", validate_path, "Scenario config file")->required();

  auto* repro_cmd =
      app.add_subcommand("reproduce-paper", "Recompute and check the published figures");

  CLI11_PARSE(app, argc, argv);

  sociallearn::RunOptions options;
  options.out_dir = out_dir;
  options.max_iters = max_iters;
  options.quiet = quiet;
  if (seed_set) options.seed_override = seed_override;
  if (tol_set) options.tol_override = tol_override;

  if (run_cmd->parsed()) {
    const sociallearn::RunResult result = sociallearn::run_scenario_file(scenario_path, options);
    if (!result.message.empty()) std::cerr << "error: " << result.message << "\n";
    if (!quiet) {
      for (const auto& file : result.files) std::cout << "wrote " << file << "\n";
    }
    return result.exit_code;
  }

  if (sweep_cmd->parsed()) {
    std::vector<double> grid;
    try {
      grid = parse_grid_spec(sweep_grid, sweep_values);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sociallearn::kExitValidation;
    }
    if (grid.empty()) {
      std::cerr << "error: sweep needs --grid or --values\n";
      return sociallearn::kExitValidation;
    }
    sociallearn::Scenario scenario;
    try {
      scenario = sociallearn::load_scenario(sweep_path);
    } catch (const sociallearn::ScenarioError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sociallearn::kExitValidation;
    }
    const sociallearn::SweepResult result =
        sociallearn::run_sweep(scenario, sweep_param, grid, options);
    if (!result.message.empty()) std::cerr << "error: " << result.message << "\n";
    if (!quiet && !result.csv_path.empty()) std::cout << "wrote " << result.csv_path << "\n";
    return result.exit_code;
  }

  if (validate_cmd->parsed()) {
    try {
      sociallearn::load_scenario(validate_path);
    } catch (const sociallearn::ScenarioError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return sociallearn::kExitValidation;
    }
    if (!quiet) std::cout << "ok\n";
    return sociallearn::kExitOk;
  }

  if (repro_cmd->parsed()) {
    const auto items = sociallearn::reproduce_published_values();
    bool all_pass = true;
    for (const auto& item : items) {
      all_pass = all_pass && item.pass;
      std::printf("[%s] %-38s achieved=%.12g expected=%.12g tol=%.1e\n",
                  item.pass ? "PASS" : "FAIL", item.id.c_str(), item.achieved, item.expected,
                  item.tolerance);
      if (!item.detail.empty() && !quiet) std::printf("       %s\n", item.detail.c_str());
    }
    std::printf("%s: %zu checks\n", all_pass ? "PASS" : "FAIL", items.size());
    return all_pass ? 0 : 1;
  }

  return 0;
}
