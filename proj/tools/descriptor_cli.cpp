// descriptor-cli: analyze|solve|discretize|fracsim|compare FILE [flags]
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "descriptor/commands.hpp"

int main(int argc, char** argv) {
  using namespace descriptor;

  CLI::App app{"Singular descriptor systems: pencil analysis, solutions, discretization, fractional comparison"};
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string command, path, csv_path;
  CommandOptions opts;
  double T = 0.0, order_n = 0.0, rank_tol = 0.0;
  long steps = 0;

  app.add_option("command", command, "analyze, solve, discretize, fracsim or compare")
      ->required()
      ->check(CLI::IsMember({"analyze", "solve", "discretize", "fracsim", "compare"}));
  app.add_option("file", path, "system definition (JSON)")->required();
  auto* t_opt = app.add_option("--T", T, "sampling period / grid step");
  auto* n_opt = app.add_option("--order-n", order_n, "fractional order n");
  auto* steps_opt = app.add_option("--steps", steps, "number of steps")->check(CLI::NonNegativeNumber);
  auto* tol_opt = app.add_option("--rank-tol", rank_tol, "relative rank tolerance")->check(CLI::PositiveNumber);
  app.add_flag("--project", opts.project, "project an inconsistent Y0 onto the consistent set");
  app.add_flag("--crosscheck", opts.crosscheck, "also solve through the fundamental matrix and compare");
  app.add_flag("--exact", opts.exact, "exact rational arithmetic for the pencil analysis");
  app.add_option("--csv", csv_path, "write the state table as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (*t_opt) opts.T = T;
  if (*n_opt) opts.order_n = order_n;
  if (*steps_opt) opts.steps = steps;
  if (*tol_opt) opts.rank_tol = rank_tol;

  try {
    const auto spec = load_spec_file(path);
    const auto outcome = run_command(command, spec, opts);
    for (const auto& w : outcome.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << render_bundle(outcome.bundle);
    if (!csv_path.empty()) {
      if (command == "analyze") {
        std::cerr << "warning: analyze produces no state table; --csv ignored\n";
      } else if (outcome.exit_code == 0) {
        std::ofstream csv(csv_path, std::ios::binary);
        if (!csv) {
          std::cerr << "error: cannot write '" << csv_path << "'\n";
          return 1;
        }
        csv << render_csv(outcome.csv);
      }
    }
    if (outcome.exit_code != 0) {
      std::cerr << "error: " << outcome.bundle["error"]["message"].get<std::string>() << "\n";
    }
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
