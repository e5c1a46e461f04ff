// Command-line driver: `converge` runs the manufactured-solution study and
// writes the CSV/SVG report; `mesh-dump` prints the debug mesh format.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mpe/study.hpp"

namespace {

int run_converge(const mpe::StudyConfig& config) {
  try {
    const auto rows = mpe::run_convergence_study(config, &std::cout);
    mpe::emit_report(rows, config.out, config.format);
    std::cout << "wrote " << config.out << "\n";

    if (rows.size() >= 2) {
      const auto& c = rows[rows.size() - 2];
      const auto& f = rows.back();
      std::cout << "finest-pair rates: ERR_e=" << mpe::observed_rate(c.err_e, f.err_e)
                << " eta_ok=" << mpe::observed_rate(c.eta_ok, f.eta_ok) << "\n";
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stokes/multi-network-poroelasticity solver with residual "
               "a posteriori error estimators"};
  app.require_subcommand(1);

  mpe::StudyConfig config;
  std::string config_path;
  std::string jump_name = "traction";

  auto* converge = app.add_subcommand("converge", "manufactured-solution h-convergence study");
  auto* opt_levels = converge->add_option("--levels", config.levels, "number of refinement levels");
  auto* opt_n0 = converge->add_option("--n0", config.n0, "cells per square edge at the coarsest level");
  auto* opt_dt = converge->add_option("--dt", config.dt, "time step");
  auto* opt_tf = converge->add_option("--t-final", config.t_final, "final time");
  auto* opt_ae = converge->add_option("--alpha-e", config.alpha_e, "Biot coefficient of the exchanging network");
  auto* opt_out = converge->add_option("--out", config.out, "output path");
  auto* opt_fmt = converge->add_option("--format", config.format, "csv|svg");
  auto* opt_eta = converge->add_flag("--include-eta-data", "also compute the initial-data estimator terms");
  auto* opt_jump = converge->add_option("--jump", jump_name, "face-jump norm: traction|symmetric");
  converge->add_option("--config", config_path, "key = value config file (CLI wins on conflict)");

  auto* mesh_dump = app.add_subcommand("mesh-dump", "plain-text dump of the two-square mesh");
  int dump_n = 1, dump_refine = 0;
  std::string dump_out;
  mesh_dump->add_option("--n", dump_n, "cells per square edge");
  mesh_dump->add_option("--refine", dump_refine, "uniform refinements to apply");
  mesh_dump->add_option("--out", dump_out, "output path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  if (converge->parsed()) {
    mpe::StudyConfig cli_values = config;  // values as parsed (defaults + CLI)
    if (!config_path.empty()) {
      config = mpe::StudyConfig{};
      mpe::load_config_file(config, config_path);
      // explicit CLI options override the config file
      if (opt_levels->count()) config.levels = cli_values.levels;
      if (opt_n0->count()) config.n0 = cli_values.n0;
      if (opt_dt->count()) config.dt = cli_values.dt;
      if (opt_tf->count()) config.t_final = cli_values.t_final;
      if (opt_ae->count()) config.alpha_e = cli_values.alpha_e;
      if (opt_out->count()) config.out = cli_values.out;
      if (opt_fmt->count()) config.format = cli_values.format;
      if (opt_eta->count()) config.include_eta_data = true;
    } else {
      config.include_eta_data = opt_eta->count() > 0;
    }
    if (opt_jump->count() || config_path.empty()) {
      try {
        mpe::apply_config_line(config, "jump", jump_name);
      } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
      }
    }
    return run_converge(config);
  }

  if (mesh_dump->parsed()) {
    try {
      mpe::Mesh mesh = mpe::build_two_square_mesh(dump_n);
      for (int r = 0; r < dump_refine; ++r) mesh = mpe::uniform_refine(mesh);
      if (dump_out.empty()) {
        mpe::dump_mesh(mesh, std::cout);
      } else {
        std::ofstream out(dump_out);
        if (!out) {
          std::cerr << "error: cannot write " << dump_out << "\n";
          return 1;
        }
        mpe::dump_mesh(mesh, out);
      }
    } catch (const std::exception& err) {
      std::cerr << "error: " << err.what() << "\n";
      return 1;
    }
  }
  return 0;
}
