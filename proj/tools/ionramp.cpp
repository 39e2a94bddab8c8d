// Command-line runner for the ramp experiments.
//
//   ionramp run <config>                  kind-specific tables
//   ionramp sweep <config>                one summary row per parameter point
//   ionramp snapshot <config> --time T    C_kl matrix at time T (config time unit)
//   ionramp plan <trap-config>            laboratory parameters and feasibility checks
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "ionramp/config.hpp"
#include "ionramp/experiment.hpp"

namespace {

struct CommonFlags {
  std::string out;
  double dt = -1;
  bool emit_plots = false;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--out", flags.out, "Output directory (overrides output.directory)");
  cmd->add_option("--dt", flags.dt, "Integrator time step in internal units (overrides integrator.dt)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--emit-plots", flags.emit_plots, "Render PNG plots from the CSV tables");
  cmd->add_option("--threads", flags.threads, "Worker threads for parameter points")->check(CLI::PositiveNumber);
}

ionramp::ExperimentConfig prepare(const std::string& path, const CommonFlags& flags) {
  auto cfg = ionramp::load_config(path);
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  if (flags.dt > 0) cfg.integrator.dt = flags.dt;
  if (flags.emit_plots) cfg.emit_plots = true;
  return cfg;
}

void report(const ionramp::ExperimentConfig& cfg, const ionramp::RunOutput& out) {
  for (const auto& f : out.files) std::cout << "wrote " << f.string() << '\n';
  std::cout << "max norm drift " << out.max_norm_drift << '\n';
  if (!cfg.emit_plots) return;
  std::string cmd = std::string("python3 '") + IONRAMP_PLOT_HELPER + "'";
  for (const auto& f : out.files) cmd += " '" + f.string() + "'";
  if (std::system(cmd.c_str()) != 0) std::cerr << "warning: plot helper failed; CSV tables are unaffected\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bose-Hubbard ramp dynamics of trapped-ion phonons"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path;
  double snapshot_time = 0;

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "JSON config, or a CSV produced by an earlier run")->required();
  add_common(run, flags);

  auto* sweep = app.add_subcommand("sweep", "Evaluate every parameter point and write one summary table");
  sweep->add_option("config", config_path, "JSON config, or a CSV produced by an earlier run")->required();
  add_common(sweep, flags);

  auto* snap = app.add_subcommand("snapshot", "Write the correlation matrix at one time");
  snap->add_option("config", config_path, "JSON config")->required();
  snap->add_option("--time", snapshot_time, "Time in the config's time unit")->required();
  add_common(snap, flags);

  std::string plan_out;
  auto* plan = app.add_subcommand("plan", "Map trap and laser parameters to model parameters");
  plan->add_option("config", config_path, "Trap config (JSON)")->required();
  plan->add_option("--out", plan_out, "Directory for plan.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) {
      std::ifstream in(config_path);
      if (!in) throw ionramp::ConfigError(config_path + ": cannot open trap config");
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ionramp::ConfigError(config_path + ": " + e.what());
      }
      const auto table = ionramp::plan_table(ionramp::parse_plan(doc));
      for (const auto& row : table.rows) {
        std::cout << ionramp::format_cell(row[0]) << " = " << ionramp::format_cell(row[1]) << ' '
                  << ionramp::format_cell(row[2]);
        const auto verdict = ionramp::format_cell(row[3]);
        if (!verdict.empty()) std::cout << "  [" << verdict << ']';
        std::cout << '\n';
      }
      if (!plan_out.empty()) {
        const auto path = std::filesystem::path(plan_out) / "plan.csv";
        ionramp::write_csv(table, path);
        std::cout << "wrote " << path.string() << '\n';
      }
      return 0;
    }

    const auto cfg = prepare(config_path, flags);
    ionramp::RunOutput out;
    if (*run) {
      out = ionramp::run(cfg, flags.threads);
    } else if (*sweep) {
      out = ionramp::sweep(cfg, flags.threads);
    } else {
      out = ionramp::snapshot(cfg, snapshot_time, flags.threads);
    }
    report(cfg, out);
    return 0;
  } catch (const ionramp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ionramp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
}
