#include <mhd1d/config.hpp>
#include <mhd1d/functionals.hpp>
#include <mhd1d/io.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>

using namespace mhd1d;

int main(int argc, char** argv) {
  CLI::App app{"1D planar compressible MHD solver with an a priori estimate harness"};
  app.require_subcommand(1);

  std::string config_path, out_override;
  bool quiet = false;

  auto* run_cmd = app.add_subcommand("run", "simulate a config and write diagnostics");
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--out", out_override, "override output directory");
  run_cmd->add_flag("--quiet", quiet, "suppress progress output");

  int levels = 3;
  auto* mms_cmd = app.add_subcommand("mms", "manufactured-solution convergence study");
  mms_cmd->add_option("config", config_path, "config file")->required();
  mms_cmd->add_option("--levels", levels, "number of nested refinement levels");
  mms_cmd->add_option("--out", out_override, "override output directory");
  mms_cmd->add_flag("--quiet", quiet, "suppress progress output");

  double e0_arg = 0.0;
  auto* roots_cmd = app.add_subcommand("roots", "entropy roots and measure bound for e0");
  roots_cmd->add_option("e0", e0_arg, "initial energy scale")->required();

  double probe_coord = 0.0, at_time = 0.0;
  auto* rec_cmd = app.add_subcommand("reconstruct", "evaluate the v representation formula");
  rec_cmd->add_option("config", config_path, "config file")->required();
  rec_cmd->add_option("--probe", probe_coord, "probe coordinate N")->required();
  rec_cmd->add_option("--at", at_time, "evaluation time")->required();
  rec_cmd->add_option("--out", out_override, "override output directory");
  rec_cmd->add_flag("--quiet", quiet, "suppress progress output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (roots_cmd->parsed()) {
      if (e0_arg < 0.0) {
        std::cerr << "error: e0 must be nonnegative\n";
        return 2;
      }
      const EntropyRoots r = entropy_roots(e0_arg);
      const double bound = 2.0 * e0_arg / (2.0 * std::log(2.0) - 1.0);
      std::printf("%.12f %.12f %.12g\n", r.alpha1, r.alpha2, bound);
      return 0;
    }

    RunConfig cfg = parse_config(config_path);
    if (!out_override.empty()) cfg.out_dir = out_override;

    if (run_cmd->parsed()) return cmd_run(cfg, quiet);
    if (mms_cmd->parsed()) return cmd_mms(cfg, levels, quiet);

    // reconstruct
    cfg.probes.insert(cfg.probes.begin(), probe_coord);
    const Grid grid = make_grid(cfg.domain, cfg.L, cfg.n_cells);
    const State initial = make_state(grid, cfg.profile, cfg.problem);
    Trajectory traj;
    try {
      traj = run(initial, grid, cfg.problem, cfg.params, cfg.scheme, cfg.probes);
    } catch (const Error& e) {
      std::cerr << "solver error: " << e.what() << "\n";
      return 1;
    }
    const ArrayX v_rec = reconstruct_v(traj, grid, cfg.params, 0, at_time);
    std::size_t r = 0;
    for (std::size_t s = 1; s < traj.record_times.size(); ++s)
      if (std::abs(traj.record_times[s] - at_time) <
          std::abs(traj.record_times[r] - at_time))
        r = s;
    const ArrayX& v_num = traj.states[r].v;
    const double rel = (v_rec - v_num).abs().maxCoeff() / v_num.abs().maxCoeff();
    if (!quiet)
      std::cout << "t=" << format_number(traj.record_times[r])
                << " max_rel_error=" << format_number(rel) << "\n";
    return rel <= 0.05 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
