#ifndef MHD1D_CONFIG_HPP
#define MHD1D_CONFIG_HPP

#include <mhd1d/functionals.hpp>
#include <mhd1d/verify.hpp>

#include <string>
#include <vector>

namespace mhd1d {

/// Which harness inequalities a run asserts (reported in reports.jsonl and
/// reflected in the exit code).
struct CheckToggles {
  bool entropy = true;
  bool windows = true;
  bool measure = true;
  bool sobolev = true;
  bool reconstruct = false;  // requires at least one probe
};

/// Everything needed to reproduce a run.
struct RunConfig {
  DomainKind domain = DomainKind::FullLine;
  Scalar L = 0.0;
  Eigen::Index n_cells = 0;
  ProblemType problem = ProblemType::Cauchy;
  Params params;
  SchemeConfig scheme;
  Profile profile;
  std::string tabulated_path;
  std::string mms_case = "gaussian-decay";
  std::vector<Scalar> probes;
  CheckToggles checks;
  std::string out_dir = "out";
};

RunConfig parse_config(const std::string& path);

/// Entropy-estimate slack at baseline resolution.
inline constexpr Scalar kEntropySlack = 0.05;

/// Full run command: simulate, evaluate harness checks, write series.csv,
/// snapshots.csv, reports.jsonl into config.out_dir.
/// Returns 0 when the run completed and all asserted checks passed,
/// 1 on a solver failure.  Config errors throw ConfigError (exit 2 in cli).
int cmd_run(const RunConfig& config, bool quiet = false);

/// Convergence study; writes convergence.csv; 0 iff the finest-pair spatial
/// order is >= 1.8 for every field (or the case is exact at all levels).
int cmd_mms(const RunConfig& config, int levels, bool quiet = false);

}  // namespace mhd1d

#endif
