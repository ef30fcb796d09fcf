// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <mhd1d/config.hpp>
#include <mhd1d/constitutive.hpp>
#include <mhd1d/functionals.hpp>
#include <mhd1d/verify.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mhd1d;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int n, const char* what, bool ok, const std::string& detail = "") {
  std::printf("criterion %2d %-34s %s%s%s\n", n, what, ok ? "PASS" : "FAIL",
              detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

Profile baseline_profile() {
  Profile p;
  p.kind = Profile::Kind::Gaussian;
  p.amp_v = 0.3;
  p.amp_u = 0.2;
  p.amp_theta = 0.5;
  p.amp_b = Vec2(0.3, 0.0);
  p.amp_w = Vec2(0.2, 0.0);
  return p;
}

struct BaselineRun {
  Grid grid;
  Trajectory traj;
  Scalar e0_value = 0.0;
  Scalar entropy_overshoot = 0.0;  // max(0, max_t (G + int W)/e0 - 1)
  bool entropy_ok = true;
  bool windows_ok = true;
  bool measure_ok = true;
  bool sobolev_ok = true;
  Scalar reconstruct_rel = 0.0;
};

BaselineRun make_baseline(int refine) {
  const Params params;
  BaselineRun r{make_grid(DomainKind::FullLine, 20.0, 800 << refine), {}};
  const State initial = make_state(r.grid, baseline_profile(), ProblemType::Cauchy);
  SchemeConfig scheme;
  scheme.t_end = 2.0;
  scheme.dt_max = 5e-4 / (1 << refine);
  scheme.cfl = 0.9;
  scheme.record_stride = 20 * (1 << refine);
  r.traj = run(initial, r.grid, ProblemType::Cauchy, params, scheme, {0.0});
  r.e0_value = e0(initial, r.grid, ProblemType::Cauchy, params);

  Scalar cum_w = 0.0, prev_w = 0.0, prev_t = 0.0, worst = 0.0;
  for (std::size_t k = 0; k < r.traj.states.size(); ++k) {
    const State& s = r.traj.states[k];
    const LyapunovReport rep = lyapunov_report(s, r.grid, ProblemType::Cauchy, params);
    if (k > 0) cum_w += 0.5 * (rep.W + prev_w) * (rep.t - prev_t);
    prev_w = rep.W;
    prev_t = rep.t;
    worst = std::max(worst, (rep.G_entropy + cum_w) / r.e0_value);
    if (rep.G_entropy + cum_w > (1.0 + kEntropySlack) * r.e0_value)
      r.entropy_ok = false;
    if (!window_average_check(s, r.grid, r.e0_value).all_pass) r.windows_ok = false;
    if (!measure_bound_check(rep, r.e0_value).pass) r.measure_ok = false;

    const ArrayX fields[] = {(s.v - 1.0).eval(),      (s.theta - 1.0).eval(),
                             s.u,                     s.b.col(0).eval(),
                             s.b.col(1).eval(),       s.w.col(0).eval(),
                             s.w.col(1).eval()};
    for (const ArrayX& f : fields)
      if (!sobolev_check(f, r.grid.dx).pass) r.sobolev_ok = false;
  }
  r.entropy_overshoot = std::max(0.0, worst - 1.0);

  const ArrayX v_rec = reconstruct_v(r.traj, r.grid, params, 0, 2.0);
  const ArrayX& v_num = r.traj.states.back().v;
  r.reconstruct_rel = (v_rec - v_num).abs().maxCoeff() / v_num.abs().maxCoeff();
  return r;
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const Params params;

  // 1. far-field equilibrium is an exact fixed point in every regime
  {
    const auto start = std::chrono::steady_clock::now();
    Scalar drift = 0.0;
    SchemeConfig scheme;
    for (const ProblemType pt : {ProblemType::Cauchy, ProblemType::DirichletTheta,
                                 ProblemType::NeumannTheta}) {
      const Grid g = make_grid(is_half_line(pt) ? DomainKind::HalfLine
                                                : DomainKind::FullLine,
                               10.0, 200);
      drift = std::max(drift, constant_state_soak(pt, g, params, scheme, 1000));
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    criterion(1, "equilibrium exactness", drift <= 1e-12 && secs < 1.0,
              fmt("drift=%.2e  %.2fs", drift, secs));
  }

  // 2. discrete volume bookkeeping is exact
  {
    bool ok = true;
    Scalar worst = 0.0;
    // resting-wall run (half line) conserves the total exactly
    {
      const Grid g = make_grid(DomainKind::HalfLine, 10.0, 200);
      Profile p = baseline_profile();
      p.center = 5.0;
      p.amp_b.setZero();
      p.amp_w.setZero();
      p.amp_u = 0.0;  // wall-compatible
      State s = make_state(g, p, ProblemType::NeumannTheta);
      SchemeConfig scheme;
      Scalar total = s.v.sum() * g.dx;
      for (int k = 0; k < 200; ++k) {
        step(s, g, ProblemType::NeumannTheta, params, scheme, 1e-3);
        const Scalar next = s.v.sum() * g.dx;
        worst = std::max(worst, std::abs(next - total));
        total = next;
      }
    }
    // Cauchy run matches the boundary u-flux step by step
    {
      const Grid g = make_grid(DomainKind::FullLine, 10.0, 200);
      State s = make_state(g, baseline_profile(), ProblemType::Cauchy);
      SchemeConfig scheme;
      Scalar total = s.v.sum() * g.dx;
      for (int k = 0; k < 200; ++k) {
        const Scalar u_left = s.u(0), u_right = s.u(g.n_cells);
        step(s, g, ProblemType::Cauchy, params, scheme, 1e-3);
        const Scalar next = s.v.sum() * g.dx;
        worst = std::max(worst,
                         std::abs(next - total - 1e-3 * (u_right - u_left)));
        total = next;
      }
    }
    ok = worst <= 1e-12;
    criterion(2, "volume bookkeeping", ok, fmt("max defect=%.2e", worst));
  }

  // shared baseline trajectory for criteria 3-6 and 11
  const auto t0 = std::chrono::steady_clock::now();
  const BaselineRun base = make_baseline(0);
  const double base_secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const BaselineRun fine = make_baseline(1);

  // 3. entropy estimate with refinement-shrinking overshoot
  criterion(3, "entropy estimate",
            base.entropy_ok && base_secs < 60.0 &&
                fine.entropy_overshoot <= base.entropy_overshoot,
            fmt("overshoot %.2e -> %.2e", base.entropy_overshoot,
                fine.entropy_overshoot) +
                fmt("  (%.1fs)", base_secs));

  // 4. Jensen unit-window averages inside [alpha1, alpha2]
  criterion(4, "window averages", base.windows_ok,
            fmt("e0=%.4f", base.e0_value));

  // 5. level-set measure bound and its constant
  {
    LyapunovReport unit;
    const Scalar bound = measure_bound_check(unit, 1.0).bound;
    const bool const_ok =
        std::abs(bound - 2.0 / (2.0 * std::log(2.0) - 1.0)) <= 1e-10 &&
        std::abs(bound - 5.1774) <= 1e-4;
    criterion(5, "measure bound", base.measure_ok && const_ok,
              fmt("bound(e0=1)=%.6f", bound));
  }

  // 6. representation formula, first-order in (dx, dt)
  {
    const Scalar ratio = base.reconstruct_rel / fine.reconstruct_rel;
    criterion(6, "representation formula",
              base.reconstruct_rel <= 0.05 && ratio >= 1.7,
              fmt("rel=%.2e  ratio=%.2f", base.reconstruct_rel, ratio));
  }

  // 7. entropy root finder
  {
    const EntropyRoots r0 = entropy_roots(0.0);
    bool ok = std::abs(r0.alpha1 - 1.0) <= 1e-12 && std::abs(r0.alpha2 - 1.0) <= 1e-12;
    ok = ok && std::abs(entropy_roots(1.0 - std::log(2.0)).alpha2 - 2.0) <= 1e-10;
    Scalar prev1 = 1.0, prev2 = 1.0;
    for (int k = 1; k <= 10; ++k) {
      const EntropyRoots r = entropy_roots(0.1 * k);
      ok = ok && r.alpha1 < prev1 && r.alpha2 > prev2;
      prev1 = r.alpha1;
      prev2 = r.alpha2;
    }
    criterion(7, "root finder", ok);
  }

  // 8. manufactured-solution convergence
  {
    const auto start = std::chrono::steady_clock::now();
    SchemeConfig scheme;
    scheme.t_end = 0.5;
    scheme.dt_max = 1e-2;
    scheme.cfl = 0.9;
    const ConvergenceTable table =
        convergence_order(named_case("gaussian-decay"), ProblemType::Cauchy,
                          DomainKind::FullLine, 10.0, 100, 3, scheme, params);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    Scalar min_order = 1e30;
    for (int f = 0; f < 7; ++f) {
      const Scalar o = table.orders.back()[f];
      if (std::isfinite(o)) min_order = std::min(min_order, o);
    }
    criterion(8, "manufactured-solution order",
              min_order >= 1.8 && secs < 120.0,
              fmt("min order=%.2f  %.1fs", min_order, secs));
  }

  // 9. reduction to the Navier-Stokes sub-system
  {
    const Grid g = make_grid(DomainKind::FullLine, 10.0, 200);
    Profile p = baseline_profile();
    p.amp_b.setZero();
    p.amp_w.setZero();
    const State initial = make_state(g, p, ProblemType::Cauchy);
    SchemeConfig with_mag, without_mag;
    with_mag.t_end = without_mag.t_end = 0.5;
    with_mag.dt_max = without_mag.dt_max = 1e-3;
    without_mag.include_magnetic = false;
    const Trajectory a = run(initial, g, ProblemType::Cauchy, params, with_mag);
    const Trajectory b = run(initial, g, ProblemType::Cauchy, params, without_mag);
    Scalar transverse = 0.0, mismatch = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k) {
      transverse = std::max(transverse, a.states[k].b.abs().maxCoeff());
      transverse = std::max(transverse, a.states[k].w.abs().maxCoeff());
      mismatch = std::max(mismatch,
                          (a.states[k].v - b.states[k].v).abs().maxCoeff());
      mismatch = std::max(mismatch,
                          (a.states[k].theta - b.states[k].theta).abs().maxCoeff());
      mismatch = std::max(mismatch,
                          (a.states[k].u - b.states[k].u).abs().maxCoeff());
    }
    criterion(9, "Navier-Stokes reduction",
              transverse <= 1e-14 && mismatch <= 1e-12,
              fmt("|b,w|=%.1e  diff=%.1e", transverse, mismatch));
  }

  // scratch space for the subprocess criteria
  const fs::path tmp =
      fs::temp_directory_path() / ("mhd1d-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(tmp);
  const std::string null_redir = " >/dev/null 2>&1";

  // 10. positivity floors: observed on accepted runs, fatal on hostile ones
  {
    bool floors_ok = true;
    for (const StepReport& r : base.traj.reports)
      floors_ok = floors_ok && r.min_v > 1e-10 && r.min_theta > 1e-10;

    std::ofstream(tmp / "hostile.cfg")
        << "[grid]\nL = 10\nn_cells = 100\n"
        << "[params]\nkappa0 = 0.02\n"
        << "[scheme]\nt_end = 0.5\npositivity_floor = 0.5\n"
        << "[init]\nprofile = gaussian\namp_u = 6\namp_theta = -0.48\nwidth = 3\n";
    const int code = shell(std::string(MHD1D_BIN) + " run " +
                           (tmp / "hostile.cfg").string() + " --quiet --out " +
                           (tmp / "hostile-out").string() + null_redir);
    criterion(10, "positivity floors", floors_ok && code == 1,
              fmt("hostile exit=%.0f", code));
  }

  // 11. embedding inequality on every recorded perturbation field
  criterion(11, "Sobolev check", base.sobolev_ok);

  // 12. byte-identical reruns
  {
    std::ofstream(tmp / "baseline.cfg")
        << "[grid]\nL = 20\nn_cells = 800\n"
        << "[scheme]\nt_end = 2\ndt_max = 5e-4\ncfl = 0.9\nrecord_stride = 20\n"
        << "[init]\nprofile = gaussian\namp_v = 0.3\namp_u = 0.2\n"
        << "amp_theta = 0.5\namp_b1 = 0.3\namp_w1 = 0.2\n"
        << "[probes]\ncoords = 0\n";
    const std::string cmd = std::string(MHD1D_BIN) + " run " +
                            (tmp / "baseline.cfg").string() + " --quiet --out ";
    const int c1 = shell(cmd + (tmp / "r1").string() + null_redir);
    const int c2 = shell(cmd + (tmp / "r2").string() + null_redir);
    const std::string s1 = read_file(tmp / "r1" / "series.csv");
    const std::string s2 = read_file(tmp / "r2" / "series.csv");
    criterion(12, "determinism", c1 == 0 && c2 == 0 && !s1.empty() && s1 == s2,
              fmt("series.csv bytes=%.0f", static_cast<double>(s1.size())));
  }

  std::error_code ec;
  fs::remove_all(tmp, ec);

  if (g_failures == 0) {
    std::printf("all 12 criteria passed\n");
    return 0;
  }
  std::printf("%d criteria FAILED\n", g_failures);
  return 1;
}
