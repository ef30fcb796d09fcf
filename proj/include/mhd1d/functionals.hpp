#ifndef MHD1D_FUNCTIONALS_HPP
#define MHD1D_FUNCTIONALS_HPP

#include <mhd1d/solver.hpp>

#include <vector>

namespace mhd1d {

/// One time-stamped record of every estimate-harness functional.
struct LyapunovReport {
  Scalar t = 0.0;
  Scalar E_total = 0.0;    // total energy including the far-field background
  Scalar G_entropy = 0.0;  // entropy functional; zero only at the far field
  Scalar W = 0.0;          // dissipation rate
  Scalar V = 0.0;          // kinetic+magnetic energy plus W-integrand
  Scalar V_tilde = 0.0;    // V + transverse dissipation + 1
  Scalar M_v = 0.0;        // 1 + max v
  Scalar min_v = 0.0, min_theta = 0.0, max_theta = 0.0;
  Scalar measure_lo = 0.0;  // |(theta < 1/2)|
  Scalar measure_hi = 0.0;  // |(theta > 2)|
  Scalar B_cross = 0.0;     // int u (ln v)_x dx - int (theta-1) ln v dx
  Scalar h1_v = 0.0, h1_u = 0.0, h1_theta = 0.0, h1_b = 0.0, h1_w = 0.0;
  Scalar l2_dx_v = 0.0, l2_dx_u = 0.0, l2_dx_theta = 0.0, l2_dx_b = 0.0, l2_dx_w = 0.0;
};

LyapunovReport lyapunov_report(const State& state, const Grid& grid,
                               ProblemType problem, const Params& params);

/// Initial energy scale e0 = 2 G_entropy(t=0).
Scalar e0(const State& initial_state, const Grid& grid, ProblemType problem,
          const Params& params);

/// Roots 0 < alpha1 <= 1 <= alpha2 of z - ln z - 1 = e0, to 1e-12.
struct EntropyRoots {
  Scalar alpha1;
  Scalar alpha2;
};
EntropyRoots entropy_roots(Scalar e0);

struct WindowStat {
  long N;  // window is [N, N+1] in mass units
  Scalar mean_v, mean_theta;
  bool in_v, in_theta;
};

struct WindowReport {
  Scalar alpha1, alpha2;
  std::vector<WindowStat> windows;
  bool all_pass = true;
};

WindowReport window_average_check(const State& state, const Grid& grid, Scalar e0);

struct MeasureCheck {
  Scalar total;  // measure_lo + measure_hi
  Scalar bound;  // 2 e0 / (2 ln 2 - 1)
  Scalar slack;  // bound - total
  bool pass;
};

MeasureCheck measure_bound_check(const LyapunovReport& report, Scalar e0);

enum class PlusPartDirection { Above, BelowReciprocal };

/// Discrete L^p norm of (f - c)_+ or (f^{-1} - c)_+.
Scalar plus_part_norm(const ArrayX& field, Scalar dx, Scalar threshold, Scalar p,
                      PlusPartDirection direction);

/// Evaluates the representation formula of v along a recorded trajectory at
/// the record nearest to t; returns v at cell centers.
ArrayX reconstruct_v(const Trajectory& traj, const Grid& grid, const Params& params,
                     std::size_t probe, Scalar t);

struct SobolevCheck {
  Scalar sup_f2;
  Scalar rhs;  // 2 ||f|| ||f_x||
  bool pass;
};

/// Discrete form of f^2 <= 2 ||f|| ||f_x|| for perturbation fields on a
/// uniform mesh of spacing dx, with O(dx) quadrature slack.
SobolevCheck sobolev_check(const ArrayX& field, Scalar dx);

}  // namespace mhd1d

#endif
