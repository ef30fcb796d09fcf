#include <mhd1d/functionals.hpp>

#include <mhd1d/constitutive.hpp>

#include <cmath>

namespace mhd1d {

namespace {

ArrayX avg_node_to_cell(const ArrayX& node_field) {
  const Eigen::Index n = node_field.size() - 1;
  return 0.5 * (node_field.head(n) + node_field.tail(n));
}

Scalar entropy_deviation(Scalar z) { return z - std::log(z) - 1.0; }

}  // namespace

LyapunovReport lyapunov_report(const State& s, const Grid& grid,
                               ProblemType problem, const Params& params) {
  const Eigen::Index n = grid.n_cells;
  const Scalar dx = grid.dx;
  if (!(s.v.minCoeff() > 0.0) || !(s.theta.minCoeff() > 0.0))
    throw Error("lyapunov_report: state must have positive v and theta");

  const Ghosts g = apply_boundary(s, problem);

  const ArrayX ux = dx_node_to_cell(s.u, dx);
  const ArrayX wx1 = dx_node_to_cell(s.w.col(0), dx);
  const ArrayX wx2 = dx_node_to_cell(s.w.col(1), dx);
  const ArrayX thx = dx_cell_to_node(s.theta, dx, g.theta_left, g.theta_right);
  const ArrayX vx = dx_cell_to_node(s.v, dx, g.v_left, g.v_right);
  const ArrayX bx1 = dx_cell_to_node(s.b.col(0), dx, g.b_left(0), g.b_right(0));
  const ArrayX bx2 = dx_cell_to_node(s.b.col(1), dx, g.b_left(1), g.b_right(1));

  const ArrayX thx2 = avg_node_to_cell(thx.square().eval());
  const ArrayX bx2c = avg_node_to_cell((bx1.square() + bx2.square()).eval());
  const ArrayX wx2c = wx1.square() + wx2.square();
  const ArrayX kin = avg_node_to_cell(
      (0.5 * (s.u.square() + s.w.col(0).square() + s.w.col(1).square())).eval());
  const ArrayX mag = 0.5 * s.v * (s.b.col(0).square() + s.b.col(1).square());

  LyapunovReport r;
  r.t = s.t;

  Scalar G = 0.0, W = 0.0, E = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar v = s.v(i), th = s.theta(i);
    const Scalar mu = viscosity_mu(v, params);
    const Scalar kap = conductivity_kappa(th, params);
    E += params.cv * th + kin(i) + mag(i);
    G += kin(i) + mag(i) + entropy_deviation(v) + entropy_deviation(th);
    W += kap * thx2(i) / (v * th * th) +
         (mu * ux(i) * ux(i) + params.lambda * wx2c(i) + params.nu * bx2c(i)) / (v * th);
  }
  r.E_total = dx * E;
  r.G_entropy = dx * G;
  r.W = dx * W;
  r.V = dx * (kin + mag).sum() + r.W;
  r.V_tilde = params.lambda * dx * (wx2c / s.v).sum() + r.V + 1.0;
  r.M_v = 1.0 + s.v.maxCoeff();
  r.min_v = s.v.minCoeff();
  r.min_theta = s.theta.minCoeff();
  r.max_theta = s.theta.maxCoeff();
  r.measure_lo = dx * static_cast<Scalar>((s.theta < 0.5).count());
  r.measure_hi = dx * static_cast<Scalar>((s.theta > 2.0).count());

  // B(t) = int u (ln v)_x dx - int (theta-1) ln v dx
  {
    ArrayX lnv_x(n + 1);
    lnv_x(0) = (std::log(s.v(0)) - std::log(g.v_left)) / dx;
    for (Eigen::Index j = 1; j < n; ++j)
      lnv_x(j) = (std::log(s.v(j)) - std::log(s.v(j - 1))) / dx;
    lnv_x(n) = (std::log(g.v_right) - std::log(s.v(n - 1))) / dx;
    const ArrayX cross = avg_node_to_cell((s.u * lnv_x).eval());
    r.B_cross = dx * (cross - (s.theta - 1.0) * s.v.log()).sum();
  }

  auto l2_cells = [&](const ArrayX& f) { return std::sqrt(dx * f.square().sum()); };
  auto l2_nodes = [&](const ArrayX& f) {
    return std::sqrt(dx * avg_node_to_cell(f.square().eval()).sum());
  };

  r.l2_dx_v = l2_nodes(vx);
  r.l2_dx_theta = l2_nodes(thx);
  r.l2_dx_u = l2_cells(ux);
  r.l2_dx_b = std::sqrt(dx * bx2c.sum());
  r.l2_dx_w = std::sqrt(dx * wx2c.sum());

  const Scalar l2v = l2_cells((s.v - 1.0).eval());
  const Scalar l2th = l2_cells((s.theta - 1.0).eval());
  const Scalar l2u = l2_nodes(s.u);
  const Scalar l2b = std::sqrt(dx * (s.b.col(0).square() + s.b.col(1).square()).sum());
  const Scalar l2w = std::sqrt(
      dx * avg_node_to_cell((s.w.col(0).square() + s.w.col(1).square()).eval()).sum());

  r.h1_v = std::hypot(l2v, r.l2_dx_v);
  r.h1_theta = std::hypot(l2th, r.l2_dx_theta);
  r.h1_u = std::hypot(l2u, r.l2_dx_u);
  r.h1_b = std::hypot(l2b, r.l2_dx_b);
  r.h1_w = std::hypot(l2w, r.l2_dx_w);
  return r;
}

Scalar e0(const State& initial_state, const Grid& grid, ProblemType problem,
          const Params& params) {
  return 2.0 * lyapunov_report(initial_state, grid, problem, params).G_entropy;
}

EntropyRoots entropy_roots(Scalar e0_val) {
  if (e0_val < 0.0) throw Error("entropy_roots: e0 must be nonnegative");
  if (e0_val == 0.0) return {1.0, 1.0};
  auto f = [e0_val](Scalar z) { return entropy_deviation(z) - e0_val; };

  auto bisect = [&f](Scalar lo, Scalar hi) {
    // f(lo) and f(hi) have opposite signs; the function is monotone between
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const Scalar mid = 0.5 * (lo + hi);
      if (f(lo) * f(mid) <= 0.0) hi = mid;
      else lo = mid;
    }
    return 0.5 * (lo + hi);
  };

  Scalar lo = 0.5;
  while (f(lo) < 0.0) lo *= 0.5;
  const Scalar a1 = bisect(lo, 1.0);

  Scalar hi = 2.0;
  while (f(hi) < 0.0) hi *= 2.0;
  const Scalar a2 = bisect(1.0, hi);
  return {a1, a2};
}

WindowReport window_average_check(const State& state, const Grid& grid, Scalar e0_val) {
  const Scalar x_lo = grid.x_left();
  const Scalar x_hi = grid.x_right();
  if (x_hi - x_lo < 1.0)
    throw Error("window_average_check: domain shorter than one unit window");

  const EntropyRoots roots = entropy_roots(e0_val);
  WindowReport rep;
  rep.alpha1 = roots.alpha1;
  rep.alpha2 = roots.alpha2;

  constexpr Scalar tol = 1e-12;
  const long N_lo = static_cast<long>(std::ceil(x_lo - tol));
  const long N_hi = static_cast<long>(std::floor(x_hi + tol)) - 1;
  for (long N = N_lo; N <= N_hi; ++N) {
    Scalar sum_v = 0.0, sum_th = 0.0;
    long count = 0;
    for (Eigen::Index i = 0; i < grid.n_cells; ++i) {
      const Scalar x = grid.cell_centers(i);
      if (x >= static_cast<Scalar>(N) && x < static_cast<Scalar>(N) + 1.0) {
        sum_v += state.v(i);
        sum_th += state.theta(i);
        ++count;
      }
    }
    if (count == 0) continue;
    WindowStat ws;
    ws.N = N;
    ws.mean_v = sum_v / static_cast<Scalar>(count);
    ws.mean_theta = sum_th / static_cast<Scalar>(count);
    ws.in_v = ws.mean_v >= roots.alpha1 - tol && ws.mean_v <= roots.alpha2 + tol;
    ws.in_theta = ws.mean_theta >= roots.alpha1 - tol && ws.mean_theta <= roots.alpha2 + tol;
    rep.all_pass = rep.all_pass && ws.in_v && ws.in_theta;
    rep.windows.push_back(ws);
  }
  return rep;
}

MeasureCheck measure_bound_check(const LyapunovReport& report, Scalar e0_val) {
  MeasureCheck c;
  c.total = report.measure_lo + report.measure_hi;
  c.bound = 2.0 * e0_val / (2.0 * std::log(2.0) - 1.0);
  c.slack = c.bound - c.total;
  c.pass = c.total <= c.bound + 1e-12;
  return c;
}

Scalar plus_part_norm(const ArrayX& field, Scalar dx, Scalar threshold, Scalar p,
                      PlusPartDirection direction) {
  if (!(p >= 1.0)) throw Error("plus_part_norm: p must be >= 1");
  ArrayX g;
  if (direction == PlusPartDirection::Above) {
    g = (field - threshold).max(0.0);
  } else {
    if (!(field.minCoeff() > 0.0))
      throw Error("plus_part_norm: field must be positive for below-reciprocal");
    g = (field.inverse() - threshold).max(0.0);
  }
  return std::pow(dx * g.pow(p).sum(), 1.0 / p);
}

namespace {

// Prefix integral of a node field from the probe node, interpolated to cells.
ArrayX prefix_integral_to_cells(const ArrayX& u, Eigen::Index jN, Scalar dx) {
  const Eigen::Index n = u.size() - 1;
  ArrayX cum(n + 1);
  cum(jN) = 0.0;
  for (Eigen::Index j = jN + 1; j <= n; ++j)
    cum(j) = cum(j - 1) + 0.5 * dx * (u(j - 1) + u(j));
  for (Eigen::Index j = jN - 1; j >= 0; --j)
    cum(j) = cum(j + 1) - 0.5 * dx * (u(j) + u(j + 1));
  return 0.5 * (cum.head(n) + cum.tail(n));
}

}  // namespace

ArrayX reconstruct_v(const Trajectory& traj, const Grid& grid, const Params& params,
                     std::size_t probe, Scalar t) {
  (void)params;
  if (probe >= traj.probes.node_index.size())
    throw Error("reconstruct_v: missing probe history");
  if (traj.states.empty()) throw Error("reconstruct_v: empty trajectory");

  std::size_t r = 0;
  for (std::size_t s = 1; s < traj.record_times.size(); ++s)
    if (std::abs(traj.record_times[s] - t) < std::abs(traj.record_times[r] - t)) r = s;

  const Eigen::Index jN = traj.probes.node_index[probe];
  const Scalar dx = grid.dx;
  const Eigen::Index n = grid.n_cells;

  // cumulative trapezoid of sigma(N, tau) over the per-step history
  const std::vector<Scalar>& times = traj.probes.times;
  const std::vector<Scalar>& sig = traj.probes.sigma[probe];
  std::vector<Scalar> cumsig(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k)
    cumsig[k] = cumsig[k - 1] + 0.5 * (sig[k - 1] + sig[k]) * (times[k] - times[k - 1]);

  const ArrayX I0 = prefix_integral_to_cells(traj.states[0].u, jN, dx);
  const ArrayX& v0 = traj.states[0].v;

  ArrayX J = ArrayX::Zero(n);
  ArrayX B_r(n);
  Scalar Y_r = 1.0;
  ArrayX prev_integrand(n);
  Scalar prev_time = 0.0;
  for (std::size_t sidx = 0; sidx <= r; ++sidx) {
    const State& st = traj.states[sidx];
    const ArrayX Is = prefix_integral_to_cells(st.u, jN, dx);
    const ArrayX B = v0 * (Is - I0).exp();
    const Scalar Y = std::exp(cumsig[traj.record_step_index[sidx]]);
    const ArrayX integrand =
        (st.theta + 0.5 * st.v * (st.b.col(0).square() + st.b.col(1).square())) / (B * Y);
    if (sidx > 0)
      J += 0.5 * (traj.record_times[sidx] - prev_time) * (integrand + prev_integrand);
    prev_integrand = integrand;
    prev_time = traj.record_times[sidx];
    if (sidx == r) {
      B_r = B;
      Y_r = Y;
    }
  }
  return B_r * Y_r * (1.0 + J);
}

SobolevCheck sobolev_check(const ArrayX& field, Scalar dx) {
  const Eigen::Index n = field.size();
  SobolevCheck c;
  c.sup_f2 = field.square().maxCoeff();
  const Scalar l2 = std::sqrt(dx * field.square().sum());
  const ArrayX fx = (field.tail(n - 1) - field.head(n - 1)) / dx;
  const Scalar l2x = std::sqrt(dx * fx.square().sum());
  c.rhs = 2.0 * l2 * l2x;
  const Scalar slack = dx * (l2 * l2 + l2x * l2x);
  c.pass = c.sup_f2 <= c.rhs * (1.0 + 1e-6) + slack;
  return c;
}

}  // namespace mhd1d
