#include <mhd1d/verify.hpp>

#include <mhd1d/constitutive.hpp>

#include <cmath>
#include <limits>

namespace mhd1d {

namespace {

Scalar shape(FieldForm::Mode m, Scalar x) {
  const Scalar phi = std::exp(-x * x);
  return m == FieldForm::Mode::Gauss ? phi : x * phi;
}

Scalar shape_dx(FieldForm::Mode m, Scalar x) {
  const Scalar phi = std::exp(-x * x);
  return m == FieldForm::Mode::Gauss ? -2.0 * x * phi : (1.0 - 2.0 * x * x) * phi;
}

Scalar shape_dx2(FieldForm::Mode m, Scalar x) {
  const Scalar phi = std::exp(-x * x);
  return m == FieldForm::Mode::Gauss ? (4.0 * x * x - 2.0) * phi
                                     : (4.0 * x * x - 6.0) * x * phi;
}

}  // namespace

Scalar FieldForm::value(Scalar x, Scalar t) const {
  Scalar s = base;
  for (const Term& tm : terms) s += tm.amp * shape(tm.mode, x) * std::exp(-t);
  return s;
}

Scalar FieldForm::ddx(Scalar x, Scalar t) const {
  Scalar s = 0.0;
  for (const Term& tm : terms) s += tm.amp * shape_dx(tm.mode, x) * std::exp(-t);
  return s;
}

Scalar FieldForm::ddx2(Scalar x, Scalar t) const {
  Scalar s = 0.0;
  for (const Term& tm : terms) s += tm.amp * shape_dx2(tm.mode, x) * std::exp(-t);
  return s;
}

Scalar FieldForm::ddt(Scalar x, Scalar t) const { return base - value(x, t); }

ManufacturedCase named_case(const std::string& name) {
  using Mode = FieldForm::Mode;
  ManufacturedCase c;
  c.name = name;
  c.v.base = 1.0;
  c.theta.base = 1.0;
  if (name == "far-field") return c;
  if (name == "gaussian-decay") {
    c.v.terms = {{0.2, Mode::Gauss}};
    c.u.terms = {{0.1, Mode::XGauss}};
    c.theta.terms = {{0.15, Mode::Gauss}};
    c.w1.terms = {{0.1, Mode::Gauss}};
    c.w2.terms = {{-0.08, Mode::XGauss}};
    c.b1.terms = {{0.12, Mode::Gauss}};
    c.b2.terms = {{0.1, Mode::XGauss}};
    return c;
  }
  if (name == "volume-exact") {
    // u_x equals v_t exactly, so the volume-equation source vanishes
    c.v.terms = {{0.2, Mode::XGauss}};
    c.u.terms = {{0.1, Mode::Gauss}};
    return c;
  }
  throw ConfigError("unknown manufactured case: " + name);
}

MmsSources mms_sources(const ManufacturedCase& c, Scalar x, Scalar t,
                       const Params& p) {
  const Scalar v = c.v.value(x, t), vx = c.v.ddx(x, t), vt = c.v.ddt(x, t);
  const Scalar u = c.u.value(x, t), ux = c.u.ddx(x, t), uxx = c.u.ddx2(x, t),
               ut = c.u.ddt(x, t);
  const Scalar th = c.theta.value(x, t), thx = c.theta.ddx(x, t),
               thxx = c.theta.ddx2(x, t), tht = c.theta.ddt(x, t);
  const Vec2 w{c.w1.value(x, t), c.w2.value(x, t)};
  const Vec2 wx{c.w1.ddx(x, t), c.w2.ddx(x, t)};
  const Vec2 wxx{c.w1.ddx2(x, t), c.w2.ddx2(x, t)};
  const Vec2 wt{c.w1.ddt(x, t), c.w2.ddt(x, t)};
  const Vec2 b{c.b1.value(x, t), c.b2.value(x, t)};
  const Vec2 bx{c.b1.ddx(x, t), c.b2.ddx(x, t)};
  const Vec2 bxx{c.b1.ddx2(x, t), c.b2.ddx2(x, t)};
  const Vec2 bt{c.b1.ddt(x, t), c.b2.ddt(x, t)};
  (void)u;

  const Scalar mu = p.mu1 + p.mu2 * std::pow(v, -p.alpha);
  const Scalar mu_dv = -p.alpha * p.mu2 * std::pow(v, -p.alpha - 1.0);
  const Scalar kap = p.kappa0 * std::pow(th, p.beta);
  const Scalar kap_dth = p.beta * p.kappa0 * std::pow(th, p.beta - 1.0);

  MmsSources s;
  s.v = vt - ux;

  const Scalar P_x = p.R * (thx * v - th * vx) / (v * v);
  const Scalar visc_x = mu_dv * vx * ux / v + mu * (uxx * v - ux * vx) / (v * v);
  s.u = ut + P_x + b.dot(bx) - visc_x;

  for (int k = 0; k < 2; ++k) {
    const Scalar wvisc_x = p.lambda * (wxx(k) * v - wx(k) * vx) / (v * v);
    s.w(k) = wt(k) - bx(k) - wvisc_x;
    const Scalar resist_x = p.nu * (bxx(k) * v - bx(k) * vx) / (v * v);
    s.m(k) = vt * b(k) + v * bt(k) - wx(k) - resist_x;
  }

  const Scalar cond_x = kap_dth * thx * thx / v + kap * (thxx * v - thx * vx) / (v * v);
  const Scalar diss =
      (mu * ux * ux + p.lambda * wx.squaredNorm() + p.nu * bx.squaredNorm()) / v;
  s.theta = p.cv * tht + p.R * th * ux / v - cond_x - diss;
  return s;
}

Forcing make_forcing(const ManufacturedCase& c, const Params& params) {
  Forcing f;
  f.v = [c, params](Scalar x, Scalar t) { return mms_sources(c, x, t, params).v; };
  f.u = [c, params](Scalar x, Scalar t) { return mms_sources(c, x, t, params).u; };
  f.w = [c, params](Scalar x, Scalar t) { return mms_sources(c, x, t, params).w; };
  f.m = [c, params](Scalar x, Scalar t) { return mms_sources(c, x, t, params).m; };
  f.theta = [c, params](Scalar x, Scalar t) { return mms_sources(c, x, t, params).theta; };
  return f;
}

State sample_state(const ManufacturedCase& c, const Grid& grid, Scalar t) {
  const Eigen::Index n = grid.n_cells;
  State s;
  s.t = t;
  s.v.resize(n);
  s.theta.resize(n);
  s.b.resize(n, 2);
  s.u.resize(n + 1);
  s.w.resize(n + 1, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar x = grid.cell_centers(i);
    s.v(i) = c.v.value(x, t);
    s.theta(i) = c.theta.value(x, t);
    s.b(i, 0) = c.b1.value(x, t);
    s.b(i, 1) = c.b2.value(x, t);
  }
  for (Eigen::Index j = 0; j <= n; ++j) {
    const Scalar x = grid.node_positions(j);
    s.u(j) = c.u.value(x, t);
    s.w(j, 0) = c.w1.value(x, t);
    s.w(j, 1) = c.w2.value(x, t);
  }
  return s;
}

ConvergenceTable convergence_order(const ManufacturedCase& c, ProblemType problem,
                                   DomainKind kind, Scalar L, Eigen::Index base_n,
                                   int levels, const SchemeConfig& base_scheme,
                                   const Params& params) {
  if (levels < 2) throw ConfigError("convergence_order: need at least 2 levels");
  const Forcing forcing = make_forcing(c, params);

  ConvergenceTable table;
  for (int l = 0; l < levels; ++l) {
    const Eigen::Index n = base_n << l;
    const Grid grid = make_grid(kind, L, n);
    SchemeConfig scheme = base_scheme;
    scheme.dt_max = base_scheme.dt_max / std::pow(4.0, l);  // dt ~ dx^2
    const State init = sample_state(c, grid, 0.0);
    const Trajectory traj = run(init, grid, problem, params, scheme, {}, &forcing);
    const State& num = traj.states.back();
    const State exact = sample_state(c, grid, num.t);

    ConvergenceLevel lev;
    lev.n = n;
    lev.dx = grid.dx;
    lev.dt = scheme.dt_max;
    auto l2c = [&](const ArrayX& d) { return std::sqrt(grid.dx * d.square().sum()); };
    lev.errors = {
        l2c(num.v - exact.v),
        l2c(num.u - exact.u),
        l2c(num.theta - exact.theta),
        l2c(num.b.col(0) - exact.b.col(0)),
        l2c(num.b.col(1) - exact.b.col(1)),
        l2c(num.w.col(0) - exact.w.col(0)),
        l2c(num.w.col(1) - exact.w.col(1)),
    };
    table.levels.push_back(lev);
  }

  table.all_exact = true;
  for (std::size_t k = 0; k + 1 < table.levels.size(); ++k) {
    std::array<Scalar, 7> row;
    for (int f = 0; f < 7; ++f) {
      const Scalar e0 = table.levels[k].errors[f];
      const Scalar e1 = table.levels[k + 1].errors[f];
      row[f] = (e0 > 0.0 && e1 > 0.0) ? std::log2(e0 / e1)
                                      : std::numeric_limits<Scalar>::quiet_NaN();
    }
    table.orders.push_back(row);
  }
  for (const auto& lev : table.levels)
    for (const Scalar e : lev.errors)
      if (e > 1e-13) table.all_exact = false;
  return table;
}

Scalar constant_state_soak(ProblemType problem, const Grid& grid,
                           const Params& params, const SchemeConfig& scheme,
                           long steps) {
  Profile constant;
  State s = make_state(grid, constant, problem);
  SchemeConfig sc = scheme;
  sc.t_end = std::numeric_limits<Scalar>::max();  // fixed step count, no clamp

  Scalar drift = 0.0;
  auto measure = [&]() {
    Scalar d = (s.v - 1.0).abs().maxCoeff();
    d = std::max(d, (s.theta - 1.0).abs().maxCoeff());
    d = std::max(d, s.u.abs().maxCoeff());
    d = std::max(d, s.b.abs().maxCoeff());
    d = std::max(d, s.w.abs().maxCoeff());
    return d;
  };
  for (long k = 0; k < steps; ++k) {
    const Scalar dt = dt_control(s, grid, params, sc);
    step(s, grid, problem, params, sc, dt);
    drift = std::max(drift, measure());
  }
  return drift;
}

}  // namespace mhd1d
