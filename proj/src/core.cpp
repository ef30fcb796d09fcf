#include <mhd1d/core.hpp>

#include <cmath>

namespace mhd1d {

Grid make_grid(DomainKind kind, Scalar L, Eigen::Index n_cells) {
  if (!(L > 0.0)) throw ConfigError("grid: L must be positive");
  if (n_cells < 4) throw ConfigError("grid: n_cells must be at least 4");
  Grid g;
  g.kind = kind;
  g.L = L;
  g.n_cells = n_cells;
  const Scalar x0 = (kind == DomainKind::FullLine) ? -L : 0.0;
  const Scalar x1 = L;
  g.dx = (x1 - x0) / static_cast<Scalar>(n_cells);
  g.node_positions = ArrayX::LinSpaced(n_cells + 1, x0, x1);
  g.cell_centers = g.node_positions.head(n_cells) + 0.5 * g.dx;
  return g;
}

void Params::validate() const {
  if (!(mu1 > 0.0)) throw ConfigError("params: mu1 must be positive");
  if (mu2 < 0.0) throw ConfigError("params: mu2 must be nonnegative");
  if (alpha < 0.0) throw ConfigError("params: alpha must be nonnegative");
  if (beta < 0.0) throw ConfigError("params: beta must be nonnegative");
  if (!(kappa0 > 0.0)) throw ConfigError("params: kappa0 must be positive");
  if (!(lambda > 0.0)) throw ConfigError("params: lambda must be positive");
  if (!(nu > 0.0)) throw ConfigError("params: nu must be positive");
  if (!(R > 0.0)) throw ConfigError("params: R must be positive");
  if (!(cv > 0.0)) throw ConfigError("params: cv must be positive");
}

bool is_half_line(ProblemType p) { return p != ProblemType::Cauchy; }

GhostRelations ghost_relations(ProblemType problem) {
  GhostRelations r;
  // Right end is always the far-field truncation clamp.
  r.v_right = {1.0, 0.0};
  r.theta_right = {1.0, 0.0};
  r.b_right = {0.0, 0.0};
  switch (problem) {
    case ProblemType::Cauchy:
      r.v_left = {1.0, 0.0};
      r.theta_left = {1.0, 0.0};
      r.b_left = {0.0, 0.0};
      break;
    case ProblemType::DirichletTheta:
      r.v_left = {0.0, 1.0};       // no wall condition on v: even mirror
      r.theta_left = {2.0, -1.0};  // odd mirror about theta = 1
      r.b_left = {0.0, -1.0};      // b(0) = 0: odd mirror
      break;
    case ProblemType::NeumannTheta:
      r.v_left = {0.0, 1.0};
      r.theta_left = {0.0, 1.0};   // theta_x(0) = 0: even mirror
      r.b_left = {0.0, -1.0};
      break;
  }
  return r;
}

Ghosts apply_boundary(const State& state, ProblemType problem) {
  const GhostRelations r = ghost_relations(problem);
  const Eigen::Index n = state.v.size();
  Ghosts g;
  g.v_left = r.v_left.add + r.v_left.mul * state.v(0);
  g.v_right = r.v_right.add + r.v_right.mul * state.v(n - 1);
  g.theta_left = r.theta_left.add + r.theta_left.mul * state.theta(0);
  g.theta_right = r.theta_right.add + r.theta_right.mul * state.theta(n - 1);
  g.b_left = r.b_left.add * Vec2::Ones() + r.b_left.mul * state.b.row(0).matrix().transpose();
  g.b_right = r.b_right.add * Vec2::Ones() + r.b_right.mul * state.b.row(n - 1).matrix().transpose();
  return g;
}

namespace {

Scalar gaussian_bump(Scalar amp, Scalar x, Scalar center, Scalar width) {
  const Scalar s = (x - center) / width;
  return amp * std::exp(-s * s);
}

Scalar interp(const ArrayX& xs, const auto& col, Scalar x) {
  const Eigen::Index n = xs.size();
  if (x <= xs(0)) return col(0);
  if (x >= xs(n - 1)) return col(n - 1);
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    (xs(mid) <= x ? lo : hi) = mid;
  }
  const Scalar s = (x - xs(lo)) / (xs(hi) - xs(lo));
  return (1.0 - s) * col(lo) + s * col(hi);
}

}  // namespace

Scalar Profile::v0(Scalar x) const {
  switch (kind) {
    case Kind::Constant: return 1.0;
    case Kind::Gaussian: return 1.0 + gaussian_bump(amp_v, x, center, width);
    case Kind::Tabulated: return interp(tab_x, tab_fields.col(0), x);
  }
  return 1.0;
}

Scalar Profile::u0(Scalar x) const {
  switch (kind) {
    case Kind::Constant: return 0.0;
    case Kind::Gaussian: return gaussian_bump(amp_u, x, center, width);
    case Kind::Tabulated: return interp(tab_x, tab_fields.col(1), x);
  }
  return 0.0;
}

Scalar Profile::theta0(Scalar x) const {
  switch (kind) {
    case Kind::Constant: return 1.0;
    case Kind::Gaussian: return 1.0 + gaussian_bump(amp_theta, x, center, width);
    case Kind::Tabulated: return interp(tab_x, tab_fields.col(6), x);
  }
  return 1.0;
}

Vec2 Profile::b0(Scalar x) const {
  switch (kind) {
    case Kind::Constant: return Vec2::Zero();
    case Kind::Gaussian:
      return {gaussian_bump(amp_b(0), x, center, width),
              gaussian_bump(amp_b(1), x, center, width)};
    case Kind::Tabulated:
      return {interp(tab_x, tab_fields.col(4), x), interp(tab_x, tab_fields.col(5), x)};
  }
  return Vec2::Zero();
}

Vec2 Profile::w0(Scalar x) const {
  switch (kind) {
    case Kind::Constant: return Vec2::Zero();
    case Kind::Gaussian:
      return {gaussian_bump(amp_w(0), x, center, width),
              gaussian_bump(amp_w(1), x, center, width)};
    case Kind::Tabulated:
      return {interp(tab_x, tab_fields.col(2), x), interp(tab_x, tab_fields.col(3), x)};
  }
  return Vec2::Zero();
}

namespace {

// theta_x(0) for the Neumann compatibility check, from the profile itself.
Scalar profile_theta_slope_at_origin(const Profile& p) {
  if (p.kind == Profile::Kind::Constant) return 0.0;
  if (p.kind == Profile::Kind::Gaussian) {
    const Scalar s = (0.0 - p.center) / p.width;
    return p.amp_theta * std::exp(-s * s) * (-2.0 * s / p.width);
  }
  const Scalar h = 1e-6;
  return (p.theta0(h) - p.theta0(0.0)) / h;
}

}  // namespace

State make_state(const Grid& grid, const Profile& profile, ProblemType problem) {
  if (is_half_line(problem) != (grid.kind == DomainKind::HalfLine))
    throw ConfigError("problem regime does not match grid domain kind");

  const Eigen::Index n = grid.n_cells;
  State s;
  s.t = 0.0;
  s.v.resize(n);
  s.theta.resize(n);
  s.b.resize(n, 2);
  s.u.resize(n + 1);
  s.w.resize(n + 1, 2);

  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar x = grid.cell_centers(i);
    s.v(i) = profile.v0(x);
    s.theta(i) = profile.theta0(x);
    s.b.row(i) = profile.b0(x).transpose();
    if (!(s.v(i) > 0.0)) throw PositivityBreach("v0", i, x, 0.0);
    if (!(s.theta(i) > 0.0)) throw PositivityBreach("theta0", i, x, 0.0);
  }
  for (Eigen::Index j = 0; j <= n; ++j) {
    const Scalar x = grid.node_positions(j);
    s.u(j) = profile.u0(x);
    s.w.row(j) = profile.w0(x).transpose();
  }

  constexpr Scalar tol = 1e-10;
  if (is_half_line(problem)) {
    if (std::abs(profile.u0(0.0)) > tol)
      throw ConfigError("initial data incompatible: u(0) != 0");
    if (profile.w0(0.0).norm() > tol)
      throw ConfigError("initial data incompatible: w(0) != 0");
    if (profile.b0(0.0).norm() > tol)
      throw ConfigError("initial data incompatible: b(0) != 0");
    if (problem == ProblemType::DirichletTheta &&
        std::abs(profile.theta0(0.0) - 1.0) > tol)
      throw ConfigError("initial data incompatible: theta(0) != 1");
    if (problem == ProblemType::NeumannTheta &&
        std::abs(profile_theta_slope_at_origin(profile)) > tol)
      throw ConfigError("initial data incompatible: theta_x(0) != 0");
  }
  if (!s.v.isFinite().all() || !s.theta.isFinite().all() || !s.u.isFinite().all() ||
      !s.b.isFinite().all() || !s.w.isFinite().all())
    throw ConfigError("initial data contains non-finite values");
  return s;
}

bool truncation_exceeded(const State& state, const Grid& grid,
                         ProblemType problem, Scalar tol) {
  const Eigen::Index n = grid.n_cells;
  const Eigen::Index buf = std::max<Eigen::Index>(1, n / 10);

  auto cell_dev = [&](Eigen::Index i) {
    Scalar d = std::abs(state.v(i) - 1.0);
    d = std::max(d, std::abs(state.theta(i) - 1.0));
    d = std::max(d, state.b.row(i).abs().maxCoeff());
    return d;
  };
  auto node_dev = [&](Eigen::Index j) {
    return std::max(std::abs(state.u(j)), state.w.row(j).abs().maxCoeff());
  };

  for (Eigen::Index k = 0; k < buf; ++k) {
    if (cell_dev(n - 1 - k) > tol || node_dev(n - k) > tol) return true;
    if (problem == ProblemType::Cauchy) {
      if (cell_dev(k) > tol || node_dev(k) > tol) return true;
    }
  }
  return false;
}

}  // namespace mhd1d
