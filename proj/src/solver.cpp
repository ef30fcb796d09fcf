#include <mhd1d/solver.hpp>

#include <mhd1d/constitutive.hpp>
#include <mhd1d/tridiag.hpp>

#include <cmath>

namespace mhd1d {

void SchemeConfig::validate() const {
  if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("scheme: cfl must be in (0,1]");
  if (!(dt_max > 0.0)) throw ConfigError("scheme: dt_max must be positive");
  if (!(t_end > 0.0)) throw ConfigError("scheme: t_end must be positive");
  if (record_stride < 1) throw ConfigError("scheme: record_stride must be >= 1");
  if (!(positivity_floor > 0.0)) throw ConfigError("scheme: positivity_floor must be positive");
}

ArrayX dx_node_to_cell(const ArrayX& node_field, Scalar dx) {
  const Eigen::Index n = node_field.size() - 1;
  return (node_field.tail(n) - node_field.head(n)) / dx;
}

ArrayX dx_cell_to_node(const ArrayX& cell_field, Scalar dx,
                       Scalar ghost_left, Scalar ghost_right) {
  const Eigen::Index n = cell_field.size();
  ArrayX out(n + 1);
  out(0) = (cell_field(0) - ghost_left) / dx;
  for (Eigen::Index j = 1; j < n; ++j)
    out(j) = (cell_field(j) - cell_field(j - 1)) / dx;
  out(n) = (ghost_right - cell_field(n - 1)) / dx;
  return out;
}

namespace {

Scalar harmonic(Scalar a, Scalar b) { return 2.0 * a * b / (a + b); }

// Interface values of a per-cell coefficient, harmonic means, ghosts at ends.
ArrayX interface_harmonic(const ArrayX& cell_coeff, Scalar ghost_left, Scalar ghost_right) {
  const Eigen::Index n = cell_coeff.size();
  ArrayX out(n + 1);
  out(0) = harmonic(ghost_left, cell_coeff(0));
  for (Eigen::Index j = 1; j < n; ++j)
    out(j) = harmonic(cell_coeff(j - 1), cell_coeff(j));
  out(n) = harmonic(cell_coeff(n - 1), ghost_right);
  return out;
}

ArrayX avg_node_to_cell(const ArrayX& node_field) {
  const Eigen::Index n = node_field.size() - 1;
  return 0.5 * (node_field.head(n) + node_field.tail(n));
}

void check_floor(const ArrayX& field, const char* name, const Grid& grid,
                 Scalar floor, Scalar t, bool on_cells) {
  Eigen::Index i;
  const Scalar m = field.minCoeff(&i);
  if (m < floor) {
    const Scalar x = on_cells ? grid.cell_centers(i) : grid.node_positions(i);
    throw PositivityBreach(name, i, x, t);
  }
}

struct GhostScalars {
  Scalar left, right;
};

GhostScalars ghost_of(const ArrayX& cells, const GhostRelation& l, const GhostRelation& r) {
  const Eigen::Index n = cells.size();
  return {l.add + l.mul * cells(0), r.add + r.mul * cells(n - 1)};
}

// Boundary energy flux of the balance law at both domain ends, evaluated on a
// state (u = w = 0 at end nodes, so only conduction and resistive terms live).
void boundary_fluxes(const State& s, const Grid& grid, ProblemType problem,
                     const Params& params, Scalar& flux_left, Scalar& flux_right) {
  const Eigen::Index n = grid.n_cells;
  const Scalar dx = grid.dx;
  const Ghosts g = apply_boundary(s, problem);

  // gradient oriented in +x: left end (cell - ghost)/dx, right (ghost - cell)/dx
  auto end_flux = [&](Scalar vg, Scalar tg, const Vec2& bg, Scalar vc, Scalar tc,
                      const Vec2& bc, bool left) {
    const Scalar kg = conductivity_kappa(tg, params) / vg;
    const Scalar kc = conductivity_kappa(tc, params) / vc;
    const Scalar khat = harmonic(kg, kc);
    const Scalar vhat = harmonic(vg, vc);
    const Scalar theta_x = left ? (tc - tg) / dx : (tg - tc) / dx;
    const Vec2 b_x = left ? Vec2((bc - bg) / dx) : Vec2((bg - bc) / dx);
    const Vec2 b_node = 0.5 * (bc + bg);
    return khat * theta_x + params.nu * b_node.dot(b_x) / vhat;
  };

  flux_left = end_flux(g.v_left, g.theta_left, g.b_left, s.v(0), s.theta(0),
                       s.b.row(0).matrix().transpose(), true);
  flux_right = end_flux(g.v_right, g.theta_right, g.b_right, s.v(n - 1),
                        s.theta(n - 1), s.b.row(n - 1).matrix().transpose(), false);
}

}  // namespace

Scalar total_energy(const State& s, const Grid& grid, const Params& params) {
  const ArrayX kin_nodes = 0.5 * (s.u.square() + s.w.col(0).square() + s.w.col(1).square());
  const ArrayX kin = avg_node_to_cell(kin_nodes);
  const ArrayX mag = 0.5 * s.v * (s.b.col(0).square() + s.b.col(1).square());
  return grid.dx * (params.cv * s.theta + kin + mag).sum();
}

ArrayX sigma_cells(const State& s, const Grid& grid, const Params& params) {
  const Eigen::Index n = grid.n_cells;
  const ArrayX ux = dx_node_to_cell(s.u, grid.dx);
  ArrayX out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar mu = viscosity_mu(s.v(i), params);
    out(i) = mu * ux(i) / s.v(i) -
             (params.R * s.theta(i) / s.v(i) + 0.5 * s.b.row(i).matrix().squaredNorm());
  }
  return out;
}

Scalar dt_control(const State& s, const Grid& grid, const Params& params,
                  const SchemeConfig& scheme) {
  const Eigen::Index n = grid.n_cells;
  const Scalar gamma = 1.0 + params.R / params.cv;

  Scalar max_wave = std::sqrt(gamma * params.R);  // far-field floor estimate
  Scalar min_v = s.v.minCoeff();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar P = params.R * s.theta(i) / s.v(i);
    const Scalar wave =
        std::sqrt((gamma * P + s.b.row(i).matrix().squaredNorm()) / s.v(i));
    max_wave = std::max(max_wave, wave);
  }

  Scalar dt = std::min(scheme.dt_max, scheme.cfl * grid.dx / max_wave);
  if (scheme.integrator == Integrator::SemiImplicit) {
    const Scalar diff = std::max(params.nu, params.lambda);
    dt = std::min(dt, scheme.cfl * grid.dx * grid.dx * min_v / diff);
  } else {
    Scalar diff = std::max(params.nu, params.lambda);
    diff = std::max(diff, params.mu1 + params.mu2 * std::pow(min_v, -params.alpha));
    diff = std::max(diff, params.kappa0 * std::pow(s.theta.maxCoeff(), params.beta) / params.cv);
    dt = std::min(dt, 0.5 * scheme.cfl * grid.dx * grid.dx * min_v * min_v / diff);
  }
  const Scalar remaining = scheme.t_end - s.t;
  if (remaining > 0.0) dt = std::min(dt, remaining);
  return dt;
}

namespace {

StepReport semi_implicit_step(State& s, const Grid& grid, ProblemType problem,
                              const Params& params, const SchemeConfig& scheme,
                              Scalar dt, const Forcing* forcing) {
  const Eigen::Index n = grid.n_cells;
  const Scalar dx = grid.dx;
  const Scalar r = dt / (dx * dx);
  const Scalar t_old = s.t;
  const Scalar t_new = t_old + dt;
  const GhostRelations rel = ghost_relations(problem);
  const Scalar E_old = total_energy(s, grid, params);

  // (a) volume: exact discrete form of v_t = u_x
  ArrayX v_new = s.v + dt * dx_node_to_cell(s.u, dx);
  if (forcing && forcing->v)
    for (Eigen::Index i = 0; i < n; ++i) v_new(i) += dt * forcing->v(grid.cell_centers(i), t_old);
  check_floor(v_new, "v", grid, scheme.positivity_floor, t_new, true);

  // (b) longitudinal velocity: implicit diffusion, explicit (P + |b|^2/2)_x
  ArrayX a(n);  // mu/v^{n+1} per cell
  for (Eigen::Index i = 0; i < n; ++i) a(i) = viscosity_mu(v_new(i), params) / v_new(i);
  ArrayX q(n);  // P^n + |b^n|^2/2 per cell
  for (Eigen::Index i = 0; i < n; ++i)
    q(i) = params.R * s.theta(i) / s.v(i) + 0.5 * s.b.row(i).matrix().squaredNorm();

  ArrayX u_new = ArrayX::Zero(n + 1);  // u = 0 at both end nodes, all regimes
  {
    const Eigen::Index m = n - 1;
    ArrayX lo(m), di(m), up(m), rhs(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index j = k + 1;
      di(k) = 1.0 + r * (a(j) + a(j - 1));
      lo(k) = -r * a(j - 1);
      up(k) = -r * a(j);
      rhs(k) = s.u(j) - dt * (q(j) - q(j - 1)) / dx;
      if (forcing && forcing->u) rhs(k) += dt * forcing->u(grid.node_positions(j), t_new);
    }
    u_new.segment(1, m) = thomas_solve(lo, di, up, rhs);
  }

  // (c) transverse velocity: implicit diffusion, explicit b_x
  Array2X w_new = Array2X::Zero(n + 1, 2);
  Array2X b_new = Array2X::Zero(n, 2);
  if (scheme.include_magnetic) {
    const Eigen::Index m = n - 1;
    ArrayX lo(m), di(m), up(m), rhs(m);
    for (int comp = 0; comp < 2; ++comp) {
      for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index j = k + 1;
        const Scalar al = params.lambda / v_new(j - 1);
        const Scalar ar = params.lambda / v_new(j);
        di(k) = 1.0 + r * (ar + al);
        lo(k) = -r * al;
        up(k) = -r * ar;
        rhs(k) = s.w(j, comp) + dt * (s.b(j, comp) - s.b(j - 1, comp)) / dx;
        if (forcing && forcing->w)
          rhs(k) += dt * forcing->w(grid.node_positions(j), t_new)(comp);
      }
      w_new.col(comp).segment(1, m) = thomas_solve(lo, di, up, rhs);
    }

    // (d) magnetic field: conservative variable m = v b, implicit resistivity,
    // explicit (in space) w_x at the new time level
    const GhostScalars vg = ghost_of(v_new, rel.v_left, rel.v_right);
    const ArrayX vhat = interface_harmonic(v_new, vg.left, vg.right);
    const ArrayX chat = params.nu / vhat;
    ArrayX clo(n), cdi(n), cup(n), crhs(n);
    for (int comp = 0; comp < 2; ++comp) {
      for (Eigen::Index i = 0; i < n; ++i) {
        cdi(i) = v_new(i) + r * (chat(i + 1) + chat(i));
        clo(i) = -r * chat(i);
        cup(i) = -r * chat(i + 1);
        crhs(i) = s.v(i) * s.b(i, comp) + dt * (w_new(i + 1, comp) - w_new(i, comp)) / dx;
        if (forcing && forcing->m)
          crhs(i) += dt * forcing->m(grid.cell_centers(i), t_new)(comp);
      }
      // fold ghost relations of b into the end rows
      cdi(0) = v_new(0) + r * (chat(1) + chat(0) * (1.0 - rel.b_left.mul));
      crhs(0) += r * chat(0) * rel.b_left.add;
      cdi(n - 1) = v_new(n - 1) + r * (chat(n - 1) + chat(n) * (1.0 - rel.b_right.mul));
      crhs(n - 1) += r * chat(n) * rel.b_right.add;
      b_new.col(comp) = thomas_solve(clo, cdi, cup, crhs);
    }
  }

  // (e) temperature: implicit conduction, linearly implicit work term,
  // dissipation from the updated gradients
  const ArrayX ux_new = dx_node_to_cell(u_new, dx);
  ArrayX diss(n);
  {
    ArrayX grad2 = ArrayX::Zero(n);
    if (scheme.include_magnetic) {
      const ArrayX wx1 = dx_node_to_cell(w_new.col(0), dx);
      const ArrayX wx2 = dx_node_to_cell(w_new.col(1), dx);
      grad2 += params.lambda * (wx1.square() + wx2.square());
      for (int comp = 0; comp < 2; ++comp) {
        const ArrayX bc = b_new.col(comp);
        const Scalar gl = rel.b_left.add + rel.b_left.mul * bc(0);
        const Scalar gr = rel.b_right.add + rel.b_right.mul * bc(n - 1);
        const ArrayX bx = dx_cell_to_node(bc, dx, gl, gr);
        const ArrayX bx2 = bx.square();
        grad2 += params.nu * avg_node_to_cell(bx2);
      }
    }
    for (Eigen::Index i = 0; i < n; ++i)
      diss(i) = (viscosity_mu(v_new(i), params) * ux_new(i) * ux_new(i) + grad2(i)) / v_new(i);
  }

  ArrayX kv(n);  // kappa(theta^n)/v^{n+1} per cell
  for (Eigen::Index i = 0; i < n; ++i)
    kv(i) = conductivity_kappa(s.theta(i), params) / v_new(i);
  const GhostScalars tg = ghost_of(s.theta, rel.theta_left, rel.theta_right);
  const GhostScalars vg2 = ghost_of(v_new, rel.v_left, rel.v_right);
  const ArrayX khat = interface_harmonic(
      kv, conductivity_kappa(std::max(tg.left, scheme.positivity_floor), params) / vg2.left,
      conductivity_kappa(std::max(tg.right, scheme.positivity_floor), params) / vg2.right);

  ArrayX tlo(n), tdi(n), tup(n), trhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    tdi(i) = params.cv + dt * params.R * ux_new(i) / v_new(i) + r * (khat(i + 1) + khat(i));
    tlo(i) = -r * khat(i);
    tup(i) = -r * khat(i + 1);
    trhs(i) = params.cv * s.theta(i) + dt * diss(i);
    if (forcing && forcing->theta) trhs(i) += dt * forcing->theta(grid.cell_centers(i), t_new);
  }
  tdi(0) = params.cv + dt * params.R * ux_new(0) / v_new(0) +
           r * (khat(1) + khat(0) * (1.0 - rel.theta_left.mul));
  trhs(0) += r * khat(0) * rel.theta_left.add;
  tdi(n - 1) = params.cv + dt * params.R * ux_new(n - 1) / v_new(n - 1) +
               r * (khat(n - 1) + khat(n) * (1.0 - rel.theta_right.mul));
  trhs(n - 1) += r * khat(n) * rel.theta_right.add;
  ArrayX theta_new = thomas_solve(tlo, tdi, tup, trhs);
  check_floor(theta_new, "theta", grid, scheme.positivity_floor, t_new, true);

  s.v = std::move(v_new);
  s.u = std::move(u_new);
  s.w = std::move(w_new);
  s.b = std::move(b_new);
  s.theta = std::move(theta_new);
  s.t = t_new;

  StepReport rep;
  rep.t = t_new;
  rep.dt = dt;
  boundary_fluxes(s, grid, problem, params, rep.flux_left, rep.flux_right);
  rep.energy_residual =
      total_energy(s, grid, params) - E_old - dt * (rep.flux_right - rep.flux_left);
  rep.min_v = s.v.minCoeff();
  rep.min_theta = s.theta.minCoeff();
  return rep;
}

StepReport explicit_step(State& s, const Grid& grid, ProblemType problem,
                         const Params& params, const SchemeConfig& scheme,
                         Scalar dt, const Forcing* forcing) {
  const Eigen::Index n = grid.n_cells;
  const Scalar dx = grid.dx;
  const Scalar t_old = s.t;
  const Scalar t_new = t_old + dt;
  const GhostRelations rel = ghost_relations(problem);
  const Scalar E_old = total_energy(s, grid, params);

  const ArrayX ux = dx_node_to_cell(s.u, dx);
  const ArrayX sig = sigma_cells(s, grid, params);

  ArrayX v_new = s.v + dt * ux;
  if (forcing && forcing->v)
    for (Eigen::Index i = 0; i < n; ++i) v_new(i) += dt * forcing->v(grid.cell_centers(i), t_old);
  check_floor(v_new, "v", grid, scheme.positivity_floor, t_new, true);

  ArrayX u_new = ArrayX::Zero(n + 1);
  for (Eigen::Index j = 1; j < n; ++j) {
    u_new(j) = s.u(j) + dt * (sig(j) - sig(j - 1)) / dx;
    if (forcing && forcing->u) u_new(j) += dt * forcing->u(grid.node_positions(j), t_old);
  }

  Array2X w_new = Array2X::Zero(n + 1, 2);
  Array2X b_new = Array2X::Zero(n, 2);
  if (scheme.include_magnetic) {
    const GhostScalars vg = ghost_of(s.v, rel.v_left, rel.v_right);
    const ArrayX vhat = interface_harmonic(s.v, vg.left, vg.right);
    for (int comp = 0; comp < 2; ++comp) {
      const ArrayX wx = dx_node_to_cell(s.w.col(comp), dx);
      const ArrayX flux_w = params.lambda * wx / s.v;
      for (Eigen::Index j = 1; j < n; ++j) {
        w_new(j, comp) = s.w(j, comp) +
                         dt * ((flux_w(j) - flux_w(j - 1)) / dx +
                               (s.b(j, comp) - s.b(j - 1, comp)) / dx);
        if (forcing && forcing->w)
          w_new(j, comp) += dt * forcing->w(grid.node_positions(j), t_old)(comp);
      }
      const ArrayX bc = s.b.col(comp);
      const Scalar gl = rel.b_left.add + rel.b_left.mul * bc(0);
      const Scalar gr = rel.b_right.add + rel.b_right.mul * bc(n - 1);
      const ArrayX bx = dx_cell_to_node(bc, dx, gl, gr);
      const ArrayX flux_b = params.nu * bx / vhat;
      for (Eigen::Index i = 0; i < n; ++i) {
        Scalar m_new = s.v(i) * bc(i) +
                       dt * ((s.w(i + 1, comp) - s.w(i, comp)) / dx +
                             (flux_b(i + 1) - flux_b(i)) / dx);
        if (forcing && forcing->m)
          m_new += dt * forcing->m(grid.cell_centers(i), t_old)(comp);
        b_new(i, comp) = m_new / v_new(i);
      }
    }
  }

  ArrayX kv(n);
  for (Eigen::Index i = 0; i < n; ++i)
    kv(i) = conductivity_kappa(s.theta(i), params) / s.v(i);
  const GhostScalars tg = ghost_of(s.theta, rel.theta_left, rel.theta_right);
  const GhostScalars vg = ghost_of(s.v, rel.v_left, rel.v_right);
  const ArrayX khat = interface_harmonic(
      kv, conductivity_kappa(std::max(tg.left, scheme.positivity_floor), params) / vg.left,
      conductivity_kappa(std::max(tg.right, scheme.positivity_floor), params) / vg.right);
  const ArrayX thx = dx_cell_to_node(s.theta, dx, tg.left, tg.right);
  const ArrayX K = khat * thx;

  ArrayX grad2 = ArrayX::Zero(n);
  if (scheme.include_magnetic) {
    const ArrayX wx1 = dx_node_to_cell(s.w.col(0), dx);
    const ArrayX wx2 = dx_node_to_cell(s.w.col(1), dx);
    grad2 += params.lambda * (wx1.square() + wx2.square());
    for (int comp = 0; comp < 2; ++comp) {
      const ArrayX bc = s.b.col(comp);
      const Scalar gl = rel.b_left.add + rel.b_left.mul * bc(0);
      const Scalar gr = rel.b_right.add + rel.b_right.mul * bc(n - 1);
      const ArrayX bx = dx_cell_to_node(bc, dx, gl, gr);
      grad2 += params.nu * avg_node_to_cell(bx.square().eval());
    }
  }

  ArrayX theta_new(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar cond = (K(i + 1) - K(i)) / dx;
    const Scalar work = params.R * s.theta(i) * ux(i) / s.v(i);
    const Scalar diss =
        (viscosity_mu(s.v(i), params) * ux(i) * ux(i) + grad2(i)) / s.v(i);
    Scalar src = 0.0;
    if (forcing && forcing->theta) src = forcing->theta(grid.cell_centers(i), t_old);
    theta_new(i) = s.theta(i) + dt * (cond - work + diss + src) / params.cv;
  }
  check_floor(theta_new, "theta", grid, scheme.positivity_floor, t_new, true);

  s.v = std::move(v_new);
  s.u = std::move(u_new);
  s.w = std::move(w_new);
  s.b = std::move(b_new);
  s.theta = std::move(theta_new);
  s.t = t_new;

  StepReport rep;
  rep.t = t_new;
  rep.dt = dt;
  boundary_fluxes(s, grid, problem, params, rep.flux_left, rep.flux_right);
  rep.energy_residual =
      total_energy(s, grid, params) - E_old - dt * (rep.flux_right - rep.flux_left);
  rep.min_v = s.v.minCoeff();
  rep.min_theta = s.theta.minCoeff();
  return rep;
}

}  // namespace

StepReport step(State& state, const Grid& grid, ProblemType problem,
                const Params& params, const SchemeConfig& scheme, Scalar dt,
                const Forcing* forcing) {
  if (scheme.integrator == Integrator::SemiImplicit)
    return semi_implicit_step(state, grid, problem, params, scheme, dt, forcing);
  return explicit_step(state, grid, problem, params, scheme, dt, forcing);
}

Trajectory run(const State& initial, const Grid& grid, ProblemType problem,
               const Params& params, const SchemeConfig& scheme,
               const std::vector<Scalar>& probe_coords, const Forcing* forcing) {
  params.validate();
  scheme.validate();

  Trajectory traj;
  State s = initial;
  const Eigen::Index n = grid.n_cells;

  for (const Scalar c : probe_coords) {
    Eigen::Index best = 0;
    Scalar dist = std::abs(grid.node_positions(0) - c);
    for (Eigen::Index j = 1; j <= n; ++j) {
      const Scalar d = std::abs(grid.node_positions(j) - c);
      if (d < dist) { dist = d; best = j; }
    }
    traj.probes.node_index.push_back(best);
    traj.probes.coords.push_back(grid.node_positions(best));
    traj.probes.sigma.emplace_back();
  }

  auto record_sigma = [&]() {
    traj.probes.times.push_back(s.t);
    if (traj.probes.node_index.empty()) return;
    const ArrayX sc = sigma_cells(s, grid, params);
    for (std::size_t p = 0; p < traj.probes.node_index.size(); ++p) {
      const Eigen::Index j = traj.probes.node_index[p];
      Scalar val;
      if (j == 0) val = sc(0);
      else if (j == n) val = sc(n - 1);
      else val = 0.5 * (sc(j - 1) + sc(j));
      traj.probes.sigma[p].push_back(val);
    }
  };

  auto record_state = [&](std::size_t step_index) {
    traj.record_times.push_back(s.t);
    traj.states.push_back(s);
    traj.record_step_index.push_back(step_index);
    if (truncation_exceeded(s, grid, problem))
      traj.truncation_warning_times.push_back(s.t);
  };

  record_sigma();
  record_state(0);

  std::size_t step_count = 0;
  const Scalar eps = 1e-12 * std::max<Scalar>(1.0, scheme.t_end);
  while (scheme.t_end - s.t > eps) {
    const Scalar dt = dt_control(s, grid, params, scheme);
    traj.reports.push_back(step(s, grid, problem, params, scheme, dt, forcing));
    ++step_count;
    record_sigma();
    const bool done = scheme.t_end - s.t <= eps;
    if (done || step_count % static_cast<std::size_t>(scheme.record_stride) == 0)
      record_state(step_count);
  }
  return traj;
}

}  // namespace mhd1d
