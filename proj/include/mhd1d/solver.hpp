#ifndef MHD1D_SOLVER_HPP
#define MHD1D_SOLVER_HPP

#include <mhd1d/core.hpp>

#include <functional>
#include <vector>

namespace mhd1d {

enum class Integrator { SemiImplicit, ExplicitOracle };

struct SchemeConfig {
  Scalar dt_max = 1e-2;
  Scalar cfl = 0.5;
  Scalar t_end = 1.0;
  Integrator integrator = Integrator::SemiImplicit;
  Scalar positivity_floor = 1e-10;
  Eigen::Index record_stride = 10;
  bool include_magnetic = true;  // false: transverse/magnetic sub-steps off

  void validate() const;
};

struct StepReport {
  Scalar t = 0.0;   // time after the step
  Scalar dt = 0.0;
  Scalar flux_left = 0.0;   // total energy flux of the balance law, left end
  Scalar flux_right = 0.0;
  Scalar energy_residual = 0.0;
  Scalar min_v = 0.0;
  Scalar min_theta = 0.0;
};

/// Optional manufactured source terms; evaluated at (x, t).
struct Forcing {
  std::function<Scalar(Scalar, Scalar)> v;      // cells
  std::function<Scalar(Scalar, Scalar)> u;      // nodes
  std::function<Vec2(Scalar, Scalar)> w;        // nodes
  std::function<Vec2(Scalar, Scalar)> m;        // cells, for (v b)_t
  std::function<Scalar(Scalar, Scalar)> theta;  // cells
};

// Staggered central differences; exact for linears.
ArrayX dx_node_to_cell(const ArrayX& node_field, Scalar dx);
ArrayX dx_cell_to_node(const ArrayX& cell_field, Scalar dx,
                       Scalar ghost_left, Scalar ghost_right);

Scalar dt_control(const State& state, const Grid& grid, const Params& params,
                  const SchemeConfig& scheme);

StepReport step(State& state, const Grid& grid, ProblemType problem,
                const Params& params, const SchemeConfig& scheme, Scalar dt,
                const Forcing* forcing = nullptr);

/// Recorded sigma samples at probe nodes, one sample per accepted step.
struct ProbeHistory {
  std::vector<Eigen::Index> node_index;  // one per probe
  std::vector<Scalar> coords;            // node positions of the probes
  std::vector<Scalar> times;             // t_0 = initial time, then each step
  std::vector<std::vector<Scalar>> sigma;  // [probe][time index]
};

struct Trajectory {
  std::vector<Scalar> record_times;
  std::vector<State> states;
  std::vector<std::size_t> record_step_index;  // index into probes.times
  std::vector<StepReport> reports;             // one per step
  ProbeHistory probes;
  std::vector<Scalar> truncation_warning_times;
};

Trajectory run(const State& initial, const Grid& grid, ProblemType problem,
               const Params& params, const SchemeConfig& scheme,
               const std::vector<Scalar>& probe_coords = {},
               const Forcing* forcing = nullptr);

/// Effective stress per cell from a state (ux from the node field).
ArrayX sigma_cells(const State& state, const Grid& grid, const Params& params);

/// Discrete total energy: integral of c_v theta + (u^2+|w|^2)/2 + v|b|^2/2.
Scalar total_energy(const State& state, const Grid& grid, const Params& params);

}  // namespace mhd1d

#endif
