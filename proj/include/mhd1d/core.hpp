#ifndef MHD1D_CORE_HPP
#define MHD1D_CORE_HPP

#include <mhd1d/types.hpp>

#include <optional>
#include <string>

namespace mhd1d {

enum class DomainKind { FullLine, HalfLine };

/// Truncated uniform Lagrangian mass-coordinate mesh.
/// Cells carry v, theta, b; nodes carry u, w.  FullLine covers [-L, L],
/// HalfLine covers [0, L].
struct Grid {
  DomainKind kind;
  Scalar L;
  Eigen::Index n_cells;
  Scalar dx;
  ArrayX cell_centers;   // size n_cells
  ArrayX node_positions; // size n_cells + 1

  Scalar x_left() const { return node_positions(0); }
  Scalar x_right() const { return node_positions(n_cells); }
  Scalar extent() const { return x_right() - x_left(); }
};

Grid make_grid(DomainKind kind, Scalar L, Eigen::Index n_cells);

/// One time level of the five physical fields on the staggered mesh.
struct State {
  Scalar t = 0.0;
  ArrayX v;      // cells
  ArrayX theta;  // cells
  Array2X b;     // cells
  ArrayX u;      // nodes
  Array2X w;     // nodes
};

/// Physical constants of the transport laws and the perfect-gas closure.
/// Defaults follow the unit normalization used for the estimate harness.
struct Params {
  Scalar mu1 = 1.0;    // constant part of the viscosity
  Scalar mu2 = 0.0;    // v^{-alpha} part of the viscosity
  Scalar alpha = 0.0;
  Scalar beta = 0.0;
  Scalar kappa0 = 1.0; // conductivity prefactor
  Scalar lambda = 1.0; // transverse viscosity
  Scalar nu = 1.0;     // magnetic diffusivity
  Scalar R = 1.0;
  Scalar cv = 1.0;

  void validate() const;
};

enum class ProblemType {
  Cauchy,          // full line, far field (1,0,1,0,0) on both ends
  DirichletTheta,  // half line, u=0, theta=1, b=w=0 at x=0
  NeumannTheta,    // half line, u=0, theta_x=0, b=w=0 at x=0
};

bool is_half_line(ProblemType p);

/// Affine relation of a ghost cell value to the first interior cell:
/// ghost = add + mul * interior.
struct GhostRelation {
  Scalar add = 0.0;
  Scalar mul = 0.0;
};

struct GhostRelations {
  GhostRelation v_left, v_right;
  GhostRelation theta_left, theta_right;
  GhostRelation b_left, b_right;
};

GhostRelations ghost_relations(ProblemType problem);

/// Concrete ghost cell values on both ends of a state.
struct Ghosts {
  Scalar v_left, v_right;
  Scalar theta_left, theta_right;
  Vec2 b_left, b_right;
};

Ghosts apply_boundary(const State& state, ProblemType problem);

/// Named initial-data recipe.  Gaussian bumps ride on the far-field
/// constants; Tabulated interpolates columns read by the cli layer.
struct Profile {
  enum class Kind { Constant, Gaussian, Tabulated };
  Kind kind = Kind::Constant;

  // Gaussian: field = far + amp * exp(-((x-center)/width)^2)
  Scalar amp_v = 0.0, amp_u = 0.0, amp_theta = 0.0;
  Vec2 amp_b = Vec2::Zero(), amp_w = Vec2::Zero();
  Scalar width = 1.0;
  Scalar center = 0.0;

  // Tabulated: columns (x, v, u, w1, w2, b1, b2, theta), linear interpolation.
  ArrayX tab_x;
  Eigen::Array<Scalar, Eigen::Dynamic, 7> tab_fields;

  Scalar v0(Scalar x) const;
  Scalar u0(Scalar x) const;
  Scalar theta0(Scalar x) const;
  Vec2 b0(Scalar x) const;
  Vec2 w0(Scalar x) const;
};

State make_state(const Grid& grid, const Profile& profile, ProblemType problem);

/// True when |field - far field| > tol within the 10%-of-L buffer next to an
/// artificial (truncation) boundary, i.e. the perturbation has reached it.
bool truncation_exceeded(const State& state, const Grid& grid,
                         ProblemType problem, Scalar tol = 1e-8);

}  // namespace mhd1d

#endif
