#ifndef MHD1D_VERIFY_HPP
#define MHD1D_VERIFY_HPP

#include <mhd1d/solver.hpp>

#include <array>
#include <string>
#include <vector>

namespace mhd1d {

/// Closed-form target field: base + sum of amp * g(x) * exp(-t), with
/// g either exp(-x^2) or x exp(-x^2).  First and second x-derivatives and
/// the t-derivative are analytic.
struct FieldForm {
  enum class Mode { Gauss, XGauss };
  struct Term {
    Scalar amp;
    Mode mode;
  };
  Scalar base = 0.0;
  std::vector<Term> terms;

  Scalar value(Scalar x, Scalar t) const;
  Scalar ddx(Scalar x, Scalar t) const;
  Scalar ddx2(Scalar x, Scalar t) const;
  Scalar ddt(Scalar x, Scalar t) const;
};

struct ManufacturedCase {
  std::string name;
  FieldForm v, u, theta, w1, w2, b1, b2;
};

/// Known cases: "far-field", "gaussian-decay", "volume-exact".
ManufacturedCase named_case(const std::string& name);

struct MmsSources {
  Scalar v, u, theta;
  Vec2 w, m;
};

/// Per-equation residual sources of the targets, closed form.
MmsSources mms_sources(const ManufacturedCase& c, Scalar x, Scalar t,
                       const Params& params);

/// Forcing adapter for the solver.
Forcing make_forcing(const ManufacturedCase& c, const Params& params);

/// Targets sampled on the staggered mesh at time t.
State sample_state(const ManufacturedCase& c, const Grid& grid, Scalar t);

inline constexpr std::array<const char*, 7> kMmsFieldNames = {
    "v", "u", "theta", "b1", "b2", "w1", "w2"};

struct ConvergenceLevel {
  Eigen::Index n;
  Scalar dx;
  Scalar dt;
  std::array<Scalar, 7> errors;  // L2 errors at t_end, order of kMmsFieldNames
};

struct ConvergenceTable {
  std::vector<ConvergenceLevel> levels;
  // orders[k][f] = log2(err[k][f] / err[k+1][f]); NaN where errors vanish
  std::vector<std::array<Scalar, 7>> orders;
  bool all_exact = false;
};

/// Nested refinement study with dt scaled as dx^2.
ConvergenceTable convergence_order(const ManufacturedCase& c, ProblemType problem,
                                   DomainKind kind, Scalar L, Eigen::Index base_n,
                                   int levels, const SchemeConfig& base_scheme,
                                   const Params& params);

/// Runs the far-field constant state a fixed number of steps; returns the
/// max deviation from (1,0,1,0,0) over all fields.
Scalar constant_state_soak(ProblemType problem, const Grid& grid,
                           const Params& params, const SchemeConfig& scheme,
                           long steps);

}  // namespace mhd1d

#endif
