#ifndef MHD1D_TRIDIAG_HPP
#define MHD1D_TRIDIAG_HPP

#include <mhd1d/types.hpp>

namespace mhd1d {

/// Thomas algorithm for a tridiagonal system.  lower(0) and upper(n-1) are
/// ignored.  Throws SolverBreakdown on a vanishing pivot.
ArrayX thomas_solve(const ArrayX& lower, const ArrayX& diag,
                    const ArrayX& upper, const ArrayX& rhs);

enum class DiffusionBC {
  NeumannZero,  // zero-flux ends (boundary interface coefficient dropped)
  GhostAffine,  // ghost = add + mul * first interior, folded into the matrix
};

/// Solves (I - dt * Dx(coeff * Dx)) f = rhs on a uniform mesh of spacing dx.
/// coeff lives on interfaces (size n+1 for an n-point field); the resulting
/// system is diagonally dominant whenever coeff >= 0 and dt > 0.
ArrayX diffusion_solve(const ArrayX& coeff, const ArrayX& rhs, Scalar dt,
                       Scalar dx, DiffusionBC bc = DiffusionBC::NeumannZero,
                       Scalar ghost_add_left = 0.0, Scalar ghost_mul_left = 0.0,
                       Scalar ghost_add_right = 0.0, Scalar ghost_mul_right = 0.0);

}  // namespace mhd1d

#endif
