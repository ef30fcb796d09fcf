#include <mhd1d/tridiag.hpp>

#include <cmath>

namespace mhd1d {

ArrayX thomas_solve(const ArrayX& lower, const ArrayX& diag,
                    const ArrayX& upper, const ArrayX& rhs) {
  const Eigen::Index n = diag.size();
  ArrayX c(n), d(n);
  Scalar piv = diag(0);
  if (piv == 0.0 || !std::isfinite(piv)) throw SolverBreakdown("thomas: zero pivot at row 0");
  c(0) = upper(0) / piv;
  d(0) = rhs(0) / piv;
  for (Eigen::Index i = 1; i < n; ++i) {
    piv = diag(i) - lower(i) * c(i - 1);
    if (piv == 0.0 || !std::isfinite(piv))
      throw SolverBreakdown("thomas: zero pivot at row " + std::to_string(i));
    c(i) = upper(i) / piv;
    d(i) = (rhs(i) - lower(i) * d(i - 1)) / piv;
  }
  ArrayX x(n);
  x(n - 1) = d(n - 1);
  for (Eigen::Index i = n - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

ArrayX diffusion_solve(const ArrayX& coeff, const ArrayX& rhs, Scalar dt,
                       Scalar dx, DiffusionBC bc,
                       Scalar ghost_add_left, Scalar ghost_mul_left,
                       Scalar ghost_add_right, Scalar ghost_mul_right) {
  const Eigen::Index n = rhs.size();
  const Scalar r = dt / (dx * dx);
  ArrayX lower = ArrayX::Zero(n), diag = ArrayX::Ones(n), upper = ArrayX::Zero(n);
  ArrayX b = rhs;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Scalar cl = coeff(i), cr = coeff(i + 1);
    if (i > 0) {
      diag(i) += r * cl;
      lower(i) = -r * cl;
    }
    if (i < n - 1) {
      diag(i) += r * cr;
      upper(i) = -r * cr;
    }
  }
  if (bc == DiffusionBC::GhostAffine) {
    diag(0) += r * coeff(0) * (1.0 - ghost_mul_left);
    b(0) += r * coeff(0) * ghost_add_left;
    diag(n - 1) += r * coeff(n) * (1.0 - ghost_mul_right);
    b(n - 1) += r * coeff(n) * ghost_add_right;
  }
  return thomas_solve(lower, diag, upper, b);
}

}  // namespace mhd1d
