#ifndef DPG2D_PCG_HPP
#define DPG2D_PCG_HPP

#include <functional>
#include <vector>

#include "dpg2d/types.hpp"

namespace dpg2d {

using LinOp = std::function<Vec(const Vec&)>;

struct PcgReport {
  int iterations = 0;
  bool converged = false;
  std::vector<Real> residuals;  // unpreconditioned l2 residual after each step
  Real rhs_norm = 0.0;
  std::vector<Real> alphas, betas;  // CG coefficients (Lanczos data)
};

struct PcgOptions {
  Real tol_rel = 1e-6;
  Real tol_abs = 0.0;  // stop when ||r|| <= max(tol_rel*||b||, tol_abs)
  int max_iter = 500;
};

// Preconditioned conjugate gradients for Hermitian positive definite S, M.
// Aborts on non-finite values or loss of definiteness (p^H S p <= 0).
Vec pcg(const LinOp& apply_S, const LinOp& apply_M_inv, const Vec& b, const Vec& x0,
        const PcgOptions& opt, PcgReport* report = nullptr);

// Extreme eigenvalue estimates of M^{-1} S from the CG tridiagonal.
struct ConditionEstimate {
  Real lambda_min = 0.0, lambda_max = 0.0, kappa = 0.0;
  int iterations = 0;
  bool complete = true;  // false when CG stagnated before n_iters
};
ConditionEstimate estimate_condition(const LinOp& apply_S, const LinOp& apply_M_inv, const Vec& b,
                                     int n_iters);
ConditionEstimate lanczos_from_report(const PcgReport& rep);

}  // namespace dpg2d

#endif
