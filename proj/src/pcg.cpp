#include "dpg2d/pcg.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace dpg2d {

Vec pcg(const LinOp& apply_S, const LinOp& apply_M_inv, const Vec& b, const Vec& x0,
        const PcgOptions& opt, PcgReport* report) {
  PcgReport local;
  PcgReport& rep = report ? *report : local;
  rep = PcgReport{};
  rep.rhs_norm = b.norm();
  if (rep.rhs_norm == 0.0) {
    rep.converged = true;
    return Vec::Zero(b.size());
  }
  const Real target = std::max(opt.tol_rel * rep.rhs_norm, opt.tol_abs);
  Vec x = x0.size() == b.size() ? x0 : Vec(Vec::Zero(b.size()));
  Vec r = b - apply_S(x);
  if (r.norm() <= target) {
    rep.converged = true;
    return x;
  }
  Vec z = apply_M_inv(r);
  Vec p = z;
  Cplx rz = r.dot(z);
  while (rep.iterations < opt.max_iter) {
    Vec Sp = apply_S(p);
    const Cplx pSp = p.dot(Sp);
    if (!std::isfinite(pSp.real()) || !std::isfinite(pSp.imag()))
      throw std::runtime_error("pcg: non-finite values encountered");
    if (pSp.real() <= 0.0)
      throw std::runtime_error("pcg: operator not positive definite (p^H S p <= 0)");
    const Cplx alpha = rz / pSp;
    x += alpha * p;
    r -= alpha * Sp;
    ++rep.iterations;
    rep.alphas.push_back(alpha.real());
    const Real rn = r.norm();
    rep.residuals.push_back(rn);
    if (rn <= target) {
      rep.converged = true;
      break;
    }
    z = apply_M_inv(r);
    const Cplx rz_new = r.dot(z);
    const Cplx beta = rz_new / rz;
    rep.betas.push_back(beta.real());
    rz = rz_new;
    p = z + beta * p;
  }
  return x;
}

ConditionEstimate lanczos_from_report(const PcgReport& rep) {
  ConditionEstimate est;
  const int m = static_cast<int>(rep.alphas.size());
  est.iterations = m;
  if (m == 0) {
    est.complete = false;
    return est;
  }
  RMat T = RMat::Zero(m, m);
  for (int k = 0; k < m; ++k) {
    Real d = 1.0 / rep.alphas[k];
    if (k > 0) d += rep.betas[k - 1] / rep.alphas[k - 1];
    T(k, k) = d;
    if (k + 1 < m) {
      const Real off = std::sqrt(std::max(0.0, rep.betas[k])) / rep.alphas[k];
      T(k, k + 1) = off;
      T(k + 1, k) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(T);
  est.lambda_min = es.eigenvalues().minCoeff();
  est.lambda_max = es.eigenvalues().maxCoeff();
  est.kappa = est.lambda_max / est.lambda_min;
  return est;
}

ConditionEstimate estimate_condition(const LinOp& apply_S, const LinOp& apply_M_inv, const Vec& b,
                                     int n_iters) {
  PcgOptions opt;
  opt.tol_rel = 0.0;
  opt.tol_abs = 0.0;
  opt.max_iter = n_iters;
  PcgReport rep;
  try {
    pcg(apply_S, apply_M_inv, b, Vec::Zero(b.size()), opt, &rep);
  } catch (const std::runtime_error&) {
    // breakdown after stagnation: use accumulated coefficients
  }
  ConditionEstimate est = lanczos_from_report(rep);
  est.complete = rep.iterations == n_iters;
  return est;
}

}  // namespace dpg2d
