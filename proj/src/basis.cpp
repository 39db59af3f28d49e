#include "dpg2d/basis.hpp"

#include <cmath>
#include <stdexcept>

namespace dpg2d {

QuadRule gauss01(int n) {
  if (n < 1) throw std::invalid_argument("gauss01: n >= 1 required");
  QuadRule rule;
  rule.points.resize(n);
  rule.weights.resize(n);
  // Newton on P_n roots in (-1,1), then map to [0,1].
  for (int i = 0; i < n; ++i) {
    Real t = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      Real dp = n * (t * p1 - p0) / (t * t - 1.0);
      Real dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    Real p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      Real p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    Real dp = n * (t * p1 - p0) / (t * t - 1.0);
    rule.points[n - 1 - i] = 0.5 * (t + 1.0);
    rule.weights[n - 1 - i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
  return rule;
}

Real legendre(int k, Real x) {
  Real t = 2.0 * x - 1.0;
  Real p0 = 1.0;
  if (k == 0) return p0;
  Real p1 = t;
  for (int j = 2; j <= k; ++j) {
    Real p2 = ((2 * j - 1) * t * p1 - (j - 1) * p0) / j;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

Real legendre_deriv(int k, Real x) {
  if (k == 0) return 0.0;
  Real t = 2.0 * x - 1.0;
  // dP_k/dt via (t^2-1) P_k' = k (t P_k - P_{k-1}); handle |t| = 1 separately.
  Real pk = legendre(k, x);
  Real pkm1 = legendre(k - 1, x);
  if (std::abs(t * t - 1.0) < 1e-14) {
    Real sign = (t > 0) ? 1.0 : ((k % 2 == 0) ? -1.0 : 1.0);
    return 2.0 * sign * 0.5 * k * (k + 1);
  }
  return 2.0 * k * (t * pk - pkm1) / (t * t - 1.0);
}

Real hier(int k, Real x) {
  if (k == 0) return 1.0 - x;
  if (k == 1) return x;
  // integrated Legendre: Lhat_k(x) = (P_k(t) - P_{k-2}(t)) / (2(2k-1)), t = 2x-1
  return (legendre(k, x) - legendre(k - 2, x)) / (2.0 * (2 * k - 1));
}

Real hier_deriv(int k, Real x) {
  if (k == 0) return -1.0;
  if (k == 1) return 1.0;
  return legendre(k - 1, x);
}

Basis1D::Basis1D(int order_, const RVec& pts) : order(order_) {
  const int n = static_cast<int>(pts.size());
  hier_val.resize(order + 1, n);
  hier_der.resize(order + 1, n);
  leg_val.resize(order + 1, n);
  leg_der.resize(order + 1, n);
  for (int k = 0; k <= order; ++k)
    for (int i = 0; i < n; ++i) {
      hier_val(k, i) = hier(k, pts[i]);
      hier_der(k, i) = hier_deriv(k, pts[i]);
      leg_val(k, i) = legendre(k, pts[i]);
      leg_der(k, i) = legendre_deriv(k, pts[i]);
    }
}

ScalarSpace::ScalarSpace(int r_) : r(r_) {
  for (int a = 0; a <= r; ++a)
    for (int b = 0; b <= r; ++b) idx.emplace_back(a, b);
}

VectorSpace::VectorSpace(int r_) : r(r_) {
  for (int a = 0; a <= r; ++a)
    for (int b = 0; b < r; ++b) idx1.emplace_back(a, b);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b <= r; ++b) idx2.emplace_back(a, b);
}

ScalarTab tabulate_scalar(const ScalarSpace& s, const QuadRule& q) {
  const int n = static_cast<int>(q.points.size());
  Basis1D b(s.r, q.points);
  ScalarTab t;
  t.val.resize(s.dim(), n * n);
  t.dx.resize(s.dim(), n * n);
  t.dy.resize(s.dim(), n * n);
  for (int k = 0; k < s.dim(); ++k) {
    auto [a, bb] = s.idx[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int pt = i * n + j;  // x slow, y fast
        t.val(k, pt) = b.hier_val(a, i) * b.hier_val(bb, j);
        t.dx(k, pt) = b.hier_der(a, i) * b.hier_val(bb, j);
        t.dy(k, pt) = b.hier_val(a, i) * b.hier_der(bb, j);
      }
  }
  return t;
}

VectorTab tabulate_vector(const VectorSpace& v, const QuadRule& q) {
  const int n = static_cast<int>(q.points.size());
  Basis1D b(v.r, q.points);
  VectorTab t;
  const int d = v.dim();
  t.v1 = RMat::Zero(d, n * n);
  t.v2 = RMat::Zero(d, n * n);
  t.div = RMat::Zero(d, n * n);
  int k = 0;
  for (auto [a, bb] : v.idx1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int pt = i * n + j;
        t.v1(k, pt) = b.hier_val(a, i) * b.leg_val(bb, j);
        t.div(k, pt) = b.hier_der(a, i) * b.leg_val(bb, j);
      }
    ++k;
  }
  for (auto [a, bb] : v.idx2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int pt = i * n + j;
        t.v2(k, pt) = b.leg_val(a, i) * b.hier_val(bb, j);
        t.div(k, pt) = b.leg_val(a, i) * b.hier_der(bb, j);
      }
    ++k;
  }
  return t;
}

EdgeTab tabulate_edge(const ScalarSpace& s, const VectorSpace& v, int edge, const QuadRule& q1d) {
  const int n = static_cast<int>(q1d.points.size());
  Basis1D b(std::max(s.r, v.r), q1d.points);
  // endpoint values of the 1d hierarchical basis
  auto at0 = [&](int k) { return hier(k, 0.0); };
  auto at1 = [&](int k) { return hier(k, 1.0); };
  EdgeTab t;
  t.q = RMat::Zero(s.dim(), n);
  t.vn = RMat::Zero(v.dim(), n);
  for (int k = 0; k < s.dim(); ++k) {
    auto [a, bb] = s.idx[k];
    for (int i = 0; i < n; ++i) {
      switch (edge) {
        case 0: t.q(k, i) = b.hier_val(a, i) * at0(bb); break;
        case 1: t.q(k, i) = at1(a) * b.hier_val(bb, i); break;
        case 2: t.q(k, i) = b.hier_val(a, i) * at1(bb); break;
        default: t.q(k, i) = at0(a) * b.hier_val(bb, i); break;
      }
    }
  }
  int k = 0;
  for (auto [a, bb] : v.idx1) {
    // x-component contributes on east/west edges
    for (int i = 0; i < n; ++i) {
      if (edge == 1) t.vn(k, i) = at1(a) * b.leg_val(bb, i);
      if (edge == 3) t.vn(k, i) = -at0(a) * b.leg_val(bb, i);
    }
    ++k;
  }
  for (auto [a, bb] : v.idx2) {
    for (int i = 0; i < n; ++i) {
      if (edge == 0) t.vn(k, i) = -b.leg_val(a, i) * at0(bb);
      if (edge == 2) t.vn(k, i) = b.leg_val(a, i) * at1(bb);
    }
    ++k;
  }
  return t;
}

}  // namespace dpg2d
