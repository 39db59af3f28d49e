#ifndef DPG2D_BASIS_HPP
#define DPG2D_BASIS_HPP

#include <vector>

#include "dpg2d/types.hpp"

namespace dpg2d {

// Gauss-Legendre rule on [0,1], exact for polynomials of degree 2n-1.
struct QuadRule {
  RVec points;
  RVec weights;
};

QuadRule gauss01(int n);

// Rule used for all element integrals at enriched order r_max:
// n_q = r_max + 2 points per direction.
inline QuadRule quadrature(int r_max) { return gauss01(r_max + 2); }

// Shifted Legendre l_k(x) = P_k(2x-1) on [0,1].
Real legendre(int k, Real x);
Real legendre_deriv(int k, Real x);

// Hierarchical scalar basis on [0,1]:
//   chi_0 = 1-x, chi_1 = x, chi_k = integrated Legendre (vanishes at 0,1), k>=2.
Real hier(int k, Real x);
Real hier_deriv(int k, Real x);

// Tabulated 1D basis values at a set of points.
// Rows are functions 0..order, columns are points.
struct Basis1D {
  int order;
  RMat hier_val, hier_der;  // (order+1) x npts
  RMat leg_val, leg_der;

  Basis1D(int order, const RVec& pts);
};

// Master-element spaces on [0,1]^2.
//
// Scalar space Q^(r,r): tensor products chi_a(x) chi_b(y).
// Vector space V^r = Q^(r,r-1) x Q^(r-1,r): first component chi_a(x) l_b(y),
// second l_a(x) chi_b(y); the hierarchical direction carries the normal trace.
// Index layouts are fixed and exposed so callers can address trace/bubble dofs.
struct ScalarSpace {
  int r;
  std::vector<std::pair<int, int>> idx;  // (a,b), a,b in 0..r
  int dim() const { return static_cast<int>(idx.size()); }
  explicit ScalarSpace(int r);
};

struct VectorSpace {
  int r;
  std::vector<std::pair<int, int>> idx1;  // x-component: a in 0..r (chi), b in 0..r-1 (leg)
  std::vector<std::pair<int, int>> idx2;  // y-component: a in 0..r-1 (leg), b in 0..r (chi)
  int dim() const { return static_cast<int>(idx1.size() + idx2.size()); }
  explicit VectorSpace(int r);
};

// Values of the scalar space at tensor quadrature points (x slow, y fast).
struct ScalarTab {
  RMat val, dx, dy;  // dim x npts^2
};
ScalarTab tabulate_scalar(const ScalarSpace& s, const QuadRule& q);

// Values of V^r at tensor points; v1/v2 are the components, div their divergence.
struct VectorTab {
  RMat v1, v2, div;  // dim x npts^2 (v2 rows of idx1 entries are zero and vice versa)
};
VectorTab tabulate_vector(const VectorSpace& v, const QuadRule& q);

// Edge index: 0 = south (y=0), 1 = east (x=1), 2 = north (y=1), 3 = west (x=0).
// All edges are parametrized by the increasing coordinate.
struct EdgeTab {
  RMat q;   // scalar values on the edge, dim x npts
  RMat vn;  // outward normal trace of the vector space, dim x npts
};
EdgeTab tabulate_edge(const ScalarSpace& s, const VectorSpace& v, int edge, const QuadRule& q1d);

}  // namespace dpg2d

#endif
