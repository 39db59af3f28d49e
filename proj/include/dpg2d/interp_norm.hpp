#ifndef DPG2D_INTERP_NORM_HPP
#define DPG2D_INTERP_NORM_HPP

#include <vector>

#include "dpg2d/basis.hpp"
#include "dpg2d/types.hpp"

namespace dpg2d {

// Master-element study of the trace interpolation operator
//   Pi: tr(W^{p+1} x V^{p+1}) -> tr(W^p x V^p)
// in the minimum-energy-extension trace norm induced by the scaled graph
// norm  ||A_k(p,u)||^2 + h^2 ||(p,u)||^2  with k = omega h.

// index layout of the source trace basis (order q = p+1 traces):
// [4 vertices][per-edge pressure bubbles k=2..q][per-edge flux modes 0..q-1]
struct TraceLayout {
  int p;
  int n;                                      // 8(p+1)
  std::vector<std::vector<int>> phat_edge;    // per edge, source bubble ids
  std::vector<std::vector<int>> uhat_edge;    // per edge, source flux ids
  explicit TraceLayout(int p);
  int n_vertices() const { return 4; }
};

struct InterpNormProblem {
  int p = 0;
  int r_ext = 0;
  Real kappa = 0.0, h = 0.0;
  Mat G;  // trace Gram in the extension norm
  Mat P;  // interpolation matrix (projection onto the embedded target)
  RVec eigenvalues;  // of the pencil P*GP v = lambda^2 G v, ascending
};

// default extension order: p+6 capped at 9, matching the order range the
// study tables were generated with
inline int default_extension_order(int p) { return std::min(p + 6, 9); }

// Minimum-energy extension of a source trace datum into W^r x V^r: returns
// the full coefficient vector of the extension space (trace dofs set from
// the datum, interior dofs from the bubble solve).
Vec min_energy_extension(const Vec& trace_coeffs, int p, int r_ext, Real kappa, Real h);
// Scaled graph-norm energy ||.||_{H_A(kappa,h)}^2 of an extension-space element.
Real extension_energy(const Vec& coeffs, int r_ext, Real kappa, Real h);

Mat build_gram(int p, Real kappa, Real h, int r_ext);
Mat build_interpolant(const Mat& G, int p);

InterpNormProblem interp_norm_problem(int p, Real h, Real omega, int r_ext = -1);
Real interp_norm(int p, Real h, Real omega, int r_ext = -1);

}  // namespace dpg2d

#endif
