#ifndef DPG2D_ELEMENT_HPP
#define DPG2D_ELEMENT_HPP

#include <Eigen/Cholesky>
#include <array>
#include <functional>
#include <map>
#include <memory>

#include "dpg2d/basis.hpp"
#include "dpg2d/types.hpp"

namespace dpg2d {

// Impedance data g(x, y, nx, ny) on the domain boundary, outward normal.
using BoundaryData = std::function<Cplx(Real, Real, Real, Real)>;
// Volume load (f1, f2) evaluated at a physical point.
using VolumeLoad = std::function<std::array<Cplx, 3>(Real, Real)>;  // f1, f2x, f2y

struct ElementConfig {
  int p = 2;         // field and pressure-trace order
  int delta_p = 2;   // test enrichment, r = p + delta_p
  int uhat_order = -1;  // flux-trace order per edge; -1 means p-1
  Real omega = 2.0 * kPi;
  Real alpha = 1.0;  // graph-norm L2 weight

  int flux_order() const { return uhat_order < 0 ? p - 1 : uhat_order; }
  int test_order() const { return p + delta_p; }
};

// Which local edges (S,E,N,W) lie on the domain boundary. On those edges the
// flux unknown is eliminated through the impedance condition u.n = phat - g,
// so its columns fold into the pressure-trace block and the data goes to the
// load.
using EdgeFlags = std::array<bool, 4>;

// Local trace layout: 4 vertex dofs, then p-1 pressure bubbles per edge
// (S,E,N,W), then flux dofs on each non-boundary edge in S,E,N,W order.
// Signs are local-outward; global orientation is applied by the dof map.
struct ElementMatrices {
  ElementConfig cfg;
  Real h = 0.0;
  EdgeFlags flags{};
  int n_test = 0, n_fields = 0, n_trace = 0;

  Eigen::LLT<Mat> G_llt;  // enriched test Gram
  Mat G;
  Mat B;                  // n_test x (n_fields + n_trace)
  Mat S;                  // condensed trace matrix
  Eigen::LLT<Mat> Aff_llt;
  Mat Aft;                // field/trace coupling of the normal equations

  // edge quadrature tables for load assembly and residuals
  QuadRule rule1d;
  std::array<RMat, 4> edge_q;  // scalar test values on each edge

  std::vector<int> interior_edges;  // local edges carrying flux dofs

  int n_phat() const { return 4 * cfg.p; }
};

// Assembles G, B and the static condensation for one axis-aligned square
// cell of size h. Throws on degenerate cells.
ElementMatrices assemble_element(const ElementConfig& cfg, Real h, const EdgeFlags& flags);

// Test-space load vector l(v) for a cell at (x0,y0): volume term plus the
// impedance fold on boundary edges.
Vec element_load(const ElementMatrices& em, Real x0, Real y0, const BoundaryData& g,
                 const VolumeLoad& f = nullptr);

// Condensed trace load and the field part of the normal-equation rhs.
struct CondensedLoad {
  Vec g_trace;
  Vec b_fields;
};
CondensedLoad condense_load(const ElementMatrices& em, const Vec& l);

// Field recovery from the trace solution.
Vec recover_fields(const ElementMatrices& em, const Vec& b_fields, const Vec& x_trace);

// Energy-norm element residual ||psi||_V with G psi = l - B u.
Real element_residual(const ElementMatrices& em, const Vec& l, const Vec& x_fields,
                      const Vec& x_trace);

// Cache of element matrices keyed by (cell size, boundary signature).
class ElementCache {
 public:
  explicit ElementCache(const ElementConfig& cfg) : cfg_(cfg) {}
  const ElementMatrices& get(Real h, const EdgeFlags& flags);
  const ElementConfig& config() const { return cfg_; }

 private:
  ElementConfig cfg_;
  std::map<std::pair<long long, int>, std::unique_ptr<ElementMatrices>> cache_;
};

}  // namespace dpg2d

#endif
