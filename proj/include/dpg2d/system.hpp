#ifndef DPG2D_SYSTEM_HPP
#define DPG2D_SYSTEM_HPP

#include <vector>

#include "dpg2d/dofmap.hpp"
#include "dpg2d/element.hpp"
#include "dpg2d/mesh.hpp"

namespace dpg2d {

// Assembled condensed skeleton system together with the per-cell data needed
// for field recovery and residual evaluation.
struct GlobalSystem {
  SpMat S;
  Vec rhs;
  std::vector<Vec> loads;                 // test-space load per active cell
  std::vector<CondensedLoad> cond_loads;  // condensed load per active cell
};

GlobalSystem assemble_global(const AdaptiveMesh& mesh, const TraceDofMap& dm, ElementCache& cache,
                             const BoundaryData& g, const VolumeLoad& f = nullptr);

// Local trace coefficients of a cell gathered from the global vector.
Vec gather_trace(const TraceDofMap& dm, int k, const Vec& x);

// Per-cell fields (p, u1, u2 coefficients) recovered from the trace solution.
std::vector<Vec> recover_all_fields(const AdaptiveMesh& mesh, const TraceDofMap& dm,
                                    ElementCache& cache, const GlobalSystem& gs, const Vec& x);

// Element error indicators eta_K and the global eta = sqrt(sum eta_K^2).
struct ErrorIndicator {
  std::vector<Real> eta;  // per active cell, cell order of the dof map
  Real total = 0.0;
};
ErrorIndicator compute_indicators(const AdaptiveMesh& mesh, const TraceDofMap& dm,
                                  ElementCache& cache, const GlobalSystem& gs, const Vec& x);

// Relative L2 field error against an exact solution (p, u1, u2).
using ExactField = std::function<std::array<Cplx, 3>(Real, Real)>;
Real field_l2_error(const AdaptiveMesh& mesh, const TraceDofMap& dm, ElementCache& cache,
                    const std::vector<Vec>& fields, const ExactField& exact);

// Coordinate-format dump (1-based indices, "row col re im") of S and rhs.
std::string dump_system(const GlobalSystem& gs);

}  // namespace dpg2d

#endif
