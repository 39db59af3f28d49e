#ifndef DPG2D_ADAPT_HPP
#define DPG2D_ADAPT_HPP

#include <vector>

#include "dpg2d/multigrid.hpp"
#include "dpg2d/pcg.hpp"

namespace dpg2d {

// Bulk (Dorfler) marking: smallest set of cells, greedily by descending
// indicator, with sum of squares >= theta_mark^2 * total.
std::vector<int> dorfler_mark(const std::vector<Real>& eta, const std::vector<int>& cell_ids,
                              Real theta_mark);

struct AdaptiveOptions {
  Real theta_mark = 0.5;
  int max_generations = 10;
  Real reduction = 0.1;      // stop when eta <= reduction * eta_0
  Real tol_rel = 1e-6;       // PCG stopping
  int max_iter = 500;
  MgOptions mg;
  int coarse_dof_cap = 5000; // largest direct-solve level
};

struct GenerationRecord {
  int generation = 0;
  int n_dofs = 0;
  Real eta = 0.0;
  int iterations = 0;
  bool converged = false;
  int n_cells = 0;
  int n_levels = 1;
};

struct AdaptiveResult {
  std::vector<GenerationRecord> generations;
  std::vector<std::string> mesh_svgs;
  bool reached_reduction = false;
};

// Estimate-mark-refine loop driven by the DPG error indicator, solved by
// V-cycle-preconditioned CG warm-started from the previous generation.
AdaptiveResult adaptive_solve(AdaptiveMesh& mesh, ElementCache& cache, const BoundaryData& g,
                              const AdaptiveOptions& opt, const VolumeLoad& f = nullptr);

}  // namespace dpg2d

#endif
