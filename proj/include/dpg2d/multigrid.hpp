#ifndef DPG2D_MULTIGRID_HPP
#define DPG2D_MULTIGRID_HPP

#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "dpg2d/schwarz.hpp"
#include "dpg2d/system.hpp"

namespace dpg2d {

// Coarse-to-fine trace transfer: natural inclusion of coarse dofs into the
// fine dofs lying on the coarse skeleton, followed by the energy-minimizing
// (Schur complement) extension to the remaining fine dofs. Restriction is
// the conjugate transpose.
class GridTransfer {
 public:
  GridTransfer(const AdaptiveMesh& mesh, const TraceDofMap& coarse, const TraceDofMap& fine,
               const SpMat& S_fine);

  Vec prolong(const Vec& xc) const;
  Vec restrict_to_coarse(const Vec& rf) const;

  const std::vector<int>& gamma() const { return gamma_; }
  const std::vector<int>& interior() const { return interior_; }
  // inclusion part only (no extension): the macro-grid embedding
  Vec include(const Vec& xc) const { return inclusion_ * xc; }

 private:
  SpMat inclusion_;  // n_fine x n_coarse
  std::vector<int> gamma_, interior_;
  SpMat S_ig_;  // interior x gamma block
  std::unique_ptr<Eigen::SimplicialLDLT<SpMat>> s_ii_;
};

struct MgOptions {
  Real theta = 0.25;
  int nu = 10;
};

// Ordered mesh levels (coarse to fine), each a snapshot of the refinement
// history, with per-level systems, smoothers from the next-coarser snapshot's
// vertex patches, and a direct factorization at the coarsest level.
class GridHierarchy {
 public:
  GridHierarchy(const AdaptiveMesh& mesh, const std::vector<int>& snapshot_ids,
                ElementCache& cache, const BoundaryData& g, const MgOptions& opt,
                const VolumeLoad& f = nullptr);

  int n_levels() const { return static_cast<int>(levels_.size()); }
  const TraceDofMap& dofmap(int l) const { return *levels_[l].dm; }
  const SpMat& matrix(int l) const { return levels_[l].sys.S; }
  const GlobalSystem& system(int l) const { return levels_[l].sys; }
  const GridTransfer& transfer(int l) const { return *transfers_[l]; }  // level l -> l+1

  // V-cycle preconditioner application on the finest level.
  Vec vcycle(const Vec& b) const;

 private:
  Vec vcycle_level(int l, const Vec& b) const;

  struct Level {
    std::unique_ptr<TraceDofMap> dm;
    GlobalSystem sys;
    std::unique_ptr<SchwarzSmoother> smoother;  // absent on the coarsest level
  };
  std::vector<Level> levels_;
  std::vector<std::unique_ptr<GridTransfer>> transfers_;
  Eigen::SimplicialLDLT<SpMat> coarse_;
};

}  // namespace dpg2d

#endif
