#ifndef DPG2D_SCHWARZ_HPP
#define DPG2D_SCHWARZ_HPP

#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "dpg2d/dofmap.hpp"
#include "dpg2d/mesh.hpp"
#include "dpg2d/types.hpp"

namespace dpg2d {

// One-level additive Schwarz over vertex patches: one application is
//   z = theta * sum_i R_i^T B_i^{-1} R_i r
// with B_i the principal submatrix of S on the patch's interior trace dofs
// (dofs whose location lies inside the open support of the patch vertex).
class SchwarzSmoother {
 public:
  SchwarzSmoother(const SpMat& S, const std::vector<VertexPatch>& patches,
                  const std::vector<DofDesc>& dofs, const std::vector<MeshVertex>& mesh_vertices,
                  Real theta, int nu);

  Vec apply(const Vec& r) const;
  // nu damped correction steps x += theta * sum_i scatter(B_i^{-1} (b - S x)|_i)
  void smooth(const SpMat& S, const Vec& b, Vec& x) const;

  Real theta() const { return theta_; }
  int nu() const { return nu_; }
  int n_patches() const { return static_cast<int>(patch_dofs_.size()); }
  const std::vector<int>& patch_dofs(int i) const { return patch_dofs_[i]; }

 private:
  std::vector<std::vector<int>> patch_dofs_;
  std::vector<std::unique_ptr<Eigen::SimplicialLDLT<SpMat>>> factors_;
  Real theta_;
  int nu_;
};

}  // namespace dpg2d

#endif
