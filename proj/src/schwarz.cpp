#include "dpg2d/schwarz.hpp"

#include <iostream>
#include <stdexcept>

namespace dpg2d {

SchwarzSmoother::SchwarzSmoother(const SpMat& S, const std::vector<VertexPatch>& patches,
                                 const std::vector<DofDesc>& dofs,
                                 const std::vector<MeshVertex>& mesh_vertices, Real theta, int nu)
    : theta_(theta), nu_(nu) {
  if (!(theta > 0.0) || theta > 1.0)
    throw std::invalid_argument("SchwarzSmoother: theta must be in (0,1]");
  const int n = static_cast<int>(dofs.size());
  std::vector<char> covered(n, 0);
  for (const auto& p : patches) {
    const Real vx = mesh_vertices[p.vertex].x;
    const Real vy = mesh_vertices[p.vertex].y;
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (p.hat(dofs[i].x, dofs[i].y, vx, vy) > 1e-12) idx.push_back(i);
    if (idx.empty()) {
      std::cerr << "SchwarzSmoother: skipping empty patch at vertex " << p.vertex << "\n";
      continue;
    }
    // principal submatrix on the patch dofs
    std::vector<int> where(n, -1);
    for (size_t k = 0; k < idx.size(); ++k) where[idx[k]] = static_cast<int>(k);
    std::vector<Triplet> trips;
    for (int c : idx)
      for (SpMat::InnerIterator it(S, c); it; ++it)
        if (where[it.row()] >= 0) trips.emplace_back(where[it.row()], where[c], it.value());
    SpMat Sp(idx.size(), idx.size());
    Sp.setFromTriplets(trips.begin(), trips.end());
    auto f = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
    f->compute(Sp);
    if (f->info() != Eigen::Success)
      throw std::runtime_error("SchwarzSmoother: patch factorization failed");
    patch_dofs_.push_back(std::move(idx));
    factors_.push_back(std::move(f));
  }
  // coverage check
  for (const auto& idx : patch_dofs_)
    for (int i : idx) covered[i] = 1;
  for (int i = 0; i < n; ++i)
    if (!covered[i]) throw std::runtime_error("SchwarzSmoother: patches do not cover all dofs");
}

Vec SchwarzSmoother::apply(const Vec& r) const {
  Vec z = Vec::Zero(r.size());
  const Real quiet = 1e-14 * r.norm();
  for (size_t i = 0; i < patch_dofs_.size(); ++i) {
    const auto& idx = patch_dofs_[i];
    Vec ri(idx.size());
    for (size_t k = 0; k < idx.size(); ++k) ri[k] = r[idx[k]];
    if (ri.norm() < quiet) continue;
    Vec zi = factors_[i]->solve(ri);
    for (size_t k = 0; k < idx.size(); ++k) z[idx[k]] += zi[k];
  }
  return theta_ * z;
}

void SchwarzSmoother::smooth(const SpMat& S, const Vec& b, Vec& x) const {
  for (int step = 0; step < nu_; ++step) {
    Vec r = b - S * x;
    x += apply(r);
  }
}

}  // namespace dpg2d
