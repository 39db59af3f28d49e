#include "dpg2d/multigrid.hpp"

#include <set>
#include <stdexcept>

namespace dpg2d {

namespace {

// coarse-edge dofs [v0, v1, bubbles 2..p] restricted to the sub-interval
// [a,b], expressed in the same hierarchical basis on the sub-edge
RMat phat_restriction_to(int p, Real a, Real b) {
  RMat R(p + 1, p + 1);
  for (int j = 0; j <= p; ++j) {
    R(0, j) = hier(j, a);
    R(1, j) = hier(j, b);
  }
  const int nb = p - 1;
  if (nb > 0) {
    RVec s(nb);
    for (int i = 0; i < nb; ++i) s[i] = 0.5 * (1.0 - std::cos(kPi * (i + 1) / p));
    RMat V(nb, nb);
    for (int i = 0; i < nb; ++i)
      for (int k = 0; k < nb; ++k) V(i, k) = hier(k + 2, s[i]);
    RMat rhs(nb, p + 1);
    for (int i = 0; i < nb; ++i) {
      const Real t = a + (b - a) * s[i];
      for (int j = 0; j <= p; ++j)
        rhs(i, j) = hier(j, t) - R(0, j) * hier(0, s[i]) - R(1, j) * hier(1, s[i]);
    }
    R.bottomRows(nb) = V.fullPivLu().solve(rhs);
  }
  return R;
}

RMat uhat_projection_to(int u, Real a, Real b) {
  QuadRule q = gauss01(u + 1);
  RMat R(u + 1, u + 1);
  for (int k = 0; k <= u; ++k)
    for (int j = 0; j <= u; ++j) {
      Real acc = 0.0;
      for (int i = 0; i < static_cast<int>(q.points.size()); ++i)
        acc += q.weights[i] * legendre(k, q.points[i]) * legendre(j, a + (b - a) * q.points[i]);
      R(k, j) = (2 * k + 1) * acc;
    }
  return R;
}

}  // namespace

GridTransfer::GridTransfer(const AdaptiveMesh& mesh, const TraceDofMap& coarse,
                           const TraceDofMap& fine, const SpMat& S_fine) {
  const auto& edges = mesh.edges();
  const int p = coarse.p();
  const int u = coarse.flux_order();
  if (p != fine.p() || u != fine.flux_order())
    throw std::invalid_argument("GridTransfer: coarse/fine order mismatch");
  const int nb = p - 1;
  const int nu = u + 1;

  std::vector<Triplet> trips;
  std::set<int> gamma_set;
  std::set<int> vertex_done;

  for (int E : coarse.master_edges()) {
    const EdgeDofs& ce = coarse.edge(E);
    const int cv0 = coarse.vertex_dof(edges[E].v0);
    const int cv1 = coarse.vertex_dof(edges[E].v1);
    if (cv0 < 0 || cv1 < 0)
      throw std::logic_error("GridTransfer: coarse master edge with hanging endpoint");
    // coarse dof column ids in order [v0, v1, bubbles..., uhat...]
    std::vector<int> ccols = {cv0, cv1};
    for (int k = 0; k < nb; ++k) ccols.push_back(ce.phat_base + k);
    auto coarse_value_cols = [&](Real t, int fine_row) {
      // pressure-trace value at parameter t
      Real sh[2] = {hier(0, t), hier(1, t)};
      trips.emplace_back(fine_row, cv0, Cplx(sh[0], 0));
      trips.emplace_back(fine_row, cv1, Cplx(sh[1], 0));
      for (int k = 0; k < nb; ++k)
        trips.emplace_back(fine_row, ce.phat_base + k, Cplx(hier(k + 2, t), 0));
    };

    std::vector<std::pair<int, std::pair<Real, Real>>> stack{{E, {0.0, 1.0}}};
    while (!stack.empty()) {
      auto [x, ab] = stack.back();
      stack.pop_back();
      const auto [a, b] = ab;
      if (!fine.has_edge(x)) {
        if (edges[x].child[0] < 0)
          throw std::logic_error("GridTransfer: coarse skeleton edge missing in fine dof map");
        const Real m = 0.5 * (a + b);
        stack.push_back({edges[x].child[0], {a, m}});
        stack.push_back({edges[x].child[1], {m, b}});
        continue;
      }
      const EdgeDofs& fe = fine.edge(x);
      // endpoint vertices
      for (auto [v, t] : {std::pair<int, Real>{edges[x].v0, a}, {edges[x].v1, b}}) {
        const int fv = fine.vertex_dof(v);
        if (fv < 0) throw std::logic_error("GridTransfer: fine master edge with hanging endpoint");
        gamma_set.insert(fv);
        if (vertex_done.insert(fv).second) coarse_value_cols(t, fv);
      }
      // pressure bubbles
      if (nb > 0) {
        RMat R = phat_restriction_to(p, a, b);
        for (int kk = 0; kk < nb; ++kk) {
          const int row = fe.phat_base + kk;
          gamma_set.insert(row);
          for (int j = 0; j < static_cast<int>(ccols.size()); ++j) {
            const Real c = R(2 + kk, j);
            if (std::abs(c) > 1e-15) trips.emplace_back(row, ccols[j], Cplx(c, 0));
          }
        }
      }
      // flux dofs
      if (ce.uhat_base >= 0) {
        if (fe.uhat_base < 0)
          throw std::logic_error("GridTransfer: interior coarse edge over boundary fine edge");
        RMat R = uhat_projection_to(u, a, b);
        const Real sign = ce.normal_sign * fe.normal_sign;
        for (int kk = 0; kk < nu; ++kk) {
          const int row = fe.uhat_base + kk;
          gamma_set.insert(row);
          for (int j = 0; j < nu; ++j) {
            const Real c = sign * R(kk, j);
            if (std::abs(c) > 1e-15) trips.emplace_back(row, ce.uhat_base + j, Cplx(c, 0));
          }
        }
      }
    }
  }

  inclusion_.resize(fine.n_dofs(), coarse.n_dofs());
  inclusion_.setFromTriplets(trips.begin(), trips.end());
  inclusion_.makeCompressed();

  gamma_.assign(gamma_set.begin(), gamma_set.end());
  std::vector<char> on_gamma(fine.n_dofs(), 0);
  for (int i : gamma_) on_gamma[i] = 1;
  for (int i = 0; i < fine.n_dofs(); ++i)
    if (!on_gamma[i]) interior_.push_back(i);

  // interior/interior factorization and the interior/gamma block
  std::vector<int> where(fine.n_dofs(), -1);
  for (size_t k = 0; k < interior_.size(); ++k) where[interior_[k]] = static_cast<int>(k);
  std::vector<int> gwhere(fine.n_dofs(), -1);
  for (size_t k = 0; k < gamma_.size(); ++k) gwhere[gamma_[k]] = static_cast<int>(k);
  std::vector<Triplet> tii, tig;
  for (int c = 0; c < S_fine.outerSize(); ++c)
    for (SpMat::InnerIterator it(S_fine, c); it; ++it) {
      const int ri = where[it.row()];
      if (ri < 0) continue;
      const int ci = where[it.col()];
      if (ci >= 0)
        tii.emplace_back(ri, ci, it.value());
      else
        tig.emplace_back(ri, gwhere[it.col()], it.value());
    }
  SpMat Sii(interior_.size(), interior_.size());
  Sii.setFromTriplets(tii.begin(), tii.end());
  S_ig_.resize(interior_.size(), gamma_.size());
  S_ig_.setFromTriplets(tig.begin(), tig.end());
  s_ii_ = std::make_unique<Eigen::SimplicialLDLT<SpMat>>();
  if (!interior_.empty()) {
    s_ii_->compute(Sii);
    if (s_ii_->info() != Eigen::Success)
      throw std::runtime_error("GridTransfer: interior-skeleton factorization failed");
  }
}

Vec GridTransfer::prolong(const Vec& xc) const {
  Vec xf = inclusion_ * xc;
  if (!interior_.empty()) {
    Vec xg(gamma_.size());
    for (size_t k = 0; k < gamma_.size(); ++k) xg[k] = xf[gamma_[k]];
    Vec xi = s_ii_->solve(-(S_ig_ * xg));
    for (size_t k = 0; k < interior_.size(); ++k) xf[interior_[k]] = xi[k];
  }
  return xf;
}

Vec GridTransfer::restrict_to_coarse(const Vec& rf) const {
  Vec w = rf;
  if (!interior_.empty()) {
    Vec ri(interior_.size());
    for (size_t k = 0; k < interior_.size(); ++k) ri[k] = rf[interior_[k]];
    Vec t = s_ii_->solve(ri);
    Vec corr = S_ig_.adjoint() * t;
    for (size_t k = 0; k < gamma_.size(); ++k) w[gamma_[k]] -= corr[k];
  }
  return inclusion_.adjoint() * w;
}

GridHierarchy::GridHierarchy(const AdaptiveMesh& mesh, const std::vector<int>& snapshot_ids,
                             ElementCache& cache, const BoundaryData& g, const MgOptions& opt,
                             const VolumeLoad& f) {
  if (snapshot_ids.empty()) throw std::invalid_argument("GridHierarchy: no levels");
  const ElementConfig& cfg = cache.config();
  for (size_t l = 0; l < snapshot_ids.size(); ++l) {
    Level lev;
    lev.dm = std::make_unique<TraceDofMap>(mesh, mesh.snapshot(snapshot_ids[l]), cfg.p,
                                           cfg.flux_order());
    lev.sys = assemble_global(mesh, *lev.dm, cache, g, f);
    levels_.push_back(std::move(lev));
  }
  for (size_t l = 0; l + 1 < levels_.size(); ++l)
    transfers_.push_back(std::make_unique<GridTransfer>(mesh, *levels_[l].dm, *levels_[l + 1].dm,
                                                        levels_[l + 1].sys.S));
  for (size_t l = 1; l < levels_.size(); ++l) {
    auto patches = mesh.build_patches(snapshot_ids[l - 1]);
    levels_[l].smoother = std::make_unique<SchwarzSmoother>(
        levels_[l].sys.S, patches, levels_[l].dm->dofs(), mesh.vertices(), opt.theta, opt.nu);
  }
  coarse_.compute(levels_[0].sys.S);
  if (coarse_.info() != Eigen::Success)
    throw std::runtime_error("GridHierarchy: coarse factorization failed");
}

Vec GridHierarchy::vcycle_level(int l, const Vec& b) const {
  if (l == 0) return coarse_.solve(b);
  const Level& lev = levels_[l];
  Vec x = Vec::Zero(b.size());
  lev.smoother->smooth(lev.sys.S, b, x);
  Vec r = b - lev.sys.S * x;
  Vec rc = transfers_[l - 1]->restrict_to_coarse(r);
  Vec zc = vcycle_level(l - 1, rc);
  x += transfers_[l - 1]->prolong(zc);
  lev.smoother->smooth(lev.sys.S, b, x);
  return x;
}

Vec GridHierarchy::vcycle(const Vec& b) const {
  return vcycle_level(n_levels() - 1, b);
}

}  // namespace dpg2d
