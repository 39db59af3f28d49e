#include "dpg2d/adapt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dpg2d {

std::vector<int> dorfler_mark(const std::vector<Real>& eta, const std::vector<int>& cell_ids,
                              Real theta_mark) {
  if (!(theta_mark > 0.0) || theta_mark > 1.0)
    throw std::invalid_argument("dorfler_mark: theta_mark in (0,1] required");
  if (eta.size() != cell_ids.size())
    throw std::invalid_argument("dorfler_mark: size mismatch");
  std::vector<int> order(eta.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return eta[a] > eta[b]; });
  Real total2 = 0.0;
  for (Real e : eta) total2 += e * e;
  const Real goal = theta_mark * theta_mark * total2;
  std::vector<int> marked;
  Real acc = 0.0;
  for (int i : order) {
    if (acc >= goal || eta[i] == 0.0) break;
    marked.push_back(cell_ids[i]);
    acc += eta[i] * eta[i];
  }
  return marked;
}

namespace {

// hierarchy levels: every other snapshot back from the finest, keeping the
// coarsest level small enough for the direct solve
std::vector<int> select_levels(const AdaptiveMesh& mesh, const ElementConfig& cfg, int cap) {
  const int last = mesh.n_snapshots() - 1;
  std::vector<int> cand;
  for (int s = last; s >= 0; s -= 2) cand.push_back(s);
  if (cand.back() != 0) cand.push_back(0);
  std::reverse(cand.begin(), cand.end());  // coarse to fine
  // drop leading levels until the coarsest fits the cap, keeping >= 1 level
  size_t first = 0;
  for (size_t i = 0; i + 1 < cand.size(); ++i) {
    TraceDofMap dm(mesh, mesh.snapshot(cand[i]), cfg.p, cfg.flux_order());
    if (dm.n_dofs() <= cap) {
      first = i;
      break;
    }
    first = i + 1;
  }
  // also cut levels finer than needed: if the finest itself fits the cap a
  // single direct level suffices
  std::vector<int> out(cand.begin() + first, cand.end());
  return out;
}

}  // namespace

AdaptiveResult adaptive_solve(AdaptiveMesh& mesh, ElementCache& cache, const BoundaryData& g,
                              const AdaptiveOptions& opt, const VolumeLoad& f) {
  AdaptiveResult result;
  Real eta0 = -1.0;
  Vec prev_x;
  std::unique_ptr<TraceDofMap> prev_dm;
  int prev_snapshot = -1;

  for (int gen = 0; gen < opt.max_generations; ++gen) {
    auto levels = select_levels(mesh, cache.config(), opt.coarse_dof_cap);
    GridHierarchy hier(mesh, levels, cache, g, opt.mg, f);
    const TraceDofMap& dm = hier.dofmap(hier.n_levels() - 1);
    const GlobalSystem& gs = hier.system(hier.n_levels() - 1);

    Vec x0 = Vec::Zero(dm.n_dofs());
    if (prev_dm && prev_snapshot >= 0) {
      GridTransfer warm(mesh, *prev_dm, dm, gs.S);
      x0 = warm.prolong(prev_x);
    }
    PcgOptions popt;
    popt.tol_rel = opt.tol_rel;
    popt.max_iter = opt.max_iter;
    PcgReport rep;
    Vec x = pcg([&](const Vec& v) { return Vec(gs.S * v); },
                [&](const Vec& r) { return hier.vcycle(r); }, gs.rhs, x0, popt, &rep);
    if (!rep.converged)
      throw std::runtime_error("adaptive_solve: PCG failed at generation " + std::to_string(gen));

    ErrorIndicator ind = compute_indicators(mesh, dm, cache, gs, x);
    if (eta0 < 0) eta0 = ind.total;

    GenerationRecord rec;
    rec.generation = gen;
    rec.n_dofs = dm.n_dofs();
    rec.eta = ind.total;
    rec.iterations = rep.iterations;
    rec.converged = rep.converged;
    rec.n_cells = static_cast<int>(dm.cells().size());
    rec.n_levels = hier.n_levels();
    result.generations.push_back(rec);
    result.mesh_svgs.push_back(mesh.dump_svg(ind.eta));

    if (ind.total <= opt.reduction * eta0) {
      result.reached_reduction = true;
      break;
    }
    if (gen + 1 == opt.max_generations) break;

    auto marked = dorfler_mark(ind.eta, dm.cells(), opt.theta_mark);
    if (marked.empty()) break;
    prev_dm = std::make_unique<TraceDofMap>(mesh, dm.cells(), dm.p(), dm.flux_order());
    prev_x = x;
    prev_snapshot = mesh.n_snapshots() - 1;
    mesh.refine(marked);
  }
  return result;
}

}  // namespace dpg2d
