#include "dpg2d/system.hpp"

#include <sstream>
#include <stdexcept>

namespace dpg2d {

GlobalSystem assemble_global(const AdaptiveMesh& mesh, const TraceDofMap& dm, ElementCache& cache,
                             const BoundaryData& g, const VolumeLoad& f) {
  GlobalSystem gs;
  const int n = dm.n_dofs();
  gs.rhs = Vec::Zero(n);
  const auto& cells = dm.cells();
  std::vector<Triplet> trips;
  for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
    Real x0, y0, h;
    mesh.cell_box(cells[k], x0, y0, h);
    const ElementMatrices& em = cache.get(h, dm.cell_flags(k));
    Vec l = element_load(em, x0, y0, g, f);
    CondensedLoad cl = condense_load(em, l);
    const LocalScatter& sc = dm.cell_scatter(k);
    const int nloc = static_cast<int>(sc.offsets.size()) - 1;
    if (nloc != em.n_trace)
      throw std::runtime_error("assemble_global: element/dofmap trace layout mismatch");
    for (int a = 0; a < nloc; ++a) {
      for (int ia = sc.offsets[a]; ia < sc.offsets[a + 1]; ++ia) {
        const auto& ea = sc.entries[ia];
        gs.rhs[ea.gdof] += ea.coeff * cl.g_trace[a];
        for (int b = 0; b < nloc; ++b)
          for (int ib = sc.offsets[b]; ib < sc.offsets[b + 1]; ++ib) {
            const auto& eb = sc.entries[ib];
            trips.emplace_back(ea.gdof, eb.gdof, ea.coeff * eb.coeff * em.S(a, b));
          }
      }
    }
    gs.loads.push_back(std::move(l));
    gs.cond_loads.push_back(std::move(cl));
  }
  gs.S.resize(n, n);
  gs.S.setFromTriplets(trips.begin(), trips.end());
  gs.S.makeCompressed();
  return gs;
}

Vec gather_trace(const TraceDofMap& dm, int k, const Vec& x) {
  const LocalScatter& sc = dm.cell_scatter(k);
  const int nloc = static_cast<int>(sc.offsets.size()) - 1;
  Vec out = Vec::Zero(nloc);
  for (int a = 0; a < nloc; ++a)
    for (int ia = sc.offsets[a]; ia < sc.offsets[a + 1]; ++ia)
      out[a] += sc.entries[ia].coeff * x[sc.entries[ia].gdof];
  return out;
}

std::vector<Vec> recover_all_fields(const AdaptiveMesh& mesh, const TraceDofMap& dm,
                                    ElementCache& cache, const GlobalSystem& gs, const Vec& x) {
  std::vector<Vec> out;
  const auto& cells = dm.cells();
  for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
    Real x0, y0, h;
    mesh.cell_box(cells[k], x0, y0, h);
    const ElementMatrices& em = cache.get(h, dm.cell_flags(k));
    out.push_back(recover_fields(em, gs.cond_loads[k].b_fields, gather_trace(dm, k, x)));
  }
  return out;
}

ErrorIndicator compute_indicators(const AdaptiveMesh& mesh, const TraceDofMap& dm,
                                  ElementCache& cache, const GlobalSystem& gs, const Vec& x) {
  ErrorIndicator ind;
  Real tot2 = 0.0;
  const auto& cells = dm.cells();
  for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
    Real x0, y0, h;
    mesh.cell_box(cells[k], x0, y0, h);
    const ElementMatrices& em = cache.get(h, dm.cell_flags(k));
    Vec xt = gather_trace(dm, k, x);
    Vec xf = recover_fields(em, gs.cond_loads[k].b_fields, xt);
    const Real eta = element_residual(em, gs.loads[k], xf, xt);
    ind.eta.push_back(eta);
    tot2 += eta * eta;
  }
  ind.total = std::sqrt(tot2);
  return ind;
}

Real field_l2_error(const AdaptiveMesh& mesh, const TraceDofMap& dm, ElementCache& cache,
                    const std::vector<Vec>& fields, const ExactField& exact) {
  const ElementConfig& cfg = cache.config();
  ScalarSpace fs(cfg.p);
  const QuadRule q = quadrature(cfg.test_order());
  ScalarTab tf = tabulate_scalar(fs, q);
  const int nf1 = fs.dim();
  const int nq = static_cast<int>(q.points.size());
  Real err2 = 0.0, ref2 = 0.0;
  const auto& cells = dm.cells();
  for (int k = 0; k < static_cast<int>(cells.size()); ++k) {
    Real x0, y0, h;
    mesh.cell_box(cells[k], x0, y0, h);
    const Vec& xf = fields[k];
    Vec ph = tf.val.cast<Cplx>().transpose() * xf.segment(0, nf1);
    Vec u1h = tf.val.cast<Cplx>().transpose() * xf.segment(nf1, nf1);
    Vec u2h = tf.val.cast<Cplx>().transpose() * xf.segment(2 * nf1, nf1);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j) {
        const int pt = i * nq + j;
        const Real w = q.weights[i] * q.weights[j] * h * h;
        auto ex = exact(x0 + h * q.points[i], y0 + h * q.points[j]);
        err2 += w * (std::norm(ph[pt] - ex[0]) + std::norm(u1h[pt] - ex[1]) +
                     std::norm(u2h[pt] - ex[2]));
        ref2 += w * (std::norm(ex[0]) + std::norm(ex[1]) + std::norm(ex[2]));
      }
  }
  return std::sqrt(err2 / ref2);
}

std::string dump_system(const GlobalSystem& gs) {
  std::ostringstream os;
  os.precision(16);
  os << "%%system condensed hermitian complex\n";
  os << gs.S.rows() << " " << gs.S.cols() << " " << gs.S.nonZeros() << "\n";
  for (int k = 0; k < gs.S.outerSize(); ++k)
    for (SpMat::InnerIterator it(gs.S, k); it; ++it)
      os << it.row() + 1 << " " << it.col() + 1 << " " << it.value().real() << " "
         << it.value().imag() << "\n";
  os << "%%rhs\n";
  for (int i = 0; i < gs.rhs.size(); ++i)
    os << gs.rhs[i].real() << " " << gs.rhs[i].imag() << "\n";
  return os.str();
}

}  // namespace dpg2d
