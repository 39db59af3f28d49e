#include "dpg2d/element.hpp"

#include <cmath>
#include <stdexcept>

namespace dpg2d {

namespace {

// trial pressure-trace shapes on an edge: chi_0, chi_1, bubbles 2..p
RMat trace_shapes(int p, const QuadRule& q) {
  Basis1D b(p, q.points);
  RMat out(p + 1, q.points.size());
  out.row(0) = b.hier_val.row(0);
  out.row(1) = b.hier_val.row(1);
  for (int k = 2; k <= p; ++k) out.row(k) = b.hier_val.row(k);
  return out;
}

// local vertex ids (start, end) of each edge wrt its parametrization
constexpr int kEdgeVerts[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};

}  // namespace

ElementMatrices assemble_element(const ElementConfig& cfg, Real h, const EdgeFlags& flags) {
  if (!(h > 0.0)) throw std::invalid_argument("assemble_element: degenerate cell");
  if (cfg.p < 1) throw std::invalid_argument("assemble_element: p >= 1 required");
  if (cfg.delta_p < 1) throw std::invalid_argument("assemble_element: delta_p >= 1 required");
  if (!(cfg.omega > 0.0)) throw std::invalid_argument("assemble_element: omega > 0 required");

  ElementMatrices em;
  em.cfg = cfg;
  em.h = h;
  em.flags = flags;

  const int r = cfg.test_order();
  const QuadRule q = quadrature(r);
  const int nq = static_cast<int>(q.points.size());
  em.rule1d = q;

  ScalarSpace test_s(r);
  VectorSpace test_v(r);
  ScalarTab ts = tabulate_scalar(test_s, q);
  VectorTab tv = tabulate_vector(test_v, q);

  const int ns = test_s.dim();
  const int nv = test_v.dim();
  em.n_test = ns + nv;

  RVec w2(nq * nq);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) w2[i * nq + j] = q.weights[i] * q.weights[j] * h * h;

  const Cplx iw(0.0, cfg.omega);

  // adjoint applied to the (real) test basis: A*(q,v) = (-iw q - div v, -iw v - grad q)
  Mat A1(em.n_test, nq * nq), A2x(em.n_test, nq * nq), A2y(em.n_test, nq * nq);
  Mat T0 = Mat::Zero(em.n_test, nq * nq);  // scalar part values
  Mat T1 = Mat::Zero(em.n_test, nq * nq);  // vector x values
  Mat T2 = Mat::Zero(em.n_test, nq * nq);
  A1.setZero();
  A2x.setZero();
  A2y.setZero();
  for (int k = 0; k < ns; ++k) {
    A1.row(k) = -(ts.val.row(k).cast<Cplx>()) * iw;
    A2x.row(k) = -(ts.dx.row(k) / h).cast<Cplx>();
    A2y.row(k) = -(ts.dy.row(k) / h).cast<Cplx>();
    T0.row(k) = ts.val.row(k).cast<Cplx>();
  }
  for (int k = 0; k < nv; ++k) {
    A1.row(ns + k) = -(tv.div.row(k) / h).cast<Cplx>();
    A2x.row(ns + k) = -(tv.v1.row(k).cast<Cplx>()) * iw;
    A2y.row(ns + k) = -(tv.v2.row(k).cast<Cplx>()) * iw;
    T1.row(ns + k) = tv.v1.row(k).cast<Cplx>();
    T2.row(ns + k) = tv.v2.row(k).cast<Cplx>();
  }

  const Real a2 = cfg.alpha * cfg.alpha;
  Mat G = A1.conjugate() * w2.asDiagonal() * A1.transpose() +
          A2x.conjugate() * w2.asDiagonal() * A2x.transpose() +
          A2y.conjugate() * w2.asDiagonal() * A2y.transpose() +
          a2 * (T0.conjugate() * w2.asDiagonal() * T0.transpose() +
                T1.conjugate() * w2.asDiagonal() * T1.transpose() +
                T2.conjugate() * w2.asDiagonal() * T2.transpose());
  G = 0.5 * (G + Mat(G.adjoint()));
  em.G = G;
  em.G_llt.compute(G);
  if (em.G_llt.info() != Eigen::Success)
    throw std::runtime_error("assemble_element: Gram matrix not positive definite");

  // trial fields p, u1, u2 in Q^(p,p)
  ScalarSpace field_s(cfg.p);
  ScalarTab tf = tabulate_scalar(field_s, q);
  const int nf1 = field_s.dim();
  em.n_fields = 3 * nf1;

  const int pu = cfg.flux_order();
  const int n_ph = em.n_phat();
  em.interior_edges.clear();
  for (int e = 0; e < 4; ++e)
    if (!flags[e]) em.interior_edges.push_back(e);
  const int n_uh = (pu + 1) * static_cast<int>(em.interior_edges.size());
  em.n_trace = n_ph + n_uh;

  Mat B = Mat::Zero(em.n_test, em.n_fields + em.n_trace);
  Mat phi = tf.val.cast<Cplx>();
  B.block(0, 0, em.n_test, nf1) = A1.conjugate() * w2.asDiagonal() * phi.transpose();
  B.block(0, nf1, em.n_test, nf1) = A2x.conjugate() * w2.asDiagonal() * phi.transpose();
  B.block(0, 2 * nf1, em.n_test, nf1) = A2y.conjugate() * w2.asDiagonal() * phi.transpose();

  // edge tables
  RVec w1 = q.weights * h;
  RMat tp = trace_shapes(cfg.p, q);
  Basis1D bleg(std::max(pu, 0), q.points);
  for (int e = 0; e < 4; ++e) {
    EdgeTab et = tabulate_edge(test_s, test_v, e, q);
    em.edge_q[e] = RMat::Zero(em.n_test, nq);
    em.edge_q[e].topRows(ns) = et.q;
    RMat vn = RMat::Zero(em.n_test, nq);
    vn.bottomRows(nv) = et.vn;
    // pressure-trace columns: <phat, v.n> on every edge, plus <phat, q> fold on
    // boundary edges
    auto add_col = [&](int col, const RVec& shp) {
      Vec c = (vn * w1.asDiagonal() * shp).cast<Cplx>();
      if (flags[e]) c += (em.edge_q[e] * w1.asDiagonal() * shp).cast<Cplx>();
      B.col(em.n_fields + col) += c;
    };
    add_col(kEdgeVerts[e][0], tp.row(0).transpose());
    add_col(kEdgeVerts[e][1], tp.row(1).transpose());
    for (int k = 2; k <= cfg.p; ++k)
      add_col(4 + e * (cfg.p - 1) + (k - 2), tp.row(k).transpose());
  }
  // flux columns on interior edges, local outward normal sign
  int col = em.n_fields + n_ph;
  for (int e : em.interior_edges) {
    for (int b = 0; b <= pu; ++b) {
      B.col(col++) = (em.edge_q[e] * w1.asDiagonal() * bleg.leg_val.row(b).transpose()).cast<Cplx>();
    }
  }
  em.B = B;

  // normal equations and static condensation
  Mat GinvB = em.G_llt.solve(B);
  Mat A = B.adjoint() * GinvB;
  A = 0.5 * (A + Mat(A.adjoint()));
  const int nf = em.n_fields;
  const int nt = em.n_trace;
  Mat Aff = A.topLeftCorner(nf, nf);
  em.Aft = A.topRightCorner(nf, nt);
  em.Aff_llt.compute(Aff);
  if (em.Aff_llt.info() != Eigen::Success)
    throw std::runtime_error("assemble_element: field block not positive definite");
  Mat Xi = em.Aff_llt.solve(em.Aft);
  Mat S = A.bottomRightCorner(nt, nt) - em.Aft.adjoint() * Xi;
  S = 0.5 * (S + Mat(S.adjoint()));
  if (!S.allFinite())
    throw std::runtime_error("assemble_element: condensation produced non-finite values");
  em.S = S;
  return em;
}

Vec element_load(const ElementMatrices& em, Real x0, Real y0, const BoundaryData& g,
                 const VolumeLoad& f) {
  const int nq = static_cast<int>(em.rule1d.points.size());
  Vec l = Vec::Zero(em.n_test);
  const Real h = em.h;
  if (g) {
    for (int e = 0; e < 4; ++e) {
      if (!em.flags[e]) continue;
      Vec gv(nq);
      for (int i = 0; i < nq; ++i) {
        const Real s = em.rule1d.points[i];
        Real x, y, nx, ny;
        switch (e) {
          case 0: x = x0 + h * s; y = y0; nx = 0; ny = -1; break;
          case 1: x = x0 + h; y = y0 + h * s; nx = 1; ny = 0; break;
          case 2: x = x0 + h * s; y = y0 + h; nx = 0; ny = 1; break;
          default: x = x0; y = y0 + h * s; nx = -1; ny = 0; break;
        }
        gv[i] = g(x, y, nx, ny) * em.rule1d.weights[i] * h;
      }
      l += em.edge_q[e].cast<Cplx>() * gv;
    }
  }
  if (f) {
    // volume term (f, v): requires the test tables again; rebuild locally
    const int r = em.cfg.test_order();
    const QuadRule q = quadrature(r);
    ScalarSpace test_s(r);
    VectorSpace test_v(r);
    ScalarTab ts = tabulate_scalar(test_s, q);
    VectorTab tv = tabulate_vector(test_v, q);
    const int n2 = nq * nq;
    Vec f1(n2), f2x(n2), f2y(n2);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j) {
        const int pt = i * nq + j;
        auto val = f(x0 + h * q.points[i], y0 + h * q.points[j]);
        const Real w = q.weights[i] * q.weights[j] * h * h;
        f1[pt] = val[0] * w;
        f2x[pt] = val[1] * w;
        f2y[pt] = val[2] * w;
      }
    l.head(test_s.dim()) += ts.val.cast<Cplx>() * f1;
    l.tail(test_v.dim()) += tv.v1.cast<Cplx>() * f2x + tv.v2.cast<Cplx>() * f2y;
  }
  return l;
}

CondensedLoad condense_load(const ElementMatrices& em, const Vec& l) {
  Vec Ginvl = em.G_llt.solve(l);
  Vec b = em.B.adjoint() * Ginvl;
  CondensedLoad out;
  out.b_fields = b.head(em.n_fields);
  out.g_trace = b.tail(em.n_trace) - em.Aft.adjoint() * em.Aff_llt.solve(out.b_fields);
  return out;
}

Vec recover_fields(const ElementMatrices& em, const Vec& b_fields, const Vec& x_trace) {
  return em.Aff_llt.solve(b_fields - em.Aft * x_trace);
}

Real element_residual(const ElementMatrices& em, const Vec& l, const Vec& x_fields,
                      const Vec& x_trace) {
  Vec u(em.n_fields + em.n_trace);
  u << x_fields, x_trace;
  Vec r = l - em.B * u;
  Vec psi = em.G_llt.solve(r);
  const Real eta2 = psi.dot(r).real();
  return std::sqrt(std::max(0.0, eta2));
}

const ElementMatrices& ElementCache::get(Real h, const EdgeFlags& flags) {
  const long long hkey = llround(h * (1LL << 40));
  const int fkey = flags[0] + 2 * flags[1] + 4 * flags[2] + 8 * flags[3];
  auto key = std::make_pair(hkey, fkey);
  auto it = cache_.find(key);
  if (it == cache_.end())
    it = cache_.emplace(key, std::make_unique<ElementMatrices>(assemble_element(cfg_, h, flags))).first;
  return *it->second;
}

}  // namespace dpg2d
