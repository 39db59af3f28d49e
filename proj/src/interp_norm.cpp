#include "dpg2d/interp_norm.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace dpg2d {

namespace {

// full extension space W^R x V^R with its trace/bubble split and the lift of
// the order-q source trace basis into it
struct MasterSpace {
  int R;
  ScalarSpace s;
  VectorSpace v;
  std::vector<int> trace, bubble;  // index sets into the stacked coefficients
  int n() const { return s.dim() + v.dim(); }

  explicit MasterSpace(int R_) : R(R_), s(R_), v(R_) {
    int k = 0;
    for (auto [a, b] : s.idx) (a <= 1 || b <= 1 ? trace : bubble).push_back(k), ++k;
    for (auto [a, b] : v.idx1) (a <= 1 ? trace : bubble).push_back(k), ++k;
    for (auto [a, b] : v.idx2) (b <= 1 ? trace : bubble).push_back(k), ++k;
  }

  // H_A(kappa,h) Gram of the stacked basis
  Mat gram(Real kappa, Real h) const {
    const QuadRule q = quadrature(R);
    const int nq = static_cast<int>(q.points.size());
    ScalarTab ts = tabulate_scalar(s, q);
    VectorTab tv = tabulate_vector(v, q);
    RVec w2(nq * nq);
    for (int i = 0; i < nq; ++i)
      for (int j = 0; j < nq; ++j) w2[i * nq + j] = q.weights[i] * q.weights[j];
    const int ns = s.dim(), nvv = v.dim(), ntot = ns + nvv;
    const Cplx ik(0.0, kappa);
    Mat A1(ntot, nq * nq), A2x(ntot, nq * nq), A2y(ntot, nq * nq);
    Mat T0 = Mat::Zero(ntot, nq * nq), T1 = Mat::Zero(ntot, nq * nq), T2 = Mat::Zero(ntot, nq * nq);
    A1.setZero();
    A2x.setZero();
    A2y.setZero();
    for (int k = 0; k < ns; ++k) {
      A1.row(k) = ts.val.row(k).cast<Cplx>() * ik;
      A2x.row(k) = ts.dx.row(k).cast<Cplx>();
      A2y.row(k) = ts.dy.row(k).cast<Cplx>();
      T0.row(k) = ts.val.row(k).cast<Cplx>();
    }
    for (int k = 0; k < nvv; ++k) {
      A1.row(ns + k) = tv.div.row(k).cast<Cplx>();
      A2x.row(ns + k) = tv.v1.row(k).cast<Cplx>() * ik;
      A2y.row(ns + k) = tv.v2.row(k).cast<Cplx>() * ik;
      T1.row(ns + k) = tv.v1.row(k).cast<Cplx>();
      T2.row(ns + k) = tv.v2.row(k).cast<Cplx>();
    }
    Mat G = A1.conjugate() * w2.asDiagonal() * A1.transpose() +
            A2x.conjugate() * w2.asDiagonal() * A2x.transpose() +
            A2y.conjugate() * w2.asDiagonal() * A2y.transpose() +
            h * h *
                (T0.conjugate() * w2.asDiagonal() * T0.transpose() +
                 T1.conjugate() * w2.asDiagonal() * T1.transpose() +
                 T2.conjugate() * w2.asDiagonal() * T2.transpose());
    return 0.5 * (G + Mat(G.adjoint()));
  }

  // lift of the order-q source trace basis: one signed entry per column
  RMat lift(int q) const {
    std::vector<std::pair<int, int>> spos_map(s.dim());
    // positions of (a,b) within the stacked coefficient vector
    auto spos = [&](int a, int b) { return a * (R + 1) + b; };
    const int of1 = s.dim();
    auto u1pos = [&](int a, int b) { return of1 + a * R + b; };
    const int of2 = of1 + static_cast<int>(v.idx1.size());
    auto u2pos = [&](int a, int b) { return of2 + a * (R + 1) + b; };
    const int nsrc = 8 * q;
    RMat L = RMat::Zero(n(), nsrc);
    int col = 0;
    const int corner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    for (auto [a, b] : corner) L(spos(a, b), col++) = 1.0;
    for (int e = 0; e < 4; ++e)
      for (int k = 2; k <= q; ++k) {
        int a, b;
        switch (e) {
          case 0: a = k; b = 0; break;
          case 1: a = 1; b = k; break;
          case 2: a = k; b = 1; break;
          default: a = 0; b = k; break;
        }
        L(spos(a, b), col++) = 1.0;
      }
    // flux traces, outward-normal convention on the master element
    for (int e = 0; e < 4; ++e)
      for (int b = 0; b < q; ++b) {
        switch (e) {
          case 0: L(u2pos(b, 0), col) = -1.0; break;
          case 1: L(u1pos(1, b), col) = 1.0; break;
          case 2: L(u2pos(b, 1), col) = 1.0; break;
          default: L(u1pos(0, b), col) = -1.0; break;
        }
        ++col;
      }
    return L;
  }
};

}  // namespace

TraceLayout::TraceLayout(int p_) : p(p_) {
  const int q = p + 1;
  n = 8 * q;
  int of = 4;
  for (int e = 0; e < 4; ++e) {
    std::vector<int> ids;
    for (int k = 2; k <= q; ++k) ids.push_back(of++);
    phat_edge.push_back(ids);
  }
  for (int e = 0; e < 4; ++e) {
    std::vector<int> ids;
    for (int b = 0; b < q; ++b) ids.push_back(of++);
    uhat_edge.push_back(ids);
  }
}

Vec min_energy_extension(const Vec& trace_coeffs, int p, int r_ext, Real kappa, Real h) {
  MasterSpace ms(r_ext);
  const int q = p + 1;
  RMat L = ms.lift(q);
  if (trace_coeffs.size() != L.cols())
    throw std::invalid_argument("min_energy_extension: trace coefficient size mismatch");
  Mat A = ms.gram(kappa, h);
  Vec full = L.cast<Cplx>() * trace_coeffs;
  const int nbub = static_cast<int>(ms.bubble.size());
  Mat Abb(nbub, nbub);
  Vec rhs = Vec::Zero(nbub);
  Vec At_full = A * full;
  for (int i = 0; i < nbub; ++i) {
    rhs[i] = -At_full[ms.bubble[i]];
    for (int j = 0; j < nbub; ++j) Abb(i, j) = A(ms.bubble[i], ms.bubble[j]);
  }
  Eigen::LLT<Mat> llt(Abb);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("min_energy_extension: bubble system not positive definite "
                             "(extension order too small for this frequency?)");
  Vec zb = llt.solve(rhs);
  for (int i = 0; i < nbub; ++i) full[ms.bubble[i]] += zb[i];
  return full;
}

Real extension_energy(const Vec& coeffs, int r_ext, Real kappa, Real h) {
  MasterSpace ms(r_ext);
  Mat A = ms.gram(kappa, h);
  return (coeffs.adjoint() * A * coeffs)(0, 0).real();
}

Mat build_gram(int p, Real kappa, Real h, int r_ext) {
  MasterSpace ms(r_ext);
  Mat A = ms.gram(kappa, h);
  const int nt = static_cast<int>(ms.trace.size());
  const int nbub = static_cast<int>(ms.bubble.size());
  Mat Att(nt, nt), Atb(nt, nbub), Abb(nbub, nbub);
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nt; ++j) Att(i, j) = A(ms.trace[i], ms.trace[j]);
    for (int j = 0; j < nbub; ++j) Atb(i, j) = A(ms.trace[i], ms.bubble[j]);
  }
  for (int i = 0; i < nbub; ++i)
    for (int j = 0; j < nbub; ++j) Abb(i, j) = A(ms.bubble[i], ms.bubble[j]);
  Eigen::LLT<Mat> llt(Abb);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("build_gram: bubble block not positive definite");
  Mat M = Att - Atb * llt.solve(Mat(Atb.adjoint()));
  // restrict to the lifted source basis (signed one-hot columns on trace rows)
  RMat L = ms.lift(p + 1);
  std::vector<int> trace_pos(ms.n(), -1);
  for (int i = 0; i < nt; ++i) trace_pos[ms.trace[i]] = i;
  const int n = static_cast<int>(L.cols());
  Mat G = Mat::Zero(n, n);
  // columns of L have exactly one nonzero; map them onto M
  std::vector<int> row_of(n, -1);
  RVec sign_of(n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < L.rows(); ++r)
      if (L(r, c) != 0.0) {
        row_of[c] = trace_pos[r];
        sign_of[c] = L(r, c);
        break;
      }
    if (row_of[c] < 0) throw std::logic_error("build_gram: lift column without trace row");
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = sign_of[i] * sign_of[j] * M(row_of[i], row_of[j]);
  return 0.5 * (G + Mat(G.adjoint()));
}

Mat build_interpolant(const Mat& G, int p) {
  TraceLayout lay(p);
  if (G.rows() != lay.n) throw std::invalid_argument("build_interpolant: size mismatch");
  Mat P = Mat::Zero(lay.n, lay.n);
  for (int j = 0; j < 4; ++j) P(j, j) = 1.0;
  for (int e = 0; e < 4; ++e) {
    // joint per-edge projection of (pressure bubbles, flux) onto the target
    // orders p and p-1 in the edge trace norm
    std::vector<int> tgt, src;
    for (size_t i = 0; i < lay.phat_edge[e].size(); ++i) {
      src.push_back(lay.phat_edge[e][i]);
      if (static_cast<int>(i) + 2 <= p) tgt.push_back(lay.phat_edge[e][i]);
    }
    for (size_t i = 0; i < lay.uhat_edge[e].size(); ++i) {
      src.push_back(lay.uhat_edge[e][i]);
      if (static_cast<int>(i) <= p - 1) tgt.push_back(lay.uhat_edge[e][i]);
    }
    const int nt = static_cast<int>(tgt.size());
    Mat Gtt(nt, nt);
    for (int i = 0; i < nt; ++i)
      for (int j = 0; j < nt; ++j) Gtt(i, j) = G(tgt[i], tgt[j]);
    Eigen::LLT<Mat> llt(Gtt);
    if (llt.info() != Eigen::Success)
      throw std::runtime_error("build_interpolant: singular edge projection");
    for (int jj : src) {
      Vec rhs(nt);
      for (int i = 0; i < nt; ++i) rhs[i] = G(tgt[i], jj);
      Vec c = llt.solve(rhs);
      for (int i = 0; i < nt; ++i) P(tgt[i], jj) = c[i];
    }
  }
  return P;
}

InterpNormProblem interp_norm_problem(int p, Real h, Real omega, int r_ext) {
  if (r_ext < 0) r_ext = default_extension_order(p);
  if (r_ext < p + 2) throw std::invalid_argument("interp_norm: extension order too small");
  InterpNormProblem out;
  out.p = p;
  out.r_ext = r_ext;
  out.kappa = omega * h;
  out.h = h;
  out.G = build_gram(p, out.kappa, h, r_ext);
  out.P = build_interpolant(out.G, p);
  Mat A = out.P.adjoint() * out.G * out.P;
  A = 0.5 * (A + Mat(A.adjoint()));
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, out.G);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("interp_norm: generalized eigensolve failed (pencil conditioning)");
  out.eigenvalues = es.eigenvalues();
  return out;
}

Real interp_norm(int p, Real h, Real omega, int r_ext) {
  InterpNormProblem prob = interp_norm_problem(p, h, omega, r_ext);
  return std::sqrt(prob.eigenvalues.maxCoeff());
}

}  // namespace dpg2d
