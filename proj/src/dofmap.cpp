#include "dpg2d/dofmap.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <stdexcept>

namespace dpg2d {

namespace {

// active neighbor classification restricted to a given active set
NeighborKind classify(const AdaptiveMesh& mesh, const std::set<int>& act, int c, int le,
                      int* neighbor) {
  const auto& cells = mesh.cells();
  const auto& edges = mesh.edges();
  const int e = cells[c].e[le];
  const int myside = (le == 0 || le == 3) ? 1 : 0;
  const MeshEdge& ed = edges[e];
  const int other = ed.side[1 - myside];
  if (other >= 0 && act.count(other)) {
    *neighbor = other;
    return NeighborKind::Same;
  }
  if (ed.child[0] >= 0) {
    const int c0 = edges[ed.child[0]].side[1 - myside];
    const int c1 = edges[ed.child[1]].side[1 - myside];
    if ((c0 >= 0 && act.count(c0)) || (c1 >= 0 && act.count(c1))) {
      *neighbor = -1;
      return NeighborKind::Finer;
    }
  }
  if (ed.parent >= 0) {
    const int po = edges[ed.parent].side[1 - myside];
    if (po >= 0 && act.count(po)) {
      *neighbor = po;
      return NeighborKind::Coarser;
    }
  }
  if (ed.boundary) {
    *neighbor = -1;
    return NeighborKind::Boundary;
  }
  throw std::logic_error("TraceDofMap: unclassifiable interface (set not 1-irregular?)");
}

}  // namespace

void TraceDofMap::build_restrictions() {
  const int p = p_;
  // phat: parent dofs [v0, v1, b_2..b_p] restricted to half intervals,
  // child coefficients in the same basis. Collocation at endpoints plus
  // Chebyshev interior points; exact for polynomials of degree <= p.
  for (int half = 0; half < 2; ++half) {
    RMat R(p + 1, p + 1);
    const Real t0 = half * 0.5;
    // child vertex rows: values of parent shapes at the sub-interval ends
    for (int j = 0; j <= p; ++j) {
      R(0, j) = hier(j, t0);
      R(1, j) = hier(j, t0 + 0.5);
    }
    const int nb = p - 1;
    if (nb > 0) {
      RVec s(nb);
      for (int i = 0; i < nb; ++i) s[i] = 0.5 * (1.0 - std::cos(kPi * (i + 1) / p));
      RMat V(nb, nb);  // bubble values at interior points
      for (int i = 0; i < nb; ++i)
        for (int k = 0; k < nb; ++k) V(i, k) = hier(k + 2, s[i]);
      RMat rhs(nb, p + 1);
      for (int i = 0; i < nb; ++i) {
        const Real t = t0 + 0.5 * s[i];
        for (int j = 0; j <= p; ++j)
          rhs(i, j) = hier(j, t) - R(0, j) * hier(0, s[i]) - R(1, j) * hier(1, s[i]);
      }
      R.bottomRows(nb) = V.fullPivLu().solve(rhs);
    }
    r_phat_[half] = R;
  }
  // uhat: Legendre coefficients of the restriction, by exact projection
  const int u = uhat_order_;
  QuadRule q = gauss01(u + 1);
  Basis1D b(u, q.points);
  for (int half = 0; half < 2; ++half) {
    RMat R(u + 1, u + 1);
    const Real t0 = half * 0.5;
    for (int k = 0; k <= u; ++k)
      for (int j = 0; j <= u; ++j) {
        Real acc = 0.0;
        for (int i = 0; i < static_cast<int>(q.points.size()); ++i)
          acc += q.weights[i] * b.leg_val(k, i) * legendre(j, t0 + 0.5 * q.points[i]);
        R(k, j) = (2 * k + 1) * acc;
      }
    r_uhat_[half] = R;
  }
}

TraceDofMap::TraceDofMap(const AdaptiveMesh& mesh, const std::vector<int>& active_cells, int p,
                         int uhat_order)
    : p_(p), uhat_order_(uhat_order), cells_(active_cells) {
  if (p < 1) throw std::invalid_argument("TraceDofMap: p >= 1 required");
  build_restrictions();

  const auto& cells = mesh.cells();
  const auto& edges = mesh.edges();
  const auto& verts = mesh.vertices();
  std::set<int> act(cells_.begin(), cells_.end());

  // pass 1: classify interfaces, collect hanging vertices and master edges
  const int nc = static_cast<int>(cells_.size());
  edge_info_.resize(nc);
  flags_.resize(nc);
  std::set<int> hanging;
  std::set<int> masters;          // master edge ids
  std::set<int> boundary_masters;
  for (int k = 0; k < nc; ++k) {
    const int c = cells_[k];
    for (int le = 0; le < 4; ++le) {
      int nb = -1;
      NeighborKind kind = classify(mesh, act, c, le, &nb);
      const int e = cells[c].e[le];
      CellEdgeInfo info;
      info.kind = kind;
      info.half = -1;
      flags_[k][le] = (kind == NeighborKind::Boundary);
      switch (kind) {
        case NeighborKind::Same:
        case NeighborKind::Finer:
        case NeighborKind::Boundary:
          info.master_edge = e;
          masters.insert(e);
          if (kind == NeighborKind::Boundary) boundary_masters.insert(e);
          if (kind == NeighborKind::Finer)
            hanging.insert(edges[edges[e].child[0]].v1);
          break;
        case NeighborKind::Coarser: {
          const int parent = edges[e].parent;
          info.master_edge = parent;
          info.half = (edges[parent].child[0] == e) ? 0 : 1;
          break;
        }
      }
      edge_info_[k][le] = info;
    }
  }

  // pass 2: vertex dofs (skip hanging), then edge blocks on master edges
  auto vloc = [&](int v) { return std::make_pair(verts[v].x, verts[v].y); };
  for (int k = 0; k < nc; ++k) {
    for (int v : cells[cells_[k]].v) {
      if (hanging.count(v) || vertex_dof_.count(v)) continue;
      vertex_dof_[v] = n_dofs_++;
      auto [x, y] = vloc(v);
      dofs_.push_back({DofType::PhatVertex, v, 0, x, y});
    }
  }
  master_edges_.assign(masters.begin(), masters.end());
  for (int e : master_edges_) {
    EdgeDofs ed;
    const Real mx = 0.5 * (verts[edges[e].v0].x + verts[edges[e].v1].x);
    const Real my = 0.5 * (verts[edges[e].v0].y + verts[edges[e].v1].y);
    ed.phat_base = n_dofs_;
    for (int k = 2; k <= p; ++k) {
      dofs_.push_back({DofType::PhatEdge, e, k, mx, my});
      ++n_dofs_;
    }
    if (!boundary_masters.count(e)) {
      ed.uhat_base = n_dofs_;
      for (int b = 0; b <= uhat_order_; ++b) {
        dofs_.push_back({DofType::UhatEdge, e, b, mx, my});
        ++n_dofs_;
      }
      // flux direction: from the lower active cell id to the higher.
      // The geometric normal points from side 0 to side 1.
      int lo = -1, hi = -1;
      const MeshEdge& me = edges[e];
      auto side_cell = [&](int side) {
        int sc = me.side[side];
        if (sc >= 0 && act.count(sc)) return sc;
        int best = -1;
        if (me.child[0] >= 0)
          for (int ch : {me.child[0], me.child[1]}) {
            int oc = edges[ch].side[side];
            if (oc >= 0 && act.count(oc) && (best < 0 || oc < best)) best = oc;
          }
        return best;
      };
      lo = side_cell(0);
      hi = side_cell(1);
      if (lo < 0 || hi < 0)
        throw std::logic_error("TraceDofMap: interior master edge without two sides");
      ed.normal_sign = (lo < hi) ? 1.0 : -1.0;
    } else {
      // boundary: outward normal
      const MeshEdge& me = edges[e];
      const bool low_side = me.horizontal ? (verts[me.v0].y < 0.5) : (verts[me.v0].x < 0.5);
      ed.normal_sign = low_side ? -1.0 : 1.0;
    }
    edge_dofs_[e] = ed;
  }

  // hanging-vertex constraint: value of the parent-edge polynomial at the
  // midpoint, expressed on the parent's dofs
  auto hanging_expansion = [&](int parent_edge) {
    std::vector<ScatterEntry> out;
    out.push_back({vertex_dof_.at(edges[parent_edge].v0), 0.5});
    out.push_back({vertex_dof_.at(edges[parent_edge].v1), 0.5});
    const EdgeDofs& ed = edge_dofs_.at(parent_edge);
    for (int k = 2; k <= p; ++k) {
      const Real c = hier(k, 0.5);
      if (std::abs(c) > 1e-15) out.push_back({ed.phat_base + (k - 2), c});
    }
    return out;
  };
  std::unordered_map<int, std::vector<ScatterEntry>> hang_exp;
  for (int k = 0; k < nc; ++k)
    for (int le = 0; le < 4; ++le) {
      const CellEdgeInfo& info = edge_info_[k][le];
      if (info.kind == NeighborKind::Finer) {
        const int mid = edges[edges[info.master_edge].child[0]].v1;
        if (!hang_exp.count(mid)) hang_exp[mid] = hanging_expansion(info.master_edge);
      }
    }

  // pass 3: per-cell scatter in the element's local trace layout
  scatter_.resize(nc);
  const int nb = p - 1;
  const int nu = uhat_order_ + 1;
  constexpr int kEdgeVerts[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
  for (int k = 0; k < nc; ++k) {
    const int c = cells_[k];
    LocalScatter& sc = scatter_[k];
    sc.offsets.push_back(0);
    auto push = [&](std::vector<ScatterEntry> es) {
      for (auto& e : es)
        if (std::abs(e.coeff) > 1e-15) sc.entries.push_back(e);
      sc.offsets.push_back(static_cast<int>(sc.entries.size()));
    };
    // 4 vertex dofs
    for (int v : cells[c].v) {
      if (hanging.count(v))
        push(hang_exp.at(v));
      else
        push({{vertex_dof_.at(v), 1.0}});
    }
    // phat bubbles per edge
    for (int le = 0; le < 4; ++le) {
      const CellEdgeInfo& info = edge_info_[k][le];
      if (info.half < 0) {
        const EdgeDofs& ed = edge_dofs_.at(info.master_edge);
        for (int kk = 0; kk < nb; ++kk) push({{ed.phat_base + kk, 1.0}});
      } else {
        // child edge: bubble row of the restriction against parent dofs
        const RMat& R = r_phat_[info.half];
        const EdgeDofs& ed = edge_dofs_.at(info.master_edge);
        const int pv0 = vertex_dof_.at(edges[info.master_edge].v0);
        const int pv1 = vertex_dof_.at(edges[info.master_edge].v1);
        for (int kk = 0; kk < nb; ++kk) {
          std::vector<ScatterEntry> es;
          es.push_back({pv0, R(2 + kk, 0)});
          es.push_back({pv1, R(2 + kk, 1)});
          for (int j = 0; j < nb; ++j) es.push_back({ed.phat_base + j, R(2 + kk, 2 + j)});
          push(es);
        }
      }
    }
    // flux dofs on interior edges; sign = outward(K) . geometric * normal_sign
    constexpr Real out_geo[4] = {-1.0, 1.0, 1.0, -1.0};
    for (int le = 0; le < 4; ++le) {
      const CellEdgeInfo& info = edge_info_[k][le];
      if (info.kind == NeighborKind::Boundary) continue;
      const EdgeDofs& ed = edge_dofs_.at(info.master_edge);
      const Real sigma = out_geo[le] * ed.normal_sign;
      if (info.half < 0) {
        for (int b = 0; b < nu; ++b) push({{ed.uhat_base + b, sigma}});
      } else {
        const RMat& R = r_uhat_[info.half];
        for (int b = 0; b < nu; ++b) {
          std::vector<ScatterEntry> es;
          for (int j = 0; j < nu; ++j) es.push_back({ed.uhat_base + j, sigma * R(b, j)});
          push(es);
        }
      }
    }
  }
}

int TraceDofMap::vertex_dof(int v) const {
  auto it = vertex_dof_.find(v);
  return it == vertex_dof_.end() ? -1 : it->second;
}

}  // namespace dpg2d
