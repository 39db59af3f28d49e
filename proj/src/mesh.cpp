#include "dpg2d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace dpg2d {

Real VertexPatch::hat(Real x, Real y, Real vx, Real vy) const {
  Real best = 0.0;
  for (const auto& r : support_rects) {
    if (x < r[0] - 1e-14 || x > r[2] + 1e-14 || y < r[1] - 1e-14 || y > r[3] + 1e-14) continue;
    const Real hx = r[2] - r[0], hy = r[3] - r[1];
    const Real sx = 1.0 - std::abs(x - vx) / hx;
    const Real sy = 1.0 - std::abs(y - vy) / hy;
    best = std::max(best, std::max(0.0, sx) * std::max(0.0, sy));
  }
  return best;
}

int AdaptiveMesh::add_vertex(Real x, Real y) {
  verts_.push_back({x, y});
  return static_cast<int>(verts_.size()) - 1;
}

int AdaptiveMesh::add_edge(int v0, int v1, bool horizontal, bool boundary, int parent) {
  MeshEdge e;
  e.v0 = v0;
  e.v1 = v1;
  e.horizontal = horizontal;
  e.boundary = boundary;
  e.parent = parent;
  edges_.push_back(e);
  return static_cast<int>(edges_.size()) - 1;
}

AdaptiveMesh AdaptiveMesh::uniform(int n) {
  if (n < 1) throw std::invalid_argument("uniform: n_per_side >= 1 required");
  AdaptiveMesh m;
  const Real h = 1.0 / n;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.add_vertex(i * h, j * h);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  // horizontal edges: (i,j) between vid(i,j) and vid(i+1,j)
  std::vector<int> he(n * (n + 1)), ve((n + 1) * n);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i < n; ++i)
      he[j * n + i] = m.add_edge(vid(i, j), vid(i + 1, j), true, j == 0 || j == n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= n; ++i)
      ve[j * (n + 1) + i] = m.add_edge(vid(i, j), vid(i, j + 1), false, i == 0 || i == n, -1);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      MeshCell c;
      c.v = {vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)};
      c.e = {he[j * n + i], ve[j * (n + 1) + i + 1], he[(j + 1) * n + i], ve[j * (n + 1) + i]};
      const int id = static_cast<int>(m.cells_.size());
      m.cells_.push_back(c);
      m.edges_[c.e[0]].side[1] = id;  // cell above its south edge
      m.edges_[c.e[2]].side[0] = id;
      m.edges_[c.e[1]].side[0] = id;  // cell left of its east edge
      m.edges_[c.e[3]].side[1] = id;
    }
  m.snapshots_.push_back(m.active_cells());
  return m;
}

std::vector<int> AdaptiveMesh::active_cells() const {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(cells_.size()); ++i)
    if (cells_[i].active) out.push_back(i);
  return out;
}

int AdaptiveMesh::edge_side_of(int c, int le) const {
  // side index of cell c on its local edge: S -> positive side (above the
  // edge), N -> negative, E -> negative (left of the edge), W -> positive
  switch (le) {
    case 0: return 1;
    case 2: return 0;
    case 1: return 0;
    default: return 1;
  }
}

Neighbor AdaptiveMesh::across(int c, int le) const {
  const int e = cells_[c].e[le];
  const int myside = edge_side_of(c, le);
  const MeshEdge& ed = edges_[e];
  const int other = ed.side[1 - myside];
  if (other >= 0 && cells_[other].active) return {NeighborKind::Same, other};
  if (ed.child[0] >= 0) {
    const int c0 = edges_[ed.child[0]].side[1 - myside];
    if (c0 >= 0 && (cells_[c0].active || edges_[ed.child[0]].child[0] >= 0))
      return {NeighborKind::Finer, -1};
  }
  if (ed.parent >= 0) {
    const int po = edges_[ed.parent].side[1 - myside];
    if (po >= 0 && cells_[po].active) return {NeighborKind::Coarser, po};
  }
  if (ed.boundary) return {NeighborKind::Boundary, -1};
  // interior edge whose other side is refined deeper than one level would be
  // caught above as Finer; reaching here means the neighbor was refined and
  // its children registered on the child edges
  return {NeighborKind::Finer, -1};
}

void AdaptiveMesh::cell_box(int c, Real& x0, Real& y0, Real& h) const {
  const MeshVertex& sw = verts_[cells_[c].v[0]];
  const MeshVertex& se = verts_[cells_[c].v[1]];
  x0 = sw.x;
  y0 = sw.y;
  h = se.x - sw.x;
}

void AdaptiveMesh::split_edge(int e) {
  if (edges_[e].child[0] >= 0) return;
  const MeshVertex a = verts_[edges_[e].v0];
  const MeshVertex b = verts_[edges_[e].v1];
  const int mid = add_vertex(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
  const bool hor = edges_[e].horizontal;
  const bool bd = edges_[e].boundary;
  const int c0 = add_edge(edges_[e].v0, mid, hor, bd, e);
  const int c1 = add_edge(mid, edges_[e].v1, hor, bd, e);
  edges_[e].child = {c0, c1};
}

void AdaptiveMesh::refine_cell(int c) {
  if (!cells_[c].active) return;
  // closure first: a coarser neighbor across any edge must be refined
  for (int le = 0; le < 4; ++le) {
    Neighbor nb = across(c, le);
    if (nb.kind == NeighborKind::Coarser) refine_cell(nb.cell);
  }
  const std::array<int, 4> ce = cells_[c].e;
  const std::array<int, 4> cv = cells_[c].v;
  for (int le = 0; le < 4; ++le) split_edge(ce[le]);
  Real x0, y0, h;
  cell_box(c, x0, y0, h);
  const int ctr = add_vertex(x0 + 0.5 * h, y0 + 0.5 * h);
  const int ms = edges_[edges_[ce[0]].child[0]].v1;
  const int me = edges_[edges_[ce[1]].child[0]].v1;
  const int mn = edges_[edges_[ce[2]].child[0]].v1;
  const int mw = edges_[edges_[ce[3]].child[0]].v1;
  // interior edges: two vertical (ms-ctr, ctr-mn), two horizontal (mw-ctr, ctr-me)
  const int iv0 = add_edge(ms, ctr, false, false, -1);
  const int iv1 = add_edge(ctr, mn, false, false, -1);
  const int ih0 = add_edge(mw, ctr, true, false, -1);
  const int ih1 = add_edge(ctr, me, true, false, -1);
  const int lvl = cell.level + 1;
  auto mk = [&](std::array<int, 4> vv, std::array<int, 4> ee) {
    MeshCell ch;
    ch.v = vv;
    ch.e = ee;
    ch.level = lvl;
    ch.parent = c;
    const int id = static_cast<int>(cells_.size());
    cells_.push_back(ch);
    edges_[ee[0]].side[1] = id;
    edges_[ee[2]].side[0] = id;
    edges_[ee[1]].side[0] = id;
    edges_[ee[3]].side[1] = id;
    return id;
  };
  const int csw = mk({cv[0], ms, ctr, mw}, {edges_[ce[0]].child[0], iv0, ih0, edges_[ce[3]].child[0]});
  const int cse = mk({ms, cv[1], me, ctr}, {edges_[ce[0]].child[1], edges_[ce[1]].child[0], ih1, iv0});
  const int cne = mk({ctr, me, cv[2], mn}, {ih1, edges_[ce[1]].child[1], edges_[ce[2]].child[1], iv1});
  const int cnw = mk({mw, ctr, mn, cv[3]}, {ih0, iv1, edges_[ce[2]].child[0], edges_[ce[3]].child[1]});
  cells_[c].child = {csw, cse, cne, cnw};
  cells_[c].active = false;
}

void AdaptiveMesh::refine(const std::vector<int>& marked) {
  for (int c : marked) {
    if (c < 0 || c >= static_cast<int>(cells_.size()) || !cells_[c].active)
      throw std::invalid_argument("refine: marked id is not an active cell");
  }
  if (marked.empty()) return;
  for (int c : marked) refine_cell(c);
  snapshots_.push_back(active_cells());
}

Real AdaptiveMesh::active_area() const {
  Real a = 0.0;
  for (int c : active_cells()) {
    Real x0, y0, h;
    cell_box(c, x0, y0, h);
    a += h * h;
  }
  return a;
}

int AdaptiveMesh::max_interface_level_diff() const {
  int worst = 0;
  for (int c : active_cells()) {
    for (int le = 0; le < 4; ++le) {
      Neighbor nb = across(c, le);
      if (nb.kind == NeighborKind::Coarser)
        worst = std::max(worst, cells_[c].level - cells_[nb.cell].level);
      if (nb.kind == NeighborKind::Finer) {
        // walk down the edge children and find the finest active owner
        const int e = cells_[c].e[le];
        const int myside = edge_side_of(c, le);
        int deep = 0;
        std::vector<std::pair<int, int>> stack{{e, 0}};
        while (!stack.empty()) {
          auto [ee, d] = stack.back();
          stack.pop_back();
          const int oc = edges_[ee].side[1 - myside];
          if (oc >= 0 && cells_[oc].active) deep = std::max(deep, d);
          if (edges_[ee].child[0] >= 0) {
            stack.push_back({edges_[ee].child[0], d + 1});
            stack.push_back({edges_[ee].child[1], d + 1});
          }
        }
        worst = std::max(worst, deep);
      }
    }
  }
  return worst;
}

std::vector<VertexPatch> AdaptiveMesh::build_patches(int patch_level) const {
  const auto& snap = snapshots_.at(patch_level);
  std::set<int> snapset(snap.begin(), snap.end());
  // snapshot ancestor of each active cell
  std::unordered_map<int, int> anc;
  for (int c : active_cells()) {
    int a = c;
    while (a >= 0 && !snapset.count(a)) a = cells_[a].parent;
    if (a < 0) throw std::logic_error("build_patches: active cell not nested in snapshot");
    anc[c] = a;
  }
  // vertex -> incident snapshot cells
  std::unordered_map<int, std::vector<int>> byvertex;
  for (int sc : snap)
    for (int v : cells_[sc].v) byvertex[v].push_back(sc);
  std::vector<VertexPatch> out;
  for (auto& [v, sup] : byvertex) {
    VertexPatch p;
    p.vertex = v;
    Real xmin = 1e30, xmax = -1e30, ymin = 1e30, ymax = -1e30;
    std::set<int> supset(sup.begin(), sup.end());
    for (int sc : sup) {
      Real x0, y0, h;
      cell_box(sc, x0, y0, h);
      p.support_rects.push_back({x0, y0, x0 + h, y0 + h});
      xmin = std::min(xmin, x0);
      xmax = std::max(xmax, x0 + h);
      ymin = std::min(ymin, y0);
      ymax = std::max(ymax, y0 + h);
    }
    p.delta = std::max(xmax - xmin, ymax - ymin);
    for (auto& [c, a] : anc)
      if (supset.count(a)) p.cells.push_back(c);
    std::sort(p.cells.begin(), p.cells.end());
    out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(),
            [](const VertexPatch& a, const VertexPatch& b) { return a.vertex < b.vertex; });
  return out;
}

std::string AdaptiveMesh::dump_text() const {
  std::ostringstream os;
  os << "vertices " << verts_.size() << "\n";
  for (size_t i = 0; i < verts_.size(); ++i)
    os << i << " " << verts_[i].x << " " << verts_[i].y << "\n";
  auto act = active_cells();
  os << "cells " << act.size() << "\n";
  for (int c : act) {
    os << c << " level " << cells_[c].level << " v";
    for (int v : cells_[c].v) os << " " << v;
    os << "\n";
  }
  return os.str();
}

std::string AdaptiveMesh::dump_svg(const std::vector<Real>& cell_values) const {
  auto act = active_cells();
  const int size = 800;
  std::ostringstream os;
  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << size << "' height='" << size
     << "' viewBox='0 0 " << size << " " << size << "'>\n";
  Real vmin = 0, vmax = 1;
  if (!cell_values.empty()) {
    vmin = *std::min_element(cell_values.begin(), cell_values.end());
    vmax = *std::max_element(cell_values.begin(), cell_values.end());
    if (vmax <= vmin) vmax = vmin + 1;
  } else {
    for (int c : act) vmax = std::max(vmax, static_cast<Real>(cells_[c].level));
  }
  for (size_t k = 0; k < act.size(); ++k) {
    const int c = act[k];
    Real x0, y0, h;
    cell_box(c, x0, y0, h);
    const Real t = cell_values.empty()
                       ? (cells_[c].level - vmin) / (vmax - vmin)
                       : (cell_values[k] - vmin) / (vmax - vmin);
    const int r = static_cast<int>(255 * t);
    const int b = static_cast<int>(255 * (1 - t));
    os << "<rect x='" << x0 * size << "' y='" << (1 - y0 - h) * size << "' width='" << h * size
       << "' height='" << h * size << "' fill='rgb(" << r << ",64," << b
       << ")' stroke='black' stroke-width='1'/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace dpg2d
