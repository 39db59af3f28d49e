#ifndef DPG2D_MESH_HPP
#define DPG2D_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include "dpg2d/types.hpp"

namespace dpg2d {

struct MeshVertex {
  Real x, y;
};

// Corners and local edges are ordered SW,SE,NE,NW and S,E,N,W.
struct MeshCell {
  std::array<int, 4> v;
  std::array<int, 4> e;
  int level = 0;
  int parent = -1;
  std::array<int, 4> child = {-1, -1, -1, -1};
  bool active = true;
};

// Edges are axis-aligned and parametrized by the increasing coordinate.
// side[0] is the cell on the negative side of the geometric normal
// (+y for horizontal, +x for vertical), side[1] the positive side.
struct MeshEdge {
  int v0, v1;
  bool horizontal;
  bool boundary = false;
  int parent = -1;
  std::array<int, 2> child = {-1, -1};
  std::array<int, 2> side = {-1, -1};
};

enum class NeighborKind { Same, Coarser, Finer, Boundary };

struct Neighbor {
  NeighborKind kind;
  int cell = -1;  // Same/Coarser: the neighbor cell id
};

// Support of a vertex hat function on a patch-defining snapshot mesh,
// collected as active fine cells. delta is the largest side of the
// support box (the paper's overlap parameter is delta/2 on uniform meshes).
struct VertexPatch {
  int vertex = -1;
  std::vector<int> cells;
  Real delta = 0.0;
  std::vector<std::array<Real, 4>> support_rects;  // x0,y0,x1,y1 per snapshot cell
  std::vector<int> dofs;  // interior trace dofs, filled by the smoother setup

  // Hat value at a point; zero outside the support.
  Real hat(Real x, Real y, Real vx, Real vy) const;
};

class AdaptiveMesh {
 public:
  static AdaptiveMesh uniform(int n_per_side);

  // Replaces each marked cell by its 4 children and performs closure
  // refinements until every interface has a level difference <= 1.
  // Appends a snapshot if anything changed. Rejects inactive ids.
  void refine(const std::vector<int>& marked);

  const std::vector<MeshVertex>& vertices() const { return verts_; }
  const std::vector<MeshCell>& cells() const { return cells_; }
  const std::vector<MeshEdge>& edges() const { return edges_; }
  std::vector<int> active_cells() const;
  int n_snapshots() const { return static_cast<int>(snapshots_.size()); }
  const std::vector<int>& snapshot(int k) const { return snapshots_.at(k); }

  // Neighbor of cell c across its local edge le (0..3).
  Neighbor across(int c, int le) const;

  // Lower-left corner and side length of a cell.
  void cell_box(int c, Real& x0, Real& y0, Real& h) const;

  Real active_area() const;
  int max_interface_level_diff() const;

  // One patch per vertex of the snapshot mesh; members are the active
  // cells inside the closed support of that vertex's hat function.
  std::vector<VertexPatch> build_patches(int patch_level) const;

  std::string dump_text() const;
  // Cells colored by level, or by the values vector (one per active cell).
  std::string dump_svg(const std::vector<Real>& cell_values = {}) const;

 private:
  int add_vertex(Real x, Real y);
  int add_edge(int v0, int v1, bool horizontal, bool boundary, int parent);
  void split_edge(int e);
  void refine_cell(int c);
  int edge_side_of(int c, int le) const;

  std::vector<MeshVertex> verts_;
  std::vector<MeshCell> cells_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<int>> snapshots_;
};

}  // namespace dpg2d

#endif
