#ifndef DPG2D_DOFMAP_HPP
#define DPG2D_DOFMAP_HPP

#include <unordered_map>
#include <vector>

#include "dpg2d/element.hpp"
#include "dpg2d/mesh.hpp"
#include "dpg2d/types.hpp"

namespace dpg2d {

enum class DofType { PhatVertex, PhatEdge, UhatEdge };

struct DofDesc {
  DofType type;
  int entity;  // vertex id or edge id
  int mode;    // bubble index (2..p) or Legendre degree
  Real x, y;   // representative location
};

struct ScatterEntry {
  int gdof;
  Real coeff;
};

// Per-cell map from the local trace layout (see ElementMatrices) to global
// dofs. Hanging dofs expand to several entries; flux entries carry the
// orientation sign.
struct LocalScatter {
  std::vector<int> offsets;  // n_local + 1
  std::vector<ScatterEntry> entries;
};

// Local edge status of an active cell.
struct CellEdgeInfo {
  NeighborKind kind;
  int master_edge;  // own edge when master, parent edge when constrained
  int half;         // 0/1 sub-interval when constrained, -1 otherwise
};

// Master-edge dof blocks.
struct EdgeDofs {
  int phat_base = -1;  // p-1 bubble dofs
  int uhat_base = -1;  // flux dofs; -1 on boundary edges
  Real normal_sign = 1.0;  // +1 if the flux direction equals the geometric
                           // (+x/+y) normal; set from cell-id ordering,
                           // outward on the boundary
};

// Global numbering of the skeleton unknowns for one active-cell set:
// continuous pressure trace (vertex + edge dofs, hanging dofs constrained to
// their parent edge by polynomial restriction) and per-edge flux dofs
// (boundary edges eliminated through the impedance condition).
class TraceDofMap {
 public:
  TraceDofMap(const AdaptiveMesh& mesh, const std::vector<int>& active_cells, int p,
              int uhat_order);

  int n_dofs() const { return n_dofs_; }
  int p() const { return p_; }
  int flux_order() const { return uhat_order_; }
  const std::vector<int>& cells() const { return cells_; }
  const std::vector<DofDesc>& dofs() const { return dofs_; }
  const LocalScatter& cell_scatter(int k) const { return scatter_[k]; }
  EdgeFlags cell_flags(int k) const { return flags_[k]; }
  const std::array<CellEdgeInfo, 4>& cell_edges(int k) const { return edge_info_[k]; }

  int vertex_dof(int v) const;  // -1 when hanging or absent
  bool has_edge(int e) const { return edge_dofs_.count(e) > 0; }
  const EdgeDofs& edge(int e) const { return edge_dofs_.at(e); }
  const std::vector<int>& master_edges() const { return master_edges_; }

  // Restriction of a parent-edge polynomial to the half sub-interval,
  // in the hierarchical trace basis [v0, v1, bubbles].
  const RMat& phat_restriction(int half) const { return r_phat_[half]; }
  const RMat& uhat_restriction(int half) const { return r_uhat_[half]; }

 private:
  void build_restrictions();

  int p_, uhat_order_;
  int n_dofs_ = 0;
  std::vector<int> cells_;
  std::vector<DofDesc> dofs_;
  std::vector<LocalScatter> scatter_;
  std::vector<EdgeFlags> flags_;
  std::vector<std::array<CellEdgeInfo, 4>> edge_info_;
  std::unordered_map<int, int> vertex_dof_;
  std::unordered_map<int, EdgeDofs> edge_dofs_;
  std::vector<int> master_edges_;
  RMat r_phat_[2], r_uhat_[2];
};

}  // namespace dpg2d

#endif
