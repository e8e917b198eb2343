#pragma once

#include <array>
#include <vector>

#include "ocp/sparse_matrix.hpp"

namespace ocp {

struct Rectangle {
  double x_lo = 0.0;
  double x_hi = 1.0;
  double y_lo = 0.0;
  double y_hi = 1.0;

  double area() const { return (x_hi - x_lo) * (y_hi - y_lo); }
  friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

struct Point {
  double x;
  double y;
};

/// For a node created by refinement: the coarse nodes it interpolates from.
/// Vertices inherited from the coarse mesh have first == second.
struct ParentLink {
  Index first;
  Index second;
};

/// Structured triangulation of a rectangle. Each cell is split along its
/// lower-left to upper-right diagonal; nodes are numbered row-major, x fastest.
class Mesh {
 public:
  Index nx() const { return nx_; }
  Index ny() const { return ny_; }
  const Rectangle& domain() const { return domain_; }
  int level() const { return level_; }

  Index num_nodes() const { return static_cast<Index>(nodes_.size()); }
  Index num_elements() const { return static_cast<Index>(elements_.size()); }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<std::array<Index, 3>>& elements() const { return elements_; }
  const std::vector<Index>& boundary_nodes() const { return boundary_nodes_; }
  const std::vector<char>& boundary_mask() const { return boundary_mask_; }
  bool is_boundary(Index node) const { return boundary_mask_[node] != 0; }

  /// Empty unless this mesh came out of refine().
  const std::vector<ParentLink>& parents() const { return parents_; }

  Index node_index(Index i, Index j) const { return j * (nx_ + 1) + i; }
  double element_area(Index e) const;

 private:
  friend Mesh build_rect_mesh(Index nx, Index ny, const Rectangle& domain);
  friend Mesh refine(const Mesh& mesh);

  Index nx_ = 0;
  Index ny_ = 0;
  Rectangle domain_;
  int level_ = 0;
  std::vector<Point> nodes_;
  std::vector<std::array<Index, 3>> elements_;
  std::vector<Index> boundary_nodes_;
  std::vector<char> boundary_mask_;
  std::vector<ParentLink> parents_;
};

Mesh build_rect_mesh(Index nx, Index ny, const Rectangle& domain);

/// Doubles nx and ny on the same rectangle; coarse vertices reappear bit-exactly.
Mesh refine(const Mesh& mesh);

/// Meshes with nx = ny = 2^l for l = coarsest_level..k, coarse to fine.
std::vector<Mesh> build_mesh_hierarchy(int k, const Rectangle& domain, int coarsest_level = 1);

/// Linear interpolation from the parent mesh to `fine` (fine.parents() must be set).
SparseMatrix prolongation(const Mesh& fine, Index coarse_nodes);

}  // namespace ocp
