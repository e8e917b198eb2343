#include "ocp/mesh.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace ocp {

double Mesh::element_area(Index e) const {
  const auto& t = elements_[e];
  const Point& a = nodes_[t[0]];
  const Point& b = nodes_[t[1]];
  const Point& c = nodes_[t[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Mesh build_rect_mesh(Index nx, Index ny, const Rectangle& domain) {
  if (nx < 1 || ny < 1) {
    throw DimensionError("build_rect_mesh: cell counts must be positive, got " +
                         std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(domain.x_lo < domain.x_hi) || !(domain.y_lo < domain.y_hi)) {
    throw DimensionError("build_rect_mesh: degenerate rectangle");
  }
  constexpr Index kMax = std::numeric_limits<Index>::max();
  if (nx >= kMax / 4 || ny >= kMax / 4 || (nx + 1) > kMax / (ny + 1)) {
    throw DimensionError("build_rect_mesh: node count exceeds index range");
  }

  Mesh m;
  m.nx_ = nx;
  m.ny_ = ny;
  m.domain_ = domain;
  const double lx = domain.x_hi - domain.x_lo;
  const double ly = domain.y_hi - domain.y_lo;
  // Coordinates are x_lo + (L * i) / n; doubling i and n is exact, which keeps
  // refined meshes nested bit-for-bit.
  auto coord = [](double lo, double hi, double len, Index i, Index n) {
    return i == n ? hi : lo + (len * static_cast<double>(i)) / static_cast<double>(n);
  };
  m.nodes_.reserve((nx + 1) * (ny + 1));
  m.boundary_mask_.assign((nx + 1) * (ny + 1), 0);
  for (Index j = 0; j <= ny; ++j) {
    for (Index i = 0; i <= nx; ++i) {
      m.nodes_.push_back({coord(domain.x_lo, domain.x_hi, lx, i, nx),
                          coord(domain.y_lo, domain.y_hi, ly, j, ny)});
      if (i == 0 || j == 0 || i == nx || j == ny) {
        m.boundary_mask_[m.node_index(i, j)] = 1;
        m.boundary_nodes_.push_back(m.node_index(i, j));
      }
    }
  }
  m.elements_.reserve(2 * nx * ny);
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      const Index n00 = m.node_index(i, j);
      const Index n10 = m.node_index(i + 1, j);
      const Index n01 = m.node_index(i, j + 1);
      const Index n11 = m.node_index(i + 1, j + 1);
      m.elements_.push_back({n00, n10, n11});
      m.elements_.push_back({n00, n11, n01});
    }
  }
  return m;
}

Mesh refine(const Mesh& coarse) {
  constexpr Index kMax = std::numeric_limits<Index>::max();
  if (coarse.nx() > kMax / 8 || coarse.ny() > kMax / 8 ||
      (2 * coarse.nx() + 1) > kMax / (2 * coarse.ny() + 1)) {
    throw DimensionError("refine: refined node count exceeds index range");
  }
  Mesh fine = build_rect_mesh(2 * coarse.nx(), 2 * coarse.ny(), coarse.domain());
  fine.level_ = coarse.level() + 1;
  fine.parents_.resize(fine.num_nodes());
  for (Index j = 0; j <= fine.ny(); ++j) {
    for (Index i = 0; i <= fine.nx(); ++i) {
      // Odd indices sit on coarse edges: horizontal, vertical, or the
      // lower-left to upper-right diagonal when both are odd.
      const Index ci0 = i / 2, cj0 = j / 2;
      const Index ci1 = (i + 1) / 2, cj1 = (j + 1) / 2;
      fine.parents_[fine.node_index(i, j)] = {coarse.node_index(ci0, cj0),
                                              coarse.node_index(ci1, cj1)};
    }
  }
  return fine;
}

std::vector<Mesh> build_mesh_hierarchy(int k, const Rectangle& domain, int coarsest_level) {
  if (k < 0) throw DimensionError("build_mesh_hierarchy: k must be nonnegative");
  coarsest_level = std::min(std::max(coarsest_level, 0), k);
  std::vector<Mesh> meshes;
  Mesh m = build_rect_mesh(Index{1} << coarsest_level, Index{1} << coarsest_level, domain);
  for (int l = coarsest_level; l <= k; ++l) {
    if (l > coarsest_level) m = refine(m);
    meshes.push_back(m);
  }
  return meshes;
}

SparseMatrix prolongation(const Mesh& fine, Index coarse_nodes) {
  const auto& parents = fine.parents();
  if (static_cast<Index>(parents.size()) != fine.num_nodes()) {
    throw Error("prolongation: mesh has no parent linkage");
  }
  std::vector<Triplet> t;
  t.reserve(2 * parents.size());
  for (Index n = 0; n < fine.num_nodes(); ++n) {
    const auto [a, b] = parents[n];
    if (a < 0 || a >= coarse_nodes || b < 0 || b >= coarse_nodes) {
      throw IndexError("prolongation: parent index out of range");
    }
    if (a == b) {
      t.push_back({n, a, 1.0});
    } else {
      t.push_back({n, a, 0.5});
      t.push_back({n, b, 0.5});
    }
  }
  return SparseMatrix::from_triplets(fine.num_nodes(), coarse_nodes, t);
}

}  // namespace ocp
