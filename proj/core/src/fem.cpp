#include "ocp/fem.hpp"

#include <array>
#include <string>

namespace ocp {

namespace {

struct Gradients {
  double area;
  std::array<Point, 3> grad;
};

Gradients p1_gradients(const Mesh& mesh, Index e) {
  const auto& t = mesh.elements()[e];
  const auto& nodes = mesh.nodes();
  const Point& a = nodes[t[0]];
  const Point& b = nodes[t[1]];
  const Point& c = nodes[t[2]];
  const double area = mesh.element_area(e);
  const double inv = 1.0 / (2.0 * area);
  return {area,
          {Point{(b.y - c.y) * inv, (c.x - b.x) * inv}, Point{(c.y - a.y) * inv, (a.x - c.x) * inv},
           Point{(a.y - b.y) * inv, (b.x - a.x) * inv}}};
}

}  // namespace

SparseMatrix assemble_mass(const Mesh& mesh) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements()[e];
    const double a12 = mesh.element_area(e) / 12.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.push_back({el[i], el[j], (i == j ? 2.0 : 1.0) * a12});
  }
  return SparseMatrix::from_triplets(mesh.num_nodes(), mesh.num_nodes(), t);
}

Vector lumped_mass(const Mesh& mesh) {
  Vector m(mesh.num_nodes(), 0.0);
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const double a3 = mesh.element_area(e) / 3.0;
    for (Index n : mesh.elements()[e]) m[n] += a3;
  }
  return m;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, double diffusivity) {
  if (!(diffusivity > 0.0)) {
    throw ConfigError("assemble_stiffness: diffusivity must be positive, got " + std::to_string(diffusivity));
  }
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_elements());
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements()[e];
    const auto g = p1_gradients(mesh, e);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double v = g.grad[i].x * g.grad[j].x + g.grad[i].y * g.grad[j].y;
        t.push_back({el[i], el[j], diffusivity * g.area * v});
      }
    }
  }
  return SparseMatrix::from_triplets(mesh.num_nodes(), mesh.num_nodes(), t);
}

SparseMatrix assemble_convection(const Mesh& mesh, const VectorField& wind) {
  std::vector<Triplet> t;
  t.reserve(9 * mesh.num_elements());
  const auto& nodes = mesh.nodes();
  for (Index e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.elements()[e];
    const auto g = p1_gradients(mesh, e);
    // Midpoint q of the edge opposite vertex q; there phi_i = 1/2 unless i == q.
    std::array<Point, 3> w;
    for (int q = 0; q < 3; ++q) {
      const Point& a = nodes[el[(q + 1) % 3]];
      const Point& b = nodes[el[(q + 2) % 3]];
      w[q] = wind(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int q = 0; q < 3; ++q) {
          if (q == i) continue;
          s += 0.5 * (w[q].x * g.grad[j].x + w[q].y * g.grad[j].y);
        }
        t.push_back({el[i], el[j], g.area / 3.0 * s});
      }
    }
  }
  return SparseMatrix::from_triplets(mesh.num_nodes(), mesh.num_nodes(), t);
}

Vector interpolate(const Mesh& mesh, const ScalarField& f) {
  Vector v(mesh.num_nodes());
  for (Index i = 0; i < mesh.num_nodes(); ++i) v[i] = f(mesh.nodes()[i].x, mesh.nodes()[i].y);
  return v;
}

SparseMatrix constrain(const SparseMatrix& m, std::span<const char> mask, double diagonal) {
  if (m.rows() != m.cols() || static_cast<Index>(mask.size()) != m.rows()) {
    throw DimensionError("constrain: matrix must be square and match the mask");
  }
  const auto offs = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  std::vector<Index> new_offs(m.rows() + 1, 0);
  std::vector<Index> new_cols;
  std::vector<double> new_vals;
  new_cols.reserve(m.nnz());
  new_vals.reserve(m.nnz());
  for (Index i = 0; i < m.rows(); ++i) {
    if (mask[i]) {
      if (diagonal != 0.0) {
        new_cols.push_back(i);
        new_vals.push_back(diagonal);
      }
    } else {
      for (Index p = offs[i]; p < offs[i + 1]; ++p) {
        if (mask[cols[p]]) continue;
        new_cols.push_back(cols[p]);
        new_vals.push_back(vals[p]);
      }
    }
    new_offs[i + 1] = static_cast<Index>(new_cols.size());
  }
  return SparseMatrix(m.rows(), m.cols(), std::move(new_offs), std::move(new_cols),
                      std::move(new_vals));
}

AssembledForm apply_dirichlet(const SparseMatrix& matrix, std::span<const double> rhs,
                              std::span<const Index> boundary, std::span<const double> values) {
  const Index n = matrix.rows();
  if (matrix.cols() != n || static_cast<Index>(rhs.size()) != n) {
    throw DimensionError("apply_dirichlet: matrix and rhs dimensions disagree");
  }
  if (boundary.size() != values.size()) {
    throw DimensionError("apply_dirichlet: one value per constrained index is required");
  }
  std::vector<char> mask(n, 0);
  Vector g(n, 0.0);
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    if (boundary[k] < 0 || boundary[k] >= n) {
      throw IndexError("apply_dirichlet: constrained index " + std::to_string(boundary[k]) +
                       " out of range");
    }
    mask[boundary[k]] = 1;
    g[boundary[k]] = values[k];
  }
  AssembledForm form;
  form.lifting = spmv(matrix, g);
  form.rhs.assign(rhs.begin(), rhs.end());
  for (Index i = 0; i < n; ++i) {
    form.rhs[i] = mask[i] ? g[i] : form.rhs[i] - form.lifting[i];
  }
  form.matrix = constrain(matrix, mask, 1.0);
  form.constrained.assign(boundary.begin(), boundary.end());
  return form;
}

}  // namespace ocp
