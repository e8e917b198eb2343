#include "ocp/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ocp/dense.hpp"

namespace ocp {

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  validate();
}

void SparseMatrix::validate() const {
  if (nrows_ < 0 || ncols_ < 0) throw DimensionError("SparseMatrix: negative dimension");
  if (static_cast<Index>(row_offsets_.size()) != nrows_ + 1 || row_offsets_.front() != 0) {
    throw DimensionError("SparseMatrix: row_offsets must have length nrows + 1 and start at 0");
  }
  if (col_indices_.size() != values_.size() ||
      row_offsets_.back() != static_cast<Index>(values_.size())) {
    throw DimensionError("SparseMatrix: inconsistent nonzero count");
  }
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw DimensionError("SparseMatrix: row_offsets must be nondecreasing");
    }
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index c = col_indices_[p];
      if (c < 0 || c >= ncols_) throw IndexError("SparseMatrix: column index out of range");
      if (p > row_offsets_[i] && col_indices_[p - 1] >= c) {
        throw IndexError("SparseMatrix: column indices must be strictly increasing in row " +
                         std::to_string(i));
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols,
                                         std::span<const Triplet> entries) {
  std::vector<Index> counts(nrows + 1, 0);
  for (const auto& t : entries) {
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols) {
      throw IndexError("from_triplets: entry (" + std::to_string(t.row) + ", " +
                       std::to_string(t.col) + ") out of range");
    }
    ++counts[t.row + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // Stable bucket by row keeps the accumulation order of duplicates fixed.
  std::vector<Index> order(entries.size());
  std::vector<Index> cursor(counts.begin(), counts.end() - 1);
  for (std::size_t e = 0; e < entries.size(); ++e) order[cursor[entries[e].row]++] = e;

  std::vector<Index> offsets(nrows + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  std::vector<Index> row_buf;
  for (Index i = 0; i < nrows; ++i) {
    row_buf.assign(order.begin() + counts[i], order.begin() + counts[i + 1]);
    std::stable_sort(row_buf.begin(), row_buf.end(),
                     [&](Index a, Index b) { return entries[a].col < entries[b].col; });
    for (std::size_t k = 0; k < row_buf.size(); ++k) {
      const auto& t = entries[row_buf[k]];
      if (k > 0 && t.col == cols.back()) {
        vals.back() += t.value;
      } else {
        cols.push_back(t.col);
        vals.push_back(t.value);
      }
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix SparseMatrix::identity(Index n) {
  Vector ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  const Index n = static_cast<Index>(diag.size());
  std::vector<Index> offsets(n + 1);
  std::vector<Index> cols(n);
  std::iota(offsets.begin(), offsets.end(), Index{0});
  std::iota(cols.begin(), cols.end(), Index{0});
  return SparseMatrix(n, n, std::move(offsets), std::move(cols), Vector(diag.begin(), diag.end()));
}

SparseMatrix SparseMatrix::zero(Index nrows, Index ncols) {
  return SparseMatrix(nrows, ncols, std::vector<Index>(nrows + 1, 0), {}, {});
}

double SparseMatrix::at(Index i, Index j) const {
  if (i < 0 || i >= nrows_ || j < 0 || j >= ncols_) throw IndexError("SparseMatrix::at");
  const auto begin = col_indices_.begin() + row_offsets_[i];
  const auto end = col_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return 0.0;
  return values_[it - col_indices_.begin()];
}

Vector SparseMatrix::diagonal_values() const {
  Vector d(std::min(nrows_, ncols_), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != ncols_ || static_cast<Index>(y.size()) != nrows_) {
    throw DimensionError("spmv: expected x of size " + std::to_string(ncols_) + " and y of size " +
                         std::to_string(nrows_));
  }
  for (Index i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) s += values_[p] * x[col_indices_[p]];
    y[i] = s;
  }
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != nrows_ || static_cast<Index>(y.size()) != ncols_) {
    throw DimensionError("spmv_transpose: dimension mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) y[col_indices_[p]] += values_[p] * x[i];
  }
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) d(i, col_indices_[p]) = values_[p];
  }
  return d;
}

Vector spmv(const SparseMatrix& m, std::span<const double> x) {
  Vector y(m.rows());
  m.multiply(x, y);
  return y;
}

SparseMatrix transpose(const SparseMatrix& m) {
  const auto offs = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  std::vector<Index> t_offsets(m.cols() + 1, 0);
  for (Index c : cols) ++t_offsets[c + 1];
  std::partial_sum(t_offsets.begin(), t_offsets.end(), t_offsets.begin());
  std::vector<Index> cursor(t_offsets.begin(), t_offsets.end() - 1);
  std::vector<Index> t_cols(cols.size());
  std::vector<double> t_vals(cols.size());
  // Rows are visited in increasing order, so each transposed row comes out sorted.
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index p = offs[i]; p < offs[i + 1]; ++p) {
      const Index dst = cursor[cols[p]]++;
      t_cols[dst] = i;
      t_vals[dst] = vals[p];
    }
  }
  return SparseMatrix(m.cols(), m.rows(), std::move(t_offsets), std::move(t_cols),
                      std::move(t_vals));
}

SparseMatrix linear_combination(double alpha, const SparseMatrix& a, double beta,
                                const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("linear_combination: shape mismatch");
  }
  std::vector<Index> offsets(a.rows() + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(a.nnz() + b.nnz());
  vals.reserve(a.nnz() + b.nnz());
  const auto ao = a.row_offsets(), ac = a.col_indices();
  const auto bo = b.row_offsets(), bc = b.col_indices();
  const auto av = a.values(), bv = b.values();
  for (Index i = 0; i < a.rows(); ++i) {
    Index p = ao[i], q = bo[i];
    while (p < ao[i + 1] || q < bo[i + 1]) {
      if (q >= bo[i + 1] || (p < ao[i + 1] && ac[p] < bc[q])) {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p]);
        ++p;
      } else if (p >= ao[i + 1] || bc[q] < ac[p]) {
        cols.push_back(bc[q]);
        vals.push_back(beta * bv[q]);
        ++q;
      } else {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p] + beta * bv[q]);
        ++p;
        ++q;
      }
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix scaled(double alpha, const SparseMatrix& m) {
  Vector v(m.values().begin(), m.values().end());
  for (double& x : v) x *= alpha;
  return SparseMatrix(m.rows(), m.cols(),
                      std::vector<Index>(m.row_offsets().begin(), m.row_offsets().end()),
                      std::vector<Index>(m.col_indices().begin(), m.col_indices().end()),
                      std::move(v));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimension mismatch");
  const auto ao = a.row_offsets(), ac = a.col_indices();
  const auto bo = b.row_offsets(), bc = b.col_indices();
  const auto av = a.values(), bv = b.values();

  // Gustavson's row-by-row product with a dense accumulator.
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<Index> marker(b.cols(), -1);
  std::vector<Index> row_cols;
  std::vector<Index> offsets(a.rows() + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.rows(); ++i) {
    row_cols.clear();
    for (Index p = ao[i]; p < ao[i + 1]; ++p) {
      const Index k = ac[p];
      for (Index q = bo[k]; q < bo[k + 1]; ++q) {
        const Index j = bc[q];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          row_cols.push_back(j);
        }
        acc[j] += av[p] * bv[q];
      }
    }
    std::sort(row_cols.begin(), row_cols.end());
    for (Index j : row_cols) {
      cols.push_back(j);
      vals.push_back(acc[j]);
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

SparseMatrix galerkin_product(const SparseMatrix& a, const SparseMatrix& p) {
  return multiply(transpose(p), multiply(a, p));
}

double asymmetry(const SparseMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("asymmetry: matrix is not square");
  const SparseMatrix diff = linear_combination(1.0, m, -1.0, transpose(m));
  return max_abs(diff.values());
}

SparseMatrix dense_to_sparse(const DenseMatrix& d, double drop_tol) {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < d.rows(); ++i) {
    for (std::size_t j = 0; j < d.cols(); ++j) {
      if (std::abs(d(i, j)) > drop_tol) {
        t.push_back({static_cast<Index>(i), static_cast<Index>(j), d(i, j)});
      }
    }
  }
  return SparseMatrix::from_triplets(d.rows(), d.cols(), t);
}

}  // namespace ocp
