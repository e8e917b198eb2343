#include "ocp/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace ocp {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vector DenseMatrix::multiply(std::span<const double> x) const {
  if (x.size() != cols_) throw DimensionError("DenseMatrix::multiply: dimension mismatch");
  Vector y(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("DenseMatrix product: inner dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const auto bk = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

namespace {

DenseMatrix combine(const DenseMatrix& a, const DenseMatrix& b, double sign) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("DenseMatrix sum: shape mismatch");
  }
  DenseMatrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + sign * b(i, j);
  return c;
}

}  // namespace

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) { return combine(a, b, 1.0); }
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) { return combine(a, b, -1.0); }

DenseMatrix operator*(double s, const DenseMatrix& a) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (double& v : c.row(i)) v *= s;
  return c;
}

DenseLU::DenseLU(DenseMatrix a) : lu_(std::move(a)) {
  const std::size_t n = lu_.rows();
  if (lu_.cols() != n) throw DimensionError("DenseLU: matrix is not square");
  if (n > kMaxDimension) {
    throw DimensionError("DenseLU: dimension " + std::to_string(n) + " exceeds " +
                         std::to_string(kMaxDimension));
  }
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best < 1e-300) {
      throw SingularMatrixError("DenseLU: pivot " + std::to_string(k) + " is numerically zero");
    }
    if (piv != k) {
      std::swap_ranges(lu_.row(k).begin(), lu_.row(k).end(), lu_.row(piv).begin());
      std::swap(perm_[k], perm_[piv]);
    }
    const double inv = 1.0 / lu_(k, k);
    const auto rk = lu_.row(k);
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const double l = ri[k] * inv;
      ri[k] = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= l * rk[j];
    }
  }
}

Vector DenseLU::solve(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("DenseLU::solve: dimension mismatch");
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto ri = lu_.row(i);
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= ri[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto ri = lu_.row(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= ri[j] * x[j];
    x[i] = s / ri[i];
  }
  return x;
}

Vector DenseLU::solve_transpose(std::span<const double> b) const {
  // A = P^T L U, so A^T y = b  <=>  U^T L^T (P y) = b.
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("DenseLU::solve_transpose: dimension mismatch");
  Vector w(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    double s = w[i];
    for (std::size_t j = 0; j < i; ++j) s -= lu_(j, i) * w[j];
    w[i] = s / lu_(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = w[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= lu_(j, i) * w[j];
    w[i] = s;
  }
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) y[perm_[i]] = w[i];
  return y;
}

DenseMatrix DenseLU::solve(const DenseMatrix& b) const {
  if (b.rows() != size()) throw DimensionError("DenseLU::solve: dimension mismatch");
  DenseMatrix x(b.rows(), b.cols());
  Vector col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    const Vector s = solve(col);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = s[i];
  }
  return x;
}

Vector dense_solve(const DenseMatrix& a, std::span<const double> b) {
  return DenseLU(a).solve(b);
}

DenseMatrix cholesky(const DenseMatrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw DimensionError("cholesky: matrix is not square");
  DenseMatrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 0.0)) throw SingularMatrixError("cholesky: matrix is not positive definite");
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

double symmetry_defect(const DenseMatrix& a) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - a(j, i)));
  return m;
}

Vector dense_symmetric_eig(const DenseMatrix& input) {
  const std::size_t n = input.rows();
  if (input.cols() != n) throw DimensionError("dense_symmetric_eig: matrix is not square");
  const double fro = input.frobenius_norm();
  if (symmetry_defect(input) > 1e-12 * std::max(fro, 1.0)) {
    throw NotSymmetricError("dense_symmetric_eig: input is not symmetric");
  }
  DenseMatrix a = input;
  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };
  const double target = 1e-12 * fro;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && off_norm() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

Vector generalized_symmetric_eig(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t n = a.rows();
  if (b.rows() != n || a.cols() != n || b.cols() != n) {
    throw DimensionError("generalized_symmetric_eig: shape mismatch");
  }
  // b = L L^T  =>  eig(L^{-1} a L^{-T}).
  const DenseMatrix l = cholesky(b);
  DenseMatrix y(n, n);  // y = L^{-1} a
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y(k, j);
      y(i, j) = s / l(i, i);
    }
  }
  DenseMatrix z(n, n);  // z = y L^{-T}, i.e. L z^T = y^T
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = y(r, i);
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * z(r, k);
      z(r, i) = s / l(i, i);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double avg = 0.5 * (z(i, j) + z(j, i));
      z(i, j) = avg;
      z(j, i) = avg;
    }
  }
  return dense_symmetric_eig(z);
}

}  // namespace ocp
