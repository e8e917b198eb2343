#include "ocp/chebyshev.hpp"

#include <cmath>
#include <string>

namespace ocp {

ChebyshevJacobi::ChebyshevJacobi(SparseMatrix m, EigenBounds bounds, int sweeps)
    : m_(std::move(m)), bounds_(bounds), sweeps_(sweeps) {
  if (m_.rows() != m_.cols()) throw DimensionError("chebyshev_jacobi: matrix is not square");
  if (!(bounds.lo > 0.0) || !(bounds.lo <= bounds.hi)) {
    throw ConfigError("chebyshev_jacobi: bounds must satisfy 0 < lo <= hi");
  }
  if (sweeps < 1) throw ConfigError("chebyshev_jacobi: sweeps must be >= 1");
  inv_diag_ = m_.diagonal_values();
  for (Index i = 0; i < static_cast<Index>(inv_diag_.size()); ++i) {
    if (!(inv_diag_[i] > 0.0)) {
      throw Error("chebyshev_jacobi: nonpositive diagonal entry at row " + std::to_string(i));
    }
    inv_diag_[i] = 1.0 / inv_diag_[i];
  }
}

double ChebyshevJacobi::contraction_bound() const {
  if (bounds_.lo == bounds_.hi) return 0.0;
  const double sigma = (bounds_.hi + bounds_.lo) / (bounds_.hi - bounds_.lo);
  return 1.0 / std::cosh(sweeps_ * std::acosh(sigma));
}

void ChebyshevJacobi::apply(std::span<const double> b, std::span<double> x) const {
  const Index n = m_.rows();
  if (static_cast<Index>(b.size()) != n || static_cast<Index>(x.size()) != n) {
    throw DimensionError("chebyshev_jacobi: dimension mismatch");
  }
  const double theta = 0.5 * (bounds_.hi + bounds_.lo);
  const double delta = 0.5 * (bounds_.hi - bounds_.lo);
  if (delta == 0.0) {
    for (Index i = 0; i < n; ++i) x[i] = inv_diag_[i] * b[i] / theta;
    return;
  }
  // Three-term Chebyshev recurrence (Saad, Alg. 12.1) on D^{-1} m.
  const double sigma = theta / delta;
  double rho = 1.0 / sigma;
  Vector r(b.begin(), b.end());
  Vector d(n);
  Vector md(n);
  for (Index i = 0; i < n; ++i) {
    d[i] = inv_diag_[i] * r[i] / theta;
    x[i] = 0.0;
  }
  for (int k = 0; k < sweeps_; ++k) {
    axpy(1.0, d, x);
    if (k + 1 == sweeps_) break;
    m_.multiply(d, md);
    axpy(-1.0, md, r);
    const double rho_next = 1.0 / (2.0 * sigma - rho);
    const double c1 = rho_next * rho;
    const double c2 = 2.0 * rho_next / delta;
    for (Index i = 0; i < n; ++i) d[i] = c1 * d[i] + c2 * inv_diag_[i] * r[i];
    rho = rho_next;
  }
}

Vector ChebyshevJacobi::apply(std::span<const double> b) const {
  Vector x(b.size());
  apply(b, x);
  return x;
}

Vector chebyshev_jacobi(const SparseMatrix& m, std::span<const double> b, EigenBounds bounds,
                        int sweeps) {
  return ChebyshevJacobi(m, bounds, sweeps).apply(b);
}

OperatorPtr make_chebyshev_operator(std::shared_ptr<const ChebyshevJacobi> cheb) {
  const Index n = cheb->matrix().rows();
  // m is symmetric for every use here (mass blocks), so the polynomial is too.
  auto fn = [cheb](std::span<const double> x, std::span<double> y) { cheb->apply(x, y); };
  return make_operator(n, n, fn, fn);
}

}  // namespace ocp
