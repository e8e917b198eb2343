#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "ocp/error.hpp"

namespace ocp {

using Vector = std::vector<double>;

inline void check_same_size(std::span<const double> a, std::span<const double> b,
                            const char* where) {
  if (a.size() != b.size()) {
    throw DimensionError(std::string(where) + ": size mismatch (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x, y, "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(double alpha, std::span<double> x) {
  for (double& v : x) v *= alpha;
}

inline Vector add(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "add");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector subtract(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "subtract");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector scaled(double alpha, std::span<const double> x) {
  Vector r(x.begin(), x.end());
  scale(alpha, r);
  return r;
}

inline double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Relative 2-norm distance ||a - b|| / ||b||, falling back to absolute when b = 0.
inline double relative_error(std::span<const double> a, std::span<const double> b) {
  check_same_size(a, b, "relative_error");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace ocp
