#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "ocp/dense.hpp"
#include "ocp/fem.hpp"
#include "ocp/linear_operator.hpp"
#include "ocp/matrix_market.hpp"
#include "ocp/sparse_matrix.hpp"
#include "oracles.hpp"

using namespace ocp;
using ocp::test::random_vector;

namespace {

SparseMatrix random_sparse(Index rows, Index cols, double density, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Triplet> t;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (u(gen) < density) t.push_back({i, j, 2.0 * u(gen) - 1.0});
  return SparseMatrix::from_triplets(rows, cols, t);
}

DenseMatrix random_spd(std::size_t n, unsigned seed) {
  DenseMatrix g(n, n);
  const Vector v = random_vector(n * n, seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = v[i * n + j];
  DenseMatrix a = g * g.transposed();
  for (std::size_t i = 0; i < n; ++i) a(i, i) += static_cast<double>(n);
  return a;
}

}  // namespace

TEST(Csr, RejectsBadLayouts) {
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1}, {0}, {1.0}), DimensionError);
  EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), Error);
  EXPECT_THROW(SparseMatrix(2, 2, {0, 2, 2}, {0, 0}, {1.0, 2.0}), Error);
  EXPECT_THROW(SparseMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 2.0}), IndexError);
  EXPECT_NO_THROW(SparseMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
}

TEST(Csr, TripletsSumDuplicatesInOrder) {
  const std::vector<Triplet> t{{0, 1, 1.0}, {1, 0, 2.0}, {0, 1, 0.5}, {0, 0, 3.0}};
  const SparseMatrix m = SparseMatrix::from_triplets(2, 2, t);
  EXPECT_EQ(m.nnz(), 3);
  EXPECT_EQ(m.at(0, 1), 1.5);
  EXPECT_EQ(m.at(1, 1), 0.0);
  const std::vector<Triplet> bad{{2, 0, 1.0}};
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, bad), IndexError);
}

TEST(Spmv, IdentityAndZero) {
  const Vector x = random_vector(10, 1);
  EXPECT_EQ(spmv(SparseMatrix::identity(10), x), x);
  const SparseMatrix m = random_sparse(10, 10, 0.3, 2);
  for (double v : spmv(m, Vector(10, 0.0))) EXPECT_EQ(v, 0.0);
}

TEST(Spmv, MatchesDenseOracle) {
  const SparseMatrix m = random_sparse(20, 20, 0.4, 3);
  const Vector x = random_vector(20, 4);
  const Vector ref = m.to_dense().multiply(x);
  const Vector y = spmv(m, x);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_NEAR(y[i], ref[i], 1e-14);
}

TEST(Spmv, DimensionMismatch) {
  EXPECT_THROW(spmv(SparseMatrix::identity(3), Vector(4, 1.0)), DimensionError);
}

TEST(Transpose, InvolutionAndSymmetry) {
  const SparseMatrix m = random_sparse(15, 9, 0.3, 5);
  EXPECT_EQ(transpose(transpose(m)), m);
  const SparseMatrix mass = assemble_mass(build_rect_mesh(5, 5, {0, 1, 0, 1}));
  EXPECT_EQ(transpose(mass), mass);
}

TEST(Transpose, AdjointIdentity) {
  const SparseMatrix m = random_sparse(30, 30, 0.2, 6);
  const SparseMatrix mt = transpose(m);
  for (unsigned s = 0; s < 100; ++s) {
    const Vector x = random_vector(30, 100 + s);
    const Vector y = random_vector(30, 300 + s);
    const double lhs = dot(spmv(mt, x), y);
    const double rhs = dot(x, spmv(m, y));
    EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(rhs)));
    Vector yt(30);
    m.multiply_transpose(x, yt);
    EXPECT_LT(relative_error(yt, spmv(mt, x)), 1e-15);
  }
}

TEST(Sparse, ProductsAgainstDense) {
  const SparseMatrix a = random_sparse(12, 8, 0.4, 7);
  const SparseMatrix b = random_sparse(8, 10, 0.4, 8);
  EXPECT_LT(test::max_abs_diff(multiply(a, b).to_dense(), a.to_dense() * b.to_dense()), 1e-14);
  const SparseMatrix sq = random_sparse(12, 12, 0.3, 9);
  const SparseMatrix p = random_sparse(12, 5, 0.4, 10);
  EXPECT_LT(test::max_abs_diff(galerkin_product(sq, p).to_dense(),
                               p.to_dense().transposed() * sq.to_dense() * p.to_dense()),
            1e-13);
  const SparseMatrix c = random_sparse(12, 12, 0.3, 11);
  EXPECT_LT(test::max_abs_diff(linear_combination(2.0, sq, -0.5, c).to_dense(),
                               2.0 * sq.to_dense() - 0.5 * c.to_dense()),
            1e-15);
  EXPECT_THROW(multiply(a, a), DimensionError);
}

TEST(DenseSolve, IdentityAndDiagonal) {
  const Vector b = random_vector(6, 12);
  EXPECT_EQ(dense_solve(DenseMatrix::identity(6), b), b);
  DenseMatrix d = 2.0 * DenseMatrix::identity(6);
  const Vector x = dense_solve(d, b);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(x[i], b[i] / 2.0);
}

TEST(DenseSolve, RandomSpdResidual) {
  const DenseMatrix a = random_spd(50, 13);
  const Vector b = random_vector(50, 14);
  const Vector x = dense_solve(a, b);
  EXPECT_LE(relative_error(a.multiply(x), b), 1e-10);
  const DenseLU lu(a.transposed());
  EXPECT_LE(relative_error(lu.solve_transpose(b), x), 1e-10);
}

TEST(DenseSolve, SingularAndOversized) {
  DenseMatrix s(3, 3);
  s(0, 0) = 1.0;
  EXPECT_THROW(dense_solve(s, Vector(3, 1.0)), SingularMatrixError);
  EXPECT_THROW(DenseLU(DenseMatrix(5001, 5001)), DimensionError);
  EXPECT_THROW(DenseLU(DenseMatrix(2, 3)), DimensionError);
}

TEST(SymmetricEig, ClosedForms) {
  for (double v : dense_symmetric_eig(DenseMatrix::identity(5))) EXPECT_NEAR(v, 1.0, 1e-14);
  DenseMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  const Vector ev = dense_symmetric_eig(d);
  EXPECT_NEAR(ev[0], 1.0, 1e-14);
  EXPECT_NEAR(ev[1], 2.0, 1e-14);
  EXPECT_NEAR(ev[2], 3.0, 1e-14);
  DenseMatrix two(2, 2);
  two(0, 0) = two(1, 1) = 2.0;
  two(0, 1) = two(1, 0) = 1.0;
  const Vector e2 = dense_symmetric_eig(two);
  EXPECT_NEAR(e2[0], 1.0, 1e-14);
  EXPECT_NEAR(e2[1], 3.0, 1e-14);
}

TEST(SymmetricEig, TraceAndRejectsNonsymmetric) {
  const DenseMatrix a = random_spd(30, 15);
  double trace = 0.0;
  for (std::size_t i = 0; i < 30; ++i) trace += a(i, i);
  double sum = 0.0;
  for (double v : dense_symmetric_eig(a)) sum += v;
  EXPECT_NEAR(sum, trace, 1e-10 * trace);
  DenseMatrix ns = DenseMatrix::identity(3);
  ns(0, 2) = 1.0;
  EXPECT_THROW(dense_symmetric_eig(ns), NotSymmetricError);
}

TEST(SymmetricEig, GeneralizedPencil) {
  const DenseMatrix b = random_spd(8, 16);
  const Vector ev = generalized_symmetric_eig(3.0 * b, b);
  for (double v : ev) EXPECT_NEAR(v, 3.0, 1e-10);
}

TEST(Operators, LinearityProbe) {
  const SparseMatrix m = random_sparse(25, 25, 0.3, 17);
  const OperatorPtr op = make_operator(m);
  const Vector x = random_vector(25, 18), y = random_vector(25, 19);
  Vector comb = scaled(2.0, x);
  axpy(-3.0, y, comb);
  Vector ref = scaled(2.0, (*op)(x));
  axpy(-3.0, (*op)(y), ref);
  EXPECT_LE(relative_error((*op)(comb), ref), 1e-12);
}

TEST(Operators, BlockMatchesDenseConcatenation) {
  const SparseMatrix a = random_sparse(12, 12, 0.3, 20);
  const SparseMatrix b = random_sparse(8, 12, 0.3, 21);
  const SparseMatrix c = random_sparse(8, 8, 0.3, 22);
  BlockOperator blk(12, 8, 12, 8);
  blk.set_block(0, 0, make_operator(a));
  blk.set_block(0, 1, make_operator(transpose(b)));
  blk.set_block(1, 0, make_operator(b));
  blk.set_block(1, 1, std::make_shared<ScaledOperator>(-1.0, make_operator(c)));
  const DenseMatrix d = to_dense(blk);
  for (std::size_t i = 0; i < 20; ++i) {
    for (std::size_t j = 0; j < 20; ++j) {
      double ref = 0.0;
      if (i < 12 && j < 12) ref = a.at(i, j);
      if (i < 12 && j >= 12) ref = b.at(j - 12, i);
      if (i >= 12 && j < 12) ref = b.at(i - 12, j);
      if (i >= 12 && j >= 12) ref = -c.at(i - 12, j - 12);
      EXPECT_NEAR(d(i, j), ref, 1e-12);
    }
  }
  EXPECT_THROW(blk.set_block(0, 0, make_operator(c)), DimensionError);
  EXPECT_THROW(blk(Vector(19, 0.0)), DimensionError);
}

TEST(Operators, NullBlocksActAsZero) {
  BlockOperator blk(2, 3, 2, 3);
  blk.set_block(1, 1, make_operator(SparseMatrix::identity(3)));
  const Vector y = blk(Vector{1, 2, 3, 4, 5});
  EXPECT_EQ(y, (Vector{0, 0, 3, 4, 5}));
}

TEST(MatrixMarket, RoundTripIsBitExact) {
  const SparseMatrix m = random_sparse(17, 11, 0.3, 23);
  std::stringstream ss;
  write_matrix_market(ss, m);
  std::string first;
  std::getline(ss, first);
  EXPECT_EQ(first, "%%MatrixMarket matrix coordinate real general");
  ss.seekg(0);
  EXPECT_EQ(read_matrix_market(ss), m);
}

TEST(MatrixMarket, OneBasedIndicesAndSymmetricRead) {
  std::stringstream out;
  write_matrix_market(out, SparseMatrix::identity(2));
  EXPECT_NE(out.str().find("\n1 1 1"), std::string::npos);
  std::stringstream in("%%MatrixMarket matrix coordinate real symmetric\n% c\n2 2 2\n1 1 2.0\n2 1 -1.0\n");
  const SparseMatrix s = read_matrix_market(in);
  EXPECT_EQ(s.at(0, 1), -1.0);
  EXPECT_EQ(s.at(1, 0), -1.0);
  std::stringstream bad("garbage\n");
  EXPECT_THROW(read_matrix_market(bad), IoError);
}

TEST(MatrixMarket, VectorFiles) {
  const auto path = (std::filesystem::temp_directory_path() / "ocp_vec_test.txt").string();
  const Vector v = random_vector(9, 24);
  write_vector(path, v);
  EXPECT_EQ(read_vector(path), v);
  std::remove(path.c_str());
  EXPECT_THROW(read_vector("/nonexistent/dir/v.txt"), IoError);
}
