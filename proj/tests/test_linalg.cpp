#include <gtest/gtest.h>

#include <random>

#include "cscoh/linalg.hpp"

using namespace cscoh;

namespace {

Gaussian g(int re, int im = 0) { return Gaussian(Rational(re), Rational(im)); }

ExactMatrix mat(std::size_t r, std::size_t c, std::vector<Gaussian> entries) {
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.at(i, j) = entries[i * c + j];
  return m;
}

ExactMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> num(-3, 3);
  std::uniform_int_distribution<int> den(1, 3);
  ExactMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      m.at(i, j) = Gaussian(make_rational(num(rng), den(rng)),
                            make_rational(num(rng), den(rng)));
  return m;
}

}  // namespace

TEST(Rref, IdentityFixedPoint) {
  ExactMatrix id = ExactMatrix::identity(2);
  RrefResult rr = rref(id);
  EXPECT_EQ(rr.mat, id);
  EXPECT_EQ(rr.rank(), 2u);
}

TEST(Rref, HandElimination) {
  // [[1, i], [i, -1]]: row2 - i*row1 = (i - i, -1 - i^2) = (0, 0).
  ExactMatrix m = mat(2, 2, {g(1), g(0, 1), g(0, 1), g(-1)});
  RrefResult rr = rref(m);
  EXPECT_EQ(rr.rank(), 1u);
  EXPECT_EQ(rr.mat, mat(2, 2, {g(1), g(0, 1), g(0), g(0)}));
}

TEST(Rref, ZeroMatrix) {
  ExactMatrix z(3, 4);
  RrefResult rr = rref(z);
  EXPECT_EQ(rr.rank(), 0u);
  EXPECT_EQ(rr.mat, z);
}

TEST(Kernel, IdentityAndZero) {
  EXPECT_EQ(kernel(ExactMatrix::identity(3)).dim(), 0u);
  EXPECT_EQ(kernel(ExactMatrix(3, 3)).dim(), 3u);
  EXPECT_EQ(kernel(ExactMatrix(3, 3)), Subspace::full(3));
}

TEST(Kernel, OneByTwoComplexRow) {
  // [[1, i]]: solve x + i y = 0, kernel spanned by (-i, 1), which RREF
  // normalizes to (1, i).
  ExactMatrix m = mat(1, 2, {g(1), g(0, 1)});
  Subspace k = kernel(m);
  ASSERT_EQ(k.dim(), 1u);
  EXPECT_TRUE(k.member({g(0, -1), g(1)}));
  EXPECT_EQ(k.basis().at(0, 0), g(1));
  EXPECT_EQ(k.basis().at(0, 1), g(0, 1));
}

TEST(Image, Basics) {
  EXPECT_EQ(image(ExactMatrix::identity(3)), Subspace::full(3));
  EXPECT_EQ(image(ExactMatrix(2, 5)).dim(), 0u);
  // Rank-1 outer product.
  ExactMatrix u = mat(3, 1, {g(1), g(2), g(0, 1)});
  ExactMatrix v = mat(1, 3, {g(1), g(-1), g(3)});
  EXPECT_EQ(image(u * v).dim(), 1u);
}

TEST(Subspaces, SumAndIntersection) {
  Subspace a = Subspace::from_span(2, {{g(1), g(0)}});
  EXPECT_EQ(subspace_sum(a, a), a);
  EXPECT_EQ(subspace_intersect(a, a), a);

  Subspace b = Subspace::from_span(2, {{g(0), g(1)}});
  EXPECT_EQ(subspace_sum(a, b), Subspace::full(2));
  EXPECT_EQ(subspace_intersect(a, b).dim(), 0u);

  // Two generic 2-planes in dimension 3 meet in a line.
  Subspace p = Subspace::from_span(3, {{g(1), g(0), g(0)}, {g(0), g(1), g(0)}});
  Subspace q = Subspace::from_span(3, {{g(0), g(1), g(1)}, {g(1), g(0), g(2)}});
  EXPECT_EQ(subspace_intersect(p, q).dim(), 1u);
  EXPECT_EQ(subspace_sum(p, q).dim(), 3u);
}

TEST(Subspaces, MismatchedAmbientRejected) {
  Subspace a = Subspace::full(2), b = Subspace::full(3);
  EXPECT_THROW(subspace_sum(a, b), SpecError);
  EXPECT_THROW(subspace_intersect(a, b), SpecError);
}

TEST(Solve, Basics) {
  Vec rhs{g(3), g(0, 1)};
  auto x = solve(ExactMatrix::identity(2), rhs);
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(*x, rhs);

  EXPECT_FALSE(solve(ExactMatrix(2, 2), rhs).has_value());

  // Free variables pinned to zero: [[1,1]] x = (2) gives (2, 0).
  auto y = solve(mat(1, 2, {g(1), g(1)}), {g(2)});
  ASSERT_TRUE(y.has_value());
  EXPECT_EQ(*y, (Vec{g(2), g(0)}));
}

TEST(Quotient, Basics) {
  Subspace full3 = Subspace::full(3);
  Subspace line = Subspace::from_span(3, {{g(1), g(0), g(0)}});
  EXPECT_EQ(quotient_dim(full3, full3), 0u);
  EXPECT_EQ(quotient_dim(full3, line), 2u);
  auto reps = quotient_basis(full3, line);
  ASSERT_EQ(reps.size(), 2u);
  EXPECT_EQ(reps[0], (Vec{g(0), g(1), g(0)}));
  EXPECT_EQ(reps[1], (Vec{g(0), g(0), g(1)}));
  EXPECT_THROW(quotient_dim(line, full3), EngineError);
}

TEST(Determinant, Basics) {
  EXPECT_EQ(determinant(ExactMatrix::identity(3)), g(1));
  ExactMatrix m = mat(2, 2, {g(0), g(0, -1), g(0, 1), g(0)});
  EXPECT_EQ(determinant(m), g(-1));  // -(-i)(i) = -1
  auto inv = inverse(m);
  ASSERT_TRUE(inv.has_value());
  EXPECT_EQ(m * *inv, ExactMatrix::identity(2));
  EXPECT_FALSE(inverse(ExactMatrix(2, 2)).has_value());
}

TEST(Properties, RankEqualsConjTransposeRank) {
  std::mt19937 rng(12345);
  for (int it = 0; it < 25; ++it) {
    ExactMatrix m = random_matrix(rng, 1 + it % 5, 1 + (it * 7) % 5);
    EXPECT_EQ(rank(m), rank(conj_transpose(m)));
  }
}

TEST(Properties, RankNullity) {
  std::mt19937 rng(777);
  for (int it = 0; it < 25; ++it) {
    ExactMatrix m = random_matrix(rng, 1 + it % 5, 1 + (it * 3) % 6);
    EXPECT_EQ(rank(m) + kernel(m).dim(), m.cols());
  }
}

TEST(Properties, GrassmannIdentity) {
  std::mt19937 rng(2024);
  for (int it = 0; it < 25; ++it) {
    std::size_t amb = 2 + it % 4;
    Subspace a = Subspace::from_span(random_matrix(rng, 1 + it % 3, amb));
    Subspace b = Subspace::from_span(random_matrix(rng, 1 + (it + 1) % 3, amb));
    EXPECT_EQ(a.dim() + b.dim(),
              subspace_sum(a, b).dim() + subspace_intersect(a, b).dim());
  }
}

TEST(Properties, Determinism) {
  std::mt19937 rng(99);
  ExactMatrix m = random_matrix(rng, 4, 6);
  RrefResult a = rref(m), b = rref(m);
  EXPECT_EQ(a.mat, b.mat);
  EXPECT_EQ(a.pivots, b.pivots);
  EXPECT_EQ(kernel(m), kernel(m));
}
