#include <gtest/gtest.h>

#include <random>

#include "cscoh/exterior.hpp"

using namespace cscoh;

namespace {

Gaussian g(int re, int im = 0) { return Gaussian(Rational(re), Rational(im)); }

Form gen(int n, GenSide side, int j) { return Form::generator(n, side, j, g(1)); }

Form random_form(std::mt19937& rng, int n, int max_terms) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::uniform_int_distribution<std::uint32_t> mask(0, (1u << n) - 1);
  Form f(n);
  for (int t = 0; t < max_terms; ++t)
    f.add_term({mask(rng), mask(rng)}, Gaussian(Rational(coeff(rng)), Rational(coeff(rng))));
  return f;
}

Form random_homogeneous(std::mt19937& rng, int n, Bidegree bd, int tries = 6) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  Form f(n);
  auto basis = enumerate_basis(n, bd);
  for (int t = 0; t < tries; ++t) {
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    f.add_term(basis[pick(rng)], Gaussian(Rational(coeff(rng))));
  }
  return f;
}

int total_degree(Bidegree bd) { return bd.p + bd.q; }

}  // namespace

TEST(Basis, Enumeration) {
  auto b = enumerate_basis(2, {1, 1});
  ASSERT_EQ(b.size(), 4u);
  EXPECT_EQ(b[0], (MonomialIndex{1, 1}));
  EXPECT_EQ(b[1], (MonomialIndex{1, 2}));
  EXPECT_EQ(b[2], (MonomialIndex{2, 1}));
  EXPECT_EQ(b[3], (MonomialIndex{2, 2}));

  EXPECT_EQ(enumerate_basis(3, {0, 0}).size(), 1u);
  EXPECT_EQ(enumerate_basis(3, {2, 1}).size(), 9u);
  EXPECT_EQ(space_dim(3, {2, 1}), 9u);
  EXPECT_EQ(space_dim(3, {-1, 0}), 0u);
  EXPECT_EQ(space_dim(3, {4, 0}), 0u);
}

TEST(Wedge, Anticommutativity) {
  int n = 2;
  Form x1 = gen(n, GenSide::Holo, 1), x2 = gen(n, GenSide::Holo, 2);
  Form a = wedge(x1, x2), b = wedge(x2, x1);
  EXPECT_EQ(b, -a);
  EXPECT_TRUE(wedge(x1, x1).is_zero());
  ASSERT_EQ(a.terms.size(), 1u);
  EXPECT_EQ(a.terms.begin()->second, g(1));
}

TEST(Wedge, IwasawaOmegaCubed) {
  // omega = i psi2^eta2 + psi1^eta3 - psi3^eta1 on n = 3;
  // omega^3 = 6i psi2^eta2^psi1^eta1^psi3^eta3 reordered to canonical order.
  int n = 3;
  Form omega(n);
  omega.add_term({2, 2}, Gaussian::i());
  omega.add_term({1, 4}, g(1));
  omega.add_term({4, 1}, g(-1));
  Form w3 = wedge(wedge(omega, omega), omega);
  ASSERT_EQ(w3.terms.size(), 1u);
  EXPECT_EQ(w3.terms.begin()->first, (MonomialIndex{7, 7}));
  // 6i times the sign of sorting psi2 eta2 psi1 eta1 psi3 eta3 into canonical
  // order; that word has 5 inversions, so the canonical coefficient is -6i.
  EXPECT_EQ(w3.terms.begin()->second, g(0, -6));
}

TEST(Contract, SignsByPosition) {
  int n = 2;
  Form x1 = gen(n, GenSide::Holo, 1), x2 = gen(n, GenSide::Holo, 2);
  Form y1 = gen(n, GenSide::Anti, 1);

  Form c1 = contract(GenSide::Holo, 1, x1);
  ASSERT_EQ(c1.terms.size(), 1u);
  EXPECT_EQ(c1.terms.begin()->first, (MonomialIndex{0, 0}));
  EXPECT_EQ(c1.terms.begin()->second, g(1));

  Form c2 = contract(GenSide::Holo, 2, wedge(x1, x2));
  EXPECT_EQ(c2, -x1);

  Form c3 = contract(GenSide::Anti, 1, wedge(x1, y1));
  EXPECT_EQ(c3, -x1);

  EXPECT_TRUE(contract(GenSide::Holo, 2, x1).is_zero());
}

TEST(Vectors, RoundTrip) {
  std::mt19937 rng(4242);
  int n = 3;
  for (int it = 0; it < 30; ++it) {
    Bidegree bd{int(it) % 4 % (n + 1), (it / 3) % (n + 1)};
    Form f = random_homogeneous(rng, n, bd);
    Vec v = to_vector(f, bd);
    EXPECT_EQ(from_vector(n, v, bd), f);
  }
  Form zero(2);
  EXPECT_TRUE(cscoh::is_zero(to_vector(zero, {1, 1})));
  // Basis monomial k maps to the k-th standard vector.
  auto basis = enumerate_basis(2, {1, 1});
  for (std::size_t k = 0; k < basis.size(); ++k) {
    Form f(2);
    f.add_term(basis[k], g(1));
    Vec v = to_vector(f, {1, 1});
    for (std::size_t j = 0; j < v.size(); ++j)
      EXPECT_EQ(v[j], j == k ? g(1) : g(0));
  }
}

TEST(Vectors, BidegreeMismatchRejected) {
  Form x1 = gen(2, GenSide::Holo, 1);
  EXPECT_THROW(to_vector(x1, {0, 1}), SpecError);
}

TEST(Properties, WedgeAssociativityAndGradedCommutation) {
  std::mt19937 rng(31337);
  int n = 3;
  for (int it = 0; it < 40; ++it) {
    Form a = random_form(rng, n, 3), b = random_form(rng, n, 3), c = random_form(rng, n, 2);
    EXPECT_EQ(wedge(wedge(a, b), c), wedge(a, wedge(b, c)));
  }
  for (int it = 0; it < 40; ++it) {
    Bidegree bda{it % 2, (it / 2) % 3}, bdb{(it / 4) % 3, it % 3};
    Form a = random_homogeneous(rng, n, bda), b = random_homogeneous(rng, n, bdb);
    Form ab = wedge(a, b), ba = wedge(b, a);
    int sign = (total_degree(bda) * total_degree(bdb)) % 2 ? -1 : 1;
    EXPECT_EQ(ab, sign < 0 ? -ba : ba);
  }
}

TEST(Properties, ContractIsAntiDerivation) {
  std::mt19937 rng(555);
  int n = 3;
  for (int it = 0; it < 40; ++it) {
    GenSide side = (it % 2) ? GenSide::Holo : GenSide::Anti;
    int j = 1 + it % n;
    Bidegree bda{it % 3, (it / 3) % 2};
    Form a = random_homogeneous(rng, n, bda), b = random_form(rng, n, 3);
    Form lhs = contract(side, j, wedge(a, b));
    Form rhs = wedge(contract(side, j, a), b);
    Form tail = wedge(a, contract(side, j, b));
    if (total_degree(bda) % 2) tail = -tail;
    EXPECT_EQ(lhs, rhs + tail);
  }
}

TEST(Properties, ContractSquareIsZero) {
  std::mt19937 rng(808);
  int n = 3;
  for (int it = 0; it < 30; ++it) {
    GenSide side = (it % 2) ? GenSide::Holo : GenSide::Anti;
    int j = 1 + it % n;
    Form a = random_form(rng, n, 4);
    EXPECT_TRUE(contract(side, j, contract(side, j, a)).is_zero());
  }
}

TEST(Properties, WedgeBidegreeAdds) {
  std::mt19937 rng(90210);
  int n = 3;
  for (int it = 0; it < 30; ++it) {
    Bidegree bda{it % 3, (it / 2) % 2}, bdb{(it / 5) % 2, it % 2};
    Form a = random_homogeneous(rng, n, bda), b = random_homogeneous(rng, n, bdb);
    Form ab = wedge(a, b);
    if (ab.is_zero()) continue;
    EXPECT_TRUE(ab.homogeneous_of({bda.p + bdb.p, bda.q + bdb.q}));
  }
}
