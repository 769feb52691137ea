#include <gtest/gtest.h>

#include <random>

#include "cscoh/operators.hpp"
#include "cscoh/parse.hpp"

using namespace cscoh;

namespace {

Gaussian g(int re, int im = 0) { return Gaussian(Rational(re), Rational(im)); }
Gaussian gr(int n, int d) { return Gaussian(make_rational(n, d)); }

const char* kKodairaThurston = R"(
[manifold]
name = kodaira-thurston
n = 2
generators_10 = phi1, phi2
generators_01 = phib1, phib2
[dbar]
phi2 = (-1/2*i) * phi1^phib1
[del]
phib2 = (-1/2*i) * phi1^phib1
[omega]
(1/2)*phi1^phib2 + (1/2)*phib1^phi2
[metric]
weights = 2, 2
[conjugation]
phib1 = 1 * phi1
phib2 = 1 * phi2
)";

const char* kIwasawa = R"(
[manifold]
name = iwasawa
n = 3
generators_10 = psi1, psi2, psi3
generators_01 = psib1, psib2, psib3
[dbar]
psi3 = 1 * psi2^psib1
[del]
psib3 = -1 * psi1^psib2
[omega]
(i)*psi2^psib2 + 1*psi1^psib3 - 1*psi3^psib1
[metric]
weights = 1, 1, 1
[conjugation]
psib1 = 1 * psi1
psib2 = 1 * psi2
psib3 = 1 * psi3
)";

ComplexInstance kt() { return instantiate(parse_spec(kKodairaThurston), {}); }
ComplexInstance iwasawa() { return instantiate(parse_spec(kIwasawa), {}); }

ComplexInstance kt_xi() {
  ManifoldSpec spec = parse_spec(kKodairaThurston);
  ExactMatrix m(2, 2);
  m.at(0, 0) = g(1);
  m.at(0, 1) = g(0, 1);
  m.at(1, 0) = g(1);
  m.at(1, 1) = g(0, -1);
  ManifoldSpec xi = change_frame(spec, m);
  xi.metric_weights = {Rational(4), Rational(4)};
  return instantiate(xi, {});
}

Form apply_block(const OperatorFamily& fam, const Form& u, Bidegree bd) {
  Vec v = fam.block(bd) * to_vector(u, bd);
  return from_vector(fam.n, v, shifted(bd, fam.shift));
}

Form apply_star(const StarOperator& s, const Form& u, Bidegree bd) {
  Vec v = s.block(bd) * to_vector(u, bd);
  return from_vector(s.n, v, s.target(bd));
}

// Diagonal-block manifold: omega = i(l1 x1^y1 + l2 x2^y2), dbar = 0,
// identity conjugation. Used for the Guillemin factorization probe.
ComplexInstance split_instance(int l1num, int l1den, int l2num, int l2den) {
  std::string text = std::string("[manifold]\nname = split\nn = 2\n") +
                     "generators_10 = x1, x2\ngenerators_01 = y1, y2\n[dbar]\n[omega]\n(" +
                     std::to_string(l1num) + "/" + std::to_string(l1den) + "*i)*x1^y1 + (" +
                     std::to_string(l2num) + "/" + std::to_string(l2den) +
                     "*i)*x2^y2\n[conjugation]\ny1 = 1 * x1\ny2 = 1 * x2\n";
  return instantiate(parse_spec(text), {});
}

// Hand-derived one-generator symplectic star for omega = i*l xi^eta on the
// block whose generator pair is (xi_j, eta_j):
// 1 -> i*l xi^eta, xi -> -xi, eta -> -eta, xi^eta -> -i/l.
Form one_dim_star(const Form& u, const Gaussian& lambda, int j) {
  const std::uint32_t bit = 1u << (j - 1);
  Form out(u.n);
  for (const auto& [m, c] : u.terms) {
    bool has_x = m.holo & bit, has_y = m.anti & bit;
    if (!has_x && !has_y) {
      out.add_term({m.holo | bit, m.anti | bit}, c * Gaussian::i() * lambda);
    } else if (has_x && has_y) {
      out.add_term({m.holo & ~bit, m.anti & ~bit}, c * (-Gaussian::i()) / lambda);
    } else {
      out.add_term(m, -c);
    }
  }
  return out;
}

}  // namespace

TEST(SL2, LOnScalarsAndTop) {
  ComplexInstance inst = kt();
  Sl2Data s = build_sl2(inst);
  EXPECT_EQ(apply_block(s.L, Form::scalar(2, g(1)), {0, 0}), inst.omega);
  ExactMatrix top = s.L.block({2, 2});
  EXPECT_EQ(top.rows(), 0u);
  EXPECT_EQ(top.cols(), 1u);
}

TEST(SL2, IwasawaLCubed) {
  ComplexInstance inst = iwasawa();
  Sl2Data s = build_sl2(inst);
  Form w3 = omega_power(inst.omega, 3);
  Form via_l = apply_block(
      s.L, apply_block(s.L, apply_block(s.L, Form::scalar(3, g(1)), {0, 0}), {1, 1}), {2, 2});
  EXPECT_EQ(via_l, w3);
  EXPECT_FALSE(w3.is_zero());
}

TEST(SL2, LambdaOnOmegaIsN) {
  for (auto inst : {kt(), iwasawa(), kt_xi()}) {
    Sl2Data s = build_sl2(inst);
    Form lw = apply_block(s.Lambda, inst.omega, {1, 1});
    EXPECT_EQ(lw, Form::scalar(inst.n(), g(inst.n())));
    EXPECT_EQ(s.Lambda.block({0, 0}).rows(), 0u);  // nothing to contract below (1,1)
  }
}

TEST(SL2, DiagonalFrameLambdaMatchesContractionFormula) {
  // KT xi-frame: omega = (i/4)(xi1^xib1 - xi2^xib2), so Lambda must equal
  // i(4 c1 cb1 - 4 c2 cb2) with c/cb the interior products.
  ComplexInstance inst = kt_xi();
  OperatorFamily lam = build_Lambda(inst);
  OperatorFamily expect = family_from_action(2, {-1, -1}, [&](const Form& u) {
    Form t1 = contract(GenSide::Holo, 1, contract(GenSide::Anti, 1, u));
    Form t2 = contract(GenSide::Holo, 2, contract(GenSide::Anti, 2, u));
    return scale(g(0, 4), t1) - scale(g(0, 4), t2);
  });
  EXPECT_EQ(lam, expect);
}

TEST(SL2, ValidateOnCatalogStyleInstances) {
  for (auto inst : {kt(), iwasawa(), kt_xi()}) {
    Sl2Data s = build_sl2(inst);
    ValidationReport rep = validate_sl2(s, inst);
    EXPECT_TRUE(rep.ok()) << rep.first_failure()->name << " " << rep.first_failure()->detail;
  }
}

TEST(SL2, BScalarsAreDegreeMinusN) {
  ComplexInstance inst = iwasawa();
  Sl2Data s = build_sl2(inst);
  for (Bidegree bd : all_bidegrees(3)) {
    ExactMatrix blk = s.B.block(bd);
    if (blk.rows() == 0) continue;
    EXPECT_EQ(blk, scale(g(bd.p + bd.q - 3), ExactMatrix::identity(blk.rows())));
  }
}

TEST(SL2, TrivialDbarMakesIdentitiesTrivial) {
  ComplexInstance inst = split_instance(2, 1, -3, 1);
  Sl2Data s = build_sl2(inst);
  EXPECT_TRUE(s.dbar_lambda.is_zero());
  EXPECT_TRUE(validate_sl2(s, inst).ok());
}

TEST(SL2, FaultInjectionNonClosedOmega) {
  // dbar x2 = x1^y1, dbar y2 = y1^y2 squares to zero, but omega =
  // i(x1^y1 + x2^y2) is not dbar-closed; (dbar^Lambda)^2 must pick this up.
  ManifoldSpec spec = parse_spec(R"(
[manifold]
name = fault
n = 2
generators_10 = x1, x2
generators_01 = y1, y2
[dbar]
x2 = 1 * x1^y1
y2 = 1 * y1^y2
[omega]
(i)*x1^y1 + (i)*x2^y2
)");
  EXPECT_THROW(instantiate(spec, {}), SpecError);
  ComplexInstance inst = instantiate(spec, {}, Validate::Off);
  Sl2Data s = build_sl2(inst);
  ValidationReport rep = validate_sl2(s, inst);
  EXPECT_FALSE(rep.ok());
  bool square_failed = false;
  for (const auto& c : rep.checks)
    if (c.name == "(dbar^Lambda)^2 = 0" && !c.pass) square_failed = true;
  EXPECT_TRUE(square_failed);
}

TEST(Metric, AdmissibilityDecisions) {
  ComplexInstance inst = kt();
  MetricData m = make_metric(inst);
  EXPECT_TRUE(m.admissible);
  EXPECT_EQ(m.eigen_plus, 1);
  EXPECT_EQ(m.eigen_minus, 1);

  ManifoldSpec bad = parse_spec(kKodairaThurston);
  bad.metric_weights = {Rational(1), Rational(1)};
  MetricData m2 = make_metric(instantiate(bad, {}));
  EXPECT_FALSE(m2.admissible);

  MetricData mi = make_metric(iwasawa());
  EXPECT_TRUE(mi.admissible);
  EXPECT_EQ(mi.eigen_plus, 2);
  EXPECT_EQ(mi.eigen_minus, 1);
}

TEST(Adjoint, DefiningPropertyAndInvolution) {
  ComplexInstance inst = kt();
  MetricData metric = make_metric(inst);
  OperatorFamily ds = adjoint(inst.dbar, metric);
  EXPECT_EQ(adjoint(ds, metric), inst.dbar);
  EXPECT_EQ(adjoint(identity_family(2), metric), identity_family(2));

  std::mt19937 rng(321);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (Bidegree bd : all_bidegrees(2)) {
    Bidegree tgt = shifted(bd, inst.dbar.shift);
    std::size_t sd = space_dim(2, bd), td = space_dim(2, tgt);
    if (sd == 0 || td == 0) continue;
    Vec u(sd), v(td);
    for (auto& x : u) x = g(coef(rng), coef(rng));
    for (auto& x : v) x = g(coef(rng), coef(rng));
    Gaussian lhs = inner_product(inst.dbar.block(bd) * u, v, metric.gram_at(tgt));
    Gaussian rhs = inner_product(u, ds.block(tgt) * v, metric.gram_at(bd));
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Adjoint, LambdaAdjointIsLUnderAdmissibleMetric) {
  for (auto inst : {kt(), kt_xi(), iwasawa()}) {
    Sl2Data s = build_sl2(inst);
    MetricData metric = make_metric(inst);
    ASSERT_TRUE(metric.admissible);
    EXPECT_EQ(adjoint(s.Lambda, metric), s.L);
  }
}

TEST(Laplacians, ZeroDbarGivesZeroLaplacians) {
  ComplexInstance inst = split_instance(1, 1, -1, 1);
  Sl2Data s = build_sl2(inst);
  MetricData metric = make_metric(inst);
  Laplacians laps = build_laplacians(inst, s, metric);
  EXPECT_TRUE(laps.box_dbar.is_zero());
  EXPECT_TRUE(laps.box_dbar_lambda.is_zero());
  EXPECT_TRUE(laps.delta_bc.is_zero());
  EXPECT_TRUE(laps.delta_a.is_zero());
}

TEST(Laplacians, KodairaThurstonBoxDbarKernelOnDegreeOneZero) {
  ComplexInstance inst = kt();
  Sl2Data s = build_sl2(inst);
  MetricData metric = make_metric(inst);
  Laplacians laps = build_laplacians(inst, s, metric);
  // H^{1,0}_dbar = span(phi1): the box kernel on (1,0) is one-dimensional.
  EXPECT_EQ(kernel(laps.box_dbar.block({1, 0})).dim(), 1u);
}

TEST(Laplacians, KernelCharacterizations) {
  // The multi-kernel characterizations of all four Laplacian kernels,
  // blockwise on Kodaira-Thurston and Iwasawa.
  for (auto inst : {kt(), iwasawa()}) {
    Sl2Data s = build_sl2(inst);
    MetricData metric = make_metric(inst);
    Laplacians laps = build_laplacians(inst, s, metric);
    const OperatorFamily& d = inst.dbar;
    const OperatorFamily& dl = s.dbar_lambda;
    const OperatorFamily& ds = laps.dbar_adj;
    const OperatorFamily& dls = laps.dbar_lambda_adj;
    OperatorFamily ddl = compose(d, dl);
    OperatorFamily ddl_adj = compose(dls, ds);
    for (Bidegree bd : all_bidegrees(inst.n())) {
      if (space_dim(inst.n(), bd) == 0) continue;
      Subspace box = kernel(laps.box_dbar.block(bd));
      EXPECT_EQ(box, subspace_intersect(kernel(d.block(bd)), kernel(ds.block(bd))));
      Subspace boxl = kernel(laps.box_dbar_lambda.block(bd));
      EXPECT_EQ(boxl, subspace_intersect(kernel(dl.block(bd)), kernel(dls.block(bd))));
      Subspace bc = kernel(laps.delta_bc.block(bd));
      EXPECT_EQ(bc, subspace_intersect(
                        subspace_intersect(kernel(d.block(bd)), kernel(dl.block(bd))),
                        kernel(ddl_adj.block(bd))));
      Subspace ae = kernel(laps.delta_a.block(bd));
      EXPECT_EQ(ae,
                subspace_intersect(
                    subspace_intersect(kernel(ddl.block(bd)), kernel(ds.block(bd))),
                    kernel(dls.block(bd))));
    }
  }
}

TEST(Star, VolumeNormalization) {
  ComplexInstance inst = kt();
  auto sr = build_symplectic_star(inst);
  ASSERT_TRUE(sr.star.has_value());
  Form w2_over_2 = scale(gr(1, 2), omega_power(inst.omega, 2));
  EXPECT_EQ(apply_star(*sr.star, Form::scalar(2, g(1)), {0, 0}), w2_over_2);
}

TEST(Star, CrossChecksOnConjugationInstances) {
  for (auto inst : {kt(), kt_xi(), iwasawa()}) {
    Sl2Data s = build_sl2(inst);
    MetricData metric = make_metric(inst);
    Laplacians laps = build_laplacians(inst, s, metric);
    auto sr = build_symplectic_star(inst);
    ASSERT_TRUE(sr.star.has_value());
    ValidationReport rep = star_cross_checks(inst, s, *sr.star, laps);
    EXPECT_TRUE(rep.ok()) << rep.first_failure()->name << " "
                          << rep.first_failure()->detail;
  }
}

TEST(Star, UnavailableWithoutConjugation) {
  ManifoldSpec spec = parse_spec(R"(
[manifold]
name = nakamura
n = 3
generators_10 = Phi1, Phi2, Phi3
generators_01 = Phib1, Phib2, Phib3
[parameters]
t = 0
[dbar]
Phi3 = (2*t) * Phi1^Phib2
[omega]
(1/2*i)*Phi1^Phib1 + (1/2)*Phib2^Phi3 + (1/2)*Phi2^Phib3
[metric]
weights = 2, 2, 2
)");
  ComplexInstance inst = instantiate(spec, default_assignment(spec));
  auto sr = build_symplectic_star(inst);
  EXPECT_FALSE(sr.star.has_value());
  EXPECT_NE(sr.unavailable_reason.find("star unavailable"), std::string::npos);
}

TEST(Star, SameDegreePairingSymmetry) {
  // *_s u ^ v = u ^ *_s v for u, v of the same total degree.
  ComplexInstance inst = kt();
  auto sr = build_symplectic_star(inst);
  ASSERT_TRUE(sr.star.has_value());
  std::mt19937 rng(777);
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int deg = 0; deg <= 4; ++deg) {
    for (int p1 = 0; p1 <= deg; ++p1) {
      Bidegree b1{p1, deg - p1};
      if (space_dim(2, b1) == 0) continue;
      for (int p2 = 0; p2 <= deg; ++p2) {
        Bidegree b2{p2, deg - p2};
        if (space_dim(2, b2) == 0) continue;
        Vec u(space_dim(2, b1)), v(space_dim(2, b2));
        for (auto& x : u) x = g(coef(rng), coef(rng));
        for (auto& x : v) x = g(coef(rng), coef(rng));
        Form fu = from_vector(2, u, b1), fv = from_vector(2, v, b2);
        EXPECT_EQ(wedge(apply_star(*sr.star, fu, b1), fv),
                  wedge(fu, apply_star(*sr.star, fv, b2)));
      }
    }
  }
}

TEST(Star, GuilleminFactorizationOnSplitInstances) {
  // For a direct sum of one-dimensional symplectic blocks,
  // *_s(u ^ v) = (-1)^{k1 k2} *_s^1 u ^ *_s^2 v.
  ComplexInstance inst = split_instance(2, 1, -3, 2);
  auto sr = build_symplectic_star(inst);
  ASSERT_TRUE(sr.star.has_value());
  Gaussian l1 = gr(2, 1), l2 = gr(-3, 2);

  std::vector<Form> block1, block2;
  std::vector<int> deg1, deg2;
  for (int hx = 0; hx < 2; ++hx)
    for (int hy = 0; hy < 2; ++hy) {
      Form f1(2), f2(2);
      f1.add_term({std::uint32_t(hx), std::uint32_t(hy)}, g(1));
      f2.add_term({std::uint32_t(hx) << 1, std::uint32_t(hy) << 1}, g(1));
      block1.push_back(f1);
      block2.push_back(f2);
      deg1.push_back(hx + hy);
      deg2.push_back(hx + hy);
    }

  for (std::size_t a = 0; a < block1.size(); ++a)
    for (std::size_t b = 0; b < block2.size(); ++b) {
      Form uv = wedge(block1[a], block2[b]);
      ASSERT_FALSE(uv.is_zero());
      Bidegree bd = *uv.homogeneous_bidegree();
      Form lhs = apply_star(*sr.star, uv, bd);
      Form rhs = wedge(one_dim_star(block1[a], l1, 1), one_dim_star(block2[b], l2, 2));
      if ((deg1[a] * deg2[b]) % 2) rhs = -rhs;
      EXPECT_EQ(lhs, rhs) << "blocks " << a << "," << b;
    }
}

TEST(Minkowski, HoldsUnderAdmissibleMetric) {
  for (auto inst : {kt(), kt_xi(), iwasawa()}) {
    Sl2Data s = build_sl2(inst);
    MetricData metric = make_metric(inst);
    Laplacians laps = build_laplacians(inst, s, metric);
    ValidationReport rep = minkowski_identity_check(inst, s, metric, laps);
    EXPECT_TRUE(rep.ok()) << rep.first_failure()->name << " "
                          << rep.first_failure()->detail;
  }
}

TEST(Minkowski, FailsWhenWeightsDoubled) {
  ManifoldSpec spec = parse_spec(kKodairaThurston);
  spec.metric_weights = {Rational(4), Rational(2)};  // breaks the +-1 eigenvalues
  ComplexInstance inst = instantiate(spec, {});
  Sl2Data s = build_sl2(inst);
  MetricData metric = make_metric(inst);
  EXPECT_FALSE(metric.admissible);
  Laplacians laps = build_laplacians(inst, s, metric);
  ValidationReport rep = minkowski_identity_check(inst, s, metric, laps);
  EXPECT_FALSE(rep.ok());
}
