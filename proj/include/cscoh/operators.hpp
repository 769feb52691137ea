#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cscoh/model.hpp"

namespace cscoh {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }

  void add(std::string name, bool pass, std::string detail = "") {
    checks.push_back({std::move(name), pass, std::move(detail)});
  }

  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }

  void merge(const ValidationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
  }
};

inline Gaussian i_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return Gaussian(1);
    case 1: return Gaussian::i();
    case 2: return Gaussian(-1);
    default: return -Gaussian::i();
  }
}

// ---------------------------------------------------------------------------
// sl2 triple and the symplectic adjoint of dbar.
// ---------------------------------------------------------------------------

struct Sl2Data {
  OperatorFamily L;            // shift (+1,+1): omega ^ .
  OperatorFamily Lambda;       // shift (-1,-1): contraction with omega^{-1}
  OperatorFamily B;            // shift (0,0):  [L, Lambda]
  OperatorFamily dbar_lambda;  // shift (-1,0): [dbar, Lambda]
};

inline OperatorFamily build_L(const ComplexInstance& inst) {
  return family_from_action(inst.n(), {1, 1},
                            [&](const Form& u) { return wedge(inst.omega, u); });
}

// Lambda = i * sum_{j,k} (Omega^{-1})_{kj} (V_j .|) (conj(V_k) .|), the
// bilinear extension of the diagonal-frame contraction formula. The sign and
// factor convention is locked by validate_sl2 below.
inline OperatorFamily build_Lambda(const ComplexInstance& inst) {
  const int n = inst.n();
  return family_from_action(inst.n(), {-1, -1}, [&](const Form& u) {
    Form out(u.n);
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k) {
        const Gaussian& c = inst.OmegaInv.at(k - 1, j - 1);
        if (c.is_zero()) continue;
        Form v = contract(GenSide::Holo, j, contract(GenSide::Anti, k, u));
        if (v.is_zero()) continue;
        out = out + scale(Gaussian::i() * c, v);
      }
    return out;
  });
}

inline Sl2Data build_sl2(const ComplexInstance& inst) {
  Sl2Data s;
  s.L = build_L(inst);
  s.Lambda = build_Lambda(inst);
  s.B = commutator(s.L, s.Lambda);
  s.dbar_lambda = commutator(inst.dbar, s.Lambda);
  return s;
}

// Exact matrix identities pinning the operator calculus: [[L,Lambda],dbar] =
// dbar, (dbar^Lambda)^2 = 0, the anticommutation with dbar, and B acting as a
// scalar on each total degree with unit increments.
inline ValidationReport validate_sl2(const Sl2Data& s, const ComplexInstance& inst) {
  ValidationReport rep;
  const int n = inst.n();
  const auto& spec = inst.spec;

  {
    OperatorFamily lhs = commutator(s.B, inst.dbar);
    auto wit = first_mismatch(spec, lhs, inst.dbar);
    rep.add("[[L,Lambda],dbar] = dbar", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily sq = compose(s.dbar_lambda, s.dbar_lambda);
    auto wit = first_mismatch(spec, sq, zero_family(n, sq.shift));
    rep.add("(dbar^Lambda)^2 = 0", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily anti = anticommutator(inst.dbar, s.dbar_lambda);
    auto wit = first_mismatch(spec, anti, zero_family(n, anti.shift));
    rep.add("dbar dbar^Lambda + dbar^Lambda dbar = 0", !wit.has_value(), wit.value_or(""));
  }
  {
    bool scalar_ok = true;
    std::string detail;
    std::vector<std::optional<Gaussian>> scalar_at(2 * n + 1);
    for (Bidegree bd : all_bidegrees(n)) {
      ExactMatrix blk = s.B.block(bd);
      if (blk.rows() == 0) continue;
      Gaussian c = blk.at(0, 0);
      ExactMatrix expect = scale(c, ExactMatrix::identity(blk.rows()));
      if (blk != expect) {
        scalar_ok = false;
        detail = "B is not scalar on bidegree (" + std::to_string(bd.p) + "," +
                 std::to_string(bd.q) + ")";
        break;
      }
      int k = bd.p + bd.q;
      if (scalar_at[k] && *scalar_at[k] != c) {
        scalar_ok = false;
        detail = "B scalar differs across bidegrees of total degree " + std::to_string(k);
        break;
      }
      scalar_at[k] = c;
    }
    if (scalar_ok) {
      for (int k = 0; k + 1 <= 2 * n; ++k) {
        if (!scalar_at[k] || !scalar_at[k + 1]) continue;
        if (*scalar_at[k + 1] - *scalar_at[k] != Gaussian(1)) {
          scalar_ok = false;
          detail = "B scalar does not increase by 1 from degree " + std::to_string(k);
          break;
        }
      }
    }
    rep.add("B scalar per total degree, unit increments", scalar_ok, detail);
  }
  return rep;
}

inline void require(const ValidationReport& rep, const std::string& context) {
  if (const CheckResult* f = rep.first_failure())
    throw EngineError(context + ": identity '" + f->name + "' failed" +
                      (f->detail.empty() ? "" : " at " + f->detail));
}

// ---------------------------------------------------------------------------
// Metric data and adjoints.
// ---------------------------------------------------------------------------

// Diagonal Hermitian metric from per-generator-pair weights: the norm-squared
// of a basis monomial is the product of the weights of its generators.
// Admissibility (omega eigenvalues all +-1 against the metric) is decided
// exactly through (G^{-1} Omega)^2 = I.
struct MetricData {
  std::vector<Rational> weights;
  std::map<Bidegree, ExactMatrix> gram;
  bool admissible = false;
  int eigen_plus = 0, eigen_minus = 0;  // certificate when admissible
  std::string note;

  ExactMatrix gram_at(Bidegree bd) const {
    auto it = gram.find(bd);
    if (it != gram.end()) return it->second;
    return ExactMatrix(0, 0);
  }
  ExactMatrix gram_inv_at(Bidegree bd) const {
    ExactMatrix g = gram_at(bd);
    for (std::size_t k = 0; k < g.rows(); ++k)
      g.at(k, k) = Gaussian(1) / g.at(k, k);
    return g;
  }
};

inline MetricData make_metric(const ComplexInstance& inst) {
  const int n = inst.n();
  MetricData m;
  m.weights = inst.spec.metric_weights;
  for (Bidegree bd : all_bidegrees(n)) {
    auto basis = enumerate_basis(n, bd);
    ExactMatrix g(basis.size(), basis.size());
    for (std::size_t k = 0; k < basis.size(); ++k) {
      Rational w(1);
      for (int j = 0; j < n; ++j) {
        if (basis[k].holo & (1u << j)) w *= m.weights[j];
        if (basis[k].anti & (1u << j)) w *= m.weights[j];
      }
      g.at(k, k) = Gaussian(w);
    }
    m.gram.emplace(bd, std::move(g));
  }

  // Covariant metric matrix on the (1,0) frame is diag(1/w_j); the pencil
  // eigenproblem det(Omega - lambda G) reduces to M = G^{-1} Omega = diag(w) Omega.
  ExactMatrix pencil(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      pencil.at(j, k) = Gaussian(m.weights[j]) * inst.Omega.at(j, k);
  ExactMatrix sq = pencil * pencil;
  if (sq == ExactMatrix::identity(n)) {
    m.admissible = true;
    ExactMatrix shift_minus = pencil - ExactMatrix::identity(n);
    m.eigen_plus = int(kernel(shift_minus).dim());
    m.eigen_minus = n - m.eigen_plus;
    m.note = "admissible: eigenvalues +1 x" + std::to_string(m.eigen_plus) + ", -1 x" +
             std::to_string(m.eigen_minus);
  } else {
    m.admissible = false;
    m.note = "not admissible: omega eigenvalues against the metric are not all +-1";
  }
  return m;
}

// A* = G_src^{-1} A^H G_tgt blockwise; satisfies <<A u, v>> = <<u, A* v>>
// exactly for the weighted Hermitian product.
inline OperatorFamily adjoint(const OperatorFamily& op, const MetricData& metric) {
  OperatorFamily out;
  out.n = op.n;
  out.shift = {-op.shift.first, -op.shift.second};
  for (Bidegree bd : all_bidegrees(op.n)) {
    Bidegree src = shifted(bd, out.shift);  // source bidegree of the original op
    ExactMatrix a = op.block(src);
    ExactMatrix g_src = metric.gram_inv_at(src);
    ExactMatrix g_tgt = metric.gram_at(bd);
    out.blocks.emplace(bd, g_src * conj_transpose(a) * g_tgt);
  }
  return out;
}

inline Gaussian inner_product(const Vec& u, const Vec& v, const ExactMatrix& gram) {
  Gaussian out(0);
  for (std::size_t k = 0; k < u.size(); ++k) out += u[k] * v[k].conj() * gram.at(k, k);
  return out;
}

// ---------------------------------------------------------------------------
// The symplectic star.
// ---------------------------------------------------------------------------

// *_s maps A^{p,q} to A^{n-q,n-p}; the bidegree shift is not constant, so it
// carries its own block container.
struct StarOperator {
  int n = 0;
  std::map<Bidegree, ExactMatrix> blocks;

  Bidegree target(Bidegree bd) const { return {n - bd.q, n - bd.p}; }

  ExactMatrix block(Bidegree bd) const {
    auto it = blocks.find(bd);
    if (it != blocks.end()) return it->second;
    return ExactMatrix(space_dim(n, target(bd)), space_dim(n, bd));
  }
};

// s . f . s as an OperatorFamily; for f of shift (dp,dq) the composite has
// shift (-dq,-dp).
inline OperatorFamily star_conjugate(const StarOperator& s, const OperatorFamily& f) {
  OperatorFamily out;
  out.n = f.n;
  out.shift = {-f.shift.second, -f.shift.first};
  for (Bidegree bd : all_bidegrees(f.n)) {
    Bidegree mid = s.target(bd);
    Bidegree mid2 = shifted(mid, f.shift);
    out.blocks.emplace(bd, s.block(mid2) * f.block(mid) * s.block(bd));
  }
  return out;
}

inline OperatorFamily star_squared(const StarOperator& s) {
  OperatorFamily out;
  out.n = s.n;
  out.shift = {0, 0};
  for (Bidegree bd : all_bidegrees(s.n))
    out.blocks.emplace(bd, s.block(s.target(bd)) * s.block(bd));
  return out;
}

namespace detail {

// omega^{-1} pairing of two monomials of common bidegree (p,q): the product
// of minor determinants of Omega^{-1}, holo slots paired (psi rows, phi
// cols) and anti slots paired (phi rows, psi cols).
inline Gaussian omega_inv_pairing(const ExactMatrix& omega_inv, MonomialIndex phi,
                                  MonomialIndex psi) {
  auto bits = [](std::uint32_t m) {
    std::vector<int> out;
    for (int j = 0; m; ++j, m >>= 1)
      if (m & 1) out.push_back(j);
    return out;
  };
  auto minor_det = [&](const std::vector<int>& rows, const std::vector<int>& cols) {
    ExactMatrix sub(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < cols.size(); ++c)
        sub.at(r, c) = omega_inv.at(rows[r], cols[c]);
    return determinant(sub);
  };
  Gaussian holo = minor_det(bits(psi.holo), bits(phi.holo));
  Gaussian anti = minor_det(bits(phi.anti), bits(psi.anti));
  return holo * anti;
}

}  // namespace detail

struct StarResult {
  std::optional<StarOperator> star;
  std::string unavailable_reason;
};

// Solves the perfect wedge pairing A^{b,a} x A^{n-a,n-b} -> A^{n,n} against
// the defining representation formula i^{q-p} phi ^ *_s conj(psi) =
// omega^{-1}(phi,psi) omega^n/n! evaluated on all basis pairs. Requires the
// conjugation data to interpret conj(psi).
inline StarResult build_symplectic_star(const ComplexInstance& inst) {
  if (!inst.has_conjugation())
    return {std::nullopt, "star unavailable - no constant conjugation data; skipping *_s cross-checks"};
  const int n = inst.n();

  Form top = omega_power(inst.omega, n);
  Rational nfact(1);
  for (int k = 2; k <= n; ++k) nfact *= k;
  top = scale(Gaussian(Rational(1) / nfact), top);
  const MonomialIndex full{(std::uint32_t(1) << n) - 1, (std::uint32_t(1) << n) - 1};
  Gaussian top_coeff = top.terms.count(full) ? top.terms.at(full) : Gaussian(0);
  if (top_coeff.is_zero()) throw EngineError("volume form vanished on a validated instance");

  StarOperator star;
  star.n = n;
  for (Bidegree dom : all_bidegrees(n)) {
    const int a = dom.p, b = dom.q;
    auto dom_basis = enumerate_basis(n, dom);
    auto phi_basis = enumerate_basis(n, {b, a});
    auto tgt_basis = enumerate_basis(n, star.target(dom));
    const std::size_t d = dom_basis.size();
    if (d == 0) continue;

    ExactMatrix pairing(d, d);
    for (std::size_t l = 0; l < d; ++l)
      for (std::size_t t = 0; t < d; ++t)
        pairing.at(l, t) = Gaussian(wedge_sign(phi_basis[l], tgt_basis[t], n));

    ExactMatrix rhs(d, d);
    Gaussian pre = i_power(-(a - b)) * top_coeff;
    for (std::size_t m = 0; m < d; ++m) {
      Form vm(n);
      vm.add_term(dom_basis[m], Gaussian(1));
      Form psi = conjugate_form(inst, vm);  // scalar times a monomial of (b,a)
      if (psi.terms.size() != 1) throw EngineError("conjugate of a monomial is not a monomial");
      const auto& [mono, cm] = *psi.terms.begin();
      for (std::size_t l = 0; l < d; ++l) {
        Gaussian pair = detail::omega_inv_pairing(inst.OmegaInv, phi_basis[l], mono);
        rhs.at(l, m) = pre * cm.conj() * pair;
      }
    }

    auto pinv = inverse(pairing);
    if (!pinv) throw EngineError("wedge pairing matrix is singular");
    star.blocks.emplace(dom, *pinv * rhs);
  }
  return {std::move(star), ""};
}

// dbar^Lambda computed through the star route: (-1)^{k+1} *_s dbar *_s on
// total degree k.
inline OperatorFamily dbar_lambda_via_star(const StarOperator& star,
                                           const ComplexInstance& inst) {
  OperatorFamily conj = star_conjugate(star, inst.dbar);
  for (auto& [bd, blk] : conj.blocks) {
    int k = bd.p + bd.q;
    if (k % 2 == 0) blk = scale(Gaussian(-1), blk);  // (-1)^{k+1}
  }
  return conj;
}

// ---------------------------------------------------------------------------
// Laplacians.
// ---------------------------------------------------------------------------

struct Laplacians {
  OperatorFamily box_dbar;         // dbar dbar* + dbar* dbar
  OperatorFamily box_dbar_lambda;  // dl dl* + dl* dl
  OperatorFamily delta_bc;
  OperatorFamily delta_a;
  OperatorFamily dbar_adj, dbar_lambda_adj;
};

inline Laplacians build_laplacians(const ComplexInstance& inst, const Sl2Data& s,
                                   const MetricData& metric) {
  const OperatorFamily& d = inst.dbar;
  const OperatorFamily& dl = s.dbar_lambda;
  OperatorFamily ds = adjoint(d, metric);
  OperatorFamily dls = adjoint(dl, metric);

  Laplacians out;
  out.dbar_adj = ds;
  out.dbar_lambda_adj = dls;
  out.box_dbar = compose(d, ds) + compose(ds, d);
  out.box_dbar_lambda = compose(dl, dls) + compose(dls, dl);

  auto c3 = [](const OperatorFamily& x, const OperatorFamily& y, const OperatorFamily& z) {
    return compose(x, compose(y, z));
  };
  auto c4 = [&](const OperatorFamily& x, const OperatorFamily& y, const OperatorFamily& z,
                const OperatorFamily& w) { return compose(x, c3(y, z, w)); };

  out.delta_bc = c4(d, dl, dls, ds) + c4(dls, ds, d, dl) + c4(dls, d, ds, dl) +
                 c4(ds, dl, dls, d) + compose(dls, dl) + compose(ds, d);
  out.delta_a = compose(d, ds) + compose(dl, dls) + c4(ds, dls, dl, d) +
                c4(dl, ds, d, dls) + c4(dl, d, ds, dls) + c4(d, dls, dl, ds);
  return out;
}

// ---------------------------------------------------------------------------
// Cross-check suites.
// ---------------------------------------------------------------------------

// Identities available whenever conjugation data exists; they exercise the
// star route against the commutator route for the whole calculus.
inline ValidationReport star_cross_checks(const ComplexInstance& inst, const Sl2Data& s,
                                          const StarOperator& star,
                                          const Laplacians& laps) {
  ValidationReport rep;
  const auto& spec = inst.spec;
  {
    OperatorFamily ss = star_squared(star);
    auto wit = first_mismatch(spec, ss, identity_family(inst.n()));
    rep.add("*_s^2 = id", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily lam = star_conjugate(star, s.L);
    auto wit = first_mismatch(spec, lam, s.Lambda);
    rep.add("Lambda = *_s L *_s", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily via_star = dbar_lambda_via_star(star, inst);
    auto wit = first_mismatch(spec, via_star, s.dbar_lambda);
    rep.add("[dbar,Lambda] = (-1)^{k+1} *_s dbar *_s", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily rhs = star_conjugate(star, laps.box_dbar);
    auto wit = first_mismatch(spec, laps.box_dbar_lambda, rhs);
    rep.add("box_{dbar^Lambda} = *_s box_dbar *_s", !wit.has_value(), wit.value_or(""));
  }
  return rep;
}

// Minkowski-type Kaehler identities, valid under an admissible metric:
// (dbar^Lambda)* = [L, dbar*], [(dbar^Lambda)*, L] = 0, and Lambda* = L.
inline ValidationReport minkowski_identity_check(const ComplexInstance& inst,
                                                 const Sl2Data& s, const MetricData& metric,
                                                 const Laplacians& laps) {
  ValidationReport rep;
  if (!metric.admissible) {
    rep.add("admissible metric", false, metric.note);
    return rep;
  }
  const auto& spec = inst.spec;
  {
    OperatorFamily lam_adj = adjoint(s.Lambda, metric);
    auto wit = first_mismatch(spec, lam_adj, s.L);
    rep.add("Lambda* = L", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily lhs = laps.dbar_lambda_adj;
    OperatorFamily rhs = commutator(s.L, laps.dbar_adj);
    auto wit = first_mismatch(spec, lhs, rhs);
    rep.add("(dbar^Lambda)* = [L, dbar*]", !wit.has_value(), wit.value_or(""));
  }
  {
    OperatorFamily comm = commutator(laps.dbar_lambda_adj, s.L);
    auto wit = first_mismatch(spec, comm, zero_family(inst.n(), comm.shift));
    rep.add("[(dbar^Lambda)*, L] = 0", !wit.has_value(), wit.value_or(""));
  }
  return rep;
}

}  // namespace cscoh
