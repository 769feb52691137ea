#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cscoh/exterior.hpp"
#include "cscoh/linalg.hpp"
#include "cscoh/poly.hpp"

namespace cscoh {

using PolyForm = BasicForm<Poly>;

// conj(anti generator k) = scalar * (holo generator `holo`), |scalar| = 1.
struct ConjugationRule {
  int holo = 0;
  Gaussian scalar{1};
};

// Parsed manifold description: generators, structure rules extended later as
// anti-derivations, the symplectic (1,1)-form, metric weights, optional
// conjugation pairing and parameters. Generator ids: 0..n-1 holomorphic,
// n..2n-1 antiholomorphic.
struct ManifoldSpec {
  std::string name;
  int n = 0;
  std::vector<std::string> holo_names, anti_names;
  std::vector<std::string> param_names;
  std::vector<Gaussian> param_defaults;
  std::map<int, PolyForm> dbar_rules;
  std::optional<std::map<int, PolyForm>> del_rules;
  PolyForm omega;
  std::vector<Rational> metric_weights;
  std::optional<std::vector<ConjugationRule>> conjugation;

  int gen_count() const { return 2 * n; }
  bool is_holo_gen(int id) const { return id < n; }
  GenSide gen_side(int id) const { return id < n ? GenSide::Holo : GenSide::Anti; }
  int gen_index(int id) const { return id < n ? id + 1 : id - n + 1; }

  const std::string& gen_name(int id) const {
    return id < n ? holo_names[id] : anti_names[id - n];
  }

  std::optional<int> find_gen(const std::string& s) const {
    for (int k = 0; k < n; ++k)
      if (holo_names[k] == s) return k;
    for (int k = 0; k < n; ++k)
      if (anti_names[k] == s) return n + k;
    return std::nullopt;
  }

  std::optional<int> find_param(const std::string& s) const {
    for (std::size_t k = 0; k < param_names.size(); ++k)
      if (param_names[k] == s) return int(k);
    return std::nullopt;
  }
};

inline std::string monomial_name(const ManifoldSpec& spec, MonomialIndex m) {
  if (m.holo == 0 && m.anti == 0) return "1";
  std::string s;
  for (int j = 0; j < spec.n; ++j)
    if (m.holo & (1u << j)) {
      if (!s.empty()) s += "^";
      s += spec.holo_names[j];
    }
  for (int j = 0; j < spec.n; ++j)
    if (m.anti & (1u << j)) {
      if (!s.empty()) s += "^";
      s += spec.anti_names[j];
    }
  return s;
}

// Renders a form in canonical monomial order; the output reparses under the
// same spec.
inline std::string format_form(const ManifoldSpec& spec, const Form& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (const auto& [m, c] : f.terms) {
    if (!out.empty()) out += " + ";
    std::string coeff = to_string(c);
    if (m.holo == 0 && m.anti == 0) {
      out += "(" + coeff + ")";
    } else if (c == Gaussian(1)) {
      out += monomial_name(spec, m);
    } else {
      out += "(" + coeff + ")*" + monomial_name(spec, m);
    }
  }
  return out;
}

// A bidegree-indexed collection of matrices realizing one linear operator of
// fixed bidegree shift. Blocks exist for every valid source bidegree; targets
// outside the bigraded range are zero-dimensional.
struct OperatorFamily {
  int n = 0;
  std::pair<int, int> shift{0, 0};
  std::map<Bidegree, ExactMatrix> blocks;

  ExactMatrix block(Bidegree bd) const {
    auto it = blocks.find(bd);
    if (it != blocks.end()) return it->second;
    return ExactMatrix(space_dim(n, shifted(bd, shift)), space_dim(n, bd));
  }

  bool is_zero() const {
    for (const auto& [bd, m] : blocks)
      if (!m.is_zero()) return false;
    return true;
  }

  friend bool operator==(const OperatorFamily& a, const OperatorFamily& b) {
    if (a.n != b.n || a.shift != b.shift) return false;
    for (int p = 0; p <= a.n; ++p)
      for (int q = 0; q <= a.n; ++q)
        if (a.block({p, q}) != b.block({p, q})) return false;
    return true;
  }
};

inline std::vector<Bidegree> all_bidegrees(int n) {
  std::vector<Bidegree> out;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; q <= n; ++q) out.push_back({p, q});
  return out;
}

template <class Action>
OperatorFamily family_from_action(int n, std::pair<int, int> shift, Action&& act) {
  OperatorFamily fam;
  fam.n = n;
  fam.shift = shift;
  for (Bidegree bd : all_bidegrees(n)) {
    Bidegree tgt = shifted(bd, shift);
    auto src_basis = enumerate_basis(n, bd);
    ExactMatrix m(space_dim(n, tgt), src_basis.size());
    for (std::size_t c = 0; c < src_basis.size(); ++c) {
      Form mono(n);
      mono.add_term(src_basis[c], Gaussian(1));
      Form img = act(mono);
      if (img.is_zero()) continue;
      if (m.rows() == 0) {
        if (!img.is_zero())
          throw EngineError("operator action leaves the bigraded range");
        continue;
      }
      Vec v = to_vector(img, tgt);
      for (std::size_t r = 0; r < v.size(); ++r) m.at(r, c) = v[r];
    }
    fam.blocks.emplace(bd, std::move(m));
  }
  return fam;
}

inline OperatorFamily zero_family(int n, std::pair<int, int> shift) {
  return family_from_action(n, shift, [](const Form& f) { return Form(f.n); });
}

inline OperatorFamily identity_family(int n) {
  return family_from_action(n, {0, 0}, [](const Form& f) { return f; });
}

inline OperatorFamily compose(const OperatorFamily& a, const OperatorFamily& b) {
  if (a.n != b.n) throw EngineError("compose: mismatched families");
  OperatorFamily fam;
  fam.n = a.n;
  fam.shift = {a.shift.first + b.shift.first, a.shift.second + b.shift.second};
  for (Bidegree bd : all_bidegrees(a.n))
    fam.blocks.emplace(bd, a.block(shifted(bd, b.shift)) * b.block(bd));
  return fam;
}

inline OperatorFamily operator+(const OperatorFamily& a, const OperatorFamily& b) {
  if (a.n != b.n || a.shift != b.shift) throw EngineError("family sum: shift mismatch");
  OperatorFamily fam;
  fam.n = a.n;
  fam.shift = a.shift;
  for (Bidegree bd : all_bidegrees(a.n)) fam.blocks.emplace(bd, a.block(bd) + b.block(bd));
  return fam;
}

inline OperatorFamily operator-(const OperatorFamily& a, const OperatorFamily& b) {
  if (a.n != b.n || a.shift != b.shift)
    throw EngineError("family difference: shift mismatch");
  OperatorFamily fam;
  fam.n = a.n;
  fam.shift = a.shift;
  for (Bidegree bd : all_bidegrees(a.n)) fam.blocks.emplace(bd, a.block(bd) - b.block(bd));
  return fam;
}

inline OperatorFamily scale(const Gaussian& c, const OperatorFamily& a) {
  OperatorFamily fam;
  fam.n = a.n;
  fam.shift = a.shift;
  for (const auto& [bd, m] : a.blocks) fam.blocks.emplace(bd, scale(c, m));
  return fam;
}

inline OperatorFamily commutator(const OperatorFamily& a, const OperatorFamily& b) {
  return compose(a, b) - compose(b, a);
}

inline OperatorFamily anticommutator(const OperatorFamily& a, const OperatorFamily& b) {
  return compose(a, b) + compose(b, a);
}

// First basis vector on which two families differ, for identity-failure
// diagnostics: "(p,q) monomial <name>".
inline std::optional<std::string> first_mismatch(const ManifoldSpec& spec,
                                                 const OperatorFamily& a,
                                                 const OperatorFamily& b) {
  for (Bidegree bd : all_bidegrees(a.n)) {
    ExactMatrix ma = a.block(bd), mb = b.block(bd);
    if (ma == mb) continue;
    auto basis = enumerate_basis(a.n, bd);
    for (std::size_t c = 0; c < basis.size(); ++c)
      for (std::size_t r = 0; r < ma.rows(); ++r)
        if (ma.at(r, c) != mb.at(r, c))
          return "(" + std::to_string(bd.p) + "," + std::to_string(bd.q) +
                 ") monomial " + monomial_name(spec, basis[c]);
  }
  return std::nullopt;
}

// The unique anti-derivation extending the generator rules: on a monomial
// g1^...^gk the image is sum_i rule(g_i) ^ contract(g_i, monomial); the
// contraction already carries the (-1)^(i-1) of the Leibniz rule and the rule
// values have even degree.
inline Form derivation_on_form(const ManifoldSpec& spec, const std::map<int, Form>& rules,
                               const Form& u) {
  Form out(spec.n);
  for (const auto& [mono, c] : u.terms) {
    for (int id = 0; id < spec.gen_count(); ++id) {
      auto it = rules.find(id);
      if (it == rules.end() || it->second.is_zero()) continue;
      GenSide side = spec.gen_side(id);
      int j = spec.gen_index(id);
      std::uint32_t bit = std::uint32_t(1) << (j - 1);
      if (side == GenSide::Holo ? !(mono.holo & bit) : !(mono.anti & bit)) continue;
      Form single(spec.n);
      single.add_term(mono, c);
      out = out + wedge(it->second, contract(side, j, single));
    }
  }
  return out;
}

enum class DerivationKind { Dbar, Del };

inline std::pair<int, int> derivation_shift(DerivationKind k) {
  return k == DerivationKind::Dbar ? std::pair<int, int>{0, 1} : std::pair<int, int>{1, 0};
}

inline OperatorFamily extend_derivation(const ManifoldSpec& spec,
                                        const std::map<int, Form>& rules,
                                        DerivationKind kind) {
  return family_from_action(spec.n, derivation_shift(kind), [&](const Form& mono) {
    return derivation_on_form(spec, rules, mono);
  });
}

enum class Validate { Full, Off };

// The validated finite complex: resolved structure rules, per-bidegree
// differential matrices, the symplectic matrix and its inverse.
struct ComplexInstance {
  ManifoldSpec spec;
  std::vector<Gaussian> param_values;
  std::map<int, Form> dbar_rules;
  std::map<int, Form> del_rules;
  Form omega;
  ExactMatrix Omega, OmegaInv;
  OperatorFamily dbar;
  std::optional<OperatorFamily> del;
  bool d_omega_fully_checked = false;

  int n() const { return spec.n; }
  bool has_del() const { return del.has_value(); }
  bool has_conjugation() const { return spec.conjugation.has_value(); }
};

inline Form eval(const PolyForm& f, const std::vector<Gaussian>& values) {
  Form out(f.n);
  for (const auto& [m, p] : f.terms) out.add_term(m, p.eval(values));
  return out;
}

// omega = i * sum Omega_{jk} xi^j ^ eta^k.
inline ExactMatrix omega_matrix(int n, const Form& omega) {
  ExactMatrix Om(n, n);
  for (const auto& [m, c] : omega.terms) {
    if (m.bidegree() != Bidegree{1, 1})
      throw SpecError("omega is not of pure bidegree (1,1)");
    int j = std::countr_zero(m.holo);
    int k = std::countr_zero(m.anti);
    Om.at(j, k) = c / Gaussian::i();
  }
  return Om;
}

inline Form omega_power(const Form& omega, int k) {
  Form acc = Form::scalar(omega.n, Gaussian(1));
  for (int i = 0; i < k; ++i) acc = wedge(acc, omega);
  return acc;
}

namespace detail {

inline void check_rule_bidegrees(const ManifoldSpec& spec, const std::map<int, Form>& rules,
                                 DerivationKind kind) {
  for (const auto& [id, val] : rules) {
    if (val.is_zero()) continue;
    Bidegree want;
    if (kind == DerivationKind::Dbar)
      want = spec.is_holo_gen(id) ? Bidegree{1, 1} : Bidegree{0, 2};
    else
      want = spec.is_holo_gen(id) ? Bidegree{2, 0} : Bidegree{1, 1};
    if (!val.homogeneous_of(want))
      throw SpecError("rule for generator '" + spec.gen_name(id) +
                      "' is not homogeneous of bidegree (" + std::to_string(want.p) + "," +
                      std::to_string(want.q) + ")");
  }
}

}  // namespace detail

inline ComplexInstance instantiate(const ManifoldSpec& spec,
                                   const std::map<std::string, Gaussian>& assignment,
                                   Validate mode = Validate::Full) {
  ComplexInstance inst;
  inst.spec = spec;

  for (const auto& [k, v] : assignment)
    if (!spec.find_param(k))
      throw SpecError("unknown parameter '" + k + "' for manifold '" + spec.name + "'");
  inst.param_values.resize(spec.param_names.size());
  for (std::size_t k = 0; k < spec.param_names.size(); ++k) {
    auto it = assignment.find(spec.param_names[k]);
    if (it == assignment.end())
      throw SpecError("parameter '" + spec.param_names[k] + "' not assigned");
    inst.param_values[k] = it->second;
  }

  for (const auto& [id, f] : spec.dbar_rules) {
    Form v = eval(f, inst.param_values);
    if (!v.is_zero()) inst.dbar_rules.emplace(id, std::move(v));
  }
  if (spec.del_rules)
    for (const auto& [id, f] : *spec.del_rules) {
      Form v = eval(f, inst.param_values);
      if (!v.is_zero()) inst.del_rules.emplace(id, std::move(v));
    }
  inst.omega = eval(spec.omega, inst.param_values);

  detail::check_rule_bidegrees(spec, inst.dbar_rules, DerivationKind::Dbar);
  if (spec.del_rules) detail::check_rule_bidegrees(spec, inst.del_rules, DerivationKind::Del);

  inst.dbar = extend_derivation(spec, inst.dbar_rules, DerivationKind::Dbar);
  if (spec.del_rules) inst.del = extend_derivation(spec, inst.del_rules, DerivationKind::Del);

  if (!inst.omega.homogeneous_of({1, 1}))
    throw SpecError("omega is not of pure bidegree (1,1)");
  inst.Omega = omega_matrix(spec.n, inst.omega);
  auto inv = inverse(inst.Omega);

  Form omega_n = omega_power(inst.omega, spec.n);
  bool omega_n_nonzero = !omega_n.is_zero();
  if (omega_n_nonzero != inv.has_value())
    throw EngineError("omega^n nonzero disagrees with invertibility of the omega matrix");
  if (!inv) throw SpecError("omega is degenerate: omega^n = 0");
  inst.OmegaInv = *inv;

  if (mode == Validate::Full) {
    OperatorFamily d2 = compose(inst.dbar, inst.dbar);
    if (!d2.is_zero())
      throw SpecError("dbar^2 != 0 at " +
                      first_mismatch(spec, d2, zero_family(spec.n, d2.shift)).value());
    if (inst.del) {
      OperatorFamily del2 = compose(*inst.del, *inst.del);
      if (!del2.is_zero())
        throw SpecError("del^2 != 0 at " +
                        first_mismatch(spec, del2, zero_family(spec.n, del2.shift)).value());
      OperatorFamily mixed = anticommutator(inst.dbar, *inst.del);
      if (!mixed.is_zero())
        throw SpecError(
            "del dbar + dbar del != 0 at " +
            first_mismatch(spec, mixed, zero_family(spec.n, mixed.shift)).value());
    }
    Form dbar_omega = derivation_on_form(spec, inst.dbar_rules, inst.omega);
    if (!dbar_omega.is_zero())
      throw SpecError("dbar(omega) != 0; offending value: " + format_form(spec, dbar_omega));
    if (inst.del) {
      Form del_omega = derivation_on_form(spec, inst.del_rules, inst.omega);
      if (!del_omega.is_zero())
        throw SpecError("del(omega) != 0; offending value: " + format_form(spec, del_omega));
      inst.d_omega_fully_checked = true;
    }
  } else {
    inst.d_omega_fully_checked = inst.del.has_value();
  }

  if (inst.spec.metric_weights.empty())
    inst.spec.metric_weights.assign(spec.n, Rational(1));
  if (int(inst.spec.metric_weights.size()) != spec.n)
    throw SpecError("metric weights must list one positive rational per generator pair");
  for (const auto& w : inst.spec.metric_weights)
    if (w <= 0) throw SpecError("metric weights must be positive");

  if (spec.conjugation) {
    if (int(spec.conjugation->size()) != spec.n)
      throw SpecError("conjugation must pair every antiholomorphic generator");
    std::vector<bool> hit(spec.n, false);
    for (const auto& rule : *spec.conjugation) {
      if (rule.holo < 0 || rule.holo >= spec.n)
        throw SpecError("conjugation target out of range");
      if (hit[rule.holo]) throw SpecError("conjugation pairing is not a bijection");
      hit[rule.holo] = true;
      if (rule.scalar * rule.scalar.conj() != Gaussian(1))
        throw SpecError("conjugation scalar for '" +
                        spec.anti_names[&rule - spec.conjugation->data()] +
                        "' does not have unit modulus");
    }
  }

  return inst;
}

inline std::map<std::string, Gaussian> default_assignment(const ManifoldSpec& spec) {
  std::map<std::string, Gaussian> out;
  for (std::size_t k = 0; k < spec.param_names.size(); ++k)
    out.emplace(spec.param_names[k], spec.param_defaults[k]);
  return out;
}

// Conjugation extended multiplicatively to forms: conj(xi_{m(k)}) = s_k eta_k
// and conj(eta_k) = s_k xi_{m(k)}; wedge order is preserved, so the bidegree
// flip contributes the (-1)^{pq} reordering sign.
inline Form conjugate_form(const ComplexInstance& inst, const Form& f) {
  const auto& conj_rules = *inst.spec.conjugation;
  const int n = inst.n();
  std::vector<Form> holo_img(n, Form(n)), anti_img(n, Form(n));
  for (int k = 0; k < n; ++k) {
    const auto& r = conj_rules[k];
    anti_img[k] = Form::generator(n, GenSide::Holo, r.holo + 1, r.scalar);
    holo_img[r.holo] = Form::generator(n, GenSide::Anti, k + 1, r.scalar);
  }
  Form out(n);
  for (const auto& [m, c] : f.terms) {
    Form acc = Form::scalar(n, c.conj());
    for (int j = 0; j < n; ++j)
      if (m.holo & (1u << j)) acc = wedge(acc, holo_img[j]);
    for (int j = 0; j < n; ++j)
      if (m.anti & (1u << j)) acc = wedge(acc, anti_img[j]);
    out = out + acc;
  }
  return out;
}

namespace detail {

// Substitute each generator by a linear combination of new-frame generators.
inline PolyForm substitute(const PolyForm& f, int n,
                           const std::vector<PolyForm>& holo_img,
                           const std::vector<PolyForm>& anti_img) {
  PolyForm out(n);
  for (const auto& [m, c] : f.terms) {
    PolyForm acc = PolyForm::scalar(n, c);
    for (int j = 0; j < n; ++j)
      if (m.holo & (1u << j)) acc = wedge(acc, holo_img[j]);
    for (int j = 0; j < n; ++j)
      if (m.anti & (1u << j)) acc = wedge(acc, anti_img[j]);
    out = out + acc;
  }
  return out;
}

}  // namespace detail

// Frame change: new (1,0) generators xi'_a = sum_j m_{aj} xi_j, new (0,1)
// generators eta'_a = sum_j conj(m)_{aj} eta_j; all rules and omega rewritten
// in the new frame. Generator names, weights and parameters carry over. The
// conjugation pairing survives only when it stays of unit-monomial shape.
inline ManifoldSpec change_frame(const ManifoldSpec& spec, const ExactMatrix& m) {
  const int n = spec.n;
  if (int(m.rows()) != n || int(m.cols()) != n)
    throw SpecError("frame matrix must be n x n");
  auto minv_opt = inverse(m);
  if (!minv_opt) throw SpecError("frame matrix is singular");
  const ExactMatrix minv = *minv_opt;
  const int arity = int(spec.param_names.size());

  // Old generators in terms of the new ones: xi_j = sum_a (m^-1)_{ja} xi'_a.
  std::vector<PolyForm> holo_img(n, PolyForm(n)), anti_img(n, PolyForm(n));
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) {
      if (!minv.at(j, a).is_zero())
        holo_img[j] = holo_img[j] + PolyForm::generator(n, GenSide::Holo, a + 1,
                                                        Poly::constant(arity, minv.at(j, a)));
      Gaussian cm = minv.at(j, a).conj();
      if (!cm.is_zero())
        anti_img[j] = anti_img[j] +
                      PolyForm::generator(n, GenSide::Anti, a + 1, Poly::constant(arity, cm));
    }

  auto transform = [&](const PolyForm& f) {
    return detail::substitute(f, n, holo_img, anti_img);
  };

  ManifoldSpec out = spec;
  out.dbar_rules.clear();
  if (out.del_rules) out.del_rules->clear();

  auto rebuild_rules = [&](const std::map<int, PolyForm>& old_rules) {
    std::map<int, PolyForm> res;
    for (int a = 0; a < 2 * n; ++a) {
      PolyForm val(n);
      bool holo_side = a < n;
      for (int j = 0; j < n; ++j) {
        int old_id = holo_side ? j : n + j;
        auto it = old_rules.find(old_id);
        if (it == old_rules.end() || it->second.is_zero()) continue;
        Gaussian coeff = holo_side ? m.at(a, j) : m.at(a - n, j).conj();
        if (coeff.is_zero()) continue;
        val = val + scale(Poly::constant(arity, coeff), transform(it->second));
      }
      if (!val.is_zero()) res.emplace(a, std::move(val));
    }
    return res;
  };

  out.dbar_rules = rebuild_rules(spec.dbar_rules);
  if (spec.del_rules) out.del_rules = rebuild_rules(*spec.del_rules);
  out.omega = transform(spec.omega);

  if (spec.conjugation) {
    // conj(eta'_k) = sum_j m_{kj} s_j xi_{sigma(j)} = sum_a C_{ka} xi'_a; the
    // pairing survives when each row of C is a single unit entry.
    ExactMatrix c(n, n);
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) {
        const auto& rule = (*spec.conjugation)[j];
        Gaussian f = m.at(k, j) * rule.scalar;
        if (f.is_zero()) continue;
        for (int a = 0; a < n; ++a) c.at(k, a) += f * minv.at(rule.holo, a);
      }
    std::vector<ConjugationRule> rules(n);
    bool ok = true;
    for (int k = 0; k < n && ok; ++k) {
      int nonzero = -1;
      for (int a = 0; a < n; ++a)
        if (!c.at(k, a).is_zero()) {
          if (nonzero >= 0) ok = false;
          nonzero = a;
        }
      if (nonzero < 0 || c.at(k, nonzero) * c.at(k, nonzero).conj() != Gaussian(1))
        ok = false;
      if (ok) rules[k] = {nonzero, c.at(k, nonzero)};
    }
    if (ok)
      out.conjugation = std::move(rules);
    else
      out.conjugation.reset();
  }

  return out;
}

}  // namespace cscoh
