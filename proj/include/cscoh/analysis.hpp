#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cscoh/cohomology.hpp"
#include "cscoh/parse.hpp"

namespace cscoh {

// ---------------------------------------------------------------------------
// Total-degree machinery (p + q = deg, concatenated coordinates).
// ---------------------------------------------------------------------------

struct TotalSpace {
  int n = 0, deg = 0;
  std::vector<Bidegree> parts;  // ascending p
  std::vector<std::size_t> offsets;
  std::size_t dim = 0;
};

inline TotalSpace total_space(int n, int deg) {
  TotalSpace t;
  t.n = n;
  t.deg = deg;
  for (int p = 0; p <= n; ++p) {
    int q = deg - p;
    if (q < 0 || q > n) continue;
    t.parts.push_back({p, q});
    t.offsets.push_back(t.dim);
    t.dim += space_dim(n, {p, q});
  }
  return t;
}

inline std::optional<std::size_t> part_offset(const TotalSpace& t, Bidegree bd) {
  for (std::size_t k = 0; k < t.parts.size(); ++k)
    if (t.parts[k] == bd) return t.offsets[k];
  return std::nullopt;
}

// Mixed-bidegree form of pure total degree into total coordinates.
inline Vec total_vector(const TotalSpace& t, const Form& f) {
  Vec v(t.dim);
  for (std::size_t k = 0; k < t.parts.size(); ++k) {
    Form part(f.n);
    for (const auto& [m, c] : f.terms)
      if (m.bidegree() == t.parts[k]) part.add_term(m, c);
    Vec pv = to_vector(part, t.parts[k]);
    for (std::size_t j = 0; j < pv.size(); ++j) v[t.offsets[k] + j] = pv[j];
  }
  return v;
}

inline Form total_form(const TotalSpace& t, const Vec& v) {
  Form f(t.n);
  for (std::size_t k = 0; k < t.parts.size(); ++k) {
    std::size_t d = space_dim(t.n, t.parts[k]);
    Vec pv(v.begin() + t.offsets[k], v.begin() + t.offsets[k] + d);
    f = f + from_vector(t.n, pv, t.parts[k]);
  }
  return f;
}

// Direct sum of the flavor's per-bidegree subspaces inside a total space.
inline Subspace total_subspace(const TotalSpace& t, const CohomologyTable& table, Flavor f,
                               bool numerator) {
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < t.parts.size(); ++k) {
    const CohomCell& cell = table.cell(f, t.parts[k]);
    const Subspace& s = numerator ? cell.numerator : cell.denominator;
    for (std::size_t r = 0; r < s.dim(); ++r) {
      Vec v(t.dim);
      Vec b = s.basis().row(r);
      for (std::size_t j = 0; j < b.size(); ++j) v[t.offsets[k] + j] = b[j];
      rows.push_back(std::move(v));
    }
  }
  return Subspace::from_span(t.dim, rows);
}

// Matrix of (omega^k ^ .) from total degree (n-k) to total degree (n+k).
inline ExactMatrix lefschetz_power_matrix(const ComplexInstance& inst, int k,
                                          const TotalSpace& src, const TotalSpace& tgt) {
  Form wk = omega_power(inst.omega, k);
  ExactMatrix m(tgt.dim, src.dim);
  for (std::size_t s = 0; s < src.parts.size(); ++s) {
    Bidegree bd = src.parts[s];
    Bidegree to{bd.p + k, bd.q + k};
    auto off = part_offset(tgt, to);
    auto basis = enumerate_basis(inst.n(), bd);
    for (std::size_t c = 0; c < basis.size(); ++c) {
      Form mono(inst.n());
      mono.add_term(basis[c], Gaussian(1));
      Form img = wedge(wk, mono);
      if (img.is_zero()) continue;
      if (!off) throw EngineError("Lefschetz image escapes the bigraded range");
      Vec v = to_vector(img, to);
      for (std::size_t r = 0; r < v.size(); ++r) m.at(*off + r, src.offsets[s] + c) = v[r];
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Hard Lefschetz Condition.
// ---------------------------------------------------------------------------

struct HlcLevel {
  int k = 0;
  bool well_defined = false;
  std::size_t rank = 0;
  std::size_t dim_source = 0, dim_target = 0;
  bool iso = false;
};

struct HlcReport {
  Flavor flavor = Flavor::Dolbeault;
  std::vector<HlcLevel> levels;  // k = 0..n
  bool overall = false;
  std::optional<Form> witness;   // class representative whose image dies
  std::string witness_note;
};

// For each k: check that omega^k maps numerator into numerator and
// denominator into denominator at total-degree level, then compute the rank
// of the induced map [omega^k] : H^{n-k} -> H^{n+k}.
inline HlcReport hlc_check(Flavor flavor, const CohomologyTable& table,
                           const ComplexInstance& inst, const Sl2Data& s) {
  (void)s;
  const int n = inst.n();
  HlcReport rep;
  rep.flavor = flavor;
  rep.overall = true;
  for (int k = 0; k <= n; ++k) {
    TotalSpace src = total_space(n, n - k), tgt = total_space(n, n + k);
    Subspace num_src = total_subspace(src, table, flavor, true);
    Subspace den_src = total_subspace(src, table, flavor, false);
    Subspace num_tgt = total_subspace(tgt, table, flavor, true);
    Subspace den_tgt = total_subspace(tgt, table, flavor, false);
    ExactMatrix lk = lefschetz_power_matrix(inst, k, src, tgt);

    HlcLevel level;
    level.k = k;
    level.dim_source = num_src.dim() - den_src.dim();
    level.dim_target = num_tgt.dim() - den_tgt.dim();

    level.well_defined = true;
    for (std::size_t r = 0; r < num_src.dim() && level.well_defined; ++r)
      if (!num_tgt.member(lk * num_src.basis().row(r))) level.well_defined = false;
    for (std::size_t r = 0; r < den_src.dim() && level.well_defined; ++r)
      if (!den_tgt.member(lk * den_src.basis().row(r))) level.well_defined = false;

    if (level.well_defined) {
      std::vector<Vec> mapped;
      for (std::size_t r = 0; r < num_src.dim(); ++r)
        mapped.push_back(lk * num_src.basis().row(r));
      Subspace span = subspace_sum(Subspace::from_span(tgt.dim, mapped), den_tgt);
      level.rank = span.dim() - den_tgt.dim();
      level.iso =
          level.rank == level.dim_source && level.dim_source == level.dim_target;
      if (!level.iso && !rep.witness && level.rank < level.dim_source) {
        // A genuine class killed by omega^k: reduce images mod den_tgt, take a
        // kernel combination of the numerator basis outside den_src.
        ExactMatrix residual(num_src.dim(), tgt.dim);
        for (std::size_t r = 0; r < num_src.dim(); ++r)
          residual.set_row(r, den_tgt.reduce(lk * num_src.basis().row(r)));
        Subspace combos = kernel(transpose(residual));
        for (std::size_t r = 0; r < combos.dim(); ++r) {
          Vec c = combos.basis().row(r);
          Vec v(src.dim);
          for (std::size_t j = 0; j < num_src.dim(); ++j)
            if (!c[j].is_zero())
              for (std::size_t x = 0; x < src.dim; ++x)
                v[x] += c[j] * num_src.basis().at(j, x);
          if (!den_src.member(v)) {
            rep.witness = total_form(src, v);
            rep.witness_note = "[omega^" + std::to_string(k) + "] kills this class";
            break;
          }
        }
      }
    }
    rep.overall = rep.overall && level.well_defined && level.iso;
    rep.levels.push_back(level);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The two-route Lemma verdict.
// ---------------------------------------------------------------------------

struct LemmaVerdict {
  bool holds = false;
  bool hlc_route = false;        // HLC on the Dolbeault Lefschetz complex
  bool dimension_route = false;  // equality in the Frolicher-type inequality
  std::map<Bidegree, std::size_t> slack;  // (BC + A) - (dbar + dbar^Lambda)
  HlcReport hlc;
};

inline LemmaVerdict lemma_verdict(const ComplexInstance& inst, const Sl2Data& s,
                                  const CohomologyTable& table) {
  LemmaVerdict v;
  v.hlc = hlc_check(Flavor::Dolbeault, table, inst, s);
  v.hlc_route = v.hlc.overall;
  v.dimension_route = true;
  for (Bidegree bd : all_bidegrees(inst.n())) {
    std::size_t lhs = table.dim(Flavor::BottChern, bd) + table.dim(Flavor::Aeppli, bd);
    std::size_t rhs = table.dim(Flavor::Dolbeault, bd) + table.dim(Flavor::DbarLambda, bd);
    if (lhs < rhs)
      throw EngineError("Frolicher-type inequality violated at (" + std::to_string(bd.p) +
                        "," + std::to_string(bd.q) + ")");
    v.slack[bd] = lhs - rhs;
    if (lhs != rhs) v.dimension_route = false;
  }
  if (v.hlc_route != v.dimension_route)
    throw EngineError(
        "lemma verdict routes disagree: HLC route says " +
        std::string(v.hlc_route ? "holds" : "fails") + ", dimension route says " +
        std::string(v.dimension_route ? "holds" : "fails"));
  v.holds = v.hlc_route;
  return v;
}

// ---------------------------------------------------------------------------
// Dolbeault-Massey triple products.
// ---------------------------------------------------------------------------

struct MasseyResult {
  Form a, b, c;
  Form f, g;        // dbar f = a^b, dbar g = b^c, free variables zero
  Form product;     // f^c + (-1)^{p+q+1} a^g
  Bidegree target{0, 0};
  Subspace indeterminacy;  // numerator level: Im dbar + ker^c + a^ker
  std::size_t indeterminacy_dim = 0;
  bool vanishes = false;
};

namespace detail {

inline Bidegree homogeneous_or_throw(const Form& f, const std::string& which) {
  auto bd = f.homogeneous_bidegree();
  if (!bd) throw SpecError("massey input " + which + " is not homogeneous");
  return *bd;
}

// Particular dbar-primitive of a closed-and-exact form, or nullopt.
inline std::optional<Form> dbar_primitive(const ComplexInstance& inst, const Form& w,
                                          Bidegree bd) {
  Bidegree src{bd.p, bd.q - 1};
  if (w.is_zero()) return Form(inst.n());
  auto x = solve(inst.dbar.block(src), to_vector(w, bd));
  if (!x) return std::nullopt;
  return from_vector(inst.n(), *x, src);
}

}  // namespace detail

inline MasseyResult massey_triple(const Form& a, const Form& b, const Form& c,
                                  const ComplexInstance& inst) {
  const int n = inst.n();
  MasseyResult r;
  r.a = a;
  r.b = b;
  r.c = c;
  Bidegree ba = detail::homogeneous_or_throw(a, "a");
  Bidegree bb = detail::homogeneous_or_throw(b, "b");
  Bidegree bc = detail::homogeneous_or_throw(c, "c");

  auto closed = [&](const Form& u, Bidegree bd, const std::string& which) {
    if (!u.is_zero() && !cscoh::is_zero(inst.dbar.block(bd) * to_vector(u, bd)))
      throw SpecError("massey input " + which + " is not dbar-closed");
  };
  closed(a, ba, "a");
  closed(b, bb, "b");
  closed(c, bc, "c");

  Form ab = wedge(a, b), bcw = wedge(b, c);
  Bidegree bd_ab{ba.p + bb.p, ba.q + bb.q};
  Bidegree bd_bc{bb.p + bc.p, bb.q + bc.q};
  auto f = detail::dbar_primitive(inst, ab, bd_ab);
  if (!f) throw SpecError("massey precondition fails: [a][b] != 0 in Dolbeault cohomology");
  auto g = detail::dbar_primitive(inst, bcw, bd_bc);
  if (!g) throw SpecError("massey precondition fails: [b][c] != 0 in Dolbeault cohomology");
  r.f = *f;
  r.g = *g;

  int sign = (ba.p + ba.q + 1) % 2 ? -1 : 1;
  Form tail = wedge(a, *g);
  r.product = wedge(*f, c) + (sign < 0 ? -tail : tail);
  r.target = Bidegree{ba.p + bb.p + bc.p, ba.q + bb.q + bc.q - 1};

  if (!r.target.valid(n) || space_dim(n, r.target) == 0) {
    if (!r.product.is_zero()) throw EngineError("massey product escapes the bigraded range");
    r.vanishes = true;
    return r;
  }

  // Numerator-level indeterminacy: Im dbar + (ker dbar)^c + a^(ker dbar).
  std::size_t amb = space_dim(n, r.target);
  Subspace im = image(inst.dbar.block({r.target.p, r.target.q - 1}));
  std::vector<Vec> rows;
  auto add_products = [&](const Subspace& closed_sub, Bidegree bd_sub, bool left) {
    for (std::size_t k = 0; k < closed_sub.dim(); ++k) {
      Form z = from_vector(n, closed_sub.basis().row(k), bd_sub);
      Form w = left ? wedge(z, c) : wedge(a, z);
      if (w.is_zero()) continue;
      rows.push_back(to_vector(w, r.target));
    }
  };
  Bidegree bd_f{ba.p + bb.p, ba.q + bb.q - 1};
  Bidegree bd_g{bb.p + bc.p, bb.q + bc.q - 1};
  if (bd_f.valid(n)) add_products(kernel(inst.dbar.block(bd_f)), bd_f, true);
  if (bd_g.valid(n)) add_products(kernel(inst.dbar.block(bd_g)), bd_g, false);
  r.indeterminacy = subspace_sum(im, Subspace::from_span(amb, rows));
  r.indeterminacy_dim = r.indeterminacy.dim() - im.dim();
  r.vanishes = r.indeterminacy.member(to_vector(r.product, r.target));
  return r;
}

// ---------------------------------------------------------------------------
// Wedge-closure probe for harmonic spaces.
// ---------------------------------------------------------------------------

struct WedgeFailure {
  Bidegree bd1, bd2;
  Form u, v, product;
};

struct WedgeClosureReport {
  Flavor flavor = Flavor::Dolbeault;
  bool closed = true;
  std::size_t pairs_checked = 0;
  std::vector<WedgeFailure> failures;
};

// Tests whether the wedge of every pair of harmonic basis elements stays
// harmonic in the product bidegree.
inline WedgeClosureReport wedge_closure_probe(Flavor flavor, const ComplexInstance& inst,
                                              const CohomologyTable& table) {
  WedgeClosureReport rep;
  rep.flavor = flavor;
  const int n = inst.n();
  auto bds = all_bidegrees(n);
  for (std::size_t i = 0; i < bds.size(); ++i) {
    for (std::size_t j = i; j < bds.size(); ++j) {
      Bidegree sum{bds[i].p + bds[j].p, bds[i].q + bds[j].q};
      if (!sum.valid(n)) continue;
      const auto& basis1 = table.cell(flavor, bds[i]).harmonic_basis;
      const auto& basis2 = table.cell(flavor, bds[j]).harmonic_basis;
      const Subspace& target = table.cell(flavor, sum).harmonic;
      for (std::size_t x = 0; x < basis1.size(); ++x) {
        std::size_t y0 = (i == j) ? x : 0;
        for (std::size_t y = y0; y < basis2.size(); ++y) {
          Form w = wedge(basis1[x], basis2[y]);
          ++rep.pairs_checked;
          if (w.is_zero()) continue;
          if (!target.member(to_vector(w, sum))) {
            rep.closed = false;
            rep.failures.push_back({bds[i], bds[j], basis1[x], basis2[y], w});
          }
        }
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Deformation scans.
// ---------------------------------------------------------------------------

enum class ScanWhat { Lemma, Hlc, Massey };

struct ScanRequest {
  std::string param;
  std::vector<Gaussian> values;
  ScanWhat what = ScanWhat::Lemma;
  // Massey recipe, textual forms that may mention the parameters.
  std::string a, b, c;
};

struct ScanEntry {
  Gaussian value;
  bool ok = false;
  std::string error;
  std::optional<LemmaVerdict> lemma;
  std::optional<HlcReport> hlc;
  std::optional<MasseyResult> massey;
};

// Instantiates the spec at each sampled value and runs the requested
// analysis. Never extrapolates between samples; per-value input failures are
// reported inline and the scan continues.
inline std::vector<ScanEntry> deformation_scan(const ManifoldSpec& spec,
                                               const ScanRequest& req) {
  std::vector<ScanEntry> out;
  for (const Gaussian& value : req.values) {
    ScanEntry entry;
    entry.value = value;
    try {
      auto assignment = default_assignment(spec);
      if (!spec.find_param(req.param))
        throw SpecError("unknown scan parameter '" + req.param + "'");
      assignment[req.param] = value;
      ComplexInstance inst = instantiate(spec, assignment);
      Sl2Data s = build_sl2(inst);
      require(validate_sl2(s, inst), spec.name);
      MetricData metric = make_metric(inst);
      Laplacians laps = build_laplacians(inst, s, metric);
      CohomologyTable table = compute_table(inst, s, metric, laps);
      switch (req.what) {
        case ScanWhat::Lemma: entry.lemma = lemma_verdict(inst, s, table); break;
        case ScanWhat::Hlc: entry.hlc = hlc_check(Flavor::Dolbeault, table, inst, s); break;
        case ScanWhat::Massey: {
          Form a = parse_form(req.a, inst.spec, inst.param_values);
          Form b = parse_form(req.b, inst.spec, inst.param_values);
          Form c = parse_form(req.c, inst.spec, inst.param_values);
          entry.massey = massey_triple(a, b, c, inst);
          break;
        }
      }
      entry.ok = true;
    } catch (const SpecError& e) {
      entry.ok = false;
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace cscoh
