#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "cscoh/linalg.hpp"
#include "cscoh/scalar.hpp"

namespace cscoh {

// Bitmask width bound; the catalog needs n <= 3.
inline constexpr int kMaxGenerators = 16;

struct Bidegree {
  int p = 0, q = 0;
  auto operator<=>(const Bidegree&) const = default;
  bool valid(int n) const { return p >= 0 && q >= 0 && p <= n && q <= n; }
};

inline Bidegree shifted(Bidegree bd, std::pair<int, int> s) {
  return {bd.p + s.first, bd.q + s.second};
}

// One basis monomial of the bigraded exterior algebra: `holo` selects (1,0)
// generators, `anti` selects (0,1) generators. Canonical written order is
// ascending holomorphic indices followed by ascending antiholomorphic ones,
// and all generators anticommute.
struct MonomialIndex {
  std::uint32_t holo = 0, anti = 0;
  auto operator<=>(const MonomialIndex&) const = default;
  Bidegree bidegree() const {
    return {std::popcount(holo), std::popcount(anti)};
  }
};

enum class GenSide { Holo, Anti };

namespace detail {

// Number of transpositions needed to merge the canonical word of `b` into the
// canonical word of `a`: for every generator of b, count the generators of a
// that sit strictly after it in the global order (holo 1..n, then anti 1..n).
inline int crossings(std::uint64_t a, std::uint64_t b) {
  int cnt = 0;
  while (b) {
    int bit = std::countr_zero(b);
    b &= b - 1;
    cnt += std::popcount(a >> (bit + 1));
  }
  return cnt;
}

inline std::uint64_t word(MonomialIndex m, int n) {
  return std::uint64_t(m.holo) | (std::uint64_t(m.anti) << n);
}

}  // namespace detail

// Sign of the monomial wedge a^b, or 0 when a generator repeats.
inline int wedge_sign(MonomialIndex a, MonomialIndex b, int n) {
  if ((a.holo & b.holo) || (a.anti & b.anti)) return 0;
  int c = detail::crossings(detail::word(a, n), detail::word(b, n));
  return (c & 1) ? -1 : 1;
}

inline MonomialIndex merge_monomials(MonomialIndex a, MonomialIndex b) {
  return {a.holo | b.holo, a.anti | b.anti};
}

inline std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t v = 1;
  for (int i = 0; i < k; ++i) v = v * std::size_t(n - i) / std::size_t(i + 1);
  return v;
}

inline std::size_t space_dim(int n, Bidegree bd) {
  if (!bd.valid(n)) return 0;
  return binomial(n, bd.p) * binomial(n, bd.q);
}

// All monomials of the given bidegree, ordered lexicographically by
// (holo mask, anti mask). This order is the basis order everywhere.
inline std::vector<MonomialIndex> enumerate_basis(int n, Bidegree bd) {
  std::vector<MonomialIndex> out;
  if (!bd.valid(n)) return out;
  out.reserve(space_dim(n, bd));
  const std::uint32_t top = std::uint32_t(1) << n;
  for (std::uint32_t h = 0; h < top; ++h) {
    if (std::popcount(h) != bd.p) continue;
    for (std::uint32_t a = 0; a < top; ++a) {
      if (std::popcount(a) != bd.q) continue;
      out.push_back({h, a});
    }
  }
  return out;
}

// Sparse scalar combination of basis monomials over a commutative ring S.
// Canonical: terms with zero coefficient are erased after every operation.
// The engine instantiates S = Gaussian for resolved forms and S = Poly for
// parameter-carrying structure rules.
template <class S>
struct BasicForm {
  int n = 0;
  std::map<MonomialIndex, S> terms;

  BasicForm() = default;
  explicit BasicForm(int n_) : n(n_) {}

  static BasicForm scalar(int n_, S c) {
    BasicForm f(n_);
    f.add_term({0, 0}, std::move(c));
    return f;
  }

  static BasicForm generator(int n_, GenSide side, int j, S c) {
    BasicForm f(n_);
    MonomialIndex m;
    (side == GenSide::Holo ? m.holo : m.anti) = std::uint32_t(1) << (j - 1);
    f.add_term(m, std::move(c));
    return f;
  }

  bool is_zero() const { return terms.empty(); }

  void add_term(MonomialIndex m, S c) {
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
      terms.emplace(m, std::move(c));
      return;
    }
    it->second += c;
    if (it->second.is_zero()) terms.erase(it);
  }

  // Common bidegree of all terms; nullopt for mixed forms. The zero form is
  // homogeneous of every bidegree and reports (0,0).
  std::optional<Bidegree> homogeneous_bidegree() const {
    if (terms.empty()) return Bidegree{0, 0};
    Bidegree bd = terms.begin()->first.bidegree();
    for (const auto& [m, c] : terms)
      if (m.bidegree() != bd) return std::nullopt;
    return bd;
  }

  bool homogeneous_of(Bidegree bd) const {
    for (const auto& [m, c] : terms)
      if (m.bidegree() != bd) return false;
    return true;
  }

  friend bool operator==(const BasicForm& a, const BasicForm& b) {
    return a.n == b.n && a.terms == b.terms;
  }
};

template <class S>
BasicForm<S> operator+(const BasicForm<S>& a, const BasicForm<S>& b) {
  BasicForm<S> r = a;
  for (const auto& [m, c] : b.terms) r.add_term(m, c);
  return r;
}

template <class S>
BasicForm<S> operator-(const BasicForm<S>& a) {
  BasicForm<S> r(a.n);
  for (const auto& [m, c] : a.terms) r.terms.emplace(m, -c);
  return r;
}

template <class S>
BasicForm<S> operator-(const BasicForm<S>& a, const BasicForm<S>& b) {
  return a + (-b);
}

template <class S>
BasicForm<S> scale(const S& c, const BasicForm<S>& a) {
  BasicForm<S> r(a.n);
  for (const auto& [m, co] : a.terms) r.add_term(m, c * co);
  return r;
}

// Bilinear extension of the monomial wedge with the standard sign rule.
template <class S>
BasicForm<S> wedge(const BasicForm<S>& a, const BasicForm<S>& b) {
  if (a.n != b.n) throw EngineError("wedge: mismatched generator count");
  BasicForm<S> r(a.n);
  for (const auto& [ma, ca] : a.terms)
    for (const auto& [mb, cb] : b.terms) {
      int s = wedge_sign(ma, mb, a.n);
      if (s == 0) continue;
      S c = ca * cb;
      if (s < 0) c = -c;
      r.add_term(merge_monomials(ma, mb), std::move(c));
    }
  return r;
}

// Graded interior product against the j-th dual frame vector of the given
// side: delete the generator and multiply by (-1)^(number of generators that
// precede it in the monomial's canonical order).
template <class S>
BasicForm<S> contract(GenSide side, int j, const BasicForm<S>& u) {
  BasicForm<S> r(u.n);
  const std::uint32_t bit = std::uint32_t(1) << (j - 1);
  for (const auto& [m, c] : u.terms) {
    int pos;
    MonomialIndex rem = m;
    if (side == GenSide::Holo) {
      if (!(m.holo & bit)) continue;
      pos = std::popcount(m.holo & (bit - 1));
      rem.holo &= ~bit;
    } else {
      if (!(m.anti & bit)) continue;
      pos = std::popcount(m.holo) + std::popcount(m.anti & (bit - 1));
      rem.anti &= ~bit;
    }
    r.add_term(rem, (pos & 1) ? -c : c);
  }
  return r;
}

using Form = BasicForm<Gaussian>;

inline Vec to_vector(const Form& u, Bidegree bd) {
  if (!u.homogeneous_of(bd))
    throw SpecError("to_vector: form is not homogeneous of the requested bidegree");
  auto basis = enumerate_basis(u.n, bd);
  Vec v(basis.size());
  std::map<MonomialIndex, std::size_t> index;
  for (std::size_t k = 0; k < basis.size(); ++k) index.emplace(basis[k], k);
  for (const auto& [m, c] : u.terms) v[index.at(m)] = c;
  return v;
}

inline Form from_vector(int n, const Vec& v, Bidegree bd) {
  auto basis = enumerate_basis(n, bd);
  if (basis.size() != v.size()) throw SpecError("from_vector: length mismatch");
  Form f(n);
  for (std::size_t k = 0; k < v.size(); ++k) f.add_term(basis[k], v[k]);
  return f;
}

}  // namespace cscoh
