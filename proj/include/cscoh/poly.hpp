#pragma once

#include <map>
#include <vector>

#include "cscoh/scalar.hpp"

namespace cscoh {

// Polynomial in the declared spec parameters with Gaussian coefficients.
// Structure-rule coefficients carry these until instantiation resolves every
// parameter to an exact scalar; no linear algebra ever runs on polynomials.
struct Poly {
  int arity = 0;
  std::map<std::vector<unsigned>, Gaussian> coef;  // exponent vector -> coefficient

  Poly() = default;
  explicit Poly(int arity_) : arity(arity_) {}

  static Poly constant(int arity, Gaussian c) {
    Poly p(arity);
    if (!c.is_zero()) p.coef.emplace(std::vector<unsigned>(arity, 0), std::move(c));
    return p;
  }

  static Poly parameter(int arity, int idx) {
    Poly p(arity);
    std::vector<unsigned> e(arity, 0);
    e[idx] = 1;
    p.coef.emplace(std::move(e), Gaussian(1));
    return p;
  }

  bool is_zero() const { return coef.empty(); }

  bool is_constant() const {
    for (const auto& [e, c] : coef)
      for (unsigned x : e)
        if (x) return false;
    return true;
  }

  Gaussian constant_value() const {
    if (coef.empty()) return Gaussian(0);
    return coef.begin()->second;
  }

  void add(const std::vector<unsigned>& e, const Gaussian& c) {
    if (c.is_zero()) return;
    auto it = coef.find(e);
    if (it == coef.end()) {
      coef.emplace(e, c);
      return;
    }
    it->second += c;
    if (it->second.is_zero()) coef.erase(it);
  }

  Poly operator-() const {
    Poly r(arity);
    for (const auto& [e, c] : coef) r.coef.emplace(e, -c);
    return r;
  }

  Poly& operator+=(const Poly& o) {
    for (const auto& [e, c] : o.coef) add(e, c);
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a += -b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r(std::max(a.arity, b.arity));
    for (const auto& [ea, ca] : a.coef)
      for (const auto& [eb, cb] : b.coef) {
        std::vector<unsigned> e(r.arity, 0);
        for (std::size_t k = 0; k < ea.size(); ++k) e[k] += ea[k];
        for (std::size_t k = 0; k < eb.size(); ++k) e[k] += eb[k];
        r.add(e, ca * cb);
      }
    return r;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coef == b.coef; }

  Gaussian eval(const std::vector<Gaussian>& values) const {
    Gaussian out(0);
    for (const auto& [e, c] : coef) {
      Gaussian term = c;
      for (std::size_t k = 0; k < e.size(); ++k)
        for (unsigned rep = 0; rep < e[k]; ++rep) term *= values[k];
      out += term;
    }
    return out;
  }
};

inline Poly pow(Poly base, unsigned e) {
  Poly r = Poly::constant(base.arity, Gaussian(1));
  for (unsigned k = 0; k < e; ++k) r = r * base;
  return r;
}

}  // namespace cscoh
