#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cscoh {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Bad user input: malformed documents, invalid structure data, violated
// structural identities of a supplied complex. CLI exit code 1.
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The engine disagreeing with itself: two routes that are theorems of each
// other producing different answers. CLI exit code 2.
struct EngineError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// cpp_rational's two-argument constructor rejects negative denominators;
// division normalizes sign and reduces.
inline Rational make_rational(const BigInt& num, const BigInt& den) {
  if (den == 0) throw SpecError("rational with zero denominator");
  return Rational(num) / Rational(den);
}

inline std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

// Exact scalar a + b*i with arbitrary-precision rational a, b. The field of
// every computation in the engine; nothing is ever rounded.
struct Gaussian {
  Rational re, im;

  Gaussian() : re(0), im(0) {}
  Gaussian(int v) : re(v), im(0) {}
  explicit Gaussian(Rational r) : re(std::move(r)), im(0) {}
  Gaussian(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static Gaussian i() { return Gaussian(Rational(0), Rational(1)); }

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }

  Gaussian conj() const { return Gaussian(re, -im); }
  Rational norm2() const { return re * re + im * im; }

  Gaussian operator-() const { return Gaussian(-re, -im); }

  Gaussian& operator+=(const Gaussian& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Gaussian& operator-=(const Gaussian& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Gaussian& operator*=(const Gaussian& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Gaussian& operator/=(const Gaussian& o) {
    if (o.is_zero()) throw SpecError("division by zero scalar");
    Rational n = o.norm2();
    Rational r = (re * o.re + im * o.im) / n;
    im = (im * o.re - re * o.im) / n;
    re = std::move(r);
    return *this;
  }

  friend Gaussian operator+(Gaussian a, const Gaussian& b) { return a += b; }
  friend Gaussian operator-(Gaussian a, const Gaussian& b) { return a -= b; }
  friend Gaussian operator*(Gaussian a, const Gaussian& b) { return a *= b; }
  friend Gaussian operator/(Gaussian a, const Gaussian& b) { return a /= b; }
  friend bool operator==(const Gaussian& a, const Gaussian& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Gaussian& a, const Gaussian& b) { return !(a == b); }
};

// Canonical literal form: "a/b", "a/b*i", "a/b+c/d*i" (signs folded in).
// Matches the syntax the parsers accept, so every printed scalar reparses.
inline std::string to_string(const Gaussian& g) {
  if (g.is_zero()) return "0";
  auto imag_part = [](const Rational& v) -> std::string {
    if (v == 1) return "i";
    if (v == -1) return "-i";
    return to_string(v) + "*i";
  };
  if (g.im == 0) return to_string(g.re);
  if (g.re == 0) return imag_part(g.im);
  std::string s = to_string(g.re);
  if (g.im > 0) {
    s += "+";
    s += imag_part(g.im);
  } else {
    s += "-";
    s += imag_part(-g.im);
  }
  return s;
}

}  // namespace cscoh
