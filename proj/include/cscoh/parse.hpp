#pragma once

#include <cctype>
#include <string>
#include <tuple>
#include <vector>

#include "cscoh/model.hpp"
#include "cscoh/poly.hpp"

namespace cscoh {
namespace parse_detail {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind = End;
  std::string text;
};

inline std::vector<Token> tokenize(const std::string& s, int line) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < s.size()) {
    char c = s[k];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = k;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(k, j - k)});
      k = j;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = k;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::Ident, s.substr(k, j - k)});
      k = j;
      continue;
    }
    if (std::string("+-*/^(),=").find(c) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, c)});
      ++k;
      continue;
    }
    throw SpecError("line " + std::to_string(line) + ": unexpected character '" +
                    std::string(1, c) + "'");
  }
  out.push_back({Token::End, ""});
  return out;
}

class Cursor {
 public:
  Cursor(std::vector<Token> toks, int line) : toks_(std::move(toks)), line_(line) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[k];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return toks_[pos_].kind == Token::End; }
  bool accept_sym(const std::string& s) {
    if (toks_[pos_].kind == Token::Sym && toks_[pos_].text == s) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect_sym(const std::string& s) {
    if (!accept_sym(s)) fail("expected '" + s + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = toks_[pos_];
    std::string near = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
    throw SpecError("line " + std::to_string(line_) + ": " + msg + " near " + near);
  }
  int line() const { return line_; }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int line_;
};

inline BigInt to_bigint(const std::string& digits) { return BigInt(digits); }

// unsigned rational: digits [ '/' digits ]
inline Rational parse_unsigned_rational(Cursor& c) {
  if (c.peek().kind != Token::Number) c.fail("expected a number");
  BigInt num = to_bigint(c.next().text);
  if (c.accept_sym("/")) {
    if (c.peek().kind != Token::Number) c.fail("expected a denominator");
    return make_rational(num, to_bigint(c.next().text));
  }
  return Rational(num);
}

// One signed scalar atom: rational, rational*i, or bare i.
inline Gaussian parse_scalar_atom(Cursor& c) {
  int sign = 1;
  while (true) {
    if (c.accept_sym("-"))
      sign = -sign;
    else if (c.accept_sym("+"))
      ;
    else
      break;
  }
  Gaussian v;
  if (c.peek().kind == Token::Ident && c.peek().text == "i") {
    c.next();
    v = Gaussian::i();
  } else {
    Rational r = parse_unsigned_rational(c);
    if (c.peek().kind == Token::Sym && c.peek().text == "*" &&
        c.peek(1).kind == Token::Ident && c.peek(1).text == "i") {
      c.next();
      c.next();
      v = Gaussian(Rational(0), r);
    } else {
      v = Gaussian(r);
    }
  }
  return sign < 0 ? -v : v;
}

// Scalar literal: a/b, a/b*i, a/b+c/d*i with optional signs.
inline Gaussian parse_scalar(Cursor& c) {
  Gaussian v = parse_scalar_atom(c);
  while (c.peek().kind == Token::Sym && (c.peek().text == "+" || c.peek().text == "-"))
    v += parse_scalar_atom(c);
  return v;
}

// Polynomial expressions in parameters, used inside parenthesized term
// coefficients: + - * over rationals, i, parameter names, integer powers.
inline Poly parse_poly_expr(Cursor& c, const std::vector<std::string>& params);

inline Poly parse_poly_factor(Cursor& c, const std::vector<std::string>& params) {
  const int arity = int(params.size());
  Poly base;
  if (c.accept_sym("(")) {
    base = parse_poly_expr(c, params);
    c.expect_sym(")");
  } else if (c.peek().kind == Token::Ident) {
    std::string name = c.next().text;
    if (name == "i") {
      base = Poly::constant(arity, Gaussian::i());
    } else {
      int idx = -1;
      for (std::size_t k = 0; k < params.size(); ++k)
        if (params[k] == name) idx = int(k);
      if (idx < 0) c.fail("unknown parameter '" + name + "'");
      base = Poly::parameter(arity, idx);
    }
  } else if (c.peek().kind == Token::Number) {
    base = Poly::constant(arity, Gaussian(parse_unsigned_rational(c)));
  } else {
    c.fail("expected a coefficient factor");
  }
  if (c.accept_sym("^")) {
    if (c.peek().kind != Token::Number) c.fail("expected an integer exponent");
    unsigned e = unsigned(std::stoul(c.next().text));
    base = pow(base, e);
  }
  return base;
}

inline Poly parse_poly_term(Cursor& c, const std::vector<std::string>& params) {
  Poly v = parse_poly_factor(c, params);
  while (c.accept_sym("*")) v = v * parse_poly_factor(c, params);
  return v;
}

inline Poly parse_poly_expr(Cursor& c, const std::vector<std::string>& params) {
  int sign = 1;
  while (true) {
    if (c.accept_sym("-"))
      sign = -sign;
    else if (c.accept_sym("+"))
      ;
    else
      break;
  }
  Poly v = parse_poly_term(c, params);
  if (sign < 0) v = -v;
  while (c.peek().kind == Token::Sym && (c.peek().text == "+" || c.peek().text == "-")) {
    int s = 1;
    while (true) {
      if (c.accept_sym("-"))
        s = -s;
      else if (c.accept_sym("+"))
        ;
      else
        break;
    }
    Poly t = parse_poly_term(c, params);
    v += s < 0 ? -t : t;
  }
  return v;
}

}  // namespace parse_detail

// Textual form: terms joined by +/-, each `coeff * g1^g2^...` with `^` the
// wedge; coefficient either a parenthesized parameter expression or a simple
// scalar literal. Generators may appear in any order; the wedge normalizes
// signs into canonical order.
inline PolyForm parse_poly_form(const std::string& text, const ManifoldSpec& spec,
                                int line = 0) {
  using namespace parse_detail;
  Cursor c(tokenize(text, line), line);
  const int arity = int(spec.param_names.size());
  PolyForm out(spec.n);
  if (c.at_end()) c.fail("empty form");
  bool first = true;
  while (!c.at_end()) {
    int sign = 1;
    if (c.accept_sym("-"))
      sign = -1;
    else if (c.accept_sym("+")) {
      if (first) c.fail("form may not start with '+'");
    } else if (!first) {
      c.fail("expected '+' or '-' between form terms");
    }
    first = false;

    Poly coeff = Poly::constant(arity, Gaussian(1));
    bool have_coeff = false;
    bool expect_monomial = true;
    if (c.accept_sym("(")) {
      coeff = parse_poly_expr(c, spec.param_names);
      c.expect_sym(")");
      have_coeff = true;
      expect_monomial = c.accept_sym("*");
    } else if (c.peek().kind == Token::Number ||
               (c.peek().kind == Token::Ident && c.peek().text == "i")) {
      // Simple unparenthesized coefficient: rational, i, or rational*i. The
      // *i pair is consumed by the atom, so a following '*' starts a monomial.
      coeff = Poly::constant(arity, parse_scalar_atom(c));
      have_coeff = true;
      expect_monomial = c.accept_sym("*");
    }

    PolyForm term = PolyForm::scalar(spec.n, coeff);
    if (expect_monomial && c.peek().kind == Token::Ident) {
      while (true) {
        std::string name = c.next().text;
        auto gid = spec.find_gen(name);
        if (!gid) c.fail("unknown generator '" + name + "'");
        term = wedge(term, PolyForm::generator(spec.n, spec.gen_side(*gid),
                                               spec.gen_index(*gid),
                                               Poly::constant(arity, Gaussian(1))));
        if (!c.accept_sym("^")) break;
        if (c.peek().kind != Token::Ident) c.fail("expected a generator after '^'");
      }
    } else if (expect_monomial && have_coeff) {
      c.fail("expected a monomial after '*'");
    } else if (!have_coeff) {
      c.fail("expected a coefficient or generator");
    }

    if (sign < 0) term = -term;
    out = out + term;
  }
  return out;
}

inline Gaussian parse_scalar_literal(const std::string& text, int line = 0) {
  using namespace parse_detail;
  Cursor c(tokenize(text, line), line);
  Gaussian v = parse_scalar(c);
  if (!c.at_end()) c.fail("trailing input after scalar");
  return v;
}

inline Rational parse_rational_literal(const std::string& text, int line = 0) {
  Gaussian g = parse_scalar_literal(text, line);
  if (!g.is_real())
    throw SpecError("line " + std::to_string(line) + ": expected a rational value");
  return g.re;
}

namespace parse_detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t k = 0; k <= s.size(); ++k) {
    if (k == s.size() || s[k] == sep) {
      out.push_back(trim(s.substr(start, k - start)));
      start = k + 1;
    }
  }
  return out;
}

}  // namespace parse_detail

// Section-based spec document, UTF-8 text. Unknown sections are an error;
// the first offending line and token are named in diagnostics.
inline ManifoldSpec parse_spec(const std::string& text) {
  using namespace parse_detail;
  ManifoldSpec spec;
  enum Section { None, Manifold, Parameters, Dbar, Del, Omega, Metric, Conjugation };
  Section section = None;
  bool saw_manifold = false, saw_omega = false, saw_del = false, saw_conj = false;
  std::string omega_text;
  int omega_line = 0;
  // (line, generator name, rule text) gathered before generators are known.
  std::vector<std::tuple<int, std::string, std::string, Section>> rule_lines;
  std::vector<std::pair<int, std::string>> conj_lines;

  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    for (std::size_t k = 0; k <= text.size(); ++k)
      if (k == text.size() || text[k] == '\n') {
        lines.push_back(text.substr(start, k - start));
        start = k + 1;
      }
  }

  int lineno = 0;
  for (const std::string& raw : lines) {
    ++lineno;
    std::string line = raw;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw SpecError("line " + std::to_string(lineno) + ": malformed section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name == "manifold") {
        section = Manifold;
        saw_manifold = true;
      } else if (name == "parameters")
        section = Parameters;
      else if (name == "dbar")
        section = Dbar;
      else if (name == "del") {
        section = Del;
        saw_del = true;
      } else if (name == "omega") {
        section = Omega;
        saw_omega = true;
        omega_line = lineno;
      } else if (name == "metric")
        section = Metric;
      else if (name == "conjugation") {
        section = Conjugation;
        saw_conj = true;
      } else
        throw SpecError("line " + std::to_string(lineno) + ": unknown section '[" + name +
                        "]'");
      continue;
    }

    switch (section) {
      case None:
        throw SpecError("line " + std::to_string(lineno) + ": content before any section");
      case Manifold: {
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw SpecError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "name")
          spec.name = val;
        else if (key == "n") {
          spec.n = int(parse_rational_literal(val, lineno).convert_to<long>());
          if (spec.n < 1 || spec.n > kMaxGenerators)
            throw SpecError("line " + std::to_string(lineno) + ": n must be between 1 and " +
                            std::to_string(kMaxGenerators));
        } else if (key == "generators_10")
          spec.holo_names = split(val, ',');
        else if (key == "generators_01")
          spec.anti_names = split(val, ',');
        else
          throw SpecError("line " + std::to_string(lineno) + ": unknown manifold key '" +
                          key + "'");
        break;
      }
      case Parameters: {
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw SpecError("line " + std::to_string(lineno) + ": expected name = value");
        std::string key = trim(line.substr(0, eq));
        if (key.empty() || key == "i")
          throw SpecError("line " + std::to_string(lineno) + ": invalid parameter name");
        spec.param_names.push_back(key);
        spec.param_defaults.push_back(parse_scalar_literal(trim(line.substr(eq + 1)), lineno));
        break;
      }
      case Dbar:
      case Del: {
        auto eq = line.find('=');
        if (eq == std::string::npos)
          throw SpecError("line " + std::to_string(lineno) + ": expected generator = form");
        rule_lines.emplace_back(lineno, trim(line.substr(0, eq)), trim(line.substr(eq + 1)),
                                section);
        break;
      }
      case Omega:
        if (!omega_text.empty()) omega_text += " ";
        omega_text += line;
        break;
      case Metric: {
        auto eq = line.find('=');
        if (eq == std::string::npos || trim(line.substr(0, eq)) != "weights")
          throw SpecError("line " + std::to_string(lineno) + ": expected weights = r1, r2, ...");
        for (const auto& w : split(trim(line.substr(eq + 1)), ','))
          spec.metric_weights.push_back(parse_rational_literal(w, lineno));
        break;
      }
      case Conjugation:
        conj_lines.emplace_back(lineno, line);
        break;
    }
  }

  if (!saw_manifold) throw SpecError("missing [manifold] section");
  if (spec.n == 0) throw SpecError("missing n in [manifold]");
  if (int(spec.holo_names.size()) != spec.n || int(spec.anti_names.size()) != spec.n)
    throw SpecError("generator lists must each name exactly n generators");
  {
    std::vector<std::string> all = spec.holo_names;
    all.insert(all.end(), spec.anti_names.begin(), spec.anti_names.end());
    for (const auto& nm : all) {
      if (nm.empty() || nm == "i")
        throw SpecError("invalid generator name '" + nm + "'");
      int count = 0;
      for (const auto& other : all) count += (other == nm);
      if (count > 1) throw SpecError("duplicate generator name '" + nm + "'");
      if (spec.find_param(nm))
        throw SpecError("generator name '" + nm + "' collides with a parameter");
    }
  }
  if (!saw_omega || omega_text.empty()) throw SpecError("missing [omega] section");

  if (saw_del) spec.del_rules.emplace();
  for (const auto& [ln, gen, formtext, sec] : rule_lines) {
    auto gid = spec.find_gen(gen);
    if (!gid)
      throw SpecError("line " + std::to_string(ln) + ": unknown generator '" + gen + "'");
    PolyForm val = parse_poly_form(formtext, spec, ln);
    DerivationKind kind = (sec == Dbar) ? DerivationKind::Dbar : DerivationKind::Del;
    Bidegree want;
    if (kind == DerivationKind::Dbar)
      want = spec.is_holo_gen(*gid) ? Bidegree{1, 1} : Bidegree{0, 2};
    else
      want = spec.is_holo_gen(*gid) ? Bidegree{2, 0} : Bidegree{1, 1};
    if (!val.is_zero() && !val.homogeneous_of(want))
      throw SpecError("line " + std::to_string(ln) + ": rule for '" + gen +
                      "' must have bidegree (" + std::to_string(want.p) + "," +
                      std::to_string(want.q) + ")");
    auto& rules = (sec == Dbar) ? spec.dbar_rules : *spec.del_rules;
    if (rules.count(*gid))
      throw SpecError("line " + std::to_string(ln) + ": duplicate rule for '" + gen + "'");
    if (!val.is_zero()) rules.emplace(*gid, std::move(val));
  }

  spec.omega = parse_poly_form(omega_text, spec, omega_line);
  if (!spec.omega.homogeneous_of({1, 1}))
    throw SpecError("line " + std::to_string(omega_line) +
                    ": omega must be homogeneous of bidegree (1,1)");

  if (!spec.metric_weights.empty() && int(spec.metric_weights.size()) != spec.n)
    throw SpecError("weights must list exactly n values");

  if (saw_conj) {
    std::vector<std::optional<ConjugationRule>> rules(spec.n);
    for (const auto& [ln, line] : conj_lines) {
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw SpecError("line " + std::to_string(ln) + ": expected antigen = scalar * gen");
      std::string lhs = trim(line.substr(0, eq));
      auto gid = spec.find_gen(lhs);
      if (!gid || spec.is_holo_gen(*gid))
        throw SpecError("line " + std::to_string(ln) +
                        ": conjugation keys must be (0,1) generators");
      using namespace parse_detail;
      Cursor c(tokenize(trim(line.substr(eq + 1)), ln), ln);
      Gaussian scalar(1);
      if (c.peek().kind != Token::Ident || spec.find_gen(c.peek().text) == std::nullopt) {
        scalar = parse_scalar(c);
        c.expect_sym("*");
      }
      if (c.peek().kind != Token::Ident) c.fail("expected a generator");
      auto target = spec.find_gen(c.next().text);
      if (!target || !spec.is_holo_gen(*target))
        c.fail("conjugation target must be a (1,0) generator");
      if (!c.at_end()) c.fail("trailing input");
      int k = *gid - spec.n;
      if (rules[k])
        throw SpecError("line " + std::to_string(ln) + ": duplicate conjugation for '" +
                        lhs + "'");
      rules[k] = ConjugationRule{*target, scalar};
    }
    std::vector<ConjugationRule> final_rules;
    for (int k = 0; k < spec.n; ++k) {
      if (!rules[k])
        throw SpecError("conjugation missing for generator '" + spec.anti_names[k] + "'");
      final_rules.push_back(*rules[k]);
    }
    spec.conjugation = std::move(final_rules);
  }

  return spec;
}

inline Form parse_form(const std::string& text, const ManifoldSpec& spec,
                       const std::vector<Gaussian>& param_values, int line = 0) {
  return eval(parse_poly_form(text, spec, line), param_values);
}

}  // namespace cscoh
