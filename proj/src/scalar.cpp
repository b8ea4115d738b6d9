#include "pseudoherm/scalar.hpp"

#include <algorithm>
#include <climits>
#include <sstream>
#include <vector>

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

// Term order (storage) and factor order (rendering inside one term).
constexpr std::array<Symbol, kSymbolCount> kTermOrder = {Symbol::G, Symbol::E, Symbol::B,
                                                        Symbol::C, Symbol::D, Symbol::Alpha};
constexpr std::array<Symbol, kSymbolCount> kFactorOrder = {Symbol::Alpha, Symbol::G, Symbol::E,
                                                          Symbol::B, Symbol::C, Symbol::D};

mpq_class pow_q(const mpq_class& base, int e) {
  mpq_class result = 1;
  mpq_class b = base;
  unsigned n = static_cast<unsigned>(e < 0 ? -e : e);
  while (n) {
    if (n & 1u) result *= b;
    b *= b;
    n >>= 1u;
  }
  if (e < 0) result = 1 / result;
  return result;
}

}  // namespace

std::string_view symbol_name(Symbol s) {
  switch (s) {
    case Symbol::Alpha: return "a";
    case Symbol::G: return "g";
    case Symbol::E: return "E";
    case Symbol::B: return "B";
    case Symbol::C: return "C";
    case Symbol::D: return "D";
  }
  return "?";
}

std::optional<Symbol> parse_symbol(std::string_view name) {
  if (name == "a" || name == "alpha") return Symbol::Alpha;
  if (name == "g") return Symbol::G;
  if (name == "E") return Symbol::E;
  if (name == "B") return Symbol::B;
  if (name == "C") return Symbol::C;
  if (name == "D") return Symbol::D;
  return std::nullopt;
}

bool Monomial::is_one() const {
  return std::all_of(exp.begin(), exp.end(), [](int e) { return e == 0; });
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m;
  for (int i = 0; i < kSymbolCount; ++i) m.exp[i] = exp[i] + other.exp[i];
  return m;
}

bool MonomialOrder::operator()(const Monomial& a, const Monomial& b) const {
  for (Symbol s : kTermOrder) {
    if (a[s] != b[s]) return a[s] < b[s];
  }
  return false;
}

GaussianRational GaussianRational::inverse() const {
  mpq_class norm = re * re + im * im;
  if (sgn(norm) == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero coefficient");
  return {re / norm, -im / norm};
}

Bindings::Bindings(std::initializer_list<std::pair<Symbol, double>> values) {
  for (const auto& [s, v] : values) set(s, v);
}

Bindings& Bindings::set(Symbol s, double value) {
  values_[static_cast<int>(s)] = value;
  return *this;
}

ScalarPoly::ScalarPoly(long value) : ScalarPoly(mpq_class(value)) {}

ScalarPoly::ScalarPoly(const mpq_class& value) {
  if (sgn(value) != 0) terms_.emplace(Monomial{}, GaussianRational{value, 0});
}

ScalarPoly::ScalarPoly(const GaussianRational& value) {
  if (!value.is_zero()) terms_.emplace(Monomial{}, value);
}

ScalarPoly ScalarPoly::rational(long num, long den) {
  mpq_class q(num, den);
  q.canonicalize();
  return ScalarPoly(q);
}

ScalarPoly ScalarPoly::imag_unit() { return ScalarPoly(GaussianRational{0, 1}); }

ScalarPoly ScalarPoly::symbol(Symbol s, int power) {
  Monomial m;
  m[s] = power;
  return term(GaussianRational{1, 0}, m);
}

ScalarPoly ScalarPoly::term(const GaussianRational& c, const Monomial& m) {
  ScalarPoly p;
  p.add_term(m, c);
  return p;
}

void ScalarPoly::add_term(const Monomial& m, const GaussianRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

std::optional<GaussianRational> ScalarPoly::as_constant() const {
  if (terms_.empty()) return GaussianRational{};
  if (terms_.size() == 1 && terms_.begin()->first.is_one()) return terms_.begin()->second;
  return std::nullopt;
}

bool ScalarPoly::is_unit() const {
  if (terms_.size() != 1) return false;
  const Monomial& m = terms_.begin()->first;
  for (int i = 1; i < kSymbolCount; ++i) {
    if (m.exp[i] != 0) return false;
  }
  return true;
}

ScalarPoly ScalarPoly::unit_inverse() const {
  if (!is_unit()) throw Error(ErrorKind::DivisionByZero, "not a unit: " + to_string());
  const auto& [m, c] = *terms_.begin();
  Monomial inv;
  inv[Symbol::Alpha] = -m[Symbol::Alpha];
  return term(c.inverse(), inv);
}

int ScalarPoly::max_power(Symbol s) const {
  int best = INT_MIN;
  for (const auto& [m, c] : terms_) best = std::max(best, m[s]);
  return terms_.empty() ? 0 : best;
}

int ScalarPoly::min_power(Symbol s) const {
  int best = INT_MAX;
  for (const auto& [m, c] : terms_) best = std::min(best, m[s]);
  return terms_.empty() ? 0 : best;
}

bool ScalarPoly::depends_on(Symbol s) const {
  return std::any_of(terms_.begin(), terms_.end(), [s](const auto& t) { return t.first[s] != 0; });
}

ScalarPoly ScalarPoly::truncate(Symbol s, int max_power) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) {
    if (m[s] <= max_power) out.terms_.emplace(m, c);
  }
  return out;
}

ScalarPoly ScalarPoly::coefficient_of(Symbol s, int power) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) {
    if (m[s] != power) continue;
    Monomial stripped = m;
    stripped[s] = 0;
    out.add_term(stripped, c);
  }
  return out;
}

ScalarPoly ScalarPoly::reflect(Symbol s) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, (m[s] % 2 != 0) ? -c : c);
  return out;
}

ScalarPoly ScalarPoly::substitute(Symbol s, const ScalarPoly& value) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) {
    if (m[s] < 0) throw Error(ErrorKind::DivisionByZero, "cannot substitute into a Laurent power");
    Monomial rest = m;
    rest[s] = 0;
    ScalarPoly factor = term(c, rest);
    for (int k = 0; k < m[s]; ++k) factor *= value;
    out += factor;
  }
  return out;
}

ScalarPoly ScalarPoly::bind(const Bindings& bindings) const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) {
    mpq_class factor = 1;
    Monomial rest = m;
    for (int i = 0; i < kSymbolCount; ++i) {
      auto s = static_cast<Symbol>(i);
      if (m.exp[i] == 0 || !bindings.has(s)) continue;
      mpq_class v(*bindings.get(s));
      if (sgn(v) == 0 && m.exp[i] < 0) {
        throw Error(ErrorKind::DivisionByZero, "negative power of zero-valued " +
                                                   std::string(symbol_name(s)));
      }
      factor *= pow_q(v, m.exp[i]);
      rest.exp[i] = 0;
    }
    out.add_term(rest, GaussianRational{c.re * factor, c.im * factor});
  }
  return out;
}

std::complex<double> ScalarPoly::eval(const Bindings& bindings) const {
  mpq_class re = 0;
  mpq_class im = 0;
  for (const auto& [m, c] : terms_) {
    mpq_class factor = 1;
    for (int i = 0; i < kSymbolCount; ++i) {
      if (m.exp[i] == 0) continue;
      auto s = static_cast<Symbol>(i);
      auto v = bindings.get(s);
      if (!v) throw Error(ErrorKind::UnboundSymbol, std::string(symbol_name(s)));
      mpq_class q(*v);
      if (sgn(q) == 0 && m.exp[i] < 0) {
        throw Error(ErrorKind::DivisionByZero, std::string(symbol_name(s)) + " = 0 in Laurent term");
      }
      factor *= pow_q(q, m.exp[i]);
    }
    re += c.re * factor;
    im += c.im * factor;
  }
  return {re.get_d(), im.get_d()};
}

ScalarPoly& ScalarPoly::operator+=(const ScalarPoly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

ScalarPoly& ScalarPoly::operator-=(const ScalarPoly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

ScalarPoly& ScalarPoly::operator*=(const ScalarPoly& other) {
  *this = *this * other;
  return *this;
}

ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
  ScalarPoly out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
  }
  return out;
}

ScalarPoly ScalarPoly::operator-() const {
  ScalarPoly out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
  return out;
}

bool ScalarPoly::operator==(const ScalarPoly& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  auto it = other.terms_.begin();
  for (const auto& [m, c] : terms_) {
    if (!(m == it->first) || !(c == it->second)) return false;
    ++it;
  }
  return true;
}

std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return "(" + q.get_str() + ")";
}

std::string ScalarPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    // Pull a leading sign out of purely real or purely imaginary coefficients.
    bool negative = false;
    std::string coef;
    if (sgn(c.im) == 0) {
      negative = sgn(c.re) < 0;
      mpq_class mag = abs(c.re);
      if (mag != 1 || m.is_one()) coef = rational_string(mag);
    } else if (sgn(c.re) == 0) {
      negative = sgn(c.im) < 0;
      mpq_class mag = abs(c.im);
      coef = (mag == 1) ? "i" : rational_string(mag) + "*i";
    } else {
      coef = "(" + c.re.get_str() + (sgn(c.im) < 0 ? "-" : "+") + mpq_class(abs(c.im)).get_str() + "*i)";
    }
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;

    std::vector<std::string> factors;
    if (!coef.empty()) factors.push_back(coef);
    for (Symbol s : kFactorOrder) {
      int e = m[s];
      if (e == 0) continue;
      std::string f(symbol_name(s));
      if (e != 1) f += "^" + std::to_string(e);
      factors.push_back(f);
    }
    for (std::size_t i = 0; i < factors.size(); ++i) {
      if (i) out << "*";
      out << factors[i];
    }
  }
  return out.str();
}

ScalarPoly scalar_mul(const ScalarPoly& a, const ScalarPoly& b) { return a * b; }

ScalarPoly scalar_conj(const ScalarPoly& a) {
  ScalarPoly out;
  for (const auto& [m, c] : a.terms()) out += ScalarPoly::term(c.conj(), m);
  return out;
}

std::complex<double> scalar_eval(const ScalarPoly& a, const Bindings& bindings) {
  return a.eval(bindings);
}

}  // namespace pseudoherm
