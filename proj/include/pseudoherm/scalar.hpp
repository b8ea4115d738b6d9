#pragma once

// Exact commutative coefficients: Gaussian-rational combinations of monomials
// in alpha (Laurent), g and the formal time symbols E, B, C, D.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace pseudoherm {

enum class Symbol : std::uint8_t { Alpha = 0, G, E, B, C, D };
inline constexpr int kSymbolCount = 6;

std::string_view symbol_name(Symbol s);
std::optional<Symbol> parse_symbol(std::string_view name);

/// Exponent tuple. Only alpha may carry a negative exponent.
struct Monomial {
  std::array<int, kSymbolCount> exp{};

  int operator[](Symbol s) const { return exp[static_cast<int>(s)]; }
  int& operator[](Symbol s) { return exp[static_cast<int>(s)]; }

  bool is_one() const;
  Monomial operator*(const Monomial& other) const;
  bool operator==(const Monomial& other) const = default;
};

/// Ordering used for storage and rendering: g, E, B, C, D, then alpha.
struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

struct GaussianRational {
  mpq_class re{0};
  mpq_class im{0};

  GaussianRational() = default;
  GaussianRational(mpq_class r, mpq_class i = 0) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
  GaussianRational conj() const { return {re, -im}; }
  GaussianRational inverse() const;

  friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  GaussianRational operator-() const { return {-re, -im}; }
  bool operator==(const GaussianRational& other) const { return re == other.re && im == other.im; }
};

/// Values for the formal symbols at evaluation time.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<Symbol, double>> values);

  Bindings& set(Symbol s, double value);
  std::optional<double> get(Symbol s) const { return values_[static_cast<int>(s)]; }
  bool has(Symbol s) const { return values_[static_cast<int>(s)].has_value(); }

 private:
  std::array<std::optional<double>, kSymbolCount> values_{};
};

class ScalarPoly {
 public:
  using Terms = std::map<Monomial, GaussianRational, MonomialOrder>;

  ScalarPoly() = default;
  ScalarPoly(long value);  // NOLINT(google-explicit-constructor)
  ScalarPoly(const mpq_class& value);  // NOLINT(google-explicit-constructor)
  ScalarPoly(const GaussianRational& value);  // NOLINT(google-explicit-constructor)

  static ScalarPoly rational(long num, long den = 1);
  static ScalarPoly imag_unit();
  static ScalarPoly symbol(Symbol s, int power = 1);
  static ScalarPoly term(const GaussianRational& c, const Monomial& m);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::optional<GaussianRational> as_constant() const;

  /// A single term whose monomial involves only alpha: invertible in the ring.
  bool is_unit() const;
  ScalarPoly unit_inverse() const;

  int max_power(Symbol s) const;
  int min_power(Symbol s) const;
  bool depends_on(Symbol s) const;

  /// Drops every term whose power of `s` exceeds `max_power`.
  ScalarPoly truncate(Symbol s, int max_power) const;
  /// Keeps only the terms with exactly `power` of `s`, with `s` removed.
  ScalarPoly coefficient_of(Symbol s, int power) const;
  /// s -> -s.
  ScalarPoly reflect(Symbol s) const;
  /// Replaces a non-negatively occurring symbol by a polynomial value.
  ScalarPoly substitute(Symbol s, const ScalarPoly& value) const;
  /// Substitutes numbers for every bound symbol, keeping the rest symbolic.
  ScalarPoly bind(const Bindings& bindings) const;

  std::complex<double> eval(const Bindings& bindings) const;
  std::string to_string() const;

  ScalarPoly& operator+=(const ScalarPoly& other);
  ScalarPoly& operator-=(const ScalarPoly& other);
  ScalarPoly& operator*=(const ScalarPoly& other);

  friend ScalarPoly operator+(ScalarPoly a, const ScalarPoly& b) { return a += b; }
  friend ScalarPoly operator-(ScalarPoly a, const ScalarPoly& b) { return a -= b; }
  friend ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b);
  ScalarPoly operator-() const;

  bool operator==(const ScalarPoly& other) const;
  bool operator!=(const ScalarPoly& other) const { return !(*this == other); }

 private:
  void add_term(const Monomial& m, const GaussianRational& c);

  Terms terms_;
};

ScalarPoly scalar_mul(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly scalar_conj(const ScalarPoly& a);
std::complex<double> scalar_eval(const ScalarPoly& a, const Bindings& bindings);

/// Renders an exact rational as "3" or "(1/2)" (negative values keep their sign inside).
std::string rational_string(const mpq_class& q);

}  // namespace pseudoherm
