#pragma once

// Noncommutative polynomials in the canonical pair (x, p) with [x, p] = i.
// Storage is normal order: every monomial is x^j p^k.

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "pseudoherm/scalar.hpp"

namespace pseudoherm {

/// (x power, p power) of a normal-ordered monomial x^j p^k.
struct NormalKey {
  int x = 0;
  int p = 0;
  auto operator<=>(const NormalKey&) const = default;
};

/// (p count m, x count n) of the Weyl-ordered polynomial S_{m,n}.
struct WeylKey {
  int m = 0;
  int n = 0;
  auto operator<=>(const WeylKey&) const = default;
};

using WeylExpansion = std::map<WeylKey, ScalarPoly>;

/// Products whose total degree would exceed the cap are rejected with
/// DegreeCapExceeded. Default 40.
int degree_cap();
void set_degree_cap(int cap);

class OpPoly {
 public:
  using Terms = std::map<NormalKey, ScalarPoly>;

  OpPoly() = default;
  OpPoly(const ScalarPoly& c);  // NOLINT(google-explicit-constructor)
  OpPoly(long c) : OpPoly(ScalarPoly(c)) {}  // NOLINT(google-explicit-constructor)

  static OpPoly x(int power = 1);
  static OpPoly p(int power = 1);
  static OpPoly monomial(int x_power, int p_power, const ScalarPoly& c = ScalarPoly(1));

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of x^j p^k (zero when absent).
  ScalarPoly coefficient(int x_power, int p_power) const;
  int degree() const;
  bool is_scalar() const;

  OpPoly map_coefficients(const std::function<ScalarPoly(const ScalarPoly&)>& f) const;
  OpPoly truncate(Symbol s, int max_power) const;
  OpPoly reflect(Symbol s) const;
  OpPoly bind(const Bindings& bindings) const;
  /// Lowest / highest power of `s` over all coefficients.
  int min_power(Symbol s) const;
  int max_power(Symbol s) const;

  /// x -> x + shift and p -> p + shift for a commuting scalar shift.
  OpPoly shift_x(const ScalarPoly& shift) const;
  OpPoly shift_p(const ScalarPoly& shift) const;

  std::string to_string() const;

  OpPoly& operator+=(const OpPoly& other);
  OpPoly& operator-=(const OpPoly& other);
  OpPoly& operator*=(const ScalarPoly& c);

  friend OpPoly operator+(OpPoly a, const OpPoly& b) { return a += b; }
  friend OpPoly operator-(OpPoly a, const OpPoly& b) { return a -= b; }
  friend OpPoly operator*(const OpPoly& a, const OpPoly& b);
  friend OpPoly operator*(const ScalarPoly& c, OpPoly a) { return a *= c; }
  friend OpPoly operator*(OpPoly a, const ScalarPoly& c) { return a *= c; }
  OpPoly operator-() const;

  bool operator==(const OpPoly& other) const { return terms_ == other.terms_; }
  bool operator!=(const OpPoly& other) const { return !(*this == other); }

 private:
  void add_term(NormalKey key, const ScalarPoly& c);

  Terms terms_;
};

OpPoly op_mul(const OpPoly& a, const OpPoly& b);
OpPoly op_dagger(const OpPoly& a);
OpPoly commutator(const OpPoly& a, const OpPoly& b);
/// c_q^{(n)}(a) = [q, [q, ... [q, a]]] with n brackets.
OpPoly nested_commutator(const OpPoly& q, const OpPoly& a, int n);
bool is_hermitian(const OpPoly& a);

/// S_{m,n}: totally symmetric product of m factors p and n factors x.
OpPoly weyl_poly(int m, int n);
WeylExpansion to_weyl_basis(const OpPoly& a);
OpPoly from_weyl_basis(const WeylExpansion& expansion);
std::string weyl_string(const WeylExpansion& expansion);

/// [x^n, S_{r,s}] from the closed finite sum, in the S basis.
WeylExpansion xn_commutator_closed_weyl(int n, int r, int s);
OpPoly xn_commutator_closed(int n, int r, int s);

/// [S_{m,n}, S_{r,s}] from the terminating 3F2 sum, in the S basis.
WeylExpansion weyl_commutator_closed_weyl(int m, int n, int r, int s);
OpPoly weyl_commutator_closed(int m, int n, int r, int s);

}  // namespace pseudoherm
