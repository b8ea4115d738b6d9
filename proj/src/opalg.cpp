#include "pseudoherm/opalg.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "pseudoherm/combinatorics.hpp"
#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

std::atomic<int> g_degree_cap{40};

/// (-i)^r as a Gaussian rational.
GaussianRational minus_i_pow(int r) {
  switch (r % 4) {
    case 0: return {1, 0};
    case 1: return {0, -1};
    case 2: return {-1, 0};
    default: return {0, 1};
  }
}

/// p^k x^j = sum_r C(k,r) C(j,r) r! (-i)^r x^{j-r} p^{k-r}.
template <typename Emit>
void reorder_px(int k, int j, Emit&& emit) {
  for (int r = 0; r <= std::min(k, j); ++r) {
    mpq_class w(binomial(k, r) * binomial(j, r) * factorial(r));
    GaussianRational phase = minus_i_pow(r);
    emit(j - r, k - r, GaussianRational{phase.re * w, phase.im * w});
  }
}

std::string monomial_string(int j, int k) {
  std::string s;
  if (j) s += (j == 1) ? "x" : "x^" + std::to_string(j);
  if (k) {
    if (!s.empty()) s += "*";
    s += (k == 1) ? "p" : "p^" + std::to_string(k);
  }
  return s;
}

std::string coefficient_prefix(const ScalarPoly& c) {
  if (c == ScalarPoly(1)) return "";
  if (c.terms().size() == 1) return c.to_string() + "*";
  return "(" + c.to_string() + ")*";
}

}  // namespace

int degree_cap() { return g_degree_cap.load(); }
void set_degree_cap(int cap) { g_degree_cap.store(cap); }

OpPoly::OpPoly(const ScalarPoly& c) { add_term({0, 0}, c); }

OpPoly OpPoly::x(int power) { return monomial(power, 0); }
OpPoly OpPoly::p(int power) { return monomial(0, power); }

OpPoly OpPoly::monomial(int x_power, int p_power, const ScalarPoly& c) {
  OpPoly out;
  out.add_term({x_power, p_power}, c);
  return out;
}

void OpPoly::add_term(NormalKey key, const ScalarPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ScalarPoly OpPoly::coefficient(int x_power, int p_power) const {
  auto it = terms_.find({x_power, p_power});
  return it == terms_.end() ? ScalarPoly() : it->second;
}

int OpPoly::degree() const {
  int d = 0;
  for (const auto& [k, c] : terms_) d = std::max(d, k.x + k.p);
  return d;
}

bool OpPoly::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == NormalKey{0, 0});
}

OpPoly OpPoly::map_coefficients(const std::function<ScalarPoly(const ScalarPoly&)>& f) const {
  OpPoly out;
  for (const auto& [k, c] : terms_) out.add_term(k, f(c));
  return out;
}

OpPoly OpPoly::truncate(Symbol s, int max_power) const {
  return map_coefficients([&](const ScalarPoly& c) { return c.truncate(s, max_power); });
}

OpPoly OpPoly::reflect(Symbol s) const {
  return map_coefficients([&](const ScalarPoly& c) { return c.reflect(s); });
}

OpPoly OpPoly::bind(const Bindings& bindings) const {
  return map_coefficients([&](const ScalarPoly& c) { return c.bind(bindings); });
}

int OpPoly::min_power(Symbol s) const {
  if (terms_.empty()) return 0;
  int best = terms_.begin()->second.min_power(s);
  for (const auto& [k, c] : terms_) best = std::min(best, c.min_power(s));
  return best;
}

int OpPoly::max_power(Symbol s) const {
  if (terms_.empty()) return 0;
  int best = terms_.begin()->second.max_power(s);
  for (const auto& [k, c] : terms_) best = std::max(best, c.max_power(s));
  return best;
}

OpPoly OpPoly::shift_x(const ScalarPoly& shift) const {
  OpPoly out;
  for (const auto& [k, c] : terms_) {
    ScalarPoly power = 1;  // shift^(j-l), built from l = j downwards
    for (int l = k.x; l >= 0; --l) {
      out.add_term({l, k.p}, c * power * ScalarPoly(mpq_class(binomial(k.x, l))));
      power *= shift;
    }
  }
  return out;
}

OpPoly OpPoly::shift_p(const ScalarPoly& shift) const {
  OpPoly out;
  for (const auto& [k, c] : terms_) {
    ScalarPoly power = 1;
    for (int l = k.p; l >= 0; --l) {
      out.add_term({k.x, l}, c * power * ScalarPoly(mpq_class(binomial(k.p, l))));
      power *= shift;
    }
  }
  return out;
}

std::string OpPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Highest degree first, then by x power.
  std::vector<std::pair<NormalKey, const ScalarPoly*>> items;
  for (const auto& [k, c] : terms_) items.emplace_back(k, &c);
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    int da = a.first.x + a.first.p, db = b.first.x + b.first.p;
    if (da != db) return da > db;
    return a.first.x > b.first.x;
  });
  for (const auto& [k, c] : items) {
    if (!first) out << " + ";
    first = false;
    std::string mono = monomial_string(k.x, k.p);
    if (mono.empty()) {
      out << (c->terms().size() == 1 ? c->to_string() : "(" + c->to_string() + ")");
    } else {
      out << coefficient_prefix(*c) << mono;
    }
  }
  return out.str();
}

OpPoly& OpPoly::operator+=(const OpPoly& other) {
  for (const auto& [k, c] : other.terms_) add_term(k, c);
  return *this;
}

OpPoly& OpPoly::operator-=(const OpPoly& other) {
  for (const auto& [k, c] : other.terms_) add_term(k, -c);
  return *this;
}

OpPoly& OpPoly::operator*=(const ScalarPoly& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  // Products of nonzero Gaussian-rational polynomials are nonzero.
  return *this;
}

OpPoly OpPoly::operator-() const {
  OpPoly out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

OpPoly operator*(const OpPoly& a, const OpPoly& b) {
  if (!a.is_zero() && !b.is_zero() && a.degree() + b.degree() > degree_cap()) {
    throw Error(ErrorKind::DegreeCapExceeded, "product degree " +
                                                  std::to_string(a.degree() + b.degree()) +
                                                  " exceeds cap " + std::to_string(degree_cap()));
  }
  OpPoly out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      ScalarPoly cab = ca * cb;
      reorder_px(ka.p, kb.x, [&](int xj, int pk, const GaussianRational& w) {
        out.add_term({ka.x + xj, pk + kb.p}, cab * ScalarPoly(w));
      });
    }
  }
  return out;
}

OpPoly op_mul(const OpPoly& a, const OpPoly& b) { return a * b; }

OpPoly op_dagger(const OpPoly& a) {
  OpPoly out;
  for (const auto& [k, c] : a.terms()) {
    ScalarPoly cc = scalar_conj(c);
    // (x^j p^k)^dagger = p^k x^j.
    reorder_px(k.p, k.x, [&](int xj, int pk, const GaussianRational& w) {
      out += OpPoly::monomial(xj, pk, cc * ScalarPoly(w));
    });
  }
  return out;
}

OpPoly commutator(const OpPoly& a, const OpPoly& b) { return a * b - b * a; }

OpPoly nested_commutator(const OpPoly& q, const OpPoly& a, int n) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "nested_commutator needs n >= 0");
  OpPoly out = a;
  for (int i = 0; i < n && !out.is_zero(); ++i) out = commutator(q, out);
  return out;
}

bool is_hermitian(const OpPoly& a) { return op_dagger(a) == a; }

OpPoly weyl_poly(int m, int n) {
  if (m < 0 || n < 0) throw Error(ErrorKind::PreconditionViolation, "weyl_poly needs m, n >= 0");
  OpPoly out;
  mpq_class norm(mpz_class(1), mpz_class(1) << n);
  for (int k = 0; k <= n; ++k) {
    ScalarPoly w(mpq_class(binomial(n, k)) * norm);
    // x^k (p^m x^{n-k})
    reorder_px(m, n - k, [&](int xj, int pk, const GaussianRational& c) {
      out += OpPoly::monomial(k + xj, pk, w * ScalarPoly(c));
    });
  }
  return out;
}

WeylExpansion to_weyl_basis(const OpPoly& a) {
  WeylExpansion out;
  OpPoly rest = a;
  // S_{k,j} = x^j p^k + (terms of degree j+k-2, j+k-4, ...): peel off the top degree.
  while (!rest.is_zero()) {
    const auto* top = &*rest.terms().begin();
    for (const auto& t : rest.terms()) {
      if (t.first.x + t.first.p > top->first.x + top->first.p) top = &t;
    }
    NormalKey key = top->first;
    ScalarPoly c = top->second;
    out[{key.p, key.x}] += c;
    rest -= c * weyl_poly(key.p, key.x);
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

OpPoly from_weyl_basis(const WeylExpansion& expansion) {
  OpPoly out;
  for (const auto& [k, c] : expansion) out += c * weyl_poly(k.m, k.n);
  return out;
}

std::string weyl_string(const WeylExpansion& expansion) {
  if (expansion.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (auto it = expansion.rbegin(); it != expansion.rend(); ++it) {
    if (!first) out << " + ";
    first = false;
    out << coefficient_prefix(it->second) << "S[" << it->first.m << "," << it->first.n << "]";
  }
  return out.str();
}

WeylExpansion xn_commutator_closed_weyl(int n, int r, int s) {
  if (n < 0 || r < 0 || s < 0) {
    throw Error(ErrorKind::PreconditionViolation, "xn_commutator_closed needs n, r, s >= 0");
  }
  WeylExpansion out;
  int upper = std::min((n + 1) / 2, (r + 1) / 2);
  for (int k = 0; k <= upper; ++k) {
    // Terms with a negative factorial argument vanish.
    if (n - 2 * k - 1 < 0 || r - 2 * k - 1 < 0) continue;
    mpq_class c(falling_factorial(n, 2 * k + 1) * falling_factorial(r, 2 * k + 1),
                factorial(2 * k + 1) * (mpz_class(1) << (2 * k)));
    c.canonicalize();
    if (k % 2) c = -c;
    out[{r - 2 * k - 1, s + n - 2 * k - 1}] += ScalarPoly(GaussianRational{0, c});
  }
  return out;
}

OpPoly xn_commutator_closed(int n, int r, int s) {
  return from_weyl_basis(xn_commutator_closed_weyl(n, r, s));
}

namespace {

/// 3F2(a1,a2,a3; b1,b2; 1) / (Gamma(b1) Gamma(b2)) for integer parameters,
/// summed while the numerator Pochhammers are nonzero. 1/Gamma at a
/// non-positive integer is zero, which keeps the sum finite at the poles.
mpq_class regularized_3f2(long a1, long a2, long a3, long b1, long b2) {
  mpq_class total = 0;
  for (long j = 0;; ++j) {
    mpq_class num = rising_factorial(a1, j) * rising_factorial(a2, j) * rising_factorial(a3, j);
    if (sgn(num) == 0) break;
    long g1 = b1 + j;  // Gamma(g1) = (g1 - 1)!
    long g2 = b2 + j;
    if (g1 >= 1 && g2 >= 1) {
      total += num / mpq_class(factorial(g1 - 1) * factorial(g2 - 1) * factorial(j));
    }
  }
  return total;
}

}  // namespace

WeylExpansion weyl_commutator_closed_weyl(int m, int n, int r, int s) {
  if (m < 0 || n < 0 || r < 0 || s < 0) {
    throw Error(ErrorKind::PreconditionViolation, "weyl_commutator_closed needs indices >= 0");
  }
  WeylExpansion out;
  for (int k = 0; m + r - 2 * k - 1 >= 0 && n + s - 2 * k - 1 >= 0; ++k) {
    mpq_class f = regularized_3f2(-1 - 2 * k, -m, -s, n - 2 * k, r - 2 * k);
    if (sgn(f) == 0) continue;
    mpq_class c = f * mpq_class(factorial(n) * factorial(r)) /
                  mpq_class(factorial(2 * k + 1) * (mpz_class(1) << (2 * k)));
    if (k % 2) c = -c;
    out[{m + r - 2 * k - 1, n + s - 2 * k - 1}] += ScalarPoly(GaussianRational{0, c});
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.is_zero() ? out.erase(it) : std::next(it);
  }
  return out;
}

OpPoly weyl_commutator_closed(int m, int n, int r, int s) {
  return from_weyl_basis(weyl_commutator_closed_weyl(m, n, r, s));
}

}  // namespace pseudoherm
