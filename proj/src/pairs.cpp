#include "pseudoherm/pairs.hpp"

#include <algorithm>

#include "pseudoherm/coeffs.hpp"
#include "pseudoherm/combinatorics.hpp"
#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

const ScalarPoly kI = ScalarPoly::imag_unit();

ScalarPoly alpha(int power = 1) { return ScalarPoly::symbol(Symbol::Alpha, power); }
ScalarPoly gsym(int power = 1) { return ScalarPoly::symbol(Symbol::G, power); }

}  // namespace

OpPoly conjugation_series(const OpPoly& q, const OpPoly& a, const mpq_class& scale, int max_g_order) {
  constexpr int kMaxTerms = 64;
  const bool truncating = max_g_order >= 0;
  OpPoly total;
  OpPoly term = truncating ? a.truncate(Symbol::G, max_g_order) : a;
  mpq_class weight = 1;
  for (int k = 0; k <= kMaxTerms; ++k) {
    if (term.is_zero()) return total;
    total += ScalarPoly(weight) * term;
    term = commutator(q, term);
    if (truncating) term = term.truncate(Symbol::G, max_g_order);
    weight *= scale;
    weight /= k + 1;
  }
  throw Error(ErrorKind::UnsupportedFamily, "conjugation series does not terminate");
}

OpPoly anharmonic_h0(int n) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "anharmonic_h0 needs n >= 0");
  return ScalarPoly::rational(1, 2) * OpPoly::p(2) + (ScalarPoly::rational(1, 2) * alpha()) * OpPoly::x(n);
}

EquivalencePair exact_pair(const OpPoly& h0, const OpPoly& q, int ell) {
  if (ell < 0) throw Error(ErrorKind::PreconditionViolation, "exact_pair needs ell >= 0");
  if (!is_hermitian(h0)) throw Error(ErrorKind::NonHermitianInput, "h0 is not Hermitian");
  if (!is_hermitian(q)) throw Error(ErrorKind::NonHermitianInput, "q is not Hermitian");

  std::vector<OpPoly> c{h0};
  for (int k = 1; k <= ell + 1; ++k) c.push_back(commutator(q, c.back()));
  if (!c[ell + 1].is_zero()) {
    throw Error(ErrorKind::CutoffViolated, "c_q^(ell+1)(h0) does not vanish for ell = " + std::to_string(ell));
  }

  CoeffTable t = coeff_table(std::max(ell, 1));
  EquivalencePair pair;
  pair.h0 = h0;
  pair.q = q;
  pair.kind = PairKind::Exact;
  pair.order = ell;
  pair.h = h0;
  for (int n = 1; 2 * n <= ell; ++n) {
    mpq_class w(t.euler[n], mpz_class(factorial(2 * n)) * (mpz_class(1) << (2 * n)));
    w.canonicalize();
    if (n % 2) w = -w;
    pair.h += ScalarPoly(w) * c[2 * n];
  }
  pair.H = h0;
  for (int n = 1; 2 * n - 1 <= ell; ++n) {
    mpq_class w = t.kappa[2 * n - 1] / mpq_class(factorial(2 * n - 1));
    pair.H -= ScalarPoly(w) * c[2 * n - 1];
  }
  return pair;
}

EquivalencePair swanson_family(int n, int m) {
  if (n < 0 || m < 1) throw Error(ErrorKind::PreconditionViolation, "swanson_family needs n >= 0, m >= 1");
  OpPoly q = (ScalarPoly::rational(2, m) * gsym()) * OpPoly::x(m);
  EquivalencePair pair = exact_pair(anharmonic_h0(n), q, 2);
  pair.family = "swanson";
  pair.n = n;
  pair.m = m;
  return pair;
}

EquivalencePair ao_family(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "ao_family needs n >= 1");
  OpPoly q = (ScalarPoly(2) * gsym() * alpha(-1)) * OpPoly::p();
  EquivalencePair pair = exact_pair(anharmonic_h0(n), q, n);
  pair.family = "ao";
  pair.n = n;
  return pair;
}

OpPoly ao_printed_hermitian(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "ao_printed_hermitian needs n >= 1");
  OpPoly h = anharmonic_h0(n);
  for (int m = 1; 2 * m <= n; ++m) {
    ScalarPoly c = ScalarPoly::rational(1, 2) * alpha() *
                   ScalarPoly(mpq_class((mpz_class(1) << (2 * m)) * euler_number(m) * binomial(n, 2 * m))) *
                   gsym(2 * m) * alpha(-2 * m);
    h += c * OpPoly::x(n - 2 * m);
  }
  return h;
}

OpPoly ao_printed_nonhermitian(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "ao_printed_nonhermitian needs n >= 1");
  auto kappa = kappa_seq(n);
  OpPoly H = anharmonic_h0(n);
  for (int m = 1; 2 * m - 1 <= n; ++m) {
    int k = 2 * m - 1;
    ScalarPoly c = ScalarPoly::rational(1, 2) * kI * alpha() *
                   ScalarPoly(mpq_class(mpz_class(1) << k) * mpq_class(binomial(n, k)) * kappa[k]) * gsym(k) *
                   alpha(-k);
    H -= c * OpPoly::x(n + 1 - 2 * m);
  }
  return H;
}

OpPoly q1_closed(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "q1_closed needs n >= 1");
  OpPoly q;
  for (int k = 1; 2 * k - 1 <= n; ++k) {
    mpq_class c = -rising_factorial(mpq_class(1 - n, 2), k - 1) / rising_factorial(mpq_class(1, 2), k);
    if (k % 2) c = -c;  // (-alpha)^-k
    q += (ScalarPoly(c) * alpha(-k)) * weyl_poly(2 * k - 1, n + 1 - 2 * k);
  }
  return q;
}

OpPoly solve_commutator_equation(const OpPoly& h0, const OpPoly& rhs, int degree_bound) {
  ScalarPoly w = ScalarPoly(2) * h0.coefficient(2, 0);
  OpPoly harmonic = ScalarPoly::rational(1, 2) * OpPoly::p(2) + (ScalarPoly::rational(1, 2) * w) * OpPoly::x(2);
  if (h0 != harmonic || !w.is_unit()) {
    throw Error(ErrorKind::UnsupportedFamily, "solver handles h0 = p^2/2 + (w/2) x^2 only");
  }
  if (rhs.is_zero()) return {};
  if (rhs.degree() > degree_bound) {
    throw Error(ErrorKind::DegreeBoundTooSmall,
                "rhs has degree " + std::to_string(rhs.degree()) + " > bound " + std::to_string(degree_bound));
  }

  std::map<int, WeylExpansion> blocks;
  for (const auto& [key, c] : to_weyl_basis(rhs)) blocks[key.m + key.n][key] = c;

  WeylExpansion solution;
  for (const auto& [d, block] : blocks) {
    // Columns S_{d,0} .. S_{0,d}; row j is the coefficient of S_{j,d-j}.
    const int size = d + 1;
    std::vector<std::vector<ScalarPoly>> a(size, std::vector<ScalarPoly>(size));
    std::vector<ScalarPoly> b(size);
    for (int col = 0; col < size; ++col) {
      int m = d - col;
      for (const auto& [key, c] : to_weyl_basis(commutator(h0, weyl_poly(m, d - m)))) {
        if (key.m + key.n != d) throw Error(ErrorKind::UnsupportedFamily, "ad_h0 does not preserve degree");
        a[key.m][col] = c;
      }
    }
    for (const auto& [key, c] : block) b[key.m] = c;

    std::vector<int> pivot_of(size, -1);
    std::vector<bool> used(size, false);
    for (int col = 0; col < size; ++col) {
      int pivot = -1;
      bool nonunit = false;
      for (int r = 0; r < size; ++r) {
        if (used[r] || a[r][col].is_zero()) continue;
        if (a[r][col].is_unit()) {
          pivot = r;
          break;
        }
        nonunit = true;
      }
      if (pivot < 0) {
        if (nonunit) throw Error(ErrorKind::UnsupportedFamily, "no invertible pivot in commutator block");
        continue;
      }
      used[pivot] = true;
      pivot_of[col] = pivot;
      ScalarPoly inv = a[pivot][col].unit_inverse();
      for (auto& e : a[pivot]) e *= inv;
      b[pivot] *= inv;
      for (int r = 0; r < size; ++r) {
        if (r == pivot || a[r][col].is_zero()) continue;
        ScalarPoly f = a[r][col];
        for (int k = 0; k < size; ++k) {
          if (!a[pivot][k].is_zero()) a[r][k] -= f * a[pivot][k];
        }
        b[r] -= f * b[pivot];
      }
    }
    for (int r = 0; r < size; ++r) {
      if (!used[r] && !b[r].is_zero()) {
        throw Error(ErrorKind::NoSolution, "rhs is not in the range of ad_h0 (degree " + std::to_string(d) + ")");
      }
    }
    for (int col = 0; col < size; ++col) {
      if (pivot_of[col] >= 0 && !b[pivot_of[col]].is_zero()) solution[{d - col, col}] = b[pivot_of[col]];
    }
  }
  return from_weyl_basis(solution);
}

EquivalencePair perturbative_pair(int n, int order) {
  if (n < 2) throw Error(ErrorKind::PreconditionViolation, "perturbative_pair needs n >= 2");
  if (order != 2 && order != 3) throw Error(ErrorKind::OrderExceedsKnownQ, "perturbative order must be 2 or 3");

  OpPoly h0 = anharmonic_h0(2);
  OpPoly xn = OpPoly::x(n);
  OpPoly q1 = q1_closed(n);
  if (commutator(h0, q1) != (ScalarPoly(2) * kI) * xn) {
    throw Error(ErrorKind::NoSolution,
                "[h0, q1] = 2i x^n has no solution for even n; the first-order spectrum is not real");
  }

  EquivalencePair pair;
  pair.family = "ho";
  pair.n = n;
  pair.kind = PairKind::Perturbative;
  pair.order = order;
  pair.h0 = h0;
  pair.H = h0 + (kI * gsym()) * xn;

  OpPoly bracket;
  for (const auto& [key, c] : to_weyl_basis(q1)) bracket += c * xn_commutator_closed(n, key.m, key.n);
  pair.h = h0 - (ScalarPoly::rational(1, 4) * kI * gsym(2)) * bracket;

  pair.q = gsym() * q1;
  pair.q_graded.push_back(q1);
  if (order == 3) {
    OpPoly rhs = (ScalarPoly::rational(1, 6) * kI) * commutator(q1, commutator(q1, xn));
    OpPoly q3 = solve_commutator_equation(h0, rhs, rhs.degree());
    pair.q += gsym(3) * q3;
    pair.q_graded.push_back(q3);
  }
  return pair;
}

OpPoly eta_conjugate(const EquivalencePair& pair, const OpPoly& a, Conjugation dir, int max_g_order) {
  mpq_class scale = dir == Conjugation::Forward ? mpq_class(1, 2) : mpq_class(-1, 2);
  if (pair.kind == PairKind::Exact) return conjugation_series(pair.q, a, scale, -1);
  if (max_g_order < 0) max_g_order = pair.order;
  if (max_g_order > pair.order) {
    throw Error(ErrorKind::OrderExceedsKnownQ, "q is known only through g^" + std::to_string(pair.order));
  }
  return conjugation_series(pair.q, a, scale, max_g_order);
}

OpPoly metric_conjugate(const EquivalencePair& pair, const OpPoly& a) {
  return conjugation_series(pair.q, a, mpq_class(1), pair.kind == PairKind::Exact ? -1 : pair.order);
}

}  // namespace pseudoherm
