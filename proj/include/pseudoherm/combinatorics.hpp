#pragma once

#include <gmpxx.h>

namespace pseudoherm {

inline mpz_class factorial(long n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

inline mpz_class binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

/// n (n-1) ... (n-k+1); zero when k > n >= 0.
inline mpz_class falling_factorial(long n, long k) {
  mpz_class r = 1;
  for (long i = 0; i < k; ++i) r *= (n - i);
  return r;
}

/// Pochhammer symbol (a)_k = a (a+1) ... (a+k-1) for rational a.
inline mpq_class rising_factorial(const mpq_class& a, long k) {
  mpq_class r = 1;
  for (long i = 0; i < k; ++i) r *= a + i;
  return r;
}

}  // namespace pseudoherm
