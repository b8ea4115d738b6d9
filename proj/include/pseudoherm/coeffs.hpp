#pragma once

// Coefficient sequences of the exact similarity construction.
//
// kappa_n solves  kappa_n = 1/2 - 1/2 sum_{m<n} C(n,m) kappa_m,  kappa_0 = 0,
// lambda_n = 1 - sum_{m<=n} 2^m C(n,m) kappa_m, and the Euler numbers are
// indexed E_1 = 1, E_2 = 5, E_3 = 61, ... so that lambda_{2n} = (-1)^n E_n.

#include <vector>

#include <gmpxx.h>

namespace pseudoherm {

std::vector<mpq_class> kappa_seq(int upto);
std::vector<mpq_class> lambda_seq(int upto);
mpz_class euler_number(int n);

struct CoeffTable {
  std::vector<mpq_class> kappa;
  std::vector<mpq_class> lambda;
  std::vector<mpz_class> euler;  // euler[0] unused; euler[n] = E_n
};

/// kappa and lambda through index `upto`, Euler numbers E_1..E_upto.
CoeffTable coeff_table(int upto);

/// Literal evaluation of the Euler-number closed form for kappa_n,
///   2^-n sum_{m=1}^{[(n+1)/2]} (-1)^{n+m} C(n, 2m) E_m.
/// Kept only as a diagnostic: it disagrees with the recursion (kappa_3 -> 3/8).
mpq_class kappa_closed_form_literal(int n);

struct KappaClosedFormReport {
  int first_mismatch = -1;  // -1 when no mismatch up to the requested index
  std::vector<mpq_class> recursion;
  std::vector<mpq_class> closed_form;
};

KappaClosedFormReport kappa_closed_form_diagnostic(int upto);

}  // namespace pseudoherm
