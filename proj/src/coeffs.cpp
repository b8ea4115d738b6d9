#include "pseudoherm/coeffs.hpp"

#include "pseudoherm/combinatorics.hpp"
#include "pseudoherm/errors.hpp"

namespace pseudoherm {

std::vector<mpq_class> kappa_seq(int upto) {
  if (upto < 0) throw Error(ErrorKind::PreconditionViolation, "kappa_seq needs N >= 0");
  std::vector<mpq_class> kappa(static_cast<std::size_t>(upto) + 1, mpq_class(0));
  for (int n = 1; n <= upto; ++n) {
    mpq_class sum = 0;
    for (int m = 0; m < n; ++m) sum += mpq_class(binomial(n, m)) * kappa[m];
    kappa[n] = mpq_class(1, 2) - sum / 2;
  }
  return kappa;
}

std::vector<mpq_class> lambda_seq(int upto) {
  if (upto < 0) throw Error(ErrorKind::PreconditionViolation, "lambda_seq needs N >= 0");
  auto kappa = kappa_seq(upto);
  std::vector<mpq_class> lambda(kappa.size());
  for (int n = 0; n <= upto; ++n) {
    mpq_class sum = 0;
    for (int m = 0; m <= n; ++m) {
      sum += mpq_class(binomial(n, m) * (mpz_class(1) << m)) * kappa[m];
    }
    lambda[n] = 1 - sum;
  }
  return lambda;
}

mpz_class euler_number(int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionViolation, "euler_number needs n >= 1");
  mpq_class l = lambda_seq(2 * n)[2 * n];
  if (n % 2) l = -l;
  if (l.get_den() != 1) throw Error(ErrorKind::ConvergenceFailure, "non-integer Euler number");
  return l.get_num();
}

CoeffTable coeff_table(int upto) {
  if (upto < 0) throw Error(ErrorKind::PreconditionViolation, "coeff_table needs N >= 0");
  CoeffTable t;
  auto lambda_long = lambda_seq(2 * upto);
  t.kappa = kappa_seq(upto);
  t.lambda.assign(lambda_long.begin(), lambda_long.begin() + upto + 1);
  t.euler.assign(static_cast<std::size_t>(upto) + 1, mpz_class(0));
  for (int n = 1; n <= upto; ++n) {
    mpq_class l = lambda_long[2 * n];
    t.euler[n] = (n % 2 ? -l : l).get_num();
  }
  return t;
}

mpq_class kappa_closed_form_literal(int n) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "kappa_closed_form_literal needs n >= 0");
  mpq_class sum = 0;
  for (int m = 1; m <= (n + 1) / 2; ++m) {
    mpq_class term(binomial(n, 2 * m) * euler_number(m));
    sum += ((n + m) % 2 ? -term : term);
  }
  return sum / mpq_class(mpz_class(1) << n);
}

KappaClosedFormReport kappa_closed_form_diagnostic(int upto) {
  KappaClosedFormReport r;
  r.recursion = kappa_seq(upto);
  for (int n = 0; n <= upto; ++n) {
    r.closed_form.push_back(kappa_closed_form_literal(n));
    if (r.first_mismatch < 0 && r.closed_form.back() != r.recursion[n]) r.first_mismatch = n;
  }
  return r;
}

}  // namespace pseudoherm
