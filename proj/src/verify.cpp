#include "pseudoherm/verify.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "pseudoherm/coeffs.hpp"
#include "pseudoherm/dynamics.hpp"
#include "pseudoherm/errors.hpp"
#include "pseudoherm/table_io.hpp"

namespace pseudoherm {

namespace {

using Check = std::function<CheckResult()>;

CheckResult result(std::string name, bool pass, std::string detail) { return {std::move(name), pass, std::move(detail)}; }

Bindings at(double gv) { return Bindings{{Symbol::Alpha, 1.0}, {Symbol::G, gv}}; }

CheckResult check_coefficients() {
  CoeffTable t = coeff_table(12);
  bool ok = true;
  for (int n = 1; 2 * n <= 12; ++n) {
    mpz_class sign = n % 2 ? -1 : 1;
    ok = ok && t.lambda[2 * n] == sign * t.euler[n] && t.kappa[2 * n] == 0;
  }
  return result("coefficients", ok, "lambda_2n = (-1)^n E_n and kappa_2n = 0 through 12");
}

CheckResult check_exact_pairs() {
  int count = 0;
  bool ok = true;
  std::vector<EquivalencePair> pairs;
  for (int n = 0; n <= 4; ++n) {
    for (int m = 1; m <= 3; ++m) pairs.push_back(swanson_family(n, m));
  }
  for (int n = 1; n <= 6; ++n) pairs.push_back(ao_family(n));
  for (const auto& p : pairs) {
    ok = ok && is_hermitian(p.h) && eta_conjugate(p, p.H, Conjugation::Forward) == p.h &&
         eta_conjugate(p, p.h, Conjugation::Inverse) == p.H && metric_conjugate(p, p.H) == op_dagger(p.H);
    ++count;
  }
  return result("exact pairs", ok, "h Hermitian, eta H eta^-1 = h, eta^2 H eta^-2 = H^dagger for " +
                                       std::to_string(count) + " swanson/ao pairs");
}

CheckResult check_closed_q1() {
  bool ok = true;
  for (int n = 1; n <= 11; n += 2) {
    ok = ok && commutator(anharmonic_h0(2), q1_closed(n)) == ScalarPoly::imag_unit() * ScalarPoly(2) * OpPoly::x(n);
  }
  return result("closed q1", ok, "[h0, q1] = 2i x^n for odd n <= 11");
}

CheckResult check_perturbative_pairs() {
  bool ok = true;
  for (int n : {3, 5, 7}) {
    auto p = perturbative_pair(n, 3);
    ok = ok && is_hermitian(p.h) && eta_conjugate(p, p.H, Conjugation::Forward) == p.h;
  }
  return result("perturbative pairs", ok, "eta H eta^-1 = h through g^3 for n = 3, 5, 7");
}

CheckResult check_commutator_closed_forms() {
  bool ok = true;
  int count = 0;
  for (int n = 0; n <= 6; ++n) {
    for (int r = 0; n + r <= 6; ++r) {
      for (int s = 0; n + r + s <= 6; ++s, ++count) {
        ok = ok && xn_commutator_closed(n, r, s) == commutator(OpPoly::x(n), weyl_poly(r, s));
      }
    }
  }
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; m + n <= 3; ++n) {
      for (int r = 0; r <= 3; ++r) {
        for (int s = 0; r + s <= 3; ++s, ++count) {
          ok = ok && weyl_commutator_closed(m, n, r, s) == commutator(weyl_poly(m, n), weyl_poly(r, s));
        }
      }
    }
  }
  return result("commutator closed forms", ok, std::to_string(count) + " brute-force comparisons, index sum <= 6");
}

CheckResult check_similarity() {
  double sw = similarity_residual(swanson_family(2, 2), at(0.1), 96);
  double ao = similarity_residual(ao_family(2), at(0.1), 96);
  std::ostringstream os;
  os << "swanson " << sw << ", ao " << ao << " (bound 1e-8)";
  return result("similarity residual", sw <= 1e-8 && ao <= 1e-8, os.str());
}

CheckResult check_spectrum() {
  auto r = operator_spectrum(perturbative_pair(3, 2).H, at(0.04), 128, false);
  double im = 0;
  for (int k = 0; k < std::min(r.trusted_count, 21); ++k) im = std::max(im, std::abs(r.eigenvalues[k].imag()));
  std::ostringstream os;
  os << "H3(1, 0.04) at N=128: trusted " << r.trusted_count << ", max |Im| " << im;
  return result("spectral reality", r.trusted_count > 20 && im <= 1e-8, os.str());
}

CheckResult check_dynamics() {
  Pulse p;
  p.E0 = 0.01;
  p.omega = 1.05;
  p.tau = 15;
  auto pair = swanson_family(2, 2);
  auto sm = make_transition_model(pair, at(0.1), 80, Mode::Standard);
  auto em = make_transition_model(pair, at(0.1), 80, Mode::Eta);
  double ps = transition_probability(sm, 1, 0, p, p.tau, TransitionMethod::Propagate);
  double pe = transition_probability(em, 1, 0, p, p.tau, TransitionMethod::Propagate);

  auto ho = make_transition_model(perturbative_pair(3, 2), at(0.04), 40, Mode::Standard);
  double pl = transition_probability(ho, 1, 0, p, p.tau, TransitionMethod::Propagate, Gauge::Length);
  double pk = transition_probability(ho, 1, 0, p, p.tau, TransitionMethod::Propagate, Gauge::KH);
  std::ostringstream os;
  os << "|P_std - P_eta| " << std::abs(ps - pe) << ", |P_length - P_kh| " << std::abs(pl - pk);
  return result("dynamics", std::abs(ps - pe) <= 1e-8 && std::abs(pl - pk) <= 1e-6, os.str());
}

CheckResult check_sweep_determinism() {
  auto model = make_transition_model(perturbative_pair(3, 2), at(0.04), 64, Mode::Standard);
  Pulse tmpl;
  auto grid = step_grid(1.1, 1.3, 0.02);
  SweepOptions serial;
  serial.parallel = false;
  auto a = frequency_sweep(model, 15, 16, grid, tmpl, serial);
  auto b = frequency_sweep(model, 15, 16, grid, tmpl);
  bool same = a.probability == b.probability && table_to_csv(a) == table_to_csv(b);
  return result("sweep determinism", same, "serial and parallel sweeps identical with " +
                                               std::to_string(sweep_threads()) + " thread(s)");
}

}  // namespace

std::vector<CheckResult> run_self_checks(const std::function<void(const CheckResult&)>& progress) {
  const std::vector<std::pair<std::string, Check>> checks{
      {"coefficients", check_coefficients},
      {"exact pairs", check_exact_pairs},
      {"closed q1", check_closed_q1},
      {"perturbative pairs", check_perturbative_pairs},
      {"commutator closed forms", check_commutator_closed_forms},
      {"similarity residual", check_similarity},
      {"spectral reality", check_spectrum},
      {"dynamics", check_dynamics},
      {"sweep determinism", check_sweep_determinism},
  };
  std::vector<CheckResult> out;
  for (const auto& [name, fn] : checks) {
    CheckResult r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = result(name, false, std::string("threw ") + e.what());
    }
    out.push_back(r);
    if (progress) progress(r);
  }
  return out;
}

}  // namespace pseudoherm
