#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pseudoherm/errors.hpp"
#include "pseudoherm/fock.hpp"

using namespace pseudoherm;

namespace {

const ScalarPoly I = ScalarPoly::imag_unit();
const ScalarPoly g = ScalarPoly::symbol(Symbol::G);

Bindings at(double alpha, double gv) { return Bindings{{Symbol::Alpha, alpha}, {Symbol::G, gv}}; }

std::vector<double> uniform_grid(double lo, double hi, double h) {
  std::vector<double> out;
  for (int i = 0; lo + i * h <= hi + 1e-12; ++i) out.push_back(lo + i * h);
  return out;
}

double grid_norm(const std::vector<cplx>& f) {
  double s = 0;
  for (std::size_t i = 4; i + 4 < f.size(); ++i) s += std::norm(f[i]);
  return std::sqrt(s);
}

double wavefunction_residual(const EquivalencePair& ho, int n, double gv, const std::vector<double>& grid) {
  auto phi = reference_wavefunction(n, gv, grid);
  auto hphi = apply_on_grid(ho.h, at(1.0, gv), grid, phi);
  double e = eigen_formula_h3(n, gv);
  for (std::size_t i = 0; i < phi.size(); ++i) hphi[i] -= e * phi[i];
  return grid_norm(hphi) / grid_norm(phi);
}

}  // namespace

TEST_CASE("ladder matrices") {
  FockRep rep = make_fock_rep(6, {});
  CHECK(rep.xmat.isApprox(rep.xmat.adjoint()));
  CHECK(rep.pmat.isApprox(rep.pmat.adjoint()));
  CMatrix comm = rep.xmat * rep.pmat - rep.pmat * rep.xmat;
  CHECK(comm.topLeftCorner(5, 5).isApprox(cplx(0, 1) * CMatrix::Identity(5, 5), 1e-14));
  CHECK_THROWS_AS(make_fock_rep(1, {}), Error);
}

TEST_CASE("represent examples") {
  CMatrix x = represent(OpPoly::x(), {}, 4);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      double expected = (j == i + 1 || i == j + 1) ? std::sqrt((std::max(i, j)) / 2.0) : 0.0;
      CHECK(std::abs(x(i, j) - expected) < 1e-15);
    }
  }
  OpPoly h0 = anharmonic_h0(2);
  CMatrix hm = represent(h0, at(1.0, 0.0), 8);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(hm(k, k) - cplx(k + 0.5)) < 1e-13);
  CHECK((hm - CMatrix(hm.diagonal().asDiagonal())).norm() < 1e-13);

  CMatrix anti = represent((I * g) * OpPoly::x(3), at(1.0, 0.04), 10);
  CHECK((anti + anti.adjoint()).norm() < 1e-15);

  try {
    represent(g * OpPoly::x(), {}, 4);
    FAIL("expected UnboundSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundSymbol);
  }
}

TEST_CASE("represent is an exact block of the operator product") {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> deg(0, 3), coef(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    OpPoly a = OpPoly::monomial(deg(rng), deg(rng), ScalarPoly(coef(rng)) + ScalarPoly(coef(rng)) * I);
    OpPoly b = OpPoly::monomial(deg(rng), deg(rng), ScalarPoly(coef(rng)));
    const int n = 10, pad = a.degree() + b.degree();
    CMatrix big = represent(a, {}, n + pad) * represent(b, {}, n + pad);
    CHECK((represent(a * b, {}, n) - big.topLeftCorner(n, n)).norm() < 1e-9);
    CHECK((represent(a + b, {}, n) - represent(a, {}, n) - represent(b, {}, n)).norm() < 1e-12);
  }
}

TEST_CASE("harmonic spectrum and trust rule") {
  SpectrumReport r = operator_spectrum(anharmonic_h0(2), at(1.0, 0.0), 40, true);
  for (int k = 0; k < 40; ++k) CHECK(std::abs(r.eigenvalues[k] - cplx(k + 0.5)) < 1e-12);
  CHECK(r.trusted_count < 40);
  CHECK(r.trusted_count >= 38);
  CHECK(spectrum(represent(anharmonic_h0(2), at(1.0, 0.0), 10), true).trusted_count == 0);
}

TEST_CASE("perturbed oscillator spectra") {
  EquivalencePair ho = perturbative_pair(3, 3);
  SpectrumReport h = operator_spectrum(ho.h, at(1.0, 0.04), 128, true);
  CHECK(h.eigenvalues[0].real() == doctest::Approx(0.5022).epsilon(1e-4));
  SpectrumReport H = operator_spectrum(ho.H, at(1.0, 0.04), 128, false);
  REQUIRE(H.trusted_count > 20);
  for (int k = 0; k <= 20; ++k) CHECK(std::abs(H.eigenvalues[k].imag()) <= 1e-8);

  // eigenvalue minus formula is O(g^4)
  auto err = [&](int n, double gv) {
    return std::abs(operator_spectrum(ho.h, at(1.0, gv), 96, true).eigenvalues[n].real() - eigen_formula_h3(n, gv));
  };
  for (int n : {0, 3, 6}) {
    double ratio = err(n, 0.04) / err(n, 0.02);
    CHECK(ratio >= 10);
    CHECK(ratio <= 22);
  }
}

TEST_CASE("exact pairs share trusted eigenvalues") {
  for (const EquivalencePair& pair : {swanson_family(2, 2), ao_family(2), ao_family(4), swanson_family(4, 2)}) {
    Bindings b = at(1.0, 0.05);
    SpectrumReport h = operator_spectrum(pair.h, b, 96, true);
    SpectrumReport H = operator_spectrum(pair.H, b, 96, false);
    int n = std::min(h.trusted_count, H.trusted_count);
    REQUIRE(n > 10);
    for (int k = 0; k < n; ++k) CHECK(std::abs(h.eigenvalues[k] - H.eigenvalues[k]) <= 1e-7);
  }
}

TEST_CASE("eta_exp") {
  CHECK(eta_exp(OpPoly(), {}, 8).isApprox(CMatrix::Identity(8, 8)));
  EquivalencePair s = swanson_family(2, 2);
  CMatrix eta = eta_exp(s.q, at(1.0, 0.1), 32);
  CHECK(eta.isApprox(eta.adjoint()));
  Eigen::SelfAdjointEigenSolver<CMatrix> es(eta * eta);
  CHECK(es.eigenvalues().minCoeff() > 0);
  for (int k = 0; k < 32; ++k) CHECK(std::abs(eta(k, k)) > 0.5);
  CMatrix eta_ao = eta_exp(ao_family(2).q, at(1.0, 0.1), 32);
  CHECK(std::abs(eta_ao(0, 1)) > 1e-3);
}

TEST_CASE("similarity residual") {
  CHECK(similarity_residual(swanson_family(2, 2), at(1.0, 0.1), 128) <= 1e-8);
  CHECK(similarity_residual(ao_family(2), at(1.0, 0.1), 128) <= 1e-8);
  CHECK(similarity_residual(swanson_family(2, 2), at(1.0, 0.0), 128) <= 1e-14);
  EquivalencePair ho = perturbative_pair(3, 3);
  CHECK(similarity_residual(ho, at(1.0, 0.0), 96) <= 1e-14);
  double ratio = similarity_residual(ho, at(1.0, 0.02), 96) / similarity_residual(ho, at(1.0, 0.01), 96);
  CHECK(ratio >= 8);
  CHECK(ratio <= 24);
  CHECK_THROWS_AS(similarity_residual(ho, at(1.0, 0.01), 64), Error);
}

TEST_CASE("metric inner product") {
  std::mt19937 rng(17);
  std::normal_distribution<double> nd;
  const int n = 24;
  CVector u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = cplx(nd(rng), nd(rng));
    v[i] = cplx(nd(rng), nd(rng));
  }
  CMatrix id = CMatrix::Identity(n, n);
  CHECK(std::abs(metric_inner(u, v, id) - u.dot(v)) < 1e-12);

  EquivalencePair s = swanson_family(2, 2);
  Bindings b = at(1.0, 0.1);
  CMatrix eta = eta_exp(s.q, b, n);
  CHECK(metric_inner(u, u, eta).real() > 0);
  CHECK(std::abs(metric_inner(u, u, eta).imag()) < 1e-10 * std::abs(metric_inner(u, u, eta)));

  // Phi_k = eta^-1 phi_k are eta-orthonormal.
  Eigensystem es = eigensystem(represent(s.h, b, n), true);
  CMatrix eta_inv = eta_exp(-s.q, b, n);
  for (int j = 0; j < 4; ++j) {
    for (int k = 0; k < 4; ++k) {
      cplx ip = metric_inner(eta_inv * es.vectors.col(j), eta_inv * es.vectors.col(k), eta);
      CHECK(std::abs(ip - cplx(j == k ? 1.0 : 0.0)) < 1e-10);
    }
  }
  CHECK_THROWS_AS(metric_inner(u, CVector::Zero(n - 1), eta), Error);
}

TEST_CASE("reference wavefunctions") {
  auto grid = uniform_grid(-14, 14, 0.01);
  const double h = 0.01;
  // g = 0: oscillator eigenfunctions, orthonormal.
  for (int j = 0; j < 6; ++j) {
    auto a = reference_wavefunction(j, 0.0, grid);
    for (int k = 0; k < 6; ++k) {
      auto b = reference_wavefunction(k, 0.0, grid);
      cplx s = 0;
      for (std::size_t i = 0; i < grid.size(); ++i) s += std::conj(a[i]) * b[i] * h;
      CHECK(std::abs(s - cplx(j == k ? 1.0 : 0.0)) < 1e-6);
    }
  }
  // n = 0 from explicit Hermite polynomials: P_0 = (3/16)(3 H_2 - H_4/8).
  const double gv = 0.04;
  auto phi0 = reference_wavefunction(0, gv, grid);
  for (std::size_t i = 0; i < grid.size(); i += 97) {
    double x = grid[i];
    double h2 = 4 * x * x - 2, h4 = 16 * std::pow(x, 4) - 48 * x * x + 12;
    double expected = std::exp(-x * x / 2) / std::pow(M_PI, 0.25) * (1 - gv * gv * 3.0 / 16 * (3 * h2 - h4 / 8));
    CHECK(std::abs(phi0[i] - cplx(expected)) < 1e-13);
  }
}

TEST_CASE("reference wavefunction residual scales as g^4") {
  EquivalencePair ho = perturbative_pair(3, 3);
  auto grid = uniform_grid(-12, 12, 0.01);
  for (int n = 0; n <= 4; ++n) {
    CAPTURE(n);
    double r1 = wavefunction_residual(ho, n, 0.01, grid);
    double r4 = wavefunction_residual(ho, n, 0.04, grid);
    double exponent = std::log(r4 / r1) / std::log(4.0);
    CHECK(exponent == doctest::Approx(4.0).epsilon(0.125));
  }
}

TEST_CASE("Fock eigenvectors match the reference wavefunctions") {
  EquivalencePair ho = perturbative_pair(3, 3);
  auto grid = uniform_grid(-12, 12, 0.01);
  Eigensystem es = eigensystem(represent(ho.h, at(1.0, 0.04), 128), true);
  for (int n = 0; n <= 5; ++n) {
    auto phi = reference_wavefunction(n, 0.04, grid);
    auto v = fock_vector_on_grid(es.vectors.col(n), grid);
    cplx ov = 0;
    double a = 0, b = 0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      ov += std::conj(phi[i]) * v[i];
      a += std::norm(phi[i]);
      b += std::norm(v[i]);
    }
    CHECK(std::abs(ov) / std::sqrt(a * b) >= 1 - 1e-4);
  }
}
