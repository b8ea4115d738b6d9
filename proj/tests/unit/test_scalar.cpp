#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pseudoherm/errors.hpp"
#include "pseudoherm/scalar.hpp"

using namespace pseudoherm;

namespace {

const ScalarPoly I = ScalarPoly::imag_unit();
const ScalarPoly a = ScalarPoly::symbol(Symbol::Alpha);
const ScalarPoly g = ScalarPoly::symbol(Symbol::G);
const ScalarPoly E = ScalarPoly::symbol(Symbol::E);

ScalarPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> n_terms(0, 4), coef(-5, 5), den(1, 4), ea(-2, 2), e(0, 2);
  ScalarPoly out;
  for (int t = n_terms(rng); t > 0; --t) {
    Monomial m;
    m[Symbol::Alpha] = ea(rng);
    m[Symbol::G] = e(rng);
    m[Symbol::E] = e(rng);
    m[Symbol::C] = e(rng);
    mpq_class re(coef(rng), den(rng)), im(coef(rng), den(rng));
    re.canonicalize();
    im.canonicalize();
    out += ScalarPoly::term({re, im}, m);
  }
  return out;
}

}  // namespace

TEST_CASE("scalar_mul examples") {
  CHECK(scalar_mul(I, I) == ScalarPoly(-1));
  CHECK(scalar_mul(ScalarPoly::symbol(Symbol::Alpha, -1), a) == ScalarPoly(1));
  ScalarPoly gE = g * E;
  Monomial m;
  m[Symbol::G] = 2;
  m[Symbol::E] = 2;
  CHECK(scalar_mul(gE, gE) == ScalarPoly::term({1, 0}, m));
}

TEST_CASE("no zero terms are stored") {
  ScalarPoly x = g + a;
  x -= g;
  CHECK(x == a);
  CHECK(x.terms().size() == 1);
  CHECK((a - a).is_zero());
  CHECK((a * ScalarPoly(0)).terms().empty());
}

TEST_CASE("scalar_conj examples") {
  CHECK(scalar_conj(I) == -I);
  CHECK(scalar_conj(g) == g);
  ScalarPoly z = ScalarPoly(2) + ScalarPoly(3) * I * ScalarPoly::symbol(Symbol::Alpha, -1);
  ScalarPoly zc = ScalarPoly(2) - ScalarPoly(3) * I * ScalarPoly::symbol(Symbol::Alpha, -1);
  CHECK(scalar_conj(z) == zc);
}

TEST_CASE("scalar_eval examples and errors") {
  CHECK(scalar_eval(g * g, {{Symbol::G, 0.04}}).real() == doctest::Approx(0.0016).epsilon(1e-15));
  CHECK(scalar_eval(ScalarPoly::symbol(Symbol::Alpha, -1), {{Symbol::Alpha, 2.0}}) ==
        std::complex<double>(0.5, 0.0));
  auto ig = scalar_eval(I * g, {{Symbol::G, 0.04}});
  CHECK(ig.real() == 0.0);
  CHECK(ig.imag() == doctest::Approx(0.04));

  try {
    scalar_eval(g * E, {{Symbol::G, 1.0}});
    FAIL("expected UnboundSymbol");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundSymbol);
  }
  try {
    scalar_eval(ScalarPoly::symbol(Symbol::Alpha, -1), {{Symbol::Alpha, 0.0}});
    FAIL("expected DivisionByZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DivisionByZero);
  }
  // A bound but unused symbol is fine; unbound symbols with zero exponent are not needed.
  CHECK(scalar_eval(ScalarPoly(3), {}) == std::complex<double>(3.0, 0.0));
}

TEST_CASE("canonical rendering") {
  ScalarPoly x = ScalarPoly::rational(1, 2) * ScalarPoly::symbol(Symbol::Alpha, -1) * g * g;
  CHECK(x.to_string() == "(1/2)*a^-1*g^2");
  CHECK(ScalarPoly().to_string() == "0");
  CHECK((-I * g).to_string() == "-i*g");
  CHECK((ScalarPoly(2) - ScalarPoly::rational(3, 2) * I * ScalarPoly::symbol(Symbol::Alpha, -1))
            .to_string() == "-(3/2)*i*a^-1 + 2");
}

TEST_CASE("ring axioms, conjugation and evaluation on random triples") {
  std::mt19937 rng(1234);
  Bindings b{{Symbol::Alpha, 1.25}, {Symbol::G, -0.375}, {Symbol::E, 0.5}, {Symbol::C, 2.0}};
  for (int trial = 0; trial < 200; ++trial) {
    ScalarPoly x = random_poly(rng), y = random_poly(rng), z = random_poly(rng);
    CHECK((x * y) * z == x * (y * z));
    CHECK(x * y == y * x);
    CHECK((x + y) + z == x + (y + z));
    CHECK(x * (y + z) == x * y + x * z);
    CHECK(scalar_conj(scalar_conj(x)) == x);
    CHECK(scalar_conj(x * y) == scalar_conj(x) * scalar_conj(y));

    auto lhs = scalar_eval(x * y, b);
    auto rhs = scalar_eval(x, b) * scalar_eval(y, b);
    double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
  }
}

TEST_CASE("truncate, reflect and substitute") {
  ScalarPoly x = ScalarPoly(1) + g + g * g + g * g * g;
  CHECK(x.truncate(Symbol::G, 1) == ScalarPoly(1) + g);
  CHECK(x.reflect(Symbol::G) == ScalarPoly(1) - g + g * g - g * g * g);
  CHECK(x.coefficient_of(Symbol::G, 2) == ScalarPoly(1));
  CHECK((g * E).substitute(Symbol::E, a + ScalarPoly(1)) == g * a + g);
  CHECK(a.is_unit());
  CHECK((ScalarPoly(3) * a).unit_inverse() == ScalarPoly::rational(1, 3) * ScalarPoly::symbol(Symbol::Alpha, -1));
  CHECK_FALSE(g.is_unit());
}
