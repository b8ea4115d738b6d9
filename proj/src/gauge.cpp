#include "pseudoherm/gauge.hpp"

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

ScalarPoly sym(Symbol s) { return ScalarPoly::symbol(s); }

int pair_order(const EquivalencePair& pair) { return pair.kind == PairKind::Exact ? -1 : pair.order; }

OpPoly to_hermitian(const GaugeForm& form, const EquivalencePair& pair) {
  if (form.member == Member::Hermitian) return form.hamiltonian;
  return eta_conjugate(pair, form.hamiltonian, Conjugation::Forward);
}

GaugeForm finish(Gauge gauge, const GaugeForm& from, const EquivalencePair& pair, const OpPoly& hermitian) {
  GaugeForm out;
  out.gauge = gauge;
  out.member = from.member;
  out.order = pair_order(pair);
  out.phase = from.phase;
  out.hamiltonian = from.member == Member::Hermitian ? hermitian
                                                     : eta_conjugate(pair, hermitian, Conjugation::Inverse);
  return out;
}

}  // namespace

std::string gauge_name(Gauge g) {
  switch (g) {
    case Gauge::Length: return "length";
    case Gauge::Velocity: return "velocity";
    case Gauge::KH: return "kh";
  }
  return "?";
}

std::string member_name(Member m) { return m == Member::Hermitian ? "hermitian" : "nonhermitian"; }

OpPoly stark_coupling(const EquivalencePair& pair, int order) {
  return sym(Symbol::E) * eta_conjugate(pair, OpPoly::x(), Conjugation::Inverse, order);
}

GaugeForm length_form(const EquivalencePair& pair, Member member) {
  GaugeForm form;
  form.gauge = Gauge::Length;
  form.member = member;
  form.order = pair_order(pair);
  form.hamiltonian =
      member == Member::Hermitian ? pair.h + sym(Symbol::E) * OpPoly::x() : pair.H + stark_coupling(pair);
  return form;
}

GaugeForm length_to_velocity(const GaugeForm& form, const EquivalencePair& pair) {
  if (form.gauge != Gauge::Length) throw Error(ErrorKind::PreconditionViolation, "expected a length-gauge form");
  OpPoly h = to_hermitian(form, pair) - sym(Symbol::E) * OpPoly::x();
  for (const auto& [key, c] : h.terms()) {
    if (c.depends_on(Symbol::E)) {
      throw Error(ErrorKind::PreconditionViolation, "field enters the length form other than through x E");
    }
  }
  return finish(Gauge::Velocity, form, pair, h.shift_p(-sym(Symbol::B)));
}

GaugeForm velocity_to_kh(const GaugeForm& form, const EquivalencePair& pair) {
  if (form.gauge != Gauge::Velocity) throw Error(ErrorKind::PreconditionViolation, "expected a velocity-gauge form");
  ScalarPoly b = sym(Symbol::B);
  OpPoly h = to_hermitian(form, pair).shift_x(-sym(Symbol::C)) + b * OpPoly::p() -
             OpPoly(ScalarPoly::rational(1, 2) * b * b);
  GaugeForm out = finish(Gauge::KH, form, pair, h);
  out.phase = sym(Symbol::D);
  return out;
}

}  // namespace pseudoherm
