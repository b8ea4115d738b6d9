#pragma once

// Length, velocity and Kramers-Henneberger forms of both pair members.
// Symbols: E (field), B = int E, C = int B, D = (1/2) int B^2.
//
//   length -> velocity:  psi_v  = exp(i B x) psi_l,        p -> p - B
//   velocity -> KH:      psi_kh = exp(i D) exp(-i C p) psi_v,  x -> x - C

#include <string>

#include "pseudoherm/pairs.hpp"

namespace pseudoherm {

enum class Gauge { Length, Velocity, KH };
enum class Member { Hermitian, NonHermitian };

std::string gauge_name(Gauge g);
std::string member_name(Member m);

struct GaugeForm {
  Gauge gauge = Gauge::Length;
  Member member = Member::Hermitian;
  OpPoly hamiltonian;
  int order = -1;  // -1: exact; otherwise highest retained power of g
  ScalarPoly phase;  // scalar phase generator kept out of the Hamiltonian (D in KH)
};

/// E eta^-1 x eta; order caps the power of g for perturbative pairs.
OpPoly stark_coupling(const EquivalencePair& pair, int order = -1);

/// h + x E, or its conjugate H + E eta^-1 x eta.
GaugeForm length_form(const EquivalencePair& pair, Member member);
GaugeForm length_to_velocity(const GaugeForm& form, const EquivalencePair& pair);
GaugeForm velocity_to_kh(const GaugeForm& form, const EquivalencePair& pair);

}  // namespace pseudoherm
