#pragma once

// Equivalence pairs (h, H) related by h = eta H eta^-1 with eta = exp(q/2).

#include <string>
#include <vector>

#include "pseudoherm/opalg.hpp"

namespace pseudoherm {

enum class PairKind { Exact, Perturbative };

struct EquivalencePair {
  std::string family = "custom";  // custom | swanson | ao | ho
  int n = 0;
  int m = 0;
  OpPoly h0;
  OpPoly h;  // Hermitian member
  OpPoly H;  // non-Hermitian member
  OpPoly q;  // full q; for perturbative pairs g q1 + g^3 q3 + ...
  std::vector<OpPoly> q_graded;  // q1, q3, ... without their powers of g
  PairKind kind = PairKind::Exact;
  int order = 0;  // cut-off ell (exact) or highest retained power of g (perturbative)
};

/// h0(n) = p^2/2 + (alpha/2) x^n.
OpPoly anharmonic_h0(int n);

EquivalencePair exact_pair(const OpPoly& h0, const OpPoly& q, int ell);
EquivalencePair swanson_family(int n, int m);
EquivalencePair ao_family(int n);

/// The anharmonic-family members exactly as printed with mu = 2g (diagnostic).
/// They coincide with ao_family(n) evaluated at 2g, up to the sign pattern of
/// the odd terms in H.
OpPoly ao_printed_hermitian(int n);
OpPoly ao_printed_nonhermitian(int n);

/// First-order q for the perturbation i g x^n of the harmonic oscillator.
OpPoly q1_closed(int n);

/// Solves [h0, q] = rhs for harmonic h0 = p^2/2 + (w/2) x^2 with w a single
/// alpha-monomial. The S_{0,d} component of each even block is fixed to zero.
OpPoly solve_commutator_equation(const OpPoly& h0, const OpPoly& rhs, int degree_bound);

/// H = p^2/2 + (alpha/2) x^2 + i g x^n with h and q through g^order (order 2 or 3).
EquivalencePair perturbative_pair(int n, int order);

enum class Conjugation {
  Forward,  // eta A eta^-1
  Inverse,  // eta^-1 A eta
};

/// Conjugation by eta through the nested-commutator series. Exact pairs need
/// a terminating series; perturbative pairs truncate at g^max_g_order
/// (default: pair.order).
OpPoly eta_conjugate(const EquivalencePair& pair, const OpPoly& a, Conjugation dir,
                     int max_g_order = -1);

/// sum_k (s^k/k!) c_q^(k)(a) for an arbitrary q; truncates at g^max_g_order
/// when max_g_order >= 0, otherwise requires termination.
OpPoly conjugation_series(const OpPoly& q, const OpPoly& a, const mpq_class& s, int max_g_order);

/// sum_k c_q^(k)(H)/k!, which equals dagger(H) for a valid pair.
OpPoly metric_conjugate(const EquivalencePair& pair, const OpPoly& a);

}  // namespace pseudoherm

