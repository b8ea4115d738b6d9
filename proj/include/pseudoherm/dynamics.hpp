#pragma once

// Driven dynamics: pulse, propagation, first-order (Du Hamel) amplitudes,
// transition probabilities and the frequency / time sweeps.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "pseudoherm/fock.hpp"
#include "pseudoherm/gauge.hpp"

namespace pseudoherm {

enum class Envelope { Constant, Sin2 };

std::string envelope_name(Envelope e);
Envelope parse_envelope(const std::string& name);

/// E(t) = E0 f(t) sin(omega t) with f = 1 or sin^2(pi t / tau).
struct Pulse {
  double E0 = 0.003;
  double omega = 1.0;
  double tau = 500.0;
  double dt = 0.05;
  Envelope envelope = Envelope::Constant;

  double field(double t) const;
  /// E(t) = sum_j w_j exp(i k_j t).
  std::vector<std::pair<cplx, double>> exponentials() const;
};

/// tau > 0, dt > 0, dt <= (2 pi / omega) / 40.
void validate(const Pulse& p);
/// Largest step allowed for the given frequency.
double max_step(double omega);

struct PulseIntegrals {
  double b = 0;  // int_0^t E
  double c = 0;  // int_0^t b
  double d = 0;  // (1/2) int_0^t b^2
};

/// RK4 with step dt, 0 <= t <= tau.
PulseIntegrals pulse_integrals(const Pulse& p, double t);

/// Advances the pulse integrals monotonically; restarts from 0 on a step back.
class PulseClock {
 public:
  explicit PulseClock(Pulse p) : pulse_(p) {}
  PulseIntegrals at(double t);

 private:
  Pulse pulse_;
  double t_ = 0;
  PulseIntegrals state_;
};

using HamiltonianAt = std::function<CMatrix(double)>;

struct PropagationOptions {
  double t0 = 0;
  double t1 = -1;  // negative: pulse.tau
  bool hermitian = true;
  CMatrix metric;  // eta^2 for the non-Hermitian member; empty: standard norm
  std::vector<double> samples;  // times at which to record the state (within [t0, t1])
};

struct PropagationResult {
  std::vector<double> times;
  std::vector<CVector> trajectory;  // states at `times`
  CVector state;
  double norm_drift = 0;
  Gauge gauge = Gauge::Length;
};

inline constexpr double kHermitianDriftBound = 1e-8;
inline constexpr double kMetricDriftBound = 1e-6;

/// Fourth-order commutator-free Magnus stepper with exact exponentials.
/// Steps are the largest width <= pulse.dt that divides [t0, t1] evenly.
PropagationResult propagate(const HamiltonianAt& hamiltonian_at, const CVector& psi0, const Pulse& p,
                            const PropagationOptions& options = {});

/// A gauge form split as sum E^e B^b C^c M_ebc.
class FieldHamiltonian {
 public:
  FieldHamiltonian(const OpPoly& hamiltonian, const Bindings& bindings, int N);
  CMatrix at(double e, double b, double c) const;
  int dim() const { return dim_; }

 private:
  struct Term {
    int e, b, c;
    CMatrix m;
  };
  int dim_;
  std::vector<Term> terms_;
};

enum class Mode { Standard, Eta };
enum class TransitionMethod { FirstOrder, Propagate };

std::string mode_name(Mode m);
std::string method_name(TransitionMethod m);

/// Levels, dipole couplings and static matrices of one pair member.
/// Standard: eigenvectors phi_k of h, dipole <phi_j|x|phi_k>.
/// Eta: eigenvectors Phi_k of H normalized in the eta metric, dipole
/// <Phi_j, eta^2 (eta^-1 x eta) Phi_k>.
struct TransitionModel {
  Mode mode = Mode::Standard;
  int dim = 0;
  int trusted_count = 0;
  std::vector<cplx> energies;
  CMatrix states;
  CMatrix metric;     // eta^2; empty in standard mode
  CMatrix static_h;   // represent(h) or represent(H)
  CMatrix dipole_op;  // represent(x) or represent(eta^-1 x eta)
  CMatrix dipole;     // in the eigenbasis
  EquivalencePair pair;
  Bindings bindings;
};

TransitionModel make_transition_model(const EquivalencePair& pair, const Bindings& bindings, int N, Mode mode);

/// <n|u(t,0)|m> to first order in the field.
cplx duhamel_amplitude(const TransitionModel& model, int n, int m, const Pulse& p, double t);
cplx duhamel_amplitude(int n, int m, const Pulse& p, double t, const EquivalencePair& pair,
                       const Bindings& bindings, int N);

/// Final state of a full propagation from level m, returned in the length gauge.
CVector propagate_from_level(const TransitionModel& model, int m, const Pulse& p, double t,
                             Gauge gauge = Gauge::Length);

/// |<n|u(t,0)|m>|^2 (standard) or |<Phi_n|U(t,0)|Phi_m>_eta|^2 (eta).
double transition_probability(const TransitionModel& model, int n, int m, const Pulse& p, double t,
                              TransitionMethod method = TransitionMethod::FirstOrder,
                              Gauge gauge = Gauge::Length);
double transition_probability(int n, int m, const Pulse& p, double t, const EquivalencePair& pair, Mode mode,
                              const Bindings& bindings, int N,
                              TransitionMethod method = TransitionMethod::FirstOrder);

struct SweepTable {
  std::string axis;  // "omega" or "t"
  std::vector<double> grid;
  std::vector<double> probability;
  std::vector<double> reference;  // optional second system on the same grid
  std::vector<std::string> flags;
  std::vector<std::pair<std::string, std::string>> metadata;  // ordered
};

inline constexpr double kProbabilitySlack = 1e-9;

/// Flags the first argmax row "peak" and rows above 1 + 1e-9 "exceeds_unity".
void flag_rows(SweepTable& t);
double peak_location(const SweepTable& t);

/// Grid from lo to hi (inclusive when it lands) with the given step.
std::vector<double> step_grid(double lo, double hi, double step);

/// Number of threads used by the parallel sweep kernels (PSEUDOHERM_THREADS caps it).
int sweep_threads();

struct SweepOptions {
  TransitionMethod method = TransitionMethod::FirstOrder;
  Gauge gauge = Gauge::Length;
  bool parallel = true;
};

/// P(n_from -> n_to) at t = tau for each omega; the template's omega is
/// replaced and its step shrunk to satisfy the per-omega step bound.
SweepTable frequency_sweep(const TransitionModel& model, int n_from, int n_to, const std::vector<double>& omegas,
                           const Pulse& pulse_template, const SweepOptions& options = {});

/// P(n_from -> n_to) at each time of the grid for a fixed pulse.
SweepTable time_scan(const TransitionModel& model, int n_from, int n_to, const Pulse& pulse,
                     const std::vector<double>& times, const SweepOptions& options = {});

/// Least-squares slope of log P against log t over [t_lo, t_hi].
double loglog_slope(const SweepTable& t, double t_lo, double t_hi);

}  // namespace pseudoherm
