#include "pseudoherm/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>

#include <omp.h>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

constexpr double kTimeSlack = 1e-9;

int steps_for(double length, double dt) {
  return std::max(1, static_cast<int>(std::ceil(length / dt - 1e-9)));
}

PulseIntegrals rk4_step(const Pulse& p, double t, const PulseIntegrals& y, double h) {
  auto f = [&](double s, const PulseIntegrals& v) { return PulseIntegrals{p.field(s), v.b, 0.5 * v.b * v.b}; };
  auto add = [](const PulseIntegrals& a, const PulseIntegrals& k, double w) {
    return PulseIntegrals{a.b + w * k.b, a.c + w * k.c, a.d + w * k.d};
  };
  PulseIntegrals k1 = f(t, y);
  PulseIntegrals k2 = f(t + h / 2, add(y, k1, h / 2));
  PulseIntegrals k3 = f(t + h / 2, add(y, k2, h / 2));
  PulseIntegrals k4 = f(t + h, add(y, k3, h));
  return {y.b + h / 6 * (k1.b + 2 * k2.b + 2 * k3.b + k4.b), y.c + h / 6 * (k1.c + 2 * k2.c + 2 * k3.c + k4.c),
          y.d + h / 6 * (k1.d + 2 * k2.d + 2 * k3.d + k4.d)};
}

/// int_0^t exp(i k s) ds for complex k.
cplx exp_integral(cplx k, double t) {
  cplx z = cplx(0, 1) * k * t;
  if (std::abs(z) < 1e-6) return t * (1.0 + z / 2.0 + z * z / 6.0);
  return (std::exp(z) - 1.0) / (cplx(0, 1) * k);
}

CMatrix hermitian_exp(const CMatrix& h, cplx factor) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "eigensolver failed");
  Eigen::VectorXcd e = (factor * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

double state_norm(const CVector& v, const CMatrix& metric) {
  if (metric.size() == 0) return v.norm();
  return std::sqrt(std::abs(v.dot(metric * v)));
}

void check_level(const TransitionModel& model, int k) {
  if (k < 0 || k >= model.trusted_count) {
    throw Error(ErrorKind::UntrustedLevel, "level " + std::to_string(k) + " outside the trusted range [0, " +
                                               std::to_string(model.trusted_count) + ")");
  }
}

void check_time(const Pulse& p, double t) {
  if (t < 0 || t > p.tau + kTimeSlack) {
    throw Error(ErrorKind::PreconditionViolation, "time outside [0, tau]");
  }
}

void check_increasing(const std::vector<double>& grid) {
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorKind::PreconditionViolation, "grid must be strictly increasing");
  }
}

/// Length-gauge states at the requested times for a propagation from level m.
std::vector<CVector> evolve_samples(const TransitionModel& model, int m, const Pulse& p,
                                    const std::vector<double>& times, Gauge gauge) {
  validate(p);
  check_level(model, m);
  CVector psi0 = model.states.col(m);
  PropagationOptions opt;
  opt.t1 = times.empty() ? 0 : times.back();
  opt.samples = times;
  opt.hermitian = model.mode == Mode::Standard;
  opt.metric = model.metric;

  if (model.mode != Mode::Standard) {
    if (gauge != Gauge::Length) {
      throw Error(ErrorKind::UnsupportedFamily, "velocity and KH propagation are implemented for the Hermitian member");
    }
    // Truncation adds spurious eigenvalues with large imaginary parts to the
    // non-Hermitian matrix; evolve in the span of the trusted eigenvectors
    // (Petrov-Galerkin with the eta^2 metric) so they are never excited.
    const Eigen::Index k = model.trusted_count;
    CMatrix phi = model.states.leftCols(k);
    CMatrix left = phi.adjoint() * model.metric;
    CMatrix gram = left * phi;
    Eigen::PartialPivLU<CMatrix> lu(gram);
    CMatrix h0 = lu.solve(left * model.static_h * phi);
    CMatrix d = lu.solve(left * model.dipole_op * phi);
    CVector c0 = CVector::Zero(k);
    c0(m) = 1;
    opt.metric = gram;
    auto h_at = [&](double t) -> CMatrix { return h0 + p.field(t) * d; };
    std::vector<CVector> out;
    for (const CVector& c : propagate(h_at, c0, p, opt).trajectory) out.push_back(phi * c);
    return out;
  }
  if (gauge == Gauge::Length) {
    const CMatrix& h0 = model.static_h;
    const CMatrix& d = model.dipole_op;
    auto h_at = [&](double t) -> CMatrix { return h0 + p.field(t) * d; };
    return propagate(h_at, psi0, p, opt).trajectory;
  }
  GaugeForm form = length_to_velocity(length_form(model.pair, Member::Hermitian), model.pair);
  if (gauge == Gauge::KH) form = velocity_to_kh(form, model.pair);
  FieldHamiltonian fh(form.hamiltonian, model.bindings, model.dim);
  PulseClock clock(p);
  auto h_at = [&](double t) -> CMatrix {
    PulseIntegrals in = clock.at(t);
    return fh.at(p.field(t), in.b, in.c);
  };
  PropagationResult r = propagate(h_at, psi0, p, opt);

  CMatrix x = represent(OpPoly::x(), {}, model.dim);
  CMatrix pm = represent(OpPoly::p(), {}, model.dim);
  std::vector<CVector> out;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    PulseIntegrals in = pulse_integrals(p, std::min(r.times[i], p.tau));
    CVector v = r.trajectory[i];
    if (gauge == Gauge::KH) v = hermitian_exp(pm, cplx(0, in.c)) * (std::exp(cplx(0, -in.d)) * v);
    out.push_back(hermitian_exp(x, cplx(0, -in.b)) * v);
  }
  return out;
}

double amplitude_probability(const TransitionModel& model, int n, const CVector& psi) {
  CVector target = model.states.col(n);
  cplx a = model.mode == Mode::Standard ? target.dot(psi) : target.dot(model.metric * psi);
  return std::norm(a);
}

template <typename F>
void run_indexed(std::size_t count, bool parallel, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  if (parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(sweep_threads())
    for (long i = 0; i < static_cast<long>(count); ++i) {
      try {
        body(static_cast<std::size_t>(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void base_metadata(SweepTable& t, const TransitionModel& model, int n_from, int n_to, const Pulse& p,
                   const SweepOptions& opt) {
  auto g = model.bindings.get(Symbol::G);
  auto a = model.bindings.get(Symbol::Alpha);
  t.metadata = {{"family", model.pair.family},
                {"n", std::to_string(model.pair.n)},
                {"transition", std::to_string(n_from) + "->" + std::to_string(n_to)},
                {"g", g ? fmt(*g) : "unbound"},
                {"alpha", a ? fmt(*a) : "unbound"},
                {"E0", fmt(p.E0)},
                {"tau", fmt(p.tau)},
                {"envelope", envelope_name(p.envelope)},
                {"N", std::to_string(model.dim)},
                {"mode", mode_name(model.mode)},
                {"method", method_name(opt.method)},
                {"gauge", gauge_name(opt.gauge)}};
}

}  // namespace

std::string envelope_name(Envelope e) { return e == Envelope::Constant ? "constant" : "sin2"; }

Envelope parse_envelope(const std::string& name) {
  if (name == "constant") return Envelope::Constant;
  if (name == "sin2") return Envelope::Sin2;
  throw Error(ErrorKind::UsageError, "unknown envelope '" + name + "' (constant|sin2)");
}

double Pulse::field(double t) const {
  if (t < 0 || t > tau) return 0.0;
  double f = 1.0;
  if (envelope == Envelope::Sin2) {
    double s = std::sin(M_PI * t / tau);
    f = s * s;
  }
  return E0 * f * std::sin(omega * t);
}

std::vector<std::pair<cplx, double>> Pulse::exponentials() const {
  const cplx half_i = 1.0 / cplx(0, 2);
  std::vector<std::pair<cplx, double>> carrier{{E0 * half_i, omega}, {-E0 * half_i, -omega}};
  if (envelope == Envelope::Constant) return carrier;
  const double big = 2 * M_PI / tau;
  std::vector<std::pair<cplx, double>> env{{0.5, 0.0}, {-0.25, big}, {-0.25, -big}};
  std::vector<std::pair<cplx, double>> out;
  for (auto [w1, k1] : env) {
    for (auto [w2, k2] : carrier) out.emplace_back(w1 * w2, k1 + k2);
  }
  return out;
}

double max_step(double omega) { return omega > 0 ? 2 * M_PI / omega / 40 : INFINITY; }

void validate(const Pulse& p) {
  if (!(p.tau > 0)) throw Error(ErrorKind::PreconditionViolation, "pulse needs tau > 0");
  if (!(p.dt > 0)) throw Error(ErrorKind::PreconditionViolation, "pulse needs dt > 0");
  if (p.omega < 0) throw Error(ErrorKind::PreconditionViolation, "pulse needs omega >= 0");
  if (p.dt > max_step(p.omega) * (1 + 1e-12)) {
    throw Error(ErrorKind::PreconditionViolation, "pulse step exceeds (2 pi / omega) / 40");
  }
}

PulseIntegrals pulse_integrals(const Pulse& p, double t) {
  validate(p);
  check_time(p, t);
  PulseIntegrals y;
  if (t <= 0) return y;
  int n = steps_for(t, p.dt);
  double h = t / n;
  for (int k = 0; k < n; ++k) y = rk4_step(p, k * h, y, h);
  return y;
}

PulseIntegrals PulseClock::at(double t) {
  if (t < t_) {
    t_ = 0;
    state_ = {};
  }
  if (t > t_) {
    int n = steps_for(t - t_, pulse_.dt);
    double h = (t - t_) / n;
    for (int k = 0; k < n; ++k) state_ = rk4_step(pulse_, t_ + k * h, state_, h);
    t_ = t;
  }
  return state_;
}

PropagationResult propagate(const HamiltonianAt& hamiltonian_at, const CVector& psi0, const Pulse& p,
                            const PropagationOptions& options) {
  validate(p);
  const double t0 = options.t0;
  const double t1 = options.t1 < 0 ? p.tau : options.t1;
  if (t1 < t0) throw Error(ErrorKind::PreconditionViolation, "propagation needs t1 >= t0");

  std::vector<double> stops;
  for (double s : options.samples) {
    if (s < t0 - kTimeSlack || s > t1 + kTimeSlack) {
      throw Error(ErrorKind::PreconditionViolation, "sample time outside the propagation interval");
    }
    stops.push_back(std::clamp(s, t0, t1));
  }
  std::sort(stops.begin(), stops.end());
  const bool record = !stops.empty();
  if (stops.empty() || stops.back() < t1) stops.push_back(t1);

  static const double r3 = std::sqrt(3.0);
  const double c1 = 0.5 - r3 / 6, c2 = 0.5 + r3 / 6;
  const double a1 = 0.25 + r3 / 6, a2 = 0.25 - r3 / 6;

  PropagationResult result;
  CVector psi = psi0;
  double t = t0;
  auto apply = [&](const CMatrix& g, double h) {
    if (options.hermitian) {
      Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
      if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "eigensolver failed");
      Eigen::VectorXcd ph = (cplx(0, -h) * es.eigenvalues().cast<cplx>()).array().exp();
      psi = es.eigenvectors() * ph.cwiseProduct(es.eigenvectors().adjoint() * psi);
    } else {
      CMatrix arg = cplx(0, -h) * g;
      psi = arg.exp() * psi;
    }
  };
  for (double stop : stops) {
    if (stop > t) {
      int n = steps_for(stop - t, p.dt);
      double h = (stop - t) / n;
      double start = t;
      for (int k = 0; k < n; ++k) {
        double s = start + k * h;
        CMatrix m1 = hamiltonian_at(s + c1 * h);
        CMatrix m2 = hamiltonian_at(s + c2 * h);
        apply(a1 * m1 + a2 * m2, h);
        apply(a2 * m1 + a1 * m2, h);
      }
      t = stop;
    }
    if (record) {
      result.times.push_back(stop);
      result.trajectory.push_back(psi);
    }
  }
  // Duplicate sample times map to the same stop; keep one entry per request.
  if (record && result.times.size() != options.samples.size()) {
    std::vector<double> times;
    std::vector<CVector> traj;
    for (double s : options.samples) {
      double c = std::clamp(s, t0, t1);
      auto it = std::lower_bound(result.times.begin(), result.times.end(), c - kTimeSlack);
      times.push_back(c);
      traj.push_back(result.trajectory[static_cast<std::size_t>(it - result.times.begin())]);
    }
    result.times = std::move(times);
    result.trajectory = std::move(traj);
  }
  result.state = psi;
  result.norm_drift = std::abs(state_norm(psi, options.metric) - state_norm(psi0, options.metric));
  double bound = options.metric.size() == 0 && options.hermitian ? kHermitianDriftBound : kMetricDriftBound;
  if (options.hermitian || options.metric.size() != 0) {
    if (result.norm_drift > bound) {
      throw Error(ErrorKind::StepSizeTooLarge, "norm drift " + fmt(result.norm_drift) + " exceeds bound");
    }
  }
  return result;
}

FieldHamiltonian::FieldHamiltonian(const OpPoly& hamiltonian, const Bindings& bindings, int N) : dim_(N) {
  if (hamiltonian.max_power(Symbol::D) > 0 || hamiltonian.min_power(Symbol::D) < 0) {
    throw Error(ErrorKind::PreconditionViolation, "the phase generator D must not enter the Hamiltonian");
  }
  for (Symbol s : {Symbol::E, Symbol::B, Symbol::C}) {
    if (hamiltonian.min_power(s) < 0) throw Error(ErrorKind::PreconditionViolation, "negative field power");
  }
  const int me = hamiltonian.max_power(Symbol::E), mb = hamiltonian.max_power(Symbol::B),
            mc = hamiltonian.max_power(Symbol::C);
  for (int e = 0; e <= me; ++e) {
    for (int b = 0; b <= mb; ++b) {
      for (int c = 0; c <= mc; ++c) {
        OpPoly part = hamiltonian.map_coefficients([&](const ScalarPoly& k) {
          return k.coefficient_of(Symbol::E, e).coefficient_of(Symbol::B, b).coefficient_of(Symbol::C, c);
        });
        if (!part.is_zero()) terms_.push_back({e, b, c, represent(part, bindings, N)});
      }
    }
  }
}

CMatrix FieldHamiltonian::at(double e, double b, double c) const {
  CMatrix out = CMatrix::Zero(dim_, dim_);
  for (const Term& t : terms_) {
    out += (std::pow(e, t.e) * std::pow(b, t.b) * std::pow(c, t.c)) * t.m;
  }
  return out;
}

std::string mode_name(Mode m) { return m == Mode::Standard ? "std" : "eta"; }

std::string method_name(TransitionMethod m) { return m == TransitionMethod::FirstOrder ? "first-order" : "propagate"; }

TransitionModel make_transition_model(const EquivalencePair& pair, const Bindings& bindings, int N, Mode mode) {
  TransitionModel model;
  model.mode = mode;
  model.dim = N;
  model.pair = pair;
  model.bindings = bindings;
  if (mode == Mode::Standard) {
    model.static_h = represent(pair.h, bindings, N);
    Eigensystem es = eigensystem(model.static_h, true);
    model.energies = es.values;
    model.states = es.vectors;
    model.dipole_op = represent(OpPoly::x(), bindings, N);
    model.dipole = model.states.adjoint() * model.dipole_op * model.states;
    model.trusted_count = spectrum(model.static_h, represent(pair.h, bindings, N + kTrustPadding), true).trusted_count;
    return model;
  }
  if (pair.kind != PairKind::Exact) {
    throw Error(ErrorKind::UnsupportedFamily,
                "the eta metric is available for exact pairs only; exp(q/2) is ill-conditioned for perturbative q");
  }
  CMatrix eta = eta_exp(pair.q, bindings, N);
  model.metric = eta.adjoint() * eta;
  model.static_h = represent(pair.H, bindings, N);
  Eigensystem es = eigensystem(model.static_h, false);
  model.energies = es.values;
  model.states = es.vectors;
  for (Eigen::Index k = 0; k < model.states.cols(); ++k) {
    model.states.col(k) /= state_norm(model.states.col(k), model.metric);
  }
  model.dipole_op = represent(eta_conjugate(pair, OpPoly::x(), Conjugation::Inverse), bindings, N);
  model.dipole = model.states.adjoint() * model.metric * model.dipole_op * model.states;
  model.trusted_count = spectrum(model.static_h, represent(pair.H, bindings, N + kTrustPadding), false).trusted_count;
  return model;
}

cplx duhamel_amplitude(const TransitionModel& model, int n, int m, const Pulse& p, double t) {
  check_level(model, n);
  check_level(model, m);
  check_time(p, t);
  const cplx en = model.energies[n], em = model.energies[m];
  cplx integral = 0;
  for (auto [w, k] : p.exponentials()) integral += w * exp_integral(k + en - em, t);
  const cplx phase = std::exp(cplx(0, -1) * en * t);
  cplx a = cplx(0, -1) * phase * model.dipole(n, m) * integral;
  if (n == m) a += phase;
  return a;
}

cplx duhamel_amplitude(int n, int m, const Pulse& p, double t, const EquivalencePair& pair, const Bindings& bindings,
                       int N) {
  return duhamel_amplitude(make_transition_model(pair, bindings, N, Mode::Standard), n, m, p, t);
}

CVector propagate_from_level(const TransitionModel& model, int m, const Pulse& p, double t, Gauge gauge) {
  check_time(p, t);
  return evolve_samples(model, m, p, {t}, gauge).front();
}

double transition_probability(const TransitionModel& model, int n, int m, const Pulse& p, double t,
                              TransitionMethod method, Gauge gauge) {
  if (method == TransitionMethod::FirstOrder) {
    if (gauge != Gauge::Length) {
      throw Error(ErrorKind::PreconditionViolation, "first-order amplitudes are evaluated in the length gauge");
    }
    return std::norm(duhamel_amplitude(model, n, m, p, t));
  }
  check_level(model, n);
  return amplitude_probability(model, n, propagate_from_level(model, m, p, t, gauge));
}

double transition_probability(int n, int m, const Pulse& p, double t, const EquivalencePair& pair, Mode mode,
                              const Bindings& bindings, int N, TransitionMethod method) {
  return transition_probability(make_transition_model(pair, bindings, N, mode), n, m, p, t, method);
}

void flag_rows(SweepTable& t) {
  t.flags.assign(t.probability.size(), "");
  if (t.probability.empty()) return;
  auto peak = std::max_element(t.probability.begin(), t.probability.end()) - t.probability.begin();
  for (std::size_t i = 0; i < t.probability.size(); ++i) {
    std::string f;
    if (static_cast<long>(i) == peak) f = "peak";
    if (t.probability[i] > 1 + kProbabilitySlack) f += f.empty() ? "exceeds_unity" : "|exceeds_unity";
    t.flags[i] = f;
  }
}

double peak_location(const SweepTable& t) {
  if (t.probability.empty()) throw Error(ErrorKind::PreconditionViolation, "empty table");
  return t.grid[std::max_element(t.probability.begin(), t.probability.end()) - t.probability.begin()];
}

std::vector<double> step_grid(double lo, double hi, double step) {
  if (!(step > 0) || hi < lo) throw Error(ErrorKind::PreconditionViolation, "invalid grid bounds");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    double v = lo + static_cast<double>(i) * step;
    if (v > hi + 1e-12 * std::max(1.0, std::abs(hi))) break;
    out.push_back(v);
  }
  return out;
}

int sweep_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("PSEUDOHERM_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n, cap);
  }
  return std::max(n, 1);
}

SweepTable frequency_sweep(const TransitionModel& model, int n_from, int n_to, const std::vector<double>& omegas,
                           const Pulse& pulse_template, const SweepOptions& options) {
  check_increasing(omegas);
  check_level(model, n_from);
  check_level(model, n_to);
  SweepTable table;
  table.axis = "omega";
  table.grid = omegas;
  table.probability.assign(omegas.size(), 0.0);
  run_indexed(omegas.size(), options.parallel, [&](std::size_t i) {
    Pulse p = pulse_template;
    p.omega = omegas[i];
    p.dt = std::min(p.dt, max_step(p.omega));
    table.probability[i] = transition_probability(model, n_to, n_from, p, p.tau, options.method, options.gauge);
  });
  flag_rows(table);
  base_metadata(table, model, n_from, n_to, pulse_template, options);
  return table;
}

SweepTable time_scan(const TransitionModel& model, int n_from, int n_to, const Pulse& pulse,
                     const std::vector<double>& times, const SweepOptions& options) {
  check_increasing(times);
  check_level(model, n_from);
  check_level(model, n_to);
  for (double t : times) check_time(pulse, t);
  SweepTable table;
  table.axis = "t";
  table.grid = times;
  table.probability.assign(times.size(), 0.0);
  if (options.method == TransitionMethod::FirstOrder) {
    run_indexed(times.size(), options.parallel, [&](std::size_t i) {
      table.probability[i] = transition_probability(model, n_to, n_from, pulse, times[i], options.method);
    });
  } else {
    auto states = evolve_samples(model, n_from, pulse, times, options.gauge);
    for (std::size_t i = 0; i < times.size(); ++i) table.probability[i] = amplitude_probability(model, n_to, states[i]);
  }
  flag_rows(table);
  base_metadata(table, model, n_from, n_to, pulse, options);
  table.metadata.emplace_back("omega", fmt(pulse.omega));
  return table;
}

double loglog_slope(const SweepTable& t, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    if (t.grid[i] < t_lo || t.grid[i] > t_hi || !(t.probability[i] > 0)) continue;
    double x = std::log(t.grid[i]), y = std::log(t.probability[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::PreconditionViolation, "slope fit needs at least two points");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace pseudoherm
