#include "pseudoherm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "pseudoherm/coeffs.hpp"
#include "pseudoherm/dynamics.hpp"
#include "pseudoherm/table_io.hpp"
#include "pseudoherm/verify.hpp"

namespace pseudoherm {

namespace {

const std::vector<std::string> kCommands{"coeffs",        "derive-pair", "gauge",     "spectrum", "wavefunction",
                                         "sweep-frequency", "scan-time", "verify"};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::UsageError, "cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::UsageError, path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

bool mentions_flag(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

/// Config-file values become flags unless the command line already sets them.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> extra;
  for (const auto& [k, v] : read_config_file(path)) {
    if (k == "config") throw Error(ErrorKind::UsageError, "config files cannot include other config files");
    if (!mentions_flag(args, k)) {
      extra.push_back("--" + k);
      extra.push_back(v);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void add_model_options(CLI::App* c, RunConfig& cfg) {
  c->add_option("--family", cfg.family, "ho | swanson | ao")->check(CLI::IsMember({"ho", "swanson", "ao"}));
  c->add_option("--n", cfg.n, "potential power (ho: i g x^n; swanson/ao: alpha x^n / 2)")->check(CLI::Range(0, 64));
  c->add_option("--m", cfg.m, "swanson: q = (2/m) g x^m")->check(CLI::Range(1, 64));
  c->add_option("--order", cfg.order, "ho: perturbative order (2 or 3)")->check(CLI::IsMember({2, 3}));
  c->add_option("--g", cfg.g, "coupling constant");
  c->add_option("--alpha", cfg.alpha, "oscillator constant")->check(CLI::PositiveNumber);
}

void add_pulse_options(CLI::App* c, RunConfig& cfg) {
  c->add_option("--N", cfg.N, "Fock dimension")->check(CLI::Range(2, 4096));
  c->add_option("--n-from", cfg.n_from, "initial level")->check(CLI::NonNegativeNumber);
  c->add_option("--n-to", cfg.n_to, "final level")->check(CLI::NonNegativeNumber);
  c->add_option("--E0", cfg.E0, "field amplitude (a.u.)")->check(CLI::NonNegativeNumber);
  c->add_option("--tau", cfg.tau, "pulse duration")->check(CLI::PositiveNumber);
  c->add_option("--dt", cfg.dt, "time step")->check(CLI::PositiveNumber);
  c->add_option("--envelope", cfg.envelope, "constant | sin2")->check(CLI::IsMember({"constant", "sin2"}));
  c->add_option("--mode", cfg.mode, "std | eta")->check(CLI::IsMember({"std", "eta"}));
  c->add_option("--method", cfg.method, "first-order | propagate")
      ->check(CLI::IsMember({"first-order", "propagate"}));
  c->add_option("--gauge", cfg.gauge, "length | velocity | kh")->check(CLI::IsMember({"length", "velocity", "kh"}));
}

void add_common(CLI::App* c, RunConfig& cfg) {
  c->add_option("--out", cfg.out, "output file (default: stdout)");
  c->add_option("--config", cfg.config_path, "key=value file with default flag values");
}

EquivalencePair build_pair(const RunConfig& c) {
  if (c.family == "ho") return perturbative_pair(c.n, c.order);
  if (c.family == "swanson") return swanson_family(c.n, c.m);
  return ao_family(c.n);
}

Bindings build_bindings(const RunConfig& c, double g) { return Bindings{{Symbol::Alpha, c.alpha}, {Symbol::G, g}}; }

Gauge parse_gauge(const std::string& s) {
  if (s == "velocity") return Gauge::Velocity;
  if (s == "kh") return Gauge::KH;
  return Gauge::Length;
}

Member parse_member(const std::string& s) { return s == "nonhermitian" ? Member::NonHermitian : Member::Hermitian; }

Pulse build_pulse(const RunConfig& c) {
  Pulse p;
  p.E0 = c.E0;
  p.omega = c.omega;
  p.tau = c.tau;
  p.dt = c.dt;
  p.envelope = parse_envelope(c.envelope);
  return p;
}

SweepOptions build_sweep_options(const RunConfig& c) {
  SweepOptions o;
  o.method = c.method == "propagate" ? TransitionMethod::Propagate : TransitionMethod::FirstOrder;
  o.gauge = parse_gauge(c.gauge);
  return o;
}

/// Writes text to --out when given, otherwise to the stream.
void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + c.out);
  f << text;
  if (!f) throw Error(ErrorKind::IoError, "write failed: " + c.out);
}

std::string header(const RunConfig& c) {
  std::string h = "# pseudoherm " + std::string(kToolVersion) + " " + c.command + "\n";
  for (const auto& [k, v] : config_metadata(c)) h += "# " + k + "=" + v + "\n";
  return h;
}

std::string cmd_coeffs(const RunConfig& c) {
  CoeffTable t = coeff_table(c.upto);
  std::ostringstream os;
  os << "# pseudoherm " << kToolVersion << " coeffs upto=" << c.upto << "\n";
  os << "k,kappa,lambda\n";
  for (int k = 0; k <= c.upto; ++k) os << k << "," << t.kappa[k].get_str() << "," << t.lambda[k].get_str() << "\n";
  os << "n,euler\n";
  for (int k = 1; k <= c.upto; ++k) os << k << "," << t.euler[k].get_str() << "\n";
  return os.str();
}

std::string cmd_derive_pair(const RunConfig& c) {
  EquivalencePair p = build_pair(c);
  std::ostringstream os;
  os << header(c);
  os << "h = " << p.h.to_string() << "\n";
  os << "h (Weyl) = " << weyl_string(to_weyl_basis(p.h)) << "\n";
  os << "H = " << p.H.to_string() << "\n";
  os << "q = " << p.q.to_string() << "\n";
  os << "h0 = " << p.h0.to_string() << "\n";
  return os.str();
}

std::string cmd_gauge(const RunConfig& c) {
  EquivalencePair p = build_pair(c);
  GaugeForm f = length_form(p, parse_member(c.member));
  Gauge target = parse_gauge(c.gauge);
  if (target != Gauge::Length) f = length_to_velocity(f, p);
  if (target == Gauge::KH) f = velocity_to_kh(f, p);
  std::ostringstream os;
  os << header(c);
  os << "gauge = " << gauge_name(f.gauge) << "\n";
  os << "member = " << member_name(f.member) << "\n";
  os << "hamiltonian = " << f.hamiltonian.to_string() << "\n";
  os << "phase = " << f.phase.to_string() << "\n";
  return os.str();
}

std::string cmd_spectrum(const RunConfig& c) {
  EquivalencePair p = build_pair(c);
  const bool herm = parse_member(c.member) == Member::Hermitian;
  SpectrumReport r = operator_spectrum(herm ? p.h : p.H, build_bindings(c, c.g), c.N, herm);
  std::ostringstream os;
  os << header(c);
  os << "# trusted_count=" << r.trusted_count << "\n";
  os << "k,re,im,trusted\n";
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    os << k << "," << format_real(r.eigenvalues[k].real()) << "," << format_real(r.eigenvalues[k].imag()) << ","
       << (static_cast<int>(k) < r.trusted_count ? 1 : 0) << "\n";
  }
  return os.str();
}

std::string cmd_wavefunction(const RunConfig& c) {
  if (c.family != "ho" || c.n != 3) {
    throw Error(ErrorKind::PreconditionViolation, "reference wavefunctions exist for the ho family with n = 3");
  }
  if (c.points < 2 || !(c.x_max > c.x_min)) throw Error(ErrorKind::PreconditionViolation, "invalid x grid");
  std::vector<double> grid;
  const double h = (c.x_max - c.x_min) / (c.points - 1);
  for (int i = 0; i < c.points; ++i) grid.push_back(c.x_min + i * h);
  auto ref = reference_wavefunction(c.level, c.g, grid);

  EquivalencePair p = perturbative_pair(3, 2);
  Bindings b = build_bindings(c, c.g);
  SpectrumReport sr = operator_spectrum(p.h, b, c.N, true);
  if (c.level >= sr.trusted_count) throw Error(ErrorKind::UntrustedLevel, "level outside the trusted range");
  Eigensystem es = eigensystem(represent(p.h, b, c.N), true);
  auto fock = fock_vector_on_grid(es.vectors.col(c.level), grid);
  // Align the arbitrary eigenvector phase with the reference.
  cplx overlap = 0;
  double nr = 0, nf = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    overlap += std::conj(fock[i]) * ref[i];
    nr += std::norm(ref[i]);
    nf += std::norm(fock[i]);
  }
  cplx phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1);

  std::ostringstream os;
  os << header(c);
  os << "# overlap=" << format_real(std::abs(overlap) / std::sqrt(nr * nf)) << "\n";
  os << "x,ref_re,ref_im,fock_re,fock_im\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cplx f = phase * fock[i];
    os << format_real(grid[i]) << "," << format_real(ref[i].real()) << "," << format_real(ref[i].imag()) << ","
       << format_real(f.real()) << "," << format_real(f.imag()) << "\n";
  }
  return os.str();
}

void finish_table(const RunConfig& c, SweepTable& t, std::ostream& out) {
  std::vector<std::pair<std::string, std::string>> meta{{"tool", "pseudoherm"},
                                                        {"version", kToolVersion},
                                                        {"command", c.command},
                                                        {"timestamp", metadata_timestamp()}};
  for (auto& kv : t.metadata) meta.push_back(kv);
  for (auto& kv : config_metadata(c)) {
    bool known = std::any_of(meta.begin(), meta.end(), [&](const auto& e) { return e.first == kv.first; });
    if (!known) meta.push_back(kv);
  }
  t.metadata = std::move(meta);
  if (c.out.empty()) {
    out << table_to_csv(t);
  } else {
    write_table(t, table_format_for(c.out), c.out);
  }
}

Mode parse_mode(const std::string& s) { return s == "eta" ? Mode::Eta : Mode::Standard; }

void cmd_sweep_frequency(const RunConfig& c, std::ostream& out) {
  if (!(c.omega_max > c.omega_min) || c.omega_min <= 0) {
    throw Error(ErrorKind::PreconditionViolation, "need 0 < omega-min < omega-max");
  }
  std::vector<double> grid;
  if (c.omega_steps == 0) {
    grid = step_grid(c.omega_min, c.omega_max, 2 * M_PI / c.tau);
  } else {
    const double h = (c.omega_max - c.omega_min) / (c.omega_steps - 1);
    for (int i = 0; i < c.omega_steps; ++i) grid.push_back(c.omega_min + i * h);
  }
  EquivalencePair p = build_pair(c);
  Pulse tmpl = build_pulse(c);
  tmpl.dt = std::min(tmpl.dt, max_step(c.omega_max));
  SweepOptions o = build_sweep_options(c);
  TransitionModel model = make_transition_model(p, build_bindings(c, c.g), c.N, parse_mode(c.mode));
  SweepTable t = frequency_sweep(model, c.n_from, c.n_to, grid, tmpl, o);
  TransitionModel free = make_transition_model(p, build_bindings(c, 0.0), c.N, parse_mode(c.mode));
  t.reference = frequency_sweep(free, c.n_from, c.n_to, grid, tmpl, o).probability;
  t.metadata.emplace_back("peak_omega", format_real(peak_location(t)));
  finish_table(c, t, out);
}

void cmd_scan_time(const RunConfig& c, std::ostream& out) {
  EquivalencePair p = build_pair(c);
  Pulse pulse = build_pulse(c);
  if (!(c.t_step > 0)) throw Error(ErrorKind::PreconditionViolation, "t-step must be positive");
  auto times = step_grid(0, c.tau, c.t_step);
  SweepOptions o = build_sweep_options(c);
  TransitionModel model = make_transition_model(p, build_bindings(c, c.g), c.N, parse_mode(c.mode));
  SweepTable t = time_scan(model, c.n_from, c.n_to, pulse, times, o);
  TransitionModel free = make_transition_model(p, build_bindings(c, 0.0), c.N, parse_mode(c.mode));
  t.reference = time_scan(free, c.n_from, c.n_to, pulse, times, o).probability;
  finish_table(c, t, out);
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::ostringstream os;
  auto results = run_self_checks([&](const CheckResult& r) {
    if (c.out.empty()) out << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << std::endl;
  });
  int failed = 0;
  for (const auto& r : results) {
    os << (r.pass ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    failed += !r.pass;
  }
  std::string summary = std::to_string(results.size() - failed) + "/" + std::to_string(results.size()) + " checks passed\n";
  if (c.out.empty()) {
    out << summary;
  } else {
    emit(c, os.str() + summary, out);
  }
  return failed == 0 ? 0 : 3;
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UsageError:
    case ErrorKind::PreconditionViolation:
    case ErrorKind::UntrustedLevel:
      return 2;
    default:
      return 3;
  }
}

std::vector<std::pair<std::string, std::string>> config_metadata(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> m;
  auto i = [&](const char* k, int v) { m.emplace_back(k, std::to_string(v)); };
  auto r = [&](const char* k, double v) { m.emplace_back(k, format_real(v)); };
  auto s = [&](const char* k, const std::string& v) { m.emplace_back(k, v); };
  const std::string& cmd = c.command;
  if (cmd == "coeffs") {
    i("upto", c.upto);
    return m;
  }
  if (cmd == "verify") return m;
  s("family", c.family);
  i("n", c.n);
  if (c.family == "swanson") i("m", c.m);
  if (c.family == "ho") i("order", c.order);
  if (cmd == "derive-pair") return m;
  r("g", c.g);
  r("alpha", c.alpha);
  if (cmd == "gauge") {
    s("member", c.member);
    s("gauge", c.gauge);
    return m;
  }
  i("N", c.N);
  if (cmd == "spectrum") {
    s("member", c.member);
    return m;
  }
  if (cmd == "wavefunction") {
    i("level", c.level);
    r("x_min", c.x_min);
    r("x_max", c.x_max);
    i("points", c.points);
    return m;
  }
  i("n_from", c.n_from);
  i("n_to", c.n_to);
  r("E0", c.E0);
  r("tau", c.tau);
  r("dt", c.dt);
  s("envelope", c.envelope);
  s("mode", c.mode);
  s("method", c.method);
  s("gauge", c.gauge);
  if (cmd == "sweep-frequency") {
    r("omega_min", c.omega_min);
    r("omega_max", c.omega_max);
    i("omega_steps", c.omega_steps);
  } else {
    r("omega", c.omega);
    r("t_step", c.t_step);
  }
  return m;
}

RunConfig parse_args(const std::vector<std::string>& raw) {
  RunConfig cfg;
  CLI::App app{"Equivalence pairs of non-Hermitian Hamiltonians and their driven dynamics", "pseudoherm"};
  app.require_subcommand(1, 1);

  auto* coeffs = app.add_subcommand("coeffs", "kappa, lambda and Euler-number tables");
  coeffs->add_option("--upto", cfg.upto, "largest index")->check(CLI::Range(1, 200));
  add_common(coeffs, cfg);

  auto* derive = app.add_subcommand("derive-pair", "print h, H and q of an equivalence pair");
  derive->add_option("family", cfg.family, "ho | swanson | ao")->check(CLI::IsMember({"ho", "swanson", "ao"}));
  derive->add_option("n", cfg.n)->check(CLI::Range(0, 64));
  derive->add_option("m", cfg.m)->check(CLI::Range(1, 64));
  derive->add_option("--order", cfg.order, "ho: perturbative order (2 or 3)")->check(CLI::IsMember({2, 3}));
  add_common(derive, cfg);

  auto* gauge = app.add_subcommand("gauge", "Hamiltonian of a pair member in a given gauge");
  add_model_options(gauge, cfg);
  gauge->add_option("--member", cfg.member, "hermitian | nonhermitian")
      ->check(CLI::IsMember({"hermitian", "nonhermitian"}));
  gauge->add_option("--gauge", cfg.gauge, "length | velocity | kh")
      ->check(CLI::IsMember({"length", "velocity", "kh"}));
  add_common(gauge, cfg);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Fock-space eigenvalues with the trusted range");
  add_model_options(spectrum_cmd, cfg);
  spectrum_cmd->add_option("--N", cfg.N, "Fock dimension")->check(CLI::Range(2, 4096));
  spectrum_cmd->add_option("--member", cfg.member, "hermitian | nonhermitian")
      ->check(CLI::IsMember({"hermitian", "nonhermitian"}));
  add_common(spectrum_cmd, cfg);

  auto* wave = app.add_subcommand("wavefunction", "reference wavefunction against the Fock eigenvector");
  add_model_options(wave, cfg);
  wave->add_option("--N", cfg.N, "Fock dimension")->check(CLI::Range(2, 4096));
  wave->add_option("--level", cfg.level, "level index")->check(CLI::NonNegativeNumber);
  wave->add_option("--x-min", cfg.x_min);
  wave->add_option("--x-max", cfg.x_max);
  wave->add_option("--points", cfg.points)->check(CLI::Range(2, 1000000));
  add_common(wave, cfg);

  auto* sweep = app.add_subcommand("sweep-frequency", "transition probability against the field frequency");
  add_model_options(sweep, cfg);
  add_pulse_options(sweep, cfg);
  sweep->add_option("--omega-min", cfg.omega_min);
  sweep->add_option("--omega-max", cfg.omega_max);
  sweep->add_option("--omega-steps", cfg.omega_steps, "number of grid points (0: step 2 pi / tau)")
      ->check(CLI::NonNegativeNumber);
  add_common(sweep, cfg);

  auto* scan = app.add_subcommand("scan-time", "transition probability against time at fixed frequency");
  add_model_options(scan, cfg);
  add_pulse_options(scan, cfg);
  scan->add_option("--omega", cfg.omega)->check(CLI::PositiveNumber);
  scan->add_option("--t-step", cfg.t_step)->check(CLI::PositiveNumber);
  add_common(scan, cfg);

  auto* verify = app.add_subcommand("verify", "run the invariant self-checks");
  add_common(verify, cfg);

  std::vector<std::string> args = merge_config(raw);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    cfg.command = "help";
    cfg.help_text = app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorKind::UsageError, e.what());
  }
  cfg.command = app.get_subcommands().front()->get_name();

  if (cfg.command == "sweep-frequency") {
    if (cfg.omega_steps == 1) throw Error(ErrorKind::UsageError, "--omega-steps must be 0 or at least 2");
    if (!(cfg.omega_max > cfg.omega_min)) throw Error(ErrorKind::UsageError, "--omega-max must exceed --omega-min");
  }
  if (!cfg.out.empty() && (cfg.command == "sweep-frequency" || cfg.command == "scan-time")) {
    table_format_for(cfg.out);
  }
  return cfg;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "help") {
      out << c.help_text;
      return 0;
    }
    if (c.command == "coeffs") emit(c, cmd_coeffs(c), out);
    else if (c.command == "derive-pair") emit(c, cmd_derive_pair(c), out);
    else if (c.command == "gauge") emit(c, cmd_gauge(c), out);
    else if (c.command == "spectrum") emit(c, cmd_spectrum(c), out);
    else if (c.command == "wavefunction") emit(c, cmd_wavefunction(c), out);
    else if (c.command == "sweep-frequency") cmd_sweep_frequency(c, out);
    else if (c.command == "scan-time") cmd_scan_time(c, out);
    else if (c.command == "verify") return cmd_verify(c, out);
    else throw Error(ErrorKind::UsageError, "unknown command '" + c.command + "'");
    return 0;
  } catch (const Error& e) {
    err << "pseudoherm: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "pseudoherm: " << e.what() << "\n";
    return 3;
  }
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_args(args);
  } catch (const Error& e) {
    err << "pseudoherm: " << e.what() << "\n";
    err << "commands:";
    for (const auto& c : kCommands) err << " " << c;
    err << "\n";
    return exit_code_for(e.kind());
  }
  return run(cfg, out, err);
}

}  // namespace pseudoherm
