#include "pseudoherm/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "pseudoherm/errors.hpp"

namespace pseudoherm {

namespace {

CMatrix ladder_x(int n) {
  CMatrix x = CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    double v = std::sqrt((k + 1) / 2.0);
    x(k, k + 1) = v;
    x(k + 1, k) = v;
  }
  return x;
}

CMatrix ladder_p(int n) {
  CMatrix p = CMatrix::Zero(n, n);
  for (int k = 0; k + 1 < n; ++k) {
    double v = std::sqrt((k + 1) / 2.0);
    p(k, k + 1) = cplx(0, -v);
    p(k + 1, k) = cplx(0, v);
  }
  return p;
}

std::vector<cplx> sorted_values(const Eigen::VectorXcd& v) {
  std::vector<cplx> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

std::vector<cplx> eigenvalues_only(const CMatrix& m, bool hermitian) {
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver failed");
    return sorted_values(es.eigenvalues().cast<cplx>());
  }
  Eigen::ComplexEigenSolver<CMatrix> es(m, false);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "complex eigensolver failed");
  return sorted_values(es.eigenvalues());
}

double block_norm(const CMatrix& m, int block) { return m.topLeftCorner(block, block).norm(); }

}  // namespace

FockRep make_fock_rep(int N, const Bindings& bindings) {
  if (N < 2) throw Error(ErrorKind::PreconditionViolation, "Fock dimension must be >= 2");
  return {N, ladder_x(N), ladder_p(N), bindings};
}

CMatrix represent(const OpPoly& a, const Bindings& bindings, int N) {
  if (N < 2) throw Error(ErrorKind::PreconditionViolation, "Fock dimension must be >= 2");
  const int deg = std::max(a.degree(), 0);
  const int m = N + deg;
  int max_j = 0, max_k = 0;
  for (const auto& [key, c] : a.terms()) {
    max_j = std::max(max_j, key.x);
    max_k = std::max(max_k, key.p);
  }
  CMatrix x = ladder_x(m), p = ladder_p(m);
  // Only the first N rows of x^j and first N columns of p^k are needed.
  std::vector<CMatrix> xrows{CMatrix::Identity(m, m).topRows(N)};
  for (int j = 1; j <= max_j; ++j) xrows.push_back(xrows.back() * x);
  std::vector<CMatrix> pcols{CMatrix::Identity(m, m).leftCols(N)};
  for (int k = 1; k <= max_k; ++k) pcols.push_back(p * pcols.back());

  CMatrix out = CMatrix::Zero(N, N);
  for (const auto& [key, c] : a.terms()) {
    cplx v = scalar_eval(c, bindings);
    if (v == cplx(0)) continue;
    out.noalias() += v * (xrows[key.x] * pcols[key.p]);
  }
  return out;
}

Eigensystem eigensystem(const CMatrix& m, bool hermitian) {
  Eigensystem out;
  Eigen::VectorXcd values;
  CMatrix vectors;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "Hermitian eigensolver failed");
    values = es.eigenvalues().cast<cplx>();
    vectors = es.eigenvectors();
  } else {
    Eigen::ComplexEigenSolver<CMatrix> es(m);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "complex eigensolver failed");
    values = es.eigenvalues();
    vectors = es.eigenvectors();
  }
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a].real() != values[b].real() ? values[a].real() < values[b].real()
                                                : values[a].imag() < values[b].imag();
  });
  out.vectors.resize(m.rows(), m.cols());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.values.push_back(values[order[i]]);
    out.vectors.col(static_cast<Eigen::Index>(i)) = vectors.col(order[i]).normalized();
  }
  return out;
}

SpectrumReport spectrum(const CMatrix& m, bool hermitian) {
  SpectrumReport r;
  r.eigenvalues = eigenvalues_only(m, hermitian);
  return r;
}

SpectrumReport spectrum(const CMatrix& m, const CMatrix& enlarged, bool hermitian) {
  SpectrumReport r = spectrum(m, hermitian);
  std::vector<cplx> big = eigenvalues_only(enlarged, hermitian);
  bool contiguous = true;
  for (cplx e : r.eigenvalues) {
    double best = INFINITY;
    for (cplx f : big) best = std::min(best, std::abs(e - f));
    r.movement.push_back(best);
    if (contiguous && best < kTrustTolerance) {
      ++r.trusted_count;
    } else {
      contiguous = false;
    }
  }
  r.trusted_count = std::min(r.trusted_count, static_cast<int>(m.rows()) - 1);
  return r;
}

SpectrumReport operator_spectrum(const OpPoly& a, const Bindings& bindings, int N, bool hermitian) {
  return spectrum(represent(a, bindings, N), represent(a, bindings, N + kTrustPadding), hermitian);
}

CMatrix eta_exp(const OpPoly& q, const Bindings& bindings, int N) {
  CMatrix half = represent(q, bindings, N) / 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(half);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::ConvergenceFailure, "eigensolver failed in eta_exp");
  Eigen::VectorXd ex = es.eigenvalues().array().exp();
  return es.eigenvectors() * ex.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

double similarity_residual(const EquivalencePair& pair, const Bindings& bindings, int N) {
  if (N <= kResidualMargin) throw Error(ErrorKind::PreconditionViolation, "similarity_residual needs N > 64");
  const int block = N - kResidualMargin;
  CMatrix h = represent(pair.h, bindings, N);
  double scale = block_norm(h, block);
  if (scale == 0.0) throw Error(ErrorKind::PreconditionViolation, "h vanishes on the leading block");
  CMatrix diff;
  if (pair.kind == PairKind::Exact) {
    CMatrix eta = eta_exp(pair.q, bindings, N);
    CMatrix eta_inv = eta_exp(-pair.q, bindings, N);
    diff = eta * represent(pair.H, bindings, N) * eta_inv - h;
  } else {
    OpPoly conj = conjugation_series(pair.q, pair.H, mpq_class(1, 2), pair.order + 4);
    diff = represent(conj - pair.h, bindings, N);
  }
  return block_norm(diff, block) / scale;
}

cplx metric_inner(const CVector& u, const CVector& v, const CMatrix& eta) {
  if (u.size() != v.size() || eta.rows() != u.size() || eta.cols() != u.size()) {
    throw Error(ErrorKind::DimensionMismatch, "metric_inner dimension mismatch");
  }
  CVector w = eta * v;
  return (eta.adjoint() * u).dot(w);
}

std::vector<double> hermite_functions(int kmax, double x) {
  std::vector<double> psi(static_cast<std::size_t>(std::max(kmax, 0)) + 1);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-x * x / 2);
  if (kmax >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k < kmax; ++k) {
    psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(static_cast<double>(k) / (k + 1)) * psi[k - 1];
  }
  return psi;
}

std::vector<cplx> reference_wavefunction(int n, double g, const std::vector<double>& grid) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "reference_wavefunction needs n >= 0");
  // H_k e^{-x^2/2} / sqrt(sqrt(pi) 2^n n!) = r_k psi_k with r_k = sqrt(2^(k-n) k!/n!).
  auto ratio = [n](int k) {
    double r = std::pow(2.0, k - n);
    for (int i = n + 1; i <= k; ++i) r *= i;
    for (int i = k + 1; i <= n; ++i) r /= i;
    return std::sqrt(r);
  };
  auto falling = [n](int p) {
    double f = 1;
    for (int i = 0; i < p; ++i) f *= n - i;
    return f;
  };
  std::vector<std::pair<int, double>> pn;  // (k, weight of psi_k) in P_n
  if (n >= 4) pn.emplace_back(n - 4, 2 * falling(4) * ratio(n - 4));
  if (n >= 2) pn.emplace_back(n - 2, -(8.0 * n - 4) * falling(2) * ratio(n - 2));
  pn.emplace_back(n + 2, (2.0 * n + 3) * ratio(n + 2));
  pn.emplace_back(n + 4, -0.125 * ratio(n + 4));

  const cplx phase = std::pow(cplx(0, 1), n);
  std::vector<cplx> out;
  out.reserve(grid.size());
  for (double x : grid) {
    auto psi = hermite_functions(n + 4, x);
    double p = 0;
    for (auto [k, w] : pn) p += w * psi[k];
    out.push_back(phase * (psi[n] - g * g * (3.0 / 16.0) * p));
  }
  return out;
}

double eigen_formula_h3(int n, double g) { return n + 0.5 + g * g / 8 * (30.0 * n * n + 30.0 * n + 11); }

std::vector<cplx> apply_on_grid(const OpPoly& a, const Bindings& bindings, const std::vector<double>& grid,
                                const std::vector<cplx>& f) {
  const std::size_t n = grid.size();
  if (f.size() != n) throw Error(ErrorKind::DimensionMismatch, "apply_on_grid size mismatch");
  if (n < 9) throw Error(ErrorKind::PreconditionViolation, "grid too small for 9-point stencils");
  const double h = grid[1] - grid[0];
  static constexpr double d1[] = {1.0 / 280, -4.0 / 105, 1.0 / 5, -4.0 / 5, 0, 4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  static constexpr double d2[] = {-1.0 / 560, 8.0 / 315, -1.0 / 5,  8.0 / 5,  -205.0 / 72,
                                  8.0 / 5,    -1.0 / 5,  8.0 / 315, -1.0 / 560};
  auto stencil = [&](const std::vector<cplx>& v, const double* w, double scale) {
    std::vector<cplx> out(n, cplx(0));
    for (std::size_t i = 4; i + 4 < n; ++i) {
      cplx s = 0;
      for (int k = 0; k < 9; ++k) s += w[k] * v[i + k - 4];
      out[i] = s * scale;
    }
    return out;
  };

  int max_p = 0;
  for (const auto& [key, c] : a.terms()) max_p = std::max(max_p, key.p);
  std::vector<std::vector<cplx>> derivs{f};  // derivs[k] = d^k f / dx^k
  for (int k = 1; k <= max_p; ++k) {
    derivs.push_back(k % 2 == 0 ? stencil(derivs[k - 2], d2, 1 / (h * h)) : stencil(derivs[k - 1], d1, 1 / h));
  }

  std::vector<cplx> out(n, cplx(0));
  for (const auto& [key, c] : a.terms()) {
    cplx v = scalar_eval(c, bindings) * std::pow(cplx(0, -1), key.p);
    for (std::size_t i = 0; i < n; ++i) out[i] += v * std::pow(grid[i], key.x) * derivs[key.p][i];
  }
  return out;
}

std::vector<cplx> fock_vector_on_grid(const CVector& c, const std::vector<double>& grid) {
  std::vector<cplx> out;
  out.reserve(grid.size());
  const int kmax = static_cast<int>(c.size()) - 1;
  for (double x : grid) {
    auto psi = hermite_functions(kmax, x);
    cplx s = 0;
    for (int k = 0; k <= kmax; ++k) s += c[k] * psi[k];
    out.push_back(s);
  }
  return out;
}

}  // namespace pseudoherm
