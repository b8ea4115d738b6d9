#pragma once

// Truncated oscillator-basis numerics. The basis is that of the unit-frequency
// oscillator, x = (a + a^+)/sqrt2, p = i(a^+ - a)/sqrt2, for every alpha.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "pseudoherm/pairs.hpp"

namespace pseudoherm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kTrustPadding = 32;
inline constexpr double kTrustTolerance = 1e-8;
inline constexpr int kResidualMargin = 64;

struct FockRep {
  int dim = 0;
  CMatrix xmat;
  CMatrix pmat;
  Bindings bindings;
};

FockRep make_fock_rep(int N, const Bindings& bindings);

/// Leading N x N block of the operator on the full oscillator space: each
/// monomial is multiplied out in a padded basis so the block is exact.
CMatrix represent(const OpPoly& a, const Bindings& bindings, int N);

struct Eigensystem {
  std::vector<cplx> values;  // sorted by real part
  CMatrix vectors;           // unit-norm columns in the same order
};

Eigensystem eigensystem(const CMatrix& m, bool hermitian);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;  // sorted by real part
  int trusted_count = 0;
  std::vector<double> movement;  // distance to the nearest level of the enlarged run
};

/// Without a comparison run nothing is trusted.
SpectrumReport spectrum(const CMatrix& m, bool hermitian);
/// A level is trusted when the enlarged matrix has a level within
/// kTrustTolerance; trusted_count counts such levels from the bottom.
SpectrumReport spectrum(const CMatrix& m, const CMatrix& enlarged, bool hermitian);
/// N against N + kTrustPadding.
SpectrumReport operator_spectrum(const OpPoly& a, const Bindings& bindings, int N, bool hermitian);

/// exp(represent(q)/2) via the eigendecomposition of the Hermitian matrix.
CMatrix eta_exp(const OpPoly& q, const Bindings& bindings, int N);

/// ||eta H eta^-1 - h|| / ||h|| (Frobenius) on the leading (N - 64) block.
/// Exact pairs use the matrix eta. Perturbative pairs expand eta H eta^-1 in
/// powers of g through g^(order + 4) symbolically, then represent it.
double similarity_residual(const EquivalencePair& pair, const Bindings& bindings, int N);

/// <u, eta^2 v>.
cplx metric_inner(const CVector& u, const CVector& v, const CMatrix& eta);

/// Normalized Hermite functions psi_0 .. psi_kmax at x.
std::vector<double> hermite_functions(int kmax, double x);

/// Perturbed oscillator eigenfunction of h3 at alpha = 1 through g^2.
std::vector<cplx> reference_wavefunction(int n, double g, const std::vector<double>& grid);

/// n + 1/2 + (g^2/8)(30 n^2 + 30 n + 11).
double eigen_formula_h3(int n, double g);

/// Applies A (x -> multiplication, p -> -i d/dx) to samples on a uniform grid
/// with 9-point central differences. The outer four points on each side are 0.
std::vector<cplx> apply_on_grid(const OpPoly& a, const Bindings& bindings, const std::vector<double>& grid,
                                const std::vector<cplx>& f);

/// sum_k c_k psi_k(x) on a grid.
std::vector<cplx> fock_vector_on_grid(const CVector& c, const std::vector<double>& grid);

}  // namespace pseudoherm
