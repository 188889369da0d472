// Dense hermitian spectral calculus: eigensystems, matrix functions with a
// guarded near-kernel policy for negative powers, resolvents, unitary
// evolution, and deterministic norm/rank helpers.
#pragma once

#include "fraclat/lattice.hpp"

#include <complex>
#include <functional>

namespace fraclat {

struct SpectralSingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenSystem {
  Vec evals;   // ascending
  Mat evecs;   // columns
};

EigenSystem eigensystem(const Mat& H);

// V f(lambda) V^T.  f is applied to each eigenvalue.
Mat apply_function(const EigenSystem& es, const std::function<double(double)>& f);

// lambda^r with the near-kernel floor: for r < 0, eigenvalues with
// |lambda| <= eps0 are projected out (f := 0) and counted in *dropped.
// For non-integer r >= 0, tiny negative eigenvalues (eigensolver noise) are
// clamped to 0; a genuinely negative eigenvalue below -sqrt(eps0) with a
// non-integer power requested raises SpectralSingularityError.
Mat spectral_power(const EigenSystem& es, double r, double eps0 = 1e-8,
                   int* dropped = nullptr);

CMat resolvent(const EigenSystem& es, std::complex<double> z);

// e^{-itH} f via the eigen-expansion (exact up to the eigensolve).
CVec evolve(const EigenSystem& es, double t, const CVec& f);

// Largest singular value by deterministic power iteration on M^dagger M
// (fixed all-ones start, relative Rayleigh tolerance 1e-13, iteration cap).
double operator_norm(const CMat& M);
double operator_norm(const Mat& M);

double frobenius(const Mat& M);

// number of singular values > tol_rel * max(sigma_max, scale_floor)
int numeric_rank(const Mat& M, double tol_rel = 1e-10, double scale_floor = 1.0);

Vec singular_values(const Mat& M);

}  // namespace fraclat
