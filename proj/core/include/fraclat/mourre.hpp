// The conjugate (dilation-type) operator A, commutators i[H, A], the measured
// bulk multiplier w(lambda), spectral-window compressions, Mourre reports
// across truncation ladders, and potential hypothesis checks.
//
// Orientation: A is stored through its real skew generator M (A = iM), so
// i[H, A] = [M, H] stays in real arithmetic.  The sign of M is fixed so that
// the measured bulk multiplier is positive: the central Toeplitz row of
// [M, Delta] is {-1/2, 0, +1, 0, -1/2}, i.e. w(lambda) = 2 sin^2 k =
// lambda(4 - lambda)/2 >= 0.  (The opposite orientation satisfies the same
// algebra with w <= 0 and is useless for positivity estimates.)
//
// No matrix A on a periodic ring reproduces the dilation commutator: position
// is not single-valued on a cycle, and any seam assignment injects O(L)
// entries.  Periodic lanes therefore use the *measured-symbol circulant*: the
// bulk multiplier w is measured from central rows on open/half boxes (where
// it is exact), and the periodic commutator object is the circulant with
// Fourier eigenvalues w(lambda_q), which commutes with the circulant H by
// construction.
#pragma once

#include "fraclat/fractional.hpp"
#include "fraclat/lattice.hpp"
#include "fraclat/spectral.hpp"

#include <optional>
#include <string>

namespace fraclat {

struct ConjugateOp {
  LatticeBox box;
  Mat gen;                     // real skew generator M; A = i M
  std::vector<int> axis_signs; // sgn(r_j) per axis
  CMat matrix() const;         // A itself (complex hermitian)
};

// (A f)(n) = (i sgn_j / 2) sum_j [ (n_j - 1/2) f(n - e_j) - (n_j + 1/2) f(n + e_j) ]
// in signed coordinates; boundary-crossing terms dropped (half boxes), and no
// wrap terms on periodic boxes (the dilation weight does not descend to the
// torus; seam rows are excluded from any measurement).
ConjugateOp build_conjugate(const LatticeBox& box, const std::vector<int>& axis_signs);

// order 1: i(HA - AH) = [M, H]; order 2: the iterated [[H, iA], iA].
// Both are real symmetric for real symmetric H.
Mat form_commutator(const Mat& H, const ConjugateOp& A, int order);

// measured bulk multiplier table --------------------------------------------

struct MultiplierTable {
  std::vector<double> coeffs;   // Toeplitz row c_d, d = 0..dmax (c_{-d} = c_d)
  std::vector<double> lambda;   // sample grid lambda = 2 - 2 cos k
  std::vector<double> w;        // w(lambda) on the grid
  double toeplitz_defect = 0.0; // max row-to-row deviation near the center
  std::string source;           // generating box description
  double eval(double lam) const;  // c_0 + 2 sum_d c_d T_d((2-lambda)/2)
};

// measure w from the central rows of i[Delta^r, A] on an open window of size
// L: the rows are Toeplitz away from the walls; coefficients below 1e-13 are
// trimmed.  For r = 1 the result is exact: {1, 0, -1/2}.
MultiplierTable measure_bulk_multiplier(double r, int L, double eps0 = 1e-8);

void save_multiplier_table(const MultiplierTable& t, const std::string& path);
MultiplierTable load_multiplier_table(const std::string& path);

// circulant realization of the measured symbol on a periodic box: Fourier
// eigenvalue at momentum k_q is exactly table.eval(2 - 2 cos k_q)
Mat bulk_commutator_circulant(const MultiplierTable& t, int L);

// spectral windows -----------------------------------------------------------

struct SpectralWindow {
  double a, b;
};

// distance from the window to the nearest threshold of the order
double window_clearance(const SpectralWindow& I, const ThresholdSet& thr);

// smooth C^inf bump on [a,b]: plateau on the middle plateau_fraction, with
// exp(-1/x) ramps; identically 0 outside (a,b), 1 on the plateau
double smooth_bump(double x, double a, double b, double plateau_fraction = 0.5);

// Mourre report ---------------------------------------------------------------

struct MourreRung {
  int L;
  int window_dim;              // # eigenvalues in I
  std::vector<double> mu;      // compressed-commutator spectrum (ascending)
};

struct MourreReport {
  std::vector<MourreRung> rungs;
  double c_I = 0.0;            // max lower bound with stable below-counts
  std::vector<int> defect_counts;  // #{mu < c_I / 2} per rung
  bool empty_window = false;
  bool pass = false;           // c_I > 0, defects non-increasing, final <= 10
  std::optional<double> fourier_oracle_gap;  // periodic lanes only
};

// Half/open lanes: H = Delta^r spectral, C = i[H, A] literally.  Periodic
// lane: H = circulant symbol power, C = measured-symbol circulant; the
// compressed spectrum is compared against w(lambda_q) over window modes
// (fourier_oracle_gap).  W: optional potential added to H (half lanes).
MourreReport mourre_report(BoxKind kind, double r, const SpectralWindow& I,
                           const std::vector<int>& ladder,
                           const MultiplierTable& wtab,
                           const Vec* W = nullptr, double eps0 = 1e-8);

// multiplier consistency check ------------------------------------------------

struct MultiplierCheck {
  // (a) periodic: measured first-commutator multiplier of Delta^r vs
  //     r lambda^{r-1} w(lambda) on the Fourier modes
  double periodic_residual;
  // (b) half-line: R = i[Delta_N^r, A] - (r lambda^{r-1} w)(Delta_N);
  //     support scan restricted to [0, L/2)^2 (far-wall artifact excluded)
  int measured_collar;         // smallest width with outside max <= 1e-10
  double off_collar_max;       // at the measured collar
  double off_collar_max_w4;    // at fixed width 4 (integer-order reference)
  std::vector<double> residual_singvals;  // leading, near block
  // (c) double commutator on an interior window: residual norms of
  //     E_I([[H,iA],iA] - cand(H))E_I for three candidates
  double dd_vs_displayed;      // r(r-1)(4-l)^2 l^{r-2} + r(4-2l) l^{r-1}
  double dd_vs_first_form;     // r l^{r-1} w(l)
  double dd_vs_derived;        // (r(r-1)/4) l^r (4-l)^2 + (r/2) l^r (4-l)(2-l)
};
MultiplierCheck multiplier_check(double r, int L, const SpectralWindow& I,
                                 const MultiplierTable& wtab,
                                 double eps0 = 1e-8);

// potentials -------------------------------------------------------------------

struct PotentialGrid {
  Vec values;
  std::string family;
  double eps = 1.0;   // decay parameter for the H1 difference hypothesis
};

// families: zero | decay_poly (v0 <n>^-a) | alternating (v0 (-1)^{n1} <n>^-a)
// | rank_one (v0 at the origin)
PotentialGrid make_potential(const LatticeBox& box, const std::string& family,
                             double v0 = 1.0, double a = 1.0);

struct PotentialCheck {
  bool h0_pass;                    // sup over Lambda-shells -> 0
  std::vector<double> shell_sup;   // sup |W| per dyadic Lambda shell
  bool h1_pass;                    // difference-decay constant stable
  double h1_constant;              // best C on the full box
  double h1_constant_inner;        // same on the half-size box (trend probe)
};
PotentialCheck check_potential(const LatticeBox& box, const PotentialGrid& W);

// dyadic commutator-functional diagnostic: sum_k ||rho(Lambda/2^k) T rho(Lambda/2^k)||
// with a smooth bump rho supported in (1/2, 2); returns partial sums per k.
std::vector<double> dyadic_c01_diagnostic(const Mat& T, const Vec& lambda_vals);

}  // namespace fraclat
