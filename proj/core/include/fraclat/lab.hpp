// End-to-end spectral experiments: weighted-resolvent (LAP) probes across
// truncation ladders, propagation integrals, eigenvalue counting in windows,
// Weyl/essential-spectrum comparisons, ballistic-transport diagnostics, and
// continuity scans in the fractional order.
#pragma once

#include "fraclat/fractional.hpp"
#include "fraclat/lattice.hpp"
#include "fraclat/mourre.hpp"
#include "fraclat/spectral.hpp"

#include <optional>

namespace fraclat {

// LAP probe -------------------------------------------------------------------

struct LapProbeResult {
  double lambda;
  double s;
  std::vector<double> eta;              // descending towards 0
  std::vector<int> ladder;              // box sizes
  std::vector<std::vector<double>> N;   // N[rung][eta_idx]
  double plateau_drift;                 // |N_top - N_prev| / N_prev at eta_min
  bool plateau_pass;                    // drift <= 10%
  double growth_over_decade;            // N(eta_min) / N(eta_max), top rung
  bool resolution_warning;              // eta_min < 3x local level spacing
};

// N(lambda, eta) = || <Lambda>^{-s} (H - lambda - i eta)^{-1} <Lambda>^{-s} ||
// via the eigensystem; H = Delta^r on a half box plus optional potential.
LapProbeResult lap_probe(double r, double lambda, double s,
                         const std::vector<double>& eta,
                         const std::vector<int>& ladder,
                         const Vec* W = nullptr, double eps0 = 1e-8);

// propagation -----------------------------------------------------------------

struct PropagationResult {
  std::vector<double> t;        // quadrature grid on [0, T]
  std::vector<double> integrand;  // ||<Lambda>^{-s} e^{-itH} phi(H) f||^2
  std::vector<double> cumulative; // symmetrized running integral (2x half-line)
  double C_est;                 // final integral / ||f||^2
  double tail_increment;        // last per-step increment
};

// trapezoid rule with dt chosen so lambda_max * dt <= 0.1; the integrand is
// even in t, so the two-sided integral is twice the [0, T] one.
PropagationResult propagation_integral(double r, int L, const SpectralWindow& I,
                                       double s, double T,
                                       const Vec* f0 = nullptr,
                                       const Vec* W = nullptr,
                                       double eps0 = 1e-8);

// eigenvalue counting ----------------------------------------------------------

struct WindowCountResult {
  std::vector<int> ladder;
  std::vector<int> count_low;    // persistent outliers, conservative
  std::vector<int> count_high;   // including ambiguous candidates
  bool unambiguous;              // low == high on every rung
};

// counts spectral outliers of Delta^r + W inside I that persist across the
// ladder: |lambda_L - lambda_2L| < 1e-4 and local spacing ratio > 10x.
WindowCountResult eig_window_count(double r, const SpectralWindow& I,
                                   const std::vector<int>& ladder,
                                   const std::string& family, double v0,
                                   double a = 1.0, double eps0 = 1e-8);

// Weyl comparison ----------------------------------------------------------------

struct WeylReport {
  std::vector<int> ladder;
  std::vector<double> ks_distance;   // KS distance of normalized counting fns
  double resolvent_diff_norm;        // ||(H_N - i)^{-1} - (R H_Z J - i)^{-1}||
  std::vector<double> resolvent_diff_singvals;  // leading
  int resolvent_diff_rank;           // at 1e-10 relative tolerance
};
WeylReport weyl_compare(double r, const std::vector<int>& ladder,
                        const SpectralWindow& I, double eps0 = 1e-8);

// ballistic transport -------------------------------------------------------------

struct BallisticCell {
  double v, T, average;  // (1/T) int_0^T ||1_{|A|<=vt} e^{-itH} u||^2 dt
};
struct BallisticReport {
  std::vector<BallisticCell> cells;
  double fitted_C;       // least squares of average ~ C / log(1+T) per v
  bool log_decay_consistent;  // averages non-increasing in T for each v
};
BallisticReport ballistic_diagnostic(double r, int L, const SpectralWindow& I,
                                     const std::vector<double>& v_grid,
                                     const std::vector<double>& T_grid,
                                     double eps0 = 1e-8);

// continuity in the order ----------------------------------------------------------

struct RScanRow {
  double r_from, r_to;
  double resolvent_diff;   // ||(H(r) - i)^{-1} - (H(r') - i)^{-1}||
  double symbol_bound;     // max_k |h_r - h_r'| / |(h_r - i)(h_r' - i)|
};
struct RScanReport {
  std::vector<RScanRow> rows;
  bool bounded_by_oracle;  // periodic: resolvent_diff <= symbol_bound (+1e-12)
};

// exact symbol-distance oracle on the periodic modes, refined on a fine grid
double symbol_resolvent_distance(double r1, double r2, int grid = 4096);

RScanReport r_scan(const std::vector<double>& path, int L, BoxKind kind,
                   double eps0 = 1e-8);

}  // namespace fraclat
