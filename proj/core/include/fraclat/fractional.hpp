// Fractional powers of the lattice Laplacian on Z and N, the combinatorial
// series machinery (ballot numbers alpha, partial sums beta, boundary defect
// matrices D_h), the boundary correction K_r by series and by definitional
// subtraction, threshold sets, d-dimensional assembly, and compactness
// diagnostics.
//
// The central combinatorial fact (verified against integer brute force): with
//   D_h := R_+ (U + U^*)^h J_+  -  (U_+ + U_+^*)^h,
// D_h is a Hankel matrix constant along anti-diagonals,
//   D_h(n, m) = beta_{h, n+m}   for n+m <= h-2 and n+m == h (mod 2),
// zero otherwise, where beta_{h,p} = sum_{k <= floor((h-2-p)/2)} alpha_{h,k}
// telescopes to the single binomial C(h, (h-2-p)/2).  Equivalently
// D_h(n, m) counts bilateral h-step walks from m to -(n+2) - the image walks
// removed by the Dirichlet wall.  Consequently
//   K_r = Delta_N^r - R_+ Delta_Z^r J_+ = -sum_{h>=2} (-1)^h C(r,h) 2^{r-h} D_h
// is itself Hankel with entries kappa_{n+m}, and in the limit
// kappa_p = -c_r(p+2) where c_r is the bilateral kernel of the symbol power.
#pragma once

#include "fraclat/lattice.hpp"
#include "fraclat/spectral.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>

namespace fraclat {

using BigInt = boost::multiprecision::cpp_int;

struct FracOrder {
  std::vector<double> r;

  int dim() const { return static_cast<int>(r.size()); }
  std::vector<int> positive_axes() const;
  std::vector<int> negative_axes() const;
};

// throws DomainError if any component is zero (the order must split P/N)
FracOrder make_order(std::vector<double> r);

// anisotropic symbol h_r(k) = sum_j (2 - 2 cos k_j)^{r_j}; +inf at singular
// points of negative powers
double symbol(const FracOrder& r, const std::vector<double>& k);
double symbol1d(double r, double k);

struct ThresholdSet {
  std::vector<double> values;  // sorted, deduplicated
  double lambda_max;           // sup of the symbol; +inf if any r_j < 0
  bool contains_zero;
};

// all sums sum_{j in N} 4^{r_j} + sum_{j in P} eps_j 4^{r_j}, eps in {0,1}^P
ThresholdSet thresholds(const FracOrder& r);

// exact integer tables: alpha_{h,k} = C(h,k) - C(h,k-1) (ballot numbers) and
// beta_{h,p} = sum_{k <= floor((h-2-p)/2)} alpha_{h,k} = C(h, (h-2-p)/2)
struct CoeffTable {
  int h_max;
  std::vector<std::vector<BigInt>> alpha;  // alpha[h][k], 0 <= k <= h/2
  std::vector<std::vector<BigInt>> beta;   // beta[h][p],  0 <= p <= h-2
};
CoeffTable coeff_tables(int h_max);

// generalized binomial C(r,h) by the multiplicative recurrence
// C(r,h) = C(r,h-1) (r-h+1)/h; exact zeros for integer r < h
double binom_general(double r, int h);

enum class DhMethod { factorized, bruteforce };

// D_h on the half box [0,L).  bruteforce computes integer matrix powers on
// the bilateral window [-L, L); the far wall at L-1 is shared by both terms
// of the difference and cancels exactly, so the result is the infinite-
// lattice D_h for h < L.  factorized fills the Hankel closed form.
// Requires L >= 4h (window-overflow guard); exact in int64 for h <= 26.
IMat d_h(int L, int h, DhMethod method);

// Fractional power of the 1D Laplacian on a box.  circulant_symbol is exact
// Fourier calculus (periodic boxes only); spectral goes through the dense
// eigensystem of the Dirichlet (half/open) or circulant base Laplacian.
enum class PowerMethod { circulant_symbol, spectral };
struct PowerResult {
  Mat op;
  int dropped_modes = 0;  // near-kernel modes projected out when r < 0
};
PowerResult frac_power_1d(int L, BoxKind kind, double r, PowerMethod method,
                          double eps0 = 1e-8);

// Boundary correction containers ------------------------------------------

struct BoundaryCorrection {
  Mat matrix;          // on the half box (series) or central block (defn.)
  int collar_width;    // exact h_max-2 for series; measured for definitional
  // series metadata (empty for definitional)
  int h_max = 0;
  double tail_bound = 0.0;              // declared norm bound on the dropped tail
  std::vector<double> term_norm_bounds; // per-h ||C(r,h)| 2^{r-h} D_h||_F, h = 2..h_max
  // definitional metadata
  int window = 0;      // periodic window size used (0 for series)
  int dropped_modes = 0;
  std::string meta;    // human-readable provenance line
};

// partial sum K approx -sum_{h=2}^{h_max} (-1)^h C(r,h) 2^{r-h} D_h on [0,L).
// Entries depend only on p = n+m (Hankel); computed per anti-diagonal.
// The declared tail bound sums |C(r,h)| 2^{r-h} ||D_h||_F bounds past h_max
// (these decay only algebraically, like h^{-3/2-r}: the betas grow ~ 2^h).
BoundaryCorrection k_series(int L, double r, int h_max);

// scalar helpers: the Hankel profile of the series partial sum, and the
// exact infinite-lattice limit kappa_p = -c_r(p+2)
double kappa_series(double r, int p, int h_max);
double bilateral_kernel(double r, long j);   // c_r(j), closed gamma form
double kappa_exact(double r, int p);

// definitional subtraction: spectral Delta_N^r on [0, halfL) minus the
// compression of the circulant Delta_Z^r on a periodic window
// (window >= 4 * halfL enforced), reported on the leading block x block
// corner (block <= halfL / 4 enforced: the comparison region must keep a
// 4x margin from the far truncation wall).
BoundaryCorrection k_definitional(int halfL, int window, int block, double r,
                                  double eps0 = 1e-8);

// d-dimensional anisotropic operator sum_j Delta_j^{r_j} as a Kronecker sum
// of 1D fractional powers (exact for both kinds of boxes).
PowerResult assemble_Nd(const LatticeBox& box, const FracOrder& r,
                        double eps0 = 1e-8);

// compactness diagnostics for a boundary correction
struct CompactnessReport {
  std::vector<double> singular_values;  // descending, leading 32
  double hs_norm;
  std::vector<double> hs_tails;         // ||K - chi_R K chi_R||_HS, R dyadic
  std::vector<int> tail_radii;
  double weighted_hs;                   // ||W_s K||_HS
  int measured_collar;                  // smallest M with off-collar <= 1e-10
  double off_collar_max;
  int numeric_rank;
};
CompactnessReport compactness_report(const BoundaryCorrection& K,
                                     const LatticeBox& box, double s, int M);

// tangential weight W_s(n) = sum_j <n_perp^(j)>^{-s} 1_{n_j <= M} (the d >= 2
// Hilbert-Schmidt localization weight; for d = 1 it degenerates to 1_{n<=M})
Vec tangential_weight(const LatticeBox& box, double s, int M);

}  // namespace fraclat
