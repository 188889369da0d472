// Modified Bessel functions I_nu, the lattice heat kernel p_t(k) =
// e^{-2t} I_|k|(2t), Dirichlet kernels on the half-line and N^d by the
// method of images, and the semigroup-difference bound diagnostics.
#pragma once

#include "fraclat/lattice.hpp"

#include <vector>

namespace fraclat {

// e^{-x} I_nu(x): the numerically safe primitive (never overflows).
// Power series for small x, Miller downward recurrence normalized by
// e^{-x}(I_0 + 2 sum_k I_k) = 1 for large x; relative error ~ 1e-14.
double bessel_i_scaled(int nu, double x);

// I_nu(x) itself; x <= 700 guard (DomainError beyond: use the scaled form).
double bessel_i(int nu, double x);

// 1D heat kernel of 2 - (U + U^*) on Z
double heat_p(double t, long k);

struct KernelTable {
  double t;
  int range;                   // values for |k| <= range
  std::vector<double> values;  // values[k] = p_t(k), k = 0..range
  double tail_bound;           // declared bound on 1 - sum_{|k|<=range} p_t(k)
  double p(long k) const;
};
KernelTable kernel_table(double t, int range);

// product heat kernel on a d-dimensional box: exact (image-free) entries for
// open windows, wrapped sums for periodic boxes, Dirichlet images for half
// boxes (see kernel_halfline / kernel_Nd)
Mat full_kernel(const LatticeBox& box, double t);

// half-line Dirichlet kernel, eq. images: p_t(n-m) - p_t(n+m+2)
double kernel_halfline(double t, long n, long m);

// N^d Dirichlet kernel by inclusion-exclusion over coordinate reflections
// (R_J m)_j = -m_j - 2 for j in J; factorizes into the 1D image kernels.
// inclusion_exclusion evaluates the 2^d sum literally (test oracle).
double kernel_Nd(double t, const std::vector<long>& n, const std::vector<long>& m);
double kernel_Nd_inclusion_exclusion(double t, const std::vector<long>& n,
                                     const std::vector<long>& m);

// semigroup difference D_t = R_+ e^{-t Delta_Z} J_+ - e^{-t Delta_N} on a
// 1D half box; equals p_t(n+m+2) entrywise
Mat semigroup_difference_1d(double t, int L);

// fit log|D_t(n,m)| <= log C - (d/2) log t - c * a(n,m)/t over a (t, pair)
// grid with a(n,m) = |n + m + 2|_2^2 (squared image distance), then lift C so
// the bound holds on every sample; ok iff the fitted c is positive
struct ImagesBoundFit {
  double C;
  double c;
  bool ok;
  int samples;
  double worst_slack;  // min over samples of bound - value (>= 0 after lift)
};
ImagesBoundFit images_bound_check(const LatticeBox& half_box,
                                  const std::vector<double>& t_grid);

}  // namespace fraclat
