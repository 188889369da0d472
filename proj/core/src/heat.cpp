#include "fraclat/heat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraclat {

namespace {

// power series e^{-x} sum_k (x/2)^{nu+2k} / (k! (nu+k)!); fine up to x ~ 50
// where the e^{-x} compensation still fits comfortably in double range
double bessel_series_scaled(int nu, double x) {
  const double logt0 = nu * std::log(0.5 * x) - std::lgamma(nu + 1.0);
  double term = std::exp(logt0 - x);  // fold e^{-x} into the first term
  double sum = term;
  const double q = 0.25 * x * x;
  for (int k = 1; k < 600; ++k) {
    term *= q / (static_cast<double>(k) * (nu + k));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

// Miller downward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k from a start
// order where I is negligible, normalized by e^{-x}(I_0 + 2 sum I_k) = 1
double bessel_miller_scaled(int nu, double x) {
  const int start = std::max(nu + 20,
                             static_cast<int>(x + 20.0 * std::sqrt(x) + 60.0));
  double ip1 = 0.0;
  double ik = 1e-30;
  double target = 0.0;
  double norm = 0.0;
  for (int k = start; k >= 0; --k) {
    const double im1 = ip1 + (2.0 * k / x) * ik;
    ip1 = ik;
    ik = im1;
    // after the update, ip1 holds I_k, ik holds I_{k-1}; register I_k
    if (k == nu) target = ip1;
    norm += 2.0 * ip1;
    if (std::abs(ik) > 1e250) {  // rescale everything to dodge overflow
      ik *= 1e-250;
      ip1 *= 1e-250;
      target *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm -= ip1;  // loop summed 2*I_0; want I_0 + 2 sum_{k>=1} I_k (ip1 == I_0)
  return target / norm;
}

}  // namespace

double bessel_i_scaled(int nu, double x) {
  if (nu < 0) nu = -nu;  // I_{-n} = I_n for integer order
  if (x < 0.0) throw DomainError("bessel_i_scaled: x must be >= 0");
  if (x == 0.0) return nu == 0 ? 1.0 : 0.0;
  if (x < 50.0) return bessel_series_scaled(nu, x);
  return bessel_miller_scaled(nu, x);
}

double bessel_i(int nu, double x) {
  if (x > 700.0)
    throw DomainError("bessel_i: overflow range (x > 700), use the scaled form");
  if (x < 0.0) throw DomainError("bessel_i: x must be >= 0");
  return bessel_i_scaled(nu, x) * std::exp(x);
}

double heat_p(double t, long k) {
  if (t < 0.0) throw DomainError("heat_p: t must be >= 0");
  const long ak = std::labs(k);
  if (t == 0.0) return ak == 0 ? 1.0 : 0.0;
  if (ak > std::numeric_limits<int>::max())
    throw DomainError("heat_p: |k| out of range");
  // e^{-2t} I_{|k|}(2t) is exactly the scaled Bessel value at 2t
  return bessel_i_scaled(static_cast<int>(ak), 2.0 * t);
}

double KernelTable::p(long k) const {
  const long ak = std::labs(k);
  if (ak > range) return 0.0;
  return values[static_cast<std::size_t>(ak)];
}

KernelTable kernel_table(double t, int range) {
  if (range < 1) throw DomainError("kernel_table: range must be >= 1");
  if (static_cast<double>(range) + 1.0 < 4.0 * t)
    throw DomainError("kernel_table: need range + 1 >= 4t for the tail bound");
  KernelTable tab;
  tab.t = t;
  tab.range = range;
  tab.values.resize(range + 1);
  for (int k = 0; k <= range; ++k) tab.values[k] = heat_p(t, k);
  // for k+1 >= 4t the ratio p(k+1)/p(k) = I_{k+1}(2t)/I_k(2t) < 2t/(k+1)
  // <= 1/2, so the two-sided tail is dominated by a geometric series:
  // 1 - sum_{|k|<=K} p <= 2 p(K+1) sum 2^{-j} = 4 p(K+1)
  tab.tail_bound = 4.0 * heat_p(t, range + 1);
  return tab;
}

double kernel_halfline(double t, long n, long m) {
  return heat_p(t, n - m) - heat_p(t, n + m + 2);
}

double kernel_Nd(double t, const std::vector<long>& n, const std::vector<long>& m) {
  if (n.size() != m.size()) throw GeometryError("kernel_Nd: dimension mismatch");
  double prod = 1.0;
  for (std::size_t j = 0; j < n.size(); ++j)
    prod *= kernel_halfline(t, n[j], m[j]);
  return prod;
}

double kernel_Nd_inclusion_exclusion(double t, const std::vector<long>& n,
                                     const std::vector<long>& m) {
  if (n.size() != m.size())
    throw GeometryError("kernel_Nd_inclusion_exclusion: dimension mismatch");
  const std::size_t d = n.size();
  if (d > 20) throw DomainError("kernel_Nd_inclusion_exclusion: d too large");
  double sum = 0.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    int bits = 0;
    double prod = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      const bool reflected = mask & (std::size_t{1} << j);
      const long mj = reflected ? (-m[j] - 2) : m[j];
      if (reflected) ++bits;
      prod *= heat_p(t, n[j] - mj);
    }
    sum += (bits % 2 == 0) ? prod : -prod;
  }
  return sum;
}

Mat full_kernel(const LatticeBox& box, double t) {
  const std::int64_t N = box.size();
  Mat K(N, N);
  // per-axis 1D kernel values memoized over coordinate pairs
  const int wrap_reach = static_cast<int>(std::ceil(4.0 * t)) + 40;
  for (std::int64_t i = 0; i < N; ++i) {
    const std::vector<int> si = box.unflatten(i);
    for (std::int64_t k = i; k < N; ++k) {
      const std::vector<int> sk = box.unflatten(k);
      double prod = 1.0;
      for (int j = 0; j < box.dim(); ++j) {
        const long a = box.coordinate(j, si[j]);
        const long b = box.coordinate(j, sk[j]);
        double v = 0.0;
        switch (box.kind) {
          case BoxKind::open_window:
            v = heat_p(t, a - b);
            break;
          case BoxKind::half:
            v = kernel_halfline(t, a, b);
            break;
          case BoxKind::periodic: {
            const int L = box.extents[j];
            const long sep = a - b;
            // wrapped sum over images within the kernel's reach
            const int wmax = wrap_reach / L + 1;
            for (int w = -wmax; w <= wmax; ++w)
              v += heat_p(t, sep + static_cast<long>(w) * L);
            break;
          }
        }
        prod *= v;
      }
      K(i, k) = prod;
      K(k, i) = prod;
    }
  }
  return K;
}

Mat semigroup_difference_1d(double t, int L) {
  Mat D(L, L);
  for (int n = 0; n < L; ++n)
    for (int m = n; m < L; ++m) {
      const double v = heat_p(t, n + m + 2);
      D(n, m) = v;
      D(m, n) = v;
    }
  return D;
}

ImagesBoundFit images_bound_check(const LatticeBox& half_box,
                                  const std::vector<double>& t_grid) {
  if (half_box.kind != BoxKind::half)
    throw GeometryError("images_bound_check: needs a half box");
  const std::int64_t N = half_box.size();
  const double d = half_box.dim();

  // samples of y = log|D_t(n,m)| against x = |n+m+2|^2 / t
  std::vector<double> xs, ys, logts;
  for (double t : t_grid) {
    if (t <= 0.0) throw DomainError("images_bound_check: t must be > 0");
    for (std::int64_t i = 0; i < N; ++i) {
      const std::vector<int> si = half_box.unflatten(i);
      for (std::int64_t k = 0; k < N; ++k) {
        const std::vector<int> sk = half_box.unflatten(k);
        double bilateral = 1.0, dirichlet = 1.0, a = 0.0;
        for (int j = 0; j < half_box.dim(); ++j) {
          const long nj = half_box.coordinate(j, si[j]);
          const long mj = half_box.coordinate(j, sk[j]);
          bilateral *= heat_p(t, nj - mj);
          dirichlet *= kernel_halfline(t, nj, mj);
          const double img = static_cast<double>(nj + mj + 2);
          a += img * img;
        }
        const double val = std::abs(bilateral - dirichlet);
        if (val < 1e-280) continue;  // below log-able range, irrelevant to the fit
        xs.push_back(a / t);
        ys.push_back(std::log(val));
        logts.push_back(std::log(t));
      }
    }
  }

  ImagesBoundFit fit;
  fit.samples = static_cast<int>(xs.size());
  if (xs.empty()) {
    fit.C = 0.0;
    fit.c = 0.0;
    fit.ok = false;
    fit.worst_slack = 0.0;
    return fit;
  }

  // least squares of (y + (d/2) log t) = logC - c x
  double sx = 0.0, sz = 0.0, sxx = 0.0, sxz = 0.0;
  const double nsamp = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = ys[i] + 0.5 * d * logts[i];
    sx += xs[i];
    sz += z;
    sxx += xs[i] * xs[i];
    sxz += xs[i] * z;
  }
  const double denom = nsamp * sxx - sx * sx;
  double c = (denom != 0.0) ? -(nsamp * sxz - sx * sz) / denom : 0.0;
  // lift logC so the bound holds on every sample
  double logC = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double z = ys[i] + 0.5 * d * logts[i];
    logC = std::max(logC, z + c * xs[i]);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double bound = logC - 0.5 * d * logts[i] - c * xs[i];
    worst = std::min(worst, bound - ys[i]);
  }
  fit.C = std::exp(logC);
  fit.c = c;
  fit.ok = c > 0.0;
  fit.worst_slack = worst;
  return fit;
}

}  // namespace fraclat
