#include "fraclat/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fraclat {

namespace {

Vec truncate_potential(const Vec* W, std::int64_t n) {
  Vec out = Vec::Zero(n);
  if (W) {
    const std::int64_t m = std::min<std::int64_t>(n, W->size());
    out.head(m) = W->head(m);
  }
  return out;
}

// median consecutive spacing of a sorted eigenvalue list
double median_spacing(const Vec& evals) {
  if (evals.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> gaps;
  for (Eigen::Index i = 1; i < evals.size(); ++i)
    gaps.push_back(evals(i) - evals(i - 1));
  std::sort(gaps.begin(), gaps.end());
  return gaps[gaps.size() / 2];
}

}  // namespace

LapProbeResult lap_probe(double r, double lambda, double s,
                         const std::vector<double>& eta,
                         const std::vector<int>& ladder, const Vec* W,
                         double eps0) {
  if (eta.empty() || ladder.empty())
    throw DomainError("lap_probe: empty eta grid or ladder");
  for (std::size_t i = 1; i < eta.size(); ++i)
    if (eta[i] >= eta[i - 1])
      throw DomainError("lap_probe: eta grid must decrease towards 0");

  LapProbeResult out;
  out.lambda = lambda;
  out.s = s;
  out.eta = eta;
  out.ladder = ladder;

  double spacing_top = std::numeric_limits<double>::infinity();
  for (int L : ladder) {
    const LatticeBox box = make_box(BoxKind::half, {L});
    Mat H = frac_power_1d(L, BoxKind::half, r, PowerMethod::spectral, eps0).op;
    H += Mat(truncate_potential(W, L).asDiagonal());
    const EigenSystem es = eigensystem(H);
    const Vec wt = lambda_bracket_pow(box, -s);

    // weighted resolvent norms via the eigenbasis: G R(z) G with
    // G = diag(<Lambda>^{-s}); the weighted eigenvector matrix is reused
    const Mat GV = wt.asDiagonal() * es.evecs;
    std::vector<double> Ns;
    for (double e : eta) {
      CVec fl(es.evals.size());
      for (Eigen::Index i = 0; i < es.evals.size(); ++i)
        fl(i) = 1.0 / std::complex<double>(es.evals(i) - lambda, -e);
      const CMat M =
          GV.cast<std::complex<double>>() * fl.asDiagonal() *
          GV.transpose().cast<std::complex<double>>();
      Ns.push_back(operator_norm(M));
    }
    out.N.push_back(std::move(Ns));

    // local level spacing around lambda (nearest 11 eigenvalues)
    std::vector<double> near(es.evals.data(), es.evals.data() + es.evals.size());
    std::sort(near.begin(), near.end(), [&](double x, double y) {
      return std::abs(x - lambda) < std::abs(y - lambda);
    });
    near.resize(std::min<std::size_t>(near.size(), 11));
    std::sort(near.begin(), near.end());
    Vec nv = Eigen::Map<Vec>(near.data(), near.size());
    spacing_top = median_spacing(nv);
  }

  const std::size_t last = out.N.size() - 1;
  const std::size_t emin = eta.size() - 1;
  if (out.N.size() >= 2) {
    const double prev = out.N[last - 1][emin];
    out.plateau_drift = std::abs(out.N[last][emin] - prev) / prev;
  } else {
    out.plateau_drift = 0.0;
  }
  out.plateau_pass = out.plateau_drift <= 0.10;
  out.growth_over_decade = out.N[last][emin] / out.N[last][0];
  out.resolution_warning = eta.back() < 3.0 * spacing_top;
  return out;
}

PropagationResult propagation_integral(double r, int L, const SpectralWindow& I,
                                       double s, double T, const Vec* f0,
                                       const Vec* W, double eps0) {
  const LatticeBox box = make_box(BoxKind::half, {L});
  Mat H = frac_power_1d(L, BoxKind::half, r, PowerMethod::spectral, eps0).op;
  H += Mat(truncate_potential(W, L).asDiagonal());
  const EigenSystem es = eigensystem(H);

  Vec f(L);
  if (f0) {
    if (f0->size() != L) throw GeometryError("propagation_integral: f0 size");
    f = *f0;
  } else {
    f = Vec::Zero(L);
    f(0) = 1.0;  // delta at the boundary site
  }
  const double f_norm2 = f.squaredNorm();
  if (f_norm2 == 0.0) throw DomainError("propagation_integral: zero input state");

  // phi(H) f in the eigenbasis, with the smooth window bump
  Vec coef = es.evecs.transpose() * f;
  for (Eigen::Index i = 0; i < coef.size(); ++i)
    coef(i) *= smooth_bump(es.evals(i), I.a, I.b);

  const Vec wt = lambda_bracket_pow(box, -s);
  const Mat GV = wt.asDiagonal() * es.evecs;  // rows weighted once

  double lam_max = 1.0;
  for (Eigen::Index i = 0; i < es.evals.size(); ++i)
    lam_max = std::max(lam_max, std::abs(es.evals(i)));
  const int nstep = static_cast<int>(std::ceil(T * lam_max / 0.1));
  const double dt = T / nstep;

  PropagationResult out;
  out.t.reserve(nstep + 1);
  out.integrand.reserve(nstep + 1);
  out.cumulative.reserve(nstep + 1);
  double acc = 0.0;
  double prev = 0.0;
  for (int k = 0; k <= nstep; ++k) {
    const double t = k * dt;
    CVec phase(coef.size());
    for (Eigen::Index i = 0; i < coef.size(); ++i)
      phase(i) = coef(i) * std::complex<double>(std::cos(es.evals(i) * t),
                                                -std::sin(es.evals(i) * t));
    const CVec y = GV.cast<std::complex<double>>() * phase;
    const double val = y.squaredNorm();
    out.t.push_back(t);
    out.integrand.push_back(val);
    if (k > 0) acc += 0.5 * dt * (prev + val);
    prev = val;
    out.cumulative.push_back(2.0 * acc);  // even integrand: double the half line
  }
  out.C_est = out.cumulative.back() / f_norm2;
  const std::size_t n = out.cumulative.size();
  out.tail_increment = (n >= 2) ? out.cumulative[n - 1] - out.cumulative[n - 2] : 0.0;
  return out;
}

WindowCountResult eig_window_count(double r, const SpectralWindow& I,
                                   const std::vector<int>& ladder,
                                   const std::string& family, double v0,
                                   double a, double eps0) {
  if (ladder.empty()) throw DomainError("eig_window_count: empty ladder");
  WindowCountResult out;
  out.ladder = ladder;

  std::vector<double> prev_candidates;
  for (int L : ladder) {
    const LatticeBox box = make_box(BoxKind::half, {L});
    Mat H = frac_power_1d(L, BoxKind::half, r, PowerMethod::spectral, eps0).op;
    H += Mat(make_potential(box, family, v0, a).values.asDiagonal());
    const EigenSystem es = eigensystem(H);

    // outliers are isolated on the scale of the mean level spacing; the
    // filling continuous-spectrum approximants sit ~1 mean spacing apart
    const double mean_gap =
        (es.evals(es.evals.size() - 1) - es.evals(0)) /
        static_cast<double>(es.evals.size() - 1);
    std::vector<double> candidates;
    for (Eigen::Index i = 0; i < es.evals.size(); ++i) {
      const double lam = es.evals(i);
      if (lam < I.a || lam > I.b) continue;
      double gap = std::numeric_limits<double>::infinity();
      if (i > 0) gap = std::min(gap, lam - es.evals(i - 1));
      if (i + 1 < es.evals.size()) gap = std::min(gap, es.evals(i + 1) - lam);
      if (gap > 10.0 * mean_gap) candidates.push_back(lam);
    }

    int persistent = static_cast<int>(candidates.size());
    if (!prev_candidates.empty() || !out.count_low.empty()) {
      persistent = 0;
      for (double lam : candidates) {
        for (double plam : prev_candidates) {
          if (std::abs(lam - plam) < 1e-4) {
            ++persistent;
            break;
          }
        }
      }
    }
    out.count_low.push_back(persistent);
    out.count_high.push_back(static_cast<int>(candidates.size()));
    prev_candidates = std::move(candidates);
  }
  out.unambiguous = true;
  for (std::size_t i = 0; i < out.count_low.size(); ++i)
    if (out.count_low[i] != out.count_high[i]) out.unambiguous = false;
  return out;
}

WeylReport weyl_compare(double r, const std::vector<int>& ladder,
                        const SpectralWindow& I, double eps0) {
  if (ladder.empty()) throw DomainError("weyl_compare: empty ladder");
  WeylReport out;
  out.ladder = ladder;

  for (std::size_t li = 0; li < ladder.size(); ++li) {
    const int L = ladder[li];
    // H1 = Delta_N^r on the half box; H2 = R Delta_Z^r J, the bilateral power
    // compressed to the same box.  Both share the far truncation wall (the
    // window right edge sits on the half-box edge), so H1 - H2 = -K.
    const LatticeBox boxN = make_box(BoxKind::half, {L});
    const LatticeBox boxZ = make_box(BoxKind::open_window, {2 * L});
    const Restriction rest = build_restriction(boxZ, boxN);
    const Mat H1 = frac_power_1d(L, BoxKind::half, r, PowerMethod::spectral, eps0).op;
    const Mat HZ =
        frac_power_1d(2 * L, BoxKind::open_window, r, PowerMethod::spectral, eps0).op;
    const Mat H2 = rest.R * HZ * rest.J;
    const EigenSystem es1 = eigensystem(H1);
    const EigenSystem es2 = eigensystem(H2);

    // KS distance of the per-site counting functions inside the window
    double ks = 0.0;
    {
      std::vector<double> a, b, xs;
      for (int i = 0; i < L; ++i) {
        if (es1.evals(i) >= I.a && es1.evals(i) <= I.b) a.push_back(es1.evals(i));
        if (es2.evals(i) >= I.a && es2.evals(i) <= I.b) b.push_back(es2.evals(i));
      }
      xs = a;
      xs.insert(xs.end(), b.begin(), b.end());
      std::sort(xs.begin(), xs.end());
      for (double x : xs) {
        const double FA =
            static_cast<double>(std::upper_bound(a.begin(), a.end(), x) -
                                a.begin()) / L;
        const double FB =
            static_cast<double>(std::upper_bound(b.begin(), b.end(), x) -
                                b.begin()) / L;
        ks = std::max(ks, std::abs(FA - FB));
      }
    }
    out.ks_distance.push_back(ks);

    if (li + 1 == ladder.size()) {
      const CMat R1 = resolvent(es1, std::complex<double>(0.0, 1.0));
      const CMat R2 = resolvent(es2, std::complex<double>(0.0, 1.0));
      const CMat diff = R1 - R2;
      out.resolvent_diff_norm = operator_norm(diff);
      // singular values of the complex difference via its real embedding
      Eigen::JacobiSVD<CMat> svd(diff);
      const Eigen::VectorXd sv = svd.singularValues();
      const int keep = std::min<int>(8, static_cast<int>(sv.size()));
      out.resolvent_diff_singvals.assign(sv.data(), sv.data() + keep);
      int rank = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-10 * std::max(sv(0), 1.0)) ++rank;
      out.resolvent_diff_rank = rank;
    }
  }
  return out;
}

BallisticReport ballistic_diagnostic(double r, int L, const SpectralWindow& I,
                                     const std::vector<double>& v_grid,
                                     const std::vector<double>& T_grid,
                                     double eps0) {
  if (v_grid.empty() || T_grid.empty())
    throw DomainError("ballistic_diagnostic: empty grids");
  const Mat H = frac_power_1d(L, BoxKind::half, r, PowerMethod::spectral, eps0).op;
  const EigenSystem es = eigensystem(H);

  Vec f = Vec::Zero(L);
  f(0) = 1.0;
  Vec coef = es.evecs.transpose() * f;
  for (Eigen::Index i = 0; i < coef.size(); ++i)
    coef(i) *= smooth_bump(es.evals(i), I.a, I.b);
  const double norm2 = coef.squaredNorm();
  if (norm2 < 1e-300)
    throw DomainError("ballistic_diagnostic: window bump annihilates the state");
  coef /= std::sqrt(norm2);

  double lam_max = 1.0;
  for (Eigen::Index i = 0; i < es.evals.size(); ++i)
    lam_max = std::max(lam_max, std::abs(es.evals(i)));
  const double Tmax = *std::max_element(T_grid.begin(), T_grid.end());
  const int nstep = static_cast<int>(std::ceil(Tmax * lam_max / 0.1));
  const double dt = Tmax / nstep;

  // precompute |psi(t, n)|^2 prefix sums per step, then average per (v, T)
  BallisticReport rep;
  std::vector<std::vector<double>> prefix(nstep + 1, std::vector<double>(L + 1, 0.0));
  for (int k = 0; k <= nstep; ++k) {
    const double t = k * dt;
    CVec phase(coef.size());
    for (Eigen::Index i = 0; i < coef.size(); ++i)
      phase(i) = coef(i) * std::complex<double>(std::cos(es.evals(i) * t),
                                                -std::sin(es.evals(i) * t));
    const CVec psi = es.evecs.cast<std::complex<double>>() * phase;
    for (int n = 0; n < L; ++n)
      prefix[k][n + 1] = prefix[k][n] + std::norm(psi(n));
  }

  for (double v : v_grid) {
    std::vector<double> averages;
    for (double T : T_grid) {
      const int steps = std::min(nstep, static_cast<int>(std::floor(T / dt)));
      double acc = 0.0;
      double prevval = prefix[0][std::min<long>(L, 1)];  // |psi(0)| inside any ball
      for (int k = 1; k <= steps; ++k) {
        const double t = k * dt;
        const int cut = static_cast<int>(std::min<double>(L, std::floor(v * t) + 1));
        const double val = prefix[k][cut];
        acc += 0.5 * dt * (prevval + val);
        prevval = val;
      }
      const double Teff = steps * dt;
      const double avg = (Teff > 0.0) ? acc / Teff : prefix[0][1];
      rep.cells.push_back({v, T, avg});
      averages.push_back(avg);
    }
  }

  // per-v least squares of avg ~ C / log(1 + T), pooled over all cells
  double sgg = 0.0, sag = 0.0;
  rep.log_decay_consistent = true;
  std::size_t cell = 0;
  for (std::size_t vi = 0; vi < v_grid.size(); ++vi) {
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t ti = 0; ti < T_grid.size(); ++ti, ++cell) {
      const double g = 1.0 / std::log(1.0 + T_grid[ti]);
      sgg += g * g;
      sag += rep.cells[cell].average * g;
      if (rep.cells[cell].average > prev + 1e-9) rep.log_decay_consistent = false;
      prev = rep.cells[cell].average;
    }
  }
  rep.fitted_C = (sgg > 0.0) ? sag / sgg : 0.0;
  return rep;
}

double symbol_resolvent_distance(double r1, double r2, int grid) {
  if (grid < 8) throw DomainError("symbol_resolvent_distance: grid too small");
  double best = 0.0;
  for (int i = 1; i <= grid; ++i) {
    const double k = M_PI * i / grid;
    const double a = symbol1d(r1, k);
    const double b = symbol1d(r2, k);
    if (!std::isfinite(a) || !std::isfinite(b)) continue;  // resolvents -> 0
    const double g =
        std::abs(a - b) / std::sqrt((a * a + 1.0) * (b * b + 1.0));
    best = std::max(best, g);
  }
  return best;
}

RScanReport r_scan(const std::vector<double>& path, int L, BoxKind kind,
                   double eps0) {
  if (path.size() < 2) throw DomainError("r_scan: path needs >= 2 orders");
  RScanReport rep;
  rep.bounded_by_oracle = true;

  const PowerMethod method = (kind == BoxKind::periodic)
                                 ? PowerMethod::circulant_symbol
                                 : PowerMethod::spectral;
  std::vector<CMat> resolvents;
  for (double r : path) {
    const Mat H = frac_power_1d(L, kind, r, method, eps0).op;
    const EigenSystem es = eigensystem(H);
    resolvents.push_back(resolvent(es, std::complex<double>(0.0, 1.0)));
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    RScanRow row;
    row.r_from = path[i];
    row.r_to = path[i + 1];
    row.resolvent_diff = operator_norm(CMat(resolvents[i] - resolvents[i + 1]));
    row.symbol_bound = symbol_resolvent_distance(path[i], path[i + 1]);
    if (row.resolvent_diff > row.symbol_bound + 1e-12)
      rep.bounded_by_oracle = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace fraclat
