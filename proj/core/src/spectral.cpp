#include "fraclat/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>

namespace fraclat {

EigenSystem eigensystem(const Mat& H) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(H);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensystem: solver did not converge");
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

Mat apply_function(const EigenSystem& es, const std::function<double(double)>& f) {
  Vec fl(es.evals.size());
  for (Eigen::Index i = 0; i < es.evals.size(); ++i) fl(i) = f(es.evals(i));
  return es.evecs * fl.asDiagonal() * es.evecs.transpose();
}

Mat spectral_power(const EigenSystem& es, double r, double eps0, int* dropped) {
  const bool integral = (r == std::floor(r));
  int drop_count = 0;
  Vec fl(es.evals.size());
  for (Eigen::Index i = 0; i < es.evals.size(); ++i) {
    double lam = es.evals(i);
    if (r < 0.0) {
      if (std::abs(lam) <= eps0) {
        fl(i) = 0.0;
        ++drop_count;
        continue;
      }
    } else if (!integral) {
      if (lam < 0.0) {
        if (lam < -std::sqrt(eps0))
          throw SpectralSingularityError(
              "spectral_power: negative eigenvalue " + std::to_string(lam) +
              " with non-integer power " + std::to_string(r));
        lam = 0.0;  // eigensolver noise on a PSD operator
      }
    }
    if (lam == 0.0 && r > 0.0) {
      fl(i) = 0.0;
    } else if (integral) {
      fl(i) = std::pow(lam, r);
    } else {
      fl(i) = std::pow(lam, r);
    }
  }
  if (dropped) *dropped = drop_count;
  return es.evecs * fl.asDiagonal() * es.evecs.transpose();
}

CMat resolvent(const EigenSystem& es, std::complex<double> z) {
  const Eigen::Index n = es.evals.size();
  CVec fl(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> d = es.evals(i) - z;
    if (std::abs(d) == 0.0)
      throw SpectralSingularityError("resolvent: z hits an eigenvalue");
    fl(i) = 1.0 / d;
  }
  const CMat V = es.evecs.cast<std::complex<double>>();
  return V * fl.asDiagonal() * V.adjoint();
}

CVec evolve(const EigenSystem& es, double t, const CVec& f) {
  const CMat V = es.evecs.cast<std::complex<double>>();
  CVec coeff = V.adjoint() * f;
  for (Eigen::Index i = 0; i < coeff.size(); ++i)
    coeff(i) *= std::exp(std::complex<double>(0.0, -t * es.evals(i)));
  return V * coeff;
}

namespace {

// power iteration on G = M^dagger M with a fixed start; deterministic and
// cheap compared to a full SVD for the operator-norm-only callers
double power_norm(const CMat& M) {
  const Eigen::Index n = M.cols();
  if (n == 0 || M.rows() == 0) return 0.0;
  // Deterministic pseudo-random start.  A structured start (all ones) can be
  // nearly orthogonal to the top singular vector -- e.g. the top eigenvector
  // of the Dirichlet Laplacian alternates sign -- which stalls the Rayleigh
  // quotient on a lower singular value.
  CVec v(n);
  std::uint64_t s = 0x2545f4914f6cdd1dULL;
  for (Eigen::Index i = 0; i < n; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    v(i) = std::complex<double>(static_cast<double>(s >> 11) * 0x1p-53 - 0.5, 0.0);
  }
  v /= v.norm();
  double rayleigh = 0.0;
  bool certified = false;
  // break-even with the dense fallback is O(n) iterations of two matvecs
  const int max_iter = std::max<int>(256, static_cast<int>(2 * n));
  for (int it = 0; it < max_iter; ++it) {
    const CVec w = M.adjoint() * (M * v);  // Hermitian PSD iteration matrix
    const double next = std::real(v.dot(w));
    const double norm_w = w.norm();
    if (norm_w == 0.0) return 0.0;
    // eigen-residual bound for M^*M: |lambda_nearest - next| <= ||w - next v||
    const double resid = (w - next * v).norm();
    v = w / norm_w;
    rayleigh = next;
    if (resid <= 1e-12 * std::max(next, 1e-300)) {
      certified = true;
      break;
    }
  }
  if (!certified) {
    // nearly degenerate top of the spectrum: certify with the dense solver
    Eigen::SelfAdjointEigenSolver<CMat> es(M.adjoint() * M,
                                           Eigen::EigenvaluesOnly);
    rayleigh = es.eigenvalues().maxCoeff();
  }
  return std::sqrt(std::max(rayleigh, 0.0));
}

}  // namespace

double operator_norm(const CMat& M) { return power_norm(M); }

double operator_norm(const Mat& M) { return power_norm(M.cast<std::complex<double>>()); }

double frobenius(const Mat& M) { return M.norm(); }

Vec singular_values(const Mat& M) {
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues();
}

int numeric_rank(const Mat& M, double tol_rel, double scale_floor) {
  const Vec sv = singular_values(M);
  if (sv.size() == 0) return 0;
  const double cutoff = tol_rel * std::max(sv(0), scale_floor);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++rank;
  return rank;
}

}  // namespace fraclat
