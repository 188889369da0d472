// Finite lattice boxes (half-lattice N^d, periodic torus, open Z^d window),
// shift/restriction operators between them, and the position weights used by
// every weighted estimate downstream.
//
// Index convention: sites are flattened row-major with axis 0 slowest, so for
// extents (L0, L1) the site (n0, n1) lives at n0*L1 + n1.  Each box kind also
// carries a signed *coordinate* per axis: half boxes count 0..L-1 from the
// boundary, open and periodic boxes use the symmetric window [-L/2, L/2).
#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fraclat {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BoxKind { half, periodic, open_window };

const char* to_string(BoxKind k);
BoxKind box_kind_from_string(const std::string& s);

struct LatticeBox {
  BoxKind kind = BoxKind::half;
  std::vector<int> extents;  // sites per axis, all >= 1

  int dim() const { return static_cast<int>(extents.size()); }
  std::int64_t size() const;

  // row-major flatten/unflatten (axis 0 slowest); bounds-checked
  std::int64_t flatten(const std::vector<int>& site) const;
  std::vector<int> unflatten(std::int64_t flat) const;

  // signed coordinate of a site index along one axis (see header comment)
  long coordinate(int axis, int index) const;

  std::string describe() const;  // e.g. "half[64]", "periodic[256,256]"
};

LatticeBox make_box(BoxKind kind, std::vector<int> extents);

// Left shift U along an axis, (U f)(n) = f(n - e_axis).  Half and open boxes
// drop boundary-crossing terms (Dirichlet); periodic wraps.  U_adjoint = U^T.
Mat build_shift(const LatticeBox& box, int axis);

// Per-axis hopping U + U^T and the (isotropic, r=1) Laplacian 2d*I - sum hops.
Mat build_hop(const LatticeBox& box, int axis);
Mat build_laplacian(const LatticeBox& box);

// Restriction/embedding between a half box and a covering box.  J embeds the
// half box into box_Z by matching signed coordinates (which are >= 0 on the
// half box); R = J^T restricts; P = J J^T is the range projector on box_Z.
// Throws GeometryError if box_Z does not cover the half box's coordinates.
struct Restriction {
  Mat J;  // size(box_Z) x size(box_N)
  Mat R;  // J^T
  std::int64_t offset_flat;  // flat index in box_Z of the half-box origin
};
Restriction build_restriction(const LatticeBox& box_Z, const LatticeBox& box_N);

// Compress an operator on box_Z to the half box: R (M) J, without forming J.
Mat compress(const LatticeBox& box_Z, const LatticeBox& box_N, const Mat& M);

// Position weights.  bracket(x) = sqrt(1 + x^2); Lambda(n) = sum_j <c_j>
// over signed coordinates; lambda_bracket_pow returns <Lambda(n)>^p per site.
double bracket(double x);
Vec lambda_values(const LatticeBox& box);
Vec lambda_bracket_pow(const LatticeBox& box, double p);
Vec axis_bracket_pow(const LatticeBox& box, int axis, double p);

// true for sites within l^infty distance <= width of a Dirichlet face;
// periodic boxes have none.  Half boxes only count the n_j = 0 faces (the
// boundary of N^d); the far truncation wall is an artifact, not a boundary.
std::vector<bool> collar_indicator(const LatticeBox& box, int width);

}  // namespace fraclat
