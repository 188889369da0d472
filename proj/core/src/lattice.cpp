#include "fraclat/lattice.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace fraclat {

const char* to_string(BoxKind k) {
  switch (k) {
    case BoxKind::half: return "half";
    case BoxKind::periodic: return "periodic";
    case BoxKind::open_window: return "open";
  }
  return "?";
}

BoxKind box_kind_from_string(const std::string& s) {
  if (s == "half") return BoxKind::half;
  if (s == "periodic") return BoxKind::periodic;
  if (s == "open" || s == "open_window") return BoxKind::open_window;
  throw DomainError("unknown box kind: " + s);
}

std::int64_t LatticeBox::size() const {
  std::int64_t n = 1;
  for (int e : extents) n *= e;
  return n;
}

std::int64_t LatticeBox::flatten(const std::vector<int>& site) const {
  if (static_cast<int>(site.size()) != dim())
    throw GeometryError("flatten: site dimension mismatch");
  std::int64_t flat = 0;
  for (int j = 0; j < dim(); ++j) {
    if (site[j] < 0 || site[j] >= extents[j])
      throw GeometryError("flatten: site index out of box");
    flat = flat * extents[j] + site[j];
  }
  return flat;
}

std::vector<int> LatticeBox::unflatten(std::int64_t flat) const {
  if (flat < 0 || flat >= size()) throw GeometryError("unflatten: out of range");
  std::vector<int> site(dim());
  for (int j = dim() - 1; j >= 0; --j) {
    site[j] = static_cast<int>(flat % extents[j]);
    flat /= extents[j];
  }
  return site;
}

long LatticeBox::coordinate(int axis, int index) const {
  const int L = extents[axis];
  switch (kind) {
    case BoxKind::half:
      return index;
    case BoxKind::open_window:
    case BoxKind::periodic:
      // symmetric window [-L/2, L/2)
      return index - L / 2;
  }
  return index;
}

std::string LatticeBox::describe() const {
  std::ostringstream os;
  os << to_string(kind) << "[";
  for (int j = 0; j < dim(); ++j) os << (j ? "," : "") << extents[j];
  os << "]";
  return os.str();
}

LatticeBox make_box(BoxKind kind, std::vector<int> extents) {
  if (extents.empty()) throw GeometryError("box needs at least one axis");
  for (int e : extents)
    if (e < 1) throw GeometryError("box extents must be >= 1");
  LatticeBox b;
  b.kind = kind;
  b.extents = std::move(extents);
  return b;
}

namespace {

// visit all (flat, flat_shifted) pairs for a unit step -1 along `axis`,
// respecting the box kind at the boundary
template <class F>
void for_each_shift_pair(const LatticeBox& box, int axis, F&& f) {
  const std::int64_t n = box.size();
  const int L = box.extents[axis];
  // stride of `axis` in the row-major flattening
  std::int64_t stride = 1;
  for (int j = box.dim() - 1; j > axis; --j) stride *= box.extents[j];
  for (std::int64_t i = 0; i < n; ++i) {
    const int c = static_cast<int>((i / stride) % L);
    if (c >= 1) {
      f(i, i - stride);
    } else if (box.kind == BoxKind::periodic && L > 1) {
      f(i, i + stride * (L - 1));
    }
  }
}

}  // namespace

Mat build_shift(const LatticeBox& box, int axis) {
  const std::int64_t n = box.size();
  Mat U = Mat::Zero(n, n);
  // (U f)(n) = f(n - e_axis): row n, column (n - e_axis)
  for_each_shift_pair(box, axis, [&](std::int64_t i, std::int64_t j) {
    U(i, j) = 1.0;
  });
  return U;
}

Mat build_hop(const LatticeBox& box, int axis) {
  const std::int64_t n = box.size();
  Mat H = Mat::Zero(n, n);
  for_each_shift_pair(box, axis, [&](std::int64_t i, std::int64_t j) {
    H(i, j) += 1.0;
    H(j, i) += 1.0;
  });
  return H;
}

Mat build_laplacian(const LatticeBox& box) {
  const std::int64_t n = box.size();
  Mat D = 2.0 * box.dim() * Mat::Identity(n, n);
  for (int j = 0; j < box.dim(); ++j) D -= build_hop(box, j);
  return D;
}

Restriction build_restriction(const LatticeBox& box_Z, const LatticeBox& box_N) {
  if (box_N.kind != BoxKind::half)
    throw GeometryError("build_restriction: target must be a half box");
  if (box_Z.dim() != box_N.dim())
    throw GeometryError("build_restriction: dimension mismatch");

  // locate coordinate 0 of each axis inside box_Z, then check coverage
  std::vector<int> origin(box_Z.dim());
  for (int j = 0; j < box_Z.dim(); ++j) {
    const int Lz = box_Z.extents[j];
    const int off = (box_Z.kind == BoxKind::half) ? 0 : Lz / 2;
    origin[j] = off;
    if (off + box_N.extents[j] > Lz)
      throw GeometryError("build_restriction: covering box too small on axis " +
                          std::to_string(j));
  }

  Restriction out;
  out.J = Mat::Zero(box_Z.size(), box_N.size());
  for (std::int64_t i = 0; i < box_N.size(); ++i) {
    std::vector<int> site = box_N.unflatten(i);
    for (int j = 0; j < box_N.dim(); ++j) site[j] += origin[j];
    out.J(box_Z.flatten(site), i) = 1.0;
  }
  out.R = out.J.transpose();
  out.offset_flat = box_Z.flatten(origin);
  return out;
}

Mat compress(const LatticeBox& box_Z, const LatticeBox& box_N, const Mat& M) {
  const Restriction r = build_restriction(box_Z, box_N);
  // R M J without the sparse-aware shortcut; boxes here stay <= 2048
  return r.R * M * r.J;
}

double bracket(double x) { return std::sqrt(1.0 + x * x); }

Vec lambda_values(const LatticeBox& box) {
  const std::int64_t n = box.size();
  Vec lam(n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<int> site = box.unflatten(i);
    double s = 0.0;
    for (int j = 0; j < box.dim(); ++j)
      s += bracket(static_cast<double>(box.coordinate(j, site[j])));
    lam(i) = s;
  }
  return lam;
}

Vec lambda_bracket_pow(const LatticeBox& box, double p) {
  Vec lam = lambda_values(box);
  for (std::int64_t i = 0; i < lam.size(); ++i)
    lam(i) = std::pow(1.0 + lam(i) * lam(i), 0.5 * p);
  return lam;
}

Vec axis_bracket_pow(const LatticeBox& box, int axis, double p) {
  const std::int64_t n = box.size();
  Vec v(n);
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<int> site = box.unflatten(i);
    const double c = static_cast<double>(box.coordinate(axis, site[axis]));
    v(i) = std::pow(1.0 + c * c, 0.5 * p);
  }
  return v;
}

std::vector<bool> collar_indicator(const LatticeBox& box, int width) {
  const std::int64_t n = box.size();
  std::vector<bool> in(n, false);
  if (box.kind == BoxKind::periodic) return in;  // no Dirichlet faces
  for (std::int64_t i = 0; i < n; ++i) {
    std::vector<int> site = box.unflatten(i);
    for (int j = 0; j < box.dim(); ++j) {
      const int L = box.extents[j];
      long dist;
      if (box.kind == BoxKind::half) {
        dist = site[j];  // only the n_j = 0 face is a real boundary
      } else {
        const long c = box.coordinate(j, site[j]);
        dist = std::min<long>(c - (0 - L / 2), (L - 1 - L / 2) - c);
      }
      if (dist <= width) {
        in[i] = true;
        break;
      }
    }
  }
  return in;
}

}  // namespace fraclat
