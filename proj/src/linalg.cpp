#include "pencilres/linalg.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace pencilres {

void Tolerances::validate() const {
  if (!(rank_rel > 0.0) || !(rank_rel < 1.0)) fail(Errc::invalid_params, "rank_rel outside (0,1)");
  if (!(residual_abs > 0.0)) fail(Errc::invalid_params, "residual_abs must be positive");
  if (!(angle_tol > 0.0)) fail(Errc::invalid_params, "angle_tol must be positive");
}

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::invalid_shape: return "InvalidShape";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::empty_window: return "EmptyWindow";
    case Errc::missing_coefficient: return "MissingCoefficient";
    case Errc::singular_shift: return "SingularShift";
    case Errc::blocked: return "Blocked";
    case Errc::empty_subspace: return "EmptySubspace";
    case Errc::not_complementary: return "NotComplementary";
    case Errc::not_invertible_on_subspace: return "NotInvertibleOnSubspace";
    case Errc::singular_node: return "SingularNode";
    case Errc::outside_annulus: return "OutsideAnnulus";
    case Errc::resample_limit: return "ResampleLimitExceeded";
    case Errc::no_reference: return "NoReference";
    case Errc::parse_error: return "ParseError";
    case Errc::io_error: return "IoError";
    case Errc::internal: return "Internal";
  }
  return "Unknown";
}

void ensure_finite(const Mat& a, const char* label) {
  if (!a.allFinite()) fail(Errc::invalid_params, std::string(label) + " has non-finite entries");
}

namespace {

void require_nonempty(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) fail(Errc::invalid_shape, "dimension-zero matrix");
}

Eigen::JacobiSVD<Mat> thin_svd(const Mat& a) {
  return Eigen::JacobiSVD<Mat>(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

Subspace Subspace::zero(Index n, double tol) { return Subspace{n, Mat(n, 0), tol}; }

Subspace Subspace::full(Index n, double tol) { return Subspace{n, Mat::Identity(n, n), tol}; }

Subspace Subspace::coordinate_window(Index n, Index k, double tol) {
  k = std::clamp<Index>(k, 0, n);
  Mat b = Mat::Zero(n, k);
  b.topRows(k) = Mat::Identity(k, k);
  return Subspace{n, std::move(b), tol};
}

Subspace Subspace::from_columns(const Mat& cols, const Tolerances& tol) {
  if (cols.cols() == 0) return Subspace::zero(cols.rows(), tol.rank_rel);
  auto svd = thin_svd(cols);
  const auto& s = svd.singularValues();
  double cutoff = s.size() ? tol.rank_rel * s(0) : 0.0;
  Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return Subspace{cols.rows(), svd.matrixU().leftCols(r), tol.rank_rel};
}

Subspace nullspace(const Mat& a, const Tolerances& tol) {
  require_nonempty(a);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cutoff = tol.rank_rel * (s.size() ? s(0) : 0.0);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return Subspace{a.cols(), svd.matrixV().rightCols(a.cols() - rank), tol.rank_rel};
}

Subspace range(const Mat& a, const Tolerances& tol) {
  require_nonempty(a);
  return Subspace::from_columns(a, tol);
}

Subspace preimage(const Mat& a, const Subspace& t, const Tolerances& tol) {
  require_nonempty(a);
  if (a.rows() != t.ambient_dim) fail(Errc::invalid_shape, "preimage: a.rows != t.ambient_dim");
  if (t.dim() == t.ambient_dim) return Subspace::full(a.cols(), tol.rank_rel);
  Mat residual = a - t.basis * (t.basis.adjoint() * a);
  // The complement projector annihilates exactly the directions landing in t.
  double scale = std::max(a.norm(), 1.0);
  Eigen::JacobiSVD<Mat> svd(residual, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cutoff = tol.rank_rel * scale;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cutoff) ++rank;
  return Subspace{a.cols(), svd.matrixV().rightCols(a.cols() - rank), tol.rank_rel};
}

Subspace image(const Mat& a, const Subspace& w, const Tolerances& tol) {
  require_nonempty(a);
  if (a.cols() != w.ambient_dim) fail(Errc::invalid_shape, "image: a.cols != w.ambient_dim");
  if (w.dim() == 0) return Subspace::zero(a.rows(), tol.rank_rel);
  return Subspace::from_columns(a * w.basis, tol);
}

Subspace intersect(const Subspace& u, const Subspace& v, const Tolerances& tol) {
  if (u.ambient_dim != v.ambient_dim) fail(Errc::invalid_shape, "intersect: ambient dims differ");
  if (u.dim() == 0 || v.dim() == 0) return Subspace::zero(u.ambient_dim, tol.rank_rel);
  // sin of the angle from each v-direction to u: singular values of (I - UU^H)V.
  Mat m = v.basis - u.basis * (u.basis.adjoint() * v.basis);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double cutoff = std::max(tol.angle_tol, tol.rank_rel);
  Index outside = 0;
  while (outside < s.size() && s(outside) > cutoff) ++outside;
  Mat kept = v.basis * svd.matrixV().rightCols(v.dim() - outside);
  return Subspace::from_columns(kept, tol);
}

Subspace subspace_sum(const Subspace& u, const Subspace& v, const Tolerances& tol) {
  if (u.ambient_dim != v.ambient_dim) fail(Errc::invalid_shape, "sum: ambient dims differ");
  Mat stacked(u.ambient_dim, u.dim() + v.dim());
  stacked << u.basis, v.basis;
  if (stacked.cols() == 0) return Subspace::zero(u.ambient_dim, tol.rank_rel);
  return Subspace::from_columns(stacked, tol);
}

double containment_angle(const Subspace& sub, const Subspace& super) {
  if (sub.dim() == 0) return 0.0;
  if (super.dim() == 0) return std::asin(1.0);
  Mat m = sub.basis - super.basis * (super.basis.adjoint() * sub.basis);
  double s = m.jacobiSvd().singularValues()(0);
  return std::asin(std::min(1.0, s));
}

bool contains(const Subspace& super, const Subspace& sub, const Tolerances& tol) {
  return containment_angle(sub, super) <= tol.angle_tol;
}

bool same_space(const Subspace& u, const Subspace& v, const Tolerances& tol) {
  return u.dim() == v.dim() && contains(u, v, tol) && contains(v, u, tol);
}

double min_principal_angle(const Subspace& u, const Subspace& v) {
  if (u.dim() == 0 || v.dim() == 0) return std::asin(1.0);
  Mat m = u.basis.adjoint() * v.basis;
  double c = m.jacobiSvd().singularValues()(0);
  return std::acos(std::min(1.0, c));
}

Mat solve(const Mat& a, const Mat& b, const Tolerances& tol, double* residual) {
  require_nonempty(a);
  if (a.rows() != b.rows()) fail(Errc::invalid_shape, "solve: row counts differ");
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(a);
  cod.setThreshold(tol.rank_rel);
  Mat x = cod.solve(b);
  if (residual) *residual = (a * x - b).norm();
  return x;
}

double growth_rate(const std::vector<double>& norms, Index lo, Index hi) {
  if (lo > hi || lo < 0 || hi >= static_cast<Index>(norms.size()))
    fail(Errc::empty_window, "growth_rate: bad window");
  for (Index i = lo; i <= hi; ++i)
    if (norms[static_cast<size_t>(i)] < 1e-280) return 0.0;
  // Least-squares slope of log-norm vs index; washes out polynomial prefactors.
  Index n = hi - lo + 1;
  if (n == 1) return 1.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Index i = lo; i <= hi; ++i) {
    double x = static_cast<double>(i);
    double y = std::log(norms[static_cast<size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  double slope = (n * sxy - sx * sy) / denom;
  return std::exp(slope);
}

std::pair<Index, Index> default_fit_window(Index n) {
  if (n <= 0) fail(Errc::empty_window, "empty sequence");
  return {n / 3, n - 1};
}

}  // namespace pencilres
