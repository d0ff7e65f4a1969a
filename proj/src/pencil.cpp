#include "pencilres/pencil.hpp"

#include <Eigen/LU>

namespace pencilres {

void OperatorPencil::validate() const {
  if (a0.rows() != a0.cols() || a1.rows() != a1.cols() || a0.rows() != a1.rows())
    fail(Errc::invalid_shape, "pencil matrices must be square with equal dimension");
  if (a0.rows() == 0) fail(Errc::invalid_shape, "empty pencil");
  ensure_finite(a0, "A0");
  ensure_finite(a1, "A1");
}

Index OperatorPencil::interior_dim(Index margin) const {
  if (provenance && provenance->truncated) return std::max<Index>(Index{0}, dim() - margin);
  return dim();
}

Mat eval_pencil(const OperatorPencil& p, Complex z) { return p.a0 + z * p.a1; }

OperatorPencil flip_pencil(const OperatorPencil& p) {
  OperatorPencil q{p.a1, p.a0, p.provenance};
  if (q.provenance) q.provenance->family += " (flipped)";
  return q;
}

const Mat& LaurentExpansion::at(Index j) const {
  if (!has(j)) fail(Errc::missing_coefficient, "R_" + std::to_string(j) + " not stored");
  return coeffs[static_cast<size_t>(j + k_max)];
}

Mat& LaurentExpansion::at(Index j) {
  if (!has(j)) fail(Errc::missing_coefficient, "R_" + std::to_string(j) + " not stored");
  return coeffs[static_cast<size_t>(j + k_max)];
}

ResidualReport fundamental_residuals(const OperatorPencil& p, const LaurentExpansion& exp,
                                     Index interior_margin) {
  p.validate();
  if (!exp.has(-1) || !exp.has(0))
    fail(Errc::missing_coefficient, "expansion must cover j in {-1, 0}");
  Index n = p.dim();
  Index w = p.interior_dim(interior_margin);
  ResidualReport rep;
  for (Index j = -exp.k_max + 1; j <= exp.l_max; ++j) {
    Mat left = exp.at(j - 1) * p.a1 + exp.at(j) * p.a0;
    Mat right = p.a1 * exp.at(j - 1) + p.a0 * exp.at(j);
    if (j == 0) {
      left -= Mat::Identity(n, n);
      right -= Mat::Identity(n, n);
    }
    ResidualRow row{j, left.topLeftCorner(w, w).norm(), right.topLeftCorner(w, w).norm()};
    rep.max_left = std::max(rep.max_left, row.left);
    rep.max_right = std::max(rep.max_right, row.right);
    rep.rows.push_back(row);
  }
  return rep;
}

Mat closed_form_resolvent(const BasicSolution& b, const OperatorPencil& p, Complex z,
                          const Tolerances& tol) {
  p.validate();
  Index n = p.dim();
  Mat shift_neg = z * Mat::Identity(n, n) + b.r_m1 * p.a0;
  Mat shift_pos = Mat::Identity(n, n) + z * (b.r_0 * p.a1);
  auto solve_term = [&](const Mat& shift, const Mat& rhs, const char* side) -> Mat {
    Eigen::FullPivLU<Mat> lu(shift);
    lu.setThreshold(tol.rank_rel);
    if (!lu.isInvertible())
      fail(Errc::singular_shift, std::string(side) + " shift singular at z, outside annulus");
    return lu.solve(rhs);
  };
  return solve_term(shift_neg, b.r_m1, "principal") + solve_term(shift_pos, b.r_0, "analytic");
}

}  // namespace pencilres
