#pragma once

#include "pencilres/linalg.hpp"

#include <map>

namespace pencilres {

/// Linear pencil A(z) = A0 + A1 z between C^n spaces.
struct OperatorPencil {
  Mat a0;
  Mat a1;
  std::optional<Provenance> provenance;

  Index dim() const { return a0.rows(); }
  void validate() const;
  /// Rows/columns on which identities are asserted for truncated families:
  /// dim() - margin when the pencil is a truncation, dim() otherwise.
  Index interior_dim(Index margin = 2) const;
};

Mat eval_pencil(const OperatorPencil& p, Complex z);

/// The pencil B(w) = A1 + A0 w obtained from the substitution w = 1/z.
/// Annulus semantics flip from (s, r) to (1/r, 1/s) at call sites.
OperatorPencil flip_pencil(const OperatorPencil& p);

/// Basic solution {R_-1, R_0} of the fundamental equations plus the annulus
/// estimated from the spectral radii of R_-1 A0 and R_0 A1.
struct BasicSolution {
  Mat r_m1;
  Mat r_0;
  Annulus annulus;
};

/// Laurent coefficient family {R_j : -k_max <= j <= l_max} with its annulus.
struct LaurentExpansion {
  Index k_max = 0;  // most negative stored index is -k_max
  Index l_max = 0;
  std::vector<Mat> coeffs;  // coeffs[j + k_max]
  Annulus annulus;
  double rate_neg = 0.0;  // fitted trend of |R_-k|^(1/k), estimates inner radius
  double rate_pos = 0.0;  // fitted trend of |R_l|^(1/l), estimates 1/outer

  bool has(Index j) const { return j >= -k_max && j <= l_max; }
  const Mat& at(Index j) const;
  Mat& at(Index j);
};

struct ResidualRow {
  Index j;
  double left;   // |R_{j-1} A1 + R_j A0 - delta_{j0} I|_F on the interior block
  double right;  // |A1 R_{j-1} + A0 R_j - delta_{j0} I|_F
};

struct ResidualReport {
  std::vector<ResidualRow> rows;
  double max_left = 0.0;
  double max_right = 0.0;
};

/// Checks the left/right fundamental equations for every j with both R_{j-1}
/// and R_j stored. The expansion must cover {-1, 0} so the identity row at
/// j = 0 is always present.
ResidualReport fundamental_residuals(const OperatorPencil& p, const LaurentExpansion& exp,
                                     Index interior_margin = 2);

/// R(z) = (Iz + R_-1 A0)^-1 R_-1 + (I + R_0 A1 z)^-1 R_0.  Throws
/// SingularShift when either shifted operator is singular, which signals z
/// outside the annulus of validity.
Mat closed_form_resolvent(const BasicSolution& b, const OperatorPencil& p, Complex z,
                          const Tolerances& tol = {});

}  // namespace pencilres
