#pragma once

#include "pencilres/types.hpp"

#include <vector>

namespace pencilres {

/// A subspace of C^n stored as an orthonormal column basis (n x k, k may be 0).
struct Subspace {
  Index ambient_dim = 0;
  Mat basis;  // ambient_dim x k, orthonormal columns
  double tol = 1e-10;

  Index dim() const { return basis.cols(); }

  static Subspace zero(Index n, double tol = 1e-10);
  static Subspace full(Index n, double tol = 1e-10);
  /// Span of the first k coordinate directions (used for interior windows).
  static Subspace coordinate_window(Index n, Index k, double tol = 1e-10);
  /// Orthonormalizes arbitrary spanning columns under the rank cutoff.
  static Subspace from_columns(const Mat& cols, const Tolerances& tol);
};

Subspace nullspace(const Mat& a, const Tolerances& tol);
Subspace range(const Mat& a, const Tolerances& tol);

/// {x : a x in span(t)}, computed as nullspace of (I - T T^H) a.
Subspace preimage(const Mat& a, const Subspace& t, const Tolerances& tol);

/// Image a(W) = span of a * basis(W).
Subspace image(const Mat& a, const Subspace& w, const Tolerances& tol);

Subspace intersect(const Subspace& u, const Subspace& v, const Tolerances& tol);
Subspace subspace_sum(const Subspace& u, const Subspace& v, const Tolerances& tol);

/// Largest principal angle from `sub` to `super`; 0 when sub is contained.
double containment_angle(const Subspace& sub, const Subspace& super);
bool contains(const Subspace& super, const Subspace& sub, const Tolerances& tol);
bool same_space(const Subspace& u, const Subspace& v, const Tolerances& tol);
/// Smallest principal angle between u and v (pi/2 when either is trivial).
double min_principal_angle(const Subspace& u, const Subspace& v);

/// Minimum-norm least-squares solve; optional Frobenius residual of a x - b.
Mat solve(const Mat& a, const Mat& b, const Tolerances& tol, double* residual = nullptr);

/// Geometric growth estimate exp(slope) of the log-linear fit of log(norms[i])
/// against i over the inclusive window [lo, hi]. A (near-)zero entry in the
/// window short-circuits to rate 0.
double growth_rate(const std::vector<double>& norms, Index lo, Index hi);

/// Window covering the last two-thirds of a sequence of length n.
std::pair<Index, Index> default_fit_window(Index n);

}  // namespace pencilres
