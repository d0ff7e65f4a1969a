#pragma once

#include "pencilres/projections.hpp"

namespace pencilres {

/// Quadrature contour for the independent Cauchy-integral oracle.
struct OracleConfig {
  double radius = 1.0;
  Index nodes = 512;

  void validate() const {
    if (!(radius > 0.0)) fail(Errc::invalid_params, "contour radius must be positive");
    if (nodes < 16) fail(Errc::invalid_params, "at least 16 quadrature nodes required");
  }
  /// Default contour inside an annulus: geometric mean when both radii are
  /// finite, r/2 when s = 0, 2s when r = inf, 1 when neither bound exists.
  static OracleConfig for_annulus(const Annulus& a, Index nodes = 512);
};

/// Basic solution from a verified decomposition: R_-1 = L (A1 L)^+ Q and
/// R_0 = M (A0 M)^+ Qc, which satisfies all six defining identities by
/// construction.  The annulus is estimated from the growth of the powers of
/// R_-1 A0 and R_0 A1.
BasicSolution solve_basic(const OperatorPencil& p, const SpectralDecomposition& dec,
                          const Tolerances& tol);

/// All coefficients on [-k_max, l_max] via R_-k = -(R_-1 A0) R_-(k-1) and
/// R_l = -(R_0 A1) R_(l-1), with fitted growth rates as the annulus estimate.
LaurentExpansion laurent_coeffs(const BasicSolution& b, const OperatorPencil& p, Index k_max,
                                Index l_max);

/// Partial Laurent sum at z; `tail_bound` (optional) receives a geometric
/// estimate of the truncated tail from the fitted rates.
Mat eval_laurent(const LaurentExpansion& exp, Complex z, double* tail_bound = nullptr);

/// Trapezoid quadrature of the Cauchy coefficient integrals on |z| = radius:
/// R_j ~ (1/nodes) sum_k A(z_k)^-1 z_k^-j.  Independent of the basic-solution
/// pipeline; this is the brute-force oracle.  The attached annulus carries
/// growth fits of the computed coefficients, and `alias_bound`, when given,
/// receives the geometric aliasing estimate for the worst stored index.
LaurentExpansion contour_oracle(const OperatorPencil& p, const OracleConfig& cfg, Index j_min,
                                Index j_max, const Tolerances& tol,
                                double* alias_bound = nullptr);

struct ValidationSample {
  Complex z;
  double closed_left = 0, closed_right = 0;    // |R A(z) - I|, |A(z) R - I|
  double laurent_left = 0, laurent_right = 0;
  double closed_vs_laurent = 0;
  double laurent_tail_bound = 0;
};

struct ValidationReport {
  std::vector<ValidationSample> samples;
  ResidualReport fundamental;
  double max_residual = 0.0;
};

ValidationReport validate_resolvent(const OperatorPencil& p, const BasicSolution& b,
                                    const LaurentExpansion& exp,
                                    const std::vector<Complex>& sample_z, const Tolerances& tol,
                                    Index interior_margin = 2);

}  // namespace pencilres
