#pragma once

#include "pencilres/resolvent.hpp"

namespace pencilres {

/// Rate threshold for accepting singular chains when targeting (s, r):
/// slightly above s, well below the outer spectral ring.
double singular_rate_threshold(const Annulus& a);

/// Threshold for the flipped pencil used to extract X_r; the target annulus
/// transforms to (1/r, 1/s).
double regular_rate_threshold(const Annulus& a);

struct PipelineOptions {
  Index depth = 24;
  Index k_max = 20;
  Index l_max = 20;
  std::optional<double> rho_singular;  // override the annulus-derived default
  std::optional<double> rho_regular;
  Tolerances tol;
};

/// Everything the chain-based solution process produces for one annulus.
struct PipelineResult {
  OperatorPencil pencil;
  Annulus target;
  double rho_singular = 0, rho_regular = 0;
  Subspace xs, xr;
  SpectralDecomposition dec;
  Theorem2Report theorem2;
  BasicSolution basic;
  SeparatedReport separated;
  LaurentExpansion laurent;
};

/// Chains -> generating subspaces -> frame projections -> basic solution ->
/// Laurent coefficients, targeting the given annulus.
PipelineResult run_pipeline(const OperatorPencil& p, const Annulus& target,
                            const PipelineOptions& opt = {});

}  // namespace pencilres
