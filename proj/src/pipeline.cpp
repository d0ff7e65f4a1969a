#include "pencilres/pipeline.hpp"

namespace pencilres {

double singular_rate_threshold(const Annulus& a) {
  a.validate();
  if (a.outer < kInf) return a.inner + 0.1 * (a.outer - a.inner);
  if (a.inner > 0.0) return 1.5 * a.inner;
  return 1.0;
}

double regular_rate_threshold(const Annulus& a) {
  a.validate();
  Annulus flipped;
  flipped.inner = (a.outer < kInf) ? 1.0 / a.outer : 0.0;
  flipped.outer = (a.inner > 0.0) ? 1.0 / a.inner : kInf;
  return singular_rate_threshold(flipped);
}

PipelineResult run_pipeline(const OperatorPencil& p, const Annulus& target,
                            const PipelineOptions& opt) {
  p.validate();
  target.validate();
  PipelineResult res;
  res.pencil = p;
  res.target = target;
  res.rho_singular = opt.rho_singular.value_or(singular_rate_threshold(target));
  res.rho_regular = opt.rho_regular.value_or(regular_rate_threshold(target));
  res.xs = generating_subspace(p, JordanKind::singular, opt.depth, res.rho_singular, opt.tol);
  res.xr = generating_subspace(p, JordanKind::regular, opt.depth, res.rho_regular, opt.tol);
  res.dec = make_decomposition(p, res.xs, res.xr, opt.tol);
  res.theorem2 = verify_theorem2(p, res.dec, opt.tol);
  res.basic = solve_basic(p, res.dec, opt.tol);
  res.separated = separated_operators(p, res.dec, res.basic, opt.tol);
  res.laurent = laurent_coeffs(res.basic, p, opt.k_max, opt.l_max);
  return res;
}

}  // namespace pencilres
