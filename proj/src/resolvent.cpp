#include "pencilres/resolvent.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>

namespace pencilres {

namespace {

/// Growth trend of matrix powers |B^k|^(1/k), k = 1..probe; 0 for nilpotency.
double power_growth(const Mat& b, Index probe = 16) {
  std::vector<double> norms;
  Mat acc = b;
  norms.push_back(acc.norm());
  for (Index k = 1; k < probe; ++k) {
    acc = b * acc;
    norms.push_back(acc.norm());
  }
  auto [lo, hi] = default_fit_window(static_cast<Index>(norms.size()));
  return growth_rate(norms, lo, hi);
}

Annulus annulus_from_rates(double rate_neg, double rate_pos) {
  Annulus a;
  a.inner = rate_neg;
  a.outer = (rate_pos < 1e-13) ? kInf : 1.0 / rate_pos;
  if (!(a.inner < a.outer)) {
    // Conflicting fits; report the degenerate band rather than inventing one.
    a.outer = std::max(a.outer, std::nextafter(a.inner, kInf));
  }
  return a;
}

}  // namespace

OracleConfig OracleConfig::for_annulus(const Annulus& a, Index nodes) {
  a.validate();
  OracleConfig cfg;
  cfg.nodes = nodes;
  bool s_zero = a.inner == 0.0;
  bool r_inf = !(a.outer < kInf);
  if (s_zero && r_inf)
    cfg.radius = 1.0;
  else if (s_zero)
    cfg.radius = a.outer / 2.0;
  else if (r_inf)
    cfg.radius = 2.0 * a.inner;
  else
    cfg.radius = std::sqrt(a.inner * a.outer);
  return cfg;
}

BasicSolution solve_basic(const OperatorPencil& p, const SpectralDecomposition& dec,
                          const Tolerances& tol) {
  p.validate();
  Index n = p.dim();
  BasicSolution b;
  auto restricted = [&](const Mat& op, const Mat& basis, const Mat& target,
                        const char* what) -> Mat {
    if (basis.cols() == 0) return Mat::Zero(n, n);
    Mat cols = op * basis;  // n x k, full column rank for a valid decomposition
    double resid = 0.0;
    Mat w = solve(cols, target, tol, &resid);
    if (resid > tol.residual_abs * std::max(1.0, target.norm()))
      fail(Errc::not_invertible_on_subspace,
           std::string(what) + " restricted block is singular (residual " +
               std::to_string(resid) + ")");
    return basis * w;
  };
  b.r_m1 = restricted(p.a1, dec.domain_frame.l, dec.q, "A1 on X_s");
  b.r_0 = restricted(p.a0, dec.domain_frame.m, dec.qc, "A0 on X_r");

  // Six defining identities, by construction; verify and refuse quietly wrong output.
  Mat id = Mat::Identity(n, n);
  double scale = std::max({1.0, p.a0.norm(), p.a1.norm()});
  double worst = std::max({(b.r_m1 * p.a1 + b.r_0 * p.a0 - id).norm(),
                           (p.a1 * b.r_m1 + p.a0 * b.r_0 - id).norm(),
                           (b.r_m1 - dec.p * b.r_m1 * dec.q).norm(),
                           (b.r_0 - dec.pc * b.r_0 * dec.qc).norm()});
  if (worst > tol.residual_abs * scale)
    fail(Errc::not_invertible_on_subspace,
         "basic-solution identities violated (deviation " + std::to_string(worst) + ")");

  b.annulus = annulus_from_rates(power_growth(Mat(b.r_m1 * p.a0)),
                                 power_growth(Mat(b.r_0 * p.a1)));
  return b;
}

LaurentExpansion laurent_coeffs(const BasicSolution& b, const OperatorPencil& p, Index k_max,
                                Index l_max) {
  p.validate();
  if (k_max < 1 || l_max < 1) fail(Errc::invalid_params, "k_max, l_max >= 1 required");
  LaurentExpansion exp;
  exp.k_max = k_max;
  exp.l_max = l_max;
  exp.coeffs.assign(static_cast<size_t>(k_max + l_max + 1), Mat());
  exp.at(-1) = b.r_m1;
  exp.at(0) = b.r_0;
  Mat step_neg = -(b.r_m1 * p.a0);
  Mat step_pos = -(b.r_0 * p.a1);
  for (Index k = 2; k <= k_max; ++k) exp.at(-k) = step_neg * exp.at(-k + 1);
  for (Index l = 1; l <= l_max; ++l) exp.at(l) = step_pos * exp.at(l - 1);

  std::vector<double> neg_norms, pos_norms;
  for (Index k = 1; k <= k_max; ++k) neg_norms.push_back(exp.at(-k).norm());
  for (Index l = 1; l <= l_max; ++l) pos_norms.push_back(exp.at(l).norm());
  auto fit = [](const std::vector<double>& v, double fallback) {
    if (v.size() < 2) return fallback;
    auto [lo, hi] = default_fit_window(static_cast<Index>(v.size()));
    return growth_rate(v, lo, hi);
  };
  double outer_rate = (b.annulus.outer < kInf) ? 1.0 / b.annulus.outer : 0.0;
  exp.rate_neg = fit(neg_norms, b.annulus.inner);
  exp.rate_pos = fit(pos_norms, outer_rate);
  exp.annulus = annulus_from_rates(exp.rate_neg, exp.rate_pos);
  return exp;
}

Mat eval_laurent(const LaurentExpansion& exp, Complex z, double* tail_bound) {
  if (exp.coeffs.empty()) fail(Errc::invalid_shape, "empty expansion");
  if (!exp.annulus.contains(z))
    fail(Errc::outside_annulus, "|z| = " + std::to_string(std::abs(z)) + " outside (" +
                                    std::to_string(exp.annulus.inner) + ", " +
                                    std::to_string(exp.annulus.outer) + ")");
  Index n = exp.coeffs.front().rows();
  Mat acc = Mat::Zero(n, n);
  // Horner from both ends toward j = 0.
  for (Index j = exp.l_max; j >= 1; --j) acc = (acc + exp.at(j)) * z;
  acc += exp.at(0);
  Mat neg = Mat::Zero(n, n);
  Complex zi = 1.0 / z;
  for (Index k = exp.k_max; k >= 2; --k) neg = (neg + exp.at(-k)) * zi;
  acc += (neg + exp.at(-1)) * zi;

  if (tail_bound) {
    double a = std::abs(z);
    double t = 0.0;
    double qn = (a > 0) ? exp.rate_neg / a : 0.0;
    if (qn > 0 && qn < 1) t += exp.at(-exp.k_max).norm() * std::pow(a, -double(exp.k_max)) * qn / (1 - qn);
    double qp = a * exp.rate_pos;
    if (qp > 0 && qp < 1) t += exp.at(exp.l_max).norm() * std::pow(a, double(exp.l_max)) * qp / (1 - qp);
    *tail_bound = t;
  }
  return acc;
}

LaurentExpansion contour_oracle(const OperatorPencil& p, const OracleConfig& cfg, Index j_min,
                                Index j_max, const Tolerances& tol, double* alias_bound) {
  p.validate();
  cfg.validate();
  if (j_min > j_max) fail(Errc::invalid_params, "j_min > j_max");
  Index n = p.dim();
  Index m = cfg.nodes;
  LaurentExpansion exp;
  exp.k_max = std::max<Index>(1, -j_min);
  exp.l_max = std::max<Index>(1, j_max);
  exp.coeffs.assign(static_cast<size_t>(exp.k_max + exp.l_max + 1),
                    Mat::Zero(n, n));

  // Deterministic summation order keeps the reduction reproducible.
  for (Index k = 0; k < m; ++k) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    Complex zk = cfg.radius * Complex(std::cos(theta), std::sin(theta));
    Eigen::FullPivLU<Mat> lu(eval_pencil(p, zk));
    lu.setThreshold(tol.rank_rel);
    if (!lu.isInvertible())
      fail(Errc::singular_node,
           "A(z) singular at node " + std::to_string(k) + "; move the contour radius");
    Mat rz = lu.solve(Mat::Identity(n, n));
    Complex zk_inv = 1.0 / zk;
    Complex factor = std::pow(zk, Complex(static_cast<double>(-j_min), 0.0));
    for (Index j = j_min; j <= j_max; ++j) {
      exp.at(j) += rz * factor;
      factor *= zk_inv;
    }
  }
  for (Index j = j_min; j <= j_max; ++j) exp.at(j) /= static_cast<double>(m);

  std::vector<double> neg_norms, pos_norms;
  for (Index k = 1; k <= exp.k_max; ++k) neg_norms.push_back(exp.at(-k).norm());
  for (Index l = 1; l <= exp.l_max; ++l) pos_norms.push_back(exp.at(l).norm());
  auto fit = [](const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    auto [lo, hi] = default_fit_window(static_cast<Index>(v.size()));
    return growth_rate(v, lo, hi);
  };
  exp.rate_neg = fit(neg_norms);
  exp.rate_pos = fit(pos_norms);
  exp.annulus = annulus_from_rates(exp.rate_neg, exp.rate_pos);

  if (alias_bound) {
    // Aliases fold in from j +/- nodes; the geometric fits give the estimate.
    double qn = exp.rate_neg / cfg.radius;
    double qp = exp.rate_pos * cfg.radius;
    double worst = 0.0;
    for (Index j = j_min; j <= j_max; ++j) {
      double t = 0.0;
      if (qn > 0 && qn < 1) t += std::pow(qn, static_cast<double>(m - j));
      if (qp > 0 && qp < 1) t += std::pow(qp, static_cast<double>(m + j));
      worst = std::max(worst, t);
    }
    *alias_bound = worst;
  }
  return exp;
}

ValidationReport validate_resolvent(const OperatorPencil& p, const BasicSolution& b,
                                    const LaurentExpansion& exp,
                                    const std::vector<Complex>& sample_z, const Tolerances& tol,
                                    Index interior_margin) {
  p.validate();
  Index n = p.dim();
  Index w = p.interior_dim(interior_margin);
  Mat id = Mat::Identity(n, n);
  ValidationReport rep;
  for (Complex z : sample_z) {
    if (!exp.annulus.contains(z))
      fail(Errc::outside_annulus, "sample z outside the expansion annulus");
    ValidationSample s;
    s.z = z;
    Mat az = eval_pencil(p, z);
    Mat rc = closed_form_resolvent(b, p, z, tol);
    Mat rl = eval_laurent(exp, z, &s.laurent_tail_bound);
    s.closed_left = (rc * az - id).topLeftCorner(w, w).norm();
    s.closed_right = (az * rc - id).topLeftCorner(w, w).norm();
    s.laurent_left = (rl * az - id).topLeftCorner(w, w).norm();
    s.laurent_right = (az * rl - id).topLeftCorner(w, w).norm();
    s.closed_vs_laurent = (rc - rl).topLeftCorner(w, w).norm();
    rep.max_residual = std::max({rep.max_residual, s.closed_left, s.closed_right,
                                 s.laurent_left, s.laurent_right});
    rep.samples.push_back(s);
  }
  rep.fundamental = fundamental_residuals(p, exp, interior_margin);
  rep.max_residual =
      std::max({rep.max_residual, rep.fundamental.max_left, rep.fundamental.max_right});
  return rep;
}

}  // namespace pencilres
