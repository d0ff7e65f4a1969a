#include "pencilres/projections.hpp"

#include <Eigen/LU>

namespace pencilres {

namespace {

/// Inverts E = [L | M] and slices E^-1 into the F/G blocks.  Throws
/// NotComplementary when the dimensions do not fill the space or the frame is
/// numerically singular.
FrameAssembly build_frame(const Mat& l, const Mat& m, const Tolerances& tol,
                          const char* context) {
  Index n = l.rows();
  Index k1 = l.cols(), k2 = m.cols();
  if (m.rows() != n) fail(Errc::invalid_shape, "frame blocks have mismatched row counts");
  if (k1 + k2 != n)
    fail(Errc::not_complementary, std::string(context) + ": dims " + std::to_string(k1) + "+" +
                                      std::to_string(k2) + " != ambient " + std::to_string(n));
  FrameAssembly fr;
  fr.l = l;
  fr.m = m;
  fr.e.resize(n, n);
  if (k1 > 0) fr.e.leftCols(k1) = l;
  if (k2 > 0) fr.e.rightCols(k2) = m;
  Eigen::FullPivLU<Mat> lu(fr.e);
  lu.setThreshold(tol.rank_rel);
  if (!lu.isInvertible())
    fail(Errc::not_complementary, std::string(context) + ": frame [L|M] is singular");
  Mat inv = lu.inverse();
  fr.f = inv.topRows(k1);
  fr.g = inv.bottomRows(k2);
  return fr;
}

}  // namespace

double Theorem2Report::max_deviation() const {
  double m = 0;
  for (double v : {idem_p, idem_q, compl_p, compl_q, split_a0, split_a1, q_a1_a1_p, qc_a0_a0_pc,
                   q_a0_a0_p, qc_a1_a1_pc})
    m = std::max(m, v);
  return m;
}

DomainAssembly assemble_domain(const Subspace& xs, const Subspace& xr, const Tolerances& tol) {
  if (xs.ambient_dim != xr.ambient_dim) fail(Errc::invalid_shape, "ambient dims differ");
  Index n = xs.ambient_dim;
  if (xs.dim() > 0 && xr.dim() > 0) {
    double gap = min_principal_angle(xs, xr);
    if (gap <= tol.angle_tol)
      fail(Errc::not_complementary, "xs and xr intersect nontrivially (angle " +
                                        std::to_string(gap) + ")");
  }
  DomainAssembly out;
  out.frame = build_frame(xs.basis, xr.basis, tol, "domain");
  out.p = (xs.dim() > 0) ? Mat(out.frame.l * out.frame.f) : Mat(Mat::Zero(n, n));
  out.pc = Mat::Identity(n, n) - out.p;
  return out;
}

RangeAssembly assemble_range(const OperatorPencil& p, const Subspace& xs, const Subspace& xr,
                             const Tolerances& tol) {
  p.validate();
  Index n = p.dim();
  if (xs.ambient_dim != n) fail(Errc::invalid_shape, "subspace ambient dim != pencil dim");
  RangeAssembly out;
  Mat ys_cols = p.a1 * xs.basis;
  Mat yr_cols = p.a0 * xr.basis;
  out.frame = build_frame(ys_cols, yr_cols, tol, "range");
  out.q = (ys_cols.cols() > 0) ? Mat(out.frame.l * out.frame.f) : Mat(Mat::Zero(n, n));
  out.qc = Mat::Identity(n, n) - out.q;
  out.ys = Subspace::from_columns(ys_cols, tol);
  out.yr = Subspace::from_columns(yr_cols, tol);
  if (out.ys.dim() != xs.dim() || out.yr.dim() != xr.dim())
    fail(Errc::not_complementary, "A1|xs or A0|xr drops rank");
  return out;
}

SpectralDecomposition make_decomposition(const OperatorPencil& p, const Subspace& xs,
                                         const Subspace& xr, const Tolerances& tol) {
  DomainAssembly dom = assemble_domain(xs, xr, tol);
  RangeAssembly rng = assemble_range(p, xs, xr, tol);
  SpectralDecomposition dec;
  dec.p = dom.p;
  dec.pc = dom.pc;
  dec.q = rng.q;
  dec.qc = rng.qc;
  dec.xs = xs;
  dec.xr = xr;
  dec.ys = rng.ys;
  dec.yr = rng.yr;
  dec.domain_frame = dom.frame;
  dec.range_frame = rng.frame;
  return dec;
}

Theorem2Report verify_theorem2(const OperatorPencil& p, const SpectralDecomposition& dec,
                               const Tolerances&) {
  p.validate();
  Index n = p.dim();
  Mat id = Mat::Identity(n, n);
  Theorem2Report r;
  r.idem_p = (dec.p * dec.p - dec.p).norm();
  r.idem_q = (dec.q * dec.q - dec.q).norm();
  r.compl_p = (dec.p + dec.pc - id).norm();
  r.compl_q = (dec.q + dec.qc - id).norm();
  r.split_a0 = (p.a0 - dec.q * p.a0 * dec.p - dec.qc * p.a0 * dec.pc).norm();
  r.split_a1 = (p.a1 - dec.q * p.a1 * dec.p - dec.qc * p.a1 * dec.pc).norm();
  r.q_a1_a1_p = (dec.q * p.a1 - p.a1 * dec.p).norm();
  r.qc_a0_a0_pc = (dec.qc * p.a0 - p.a0 * dec.pc).norm();
  r.q_a0_a0_p = (dec.q * p.a0 - p.a0 * dec.p).norm();
  r.qc_a1_a1_pc = (dec.qc * p.a1 - p.a1 * dec.pc).norm();
  return r;
}

SeparatedReport separated_operators(const OperatorPencil& p, const SpectralDecomposition& dec,
                                    const BasicSolution& b, const Tolerances&) {
  p.validate();
  if (b.r_m1.rows() != p.dim()) fail(Errc::invalid_shape, "basic solution dim mismatch");
  SeparatedReport rep;
  rep.dim_s = dec.xs.dim();
  rep.dim_r = dec.xr.dim();
  const Mat& l = dec.domain_frame.l;
  const Mat& m = dec.domain_frame.m;
  const Mat& fy = dec.range_frame.f;
  const Mat& gy = dec.range_frame.g;
  // Empty systems are vacuously satisfied (residual 0 on a 0x0 block).
  if (rep.dim_s > 0) {
    Mat a1_s = fy * (p.a1 * l);
    Mat n_m1 = dec.domain_frame.f * (b.r_m1 * (p.a1 * l));  // F R_-1 columns of Y_s frame
    Mat id = Mat::Identity(rep.dim_s, rep.dim_s);
    rep.left_s = (n_m1 * a1_s - id).norm();
    rep.right_s = (a1_s * n_m1 - id).norm();
  }
  if (rep.dim_r > 0) {
    Mat a0_r = gy * (p.a0 * m);
    Mat n_0 = dec.domain_frame.g * (b.r_0 * (p.a0 * m));
    Mat id = Mat::Identity(rep.dim_r, rep.dim_r);
    rep.left_r = (n_0 * a0_r - id).norm();
    rep.right_r = (a0_r * n_0 - id).norm();
  }
  return rep;
}

}  // namespace pencilres
