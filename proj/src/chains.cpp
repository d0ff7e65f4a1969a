#include "pencilres/chains.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

namespace pencilres {

namespace {

Eigen::BDCSVD<Mat> full_svd(const Mat& a) {
  return Eigen::BDCSVD<Mat>(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

/// Stacked chain system over (v_1, ..., v_L): block row i enforces
/// M0 v_i + M1 v_{i+1} = 0.  (L-1)n x Ln.
Mat stacked_chain_system(const Mat& m0, const Mat& m1, Index length) {
  Index n = m0.rows();
  Mat s = Mat::Zero((length - 1) * n, length * n);
  for (Index i = 0; i + 1 < length; ++i) {
    s.block(i * n, i * n, n, n) = m0;
    s.block(i * n, (i + 1) * n, n, n) = m1;
  }
  return s;
}

std::vector<double> block_norms(const Vec& stacked, Index n, Index length) {
  std::vector<double> norms;
  norms.reserve(static_cast<size_t>(length));
  for (Index i = 0; i < length; ++i) norms.push_back(stacked.segment(i * n, n).norm());
  return norms;
}

double chain_rate(const std::vector<double>& norms) {
  auto [lo, hi] = default_fit_window(static_cast<Index>(norms.size()));
  return growth_rate(norms, lo, hi);
}

struct ChainSolve {
  bool feasible = false;
  std::vector<Vec> vectors;
};

/// Minimum-energy chain of the requested length with v_1 = g.  Feasibility is
/// judged from the worst per-equation residual of the least-squares solution.
ChainSolve solve_chain(const Mat& m0, const Mat& m1, const Vec& g, Index length,
                       const Tolerances& tol) {
  Index n = m0.rows();
  ChainSolve out;
  out.vectors.push_back(g);
  if (length == 1) {
    out.feasible = true;
    return out;
  }
  Mat sys = Mat::Zero((length - 1) * n, (length - 1) * n);
  Vec rhs = Vec::Zero((length - 1) * n);
  sys.topLeftCorner(n, n) = m1;
  rhs.head(n) = -m0 * g;
  for (Index i = 1; i + 1 < length; ++i) {
    sys.block(i * n, (i - 1) * n, n, n) = m0;
    sys.block(i * n, i * n, n, n) = m1;
  }
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(sys);
  cod.setThreshold(tol.rank_rel);
  Vec u = cod.solve(rhs);
  double scale = std::max(1.0, g.norm());
  out.feasible = true;
  for (Index i = 0; i + 1 < length; ++i) {
    Vec prev = (i == 0) ? g : Vec(u.segment((i - 1) * n, n));
    Vec next = u.segment(i * n, n);
    double resid = (m0 * prev + m1 * next).norm();
    double local = std::max(scale, prev.norm());
    if (resid > tol.residual_abs * local) {
      out.feasible = false;
      break;
    }
  }
  if (out.feasible)
    for (Index i = 0; i + 1 < length; ++i) out.vectors.emplace_back(u.segment(i * n, n));
  return out;
}

}  // namespace

ChainFamily chain_family(const OperatorPencil& p, ChainKind kind, Index m_max,
                         const Tolerances& tol) {
  p.validate();
  if (m_max < 1) fail(Errc::invalid_params, "chain_family: m_max >= 1 required");
  if (kind == ChainKind::U_rg || kind == ChainKind::V_rg) {
    ChainKind base = (kind == ChainKind::U_rg) ? ChainKind::U : ChainKind::V;
    ChainFamily fam = chain_family(flip_pencil(p), base, m_max, tol);
    fam.kind = kind;
    return fam;
  }
  Index n = p.dim();
  ChainFamily fam{kind, {}};
  fam.spaces.reserve(static_cast<size_t>(m_max + 1));
  switch (kind) {
    case ChainKind::S: {
      Subspace s = Subspace::full(n, tol.rank_rel);
      fam.spaces.push_back(s);
      for (Index m = 1; m <= m_max; ++m) {
        s = preimage(p.a1, image(p.a0, s, tol), tol);
        fam.spaces.push_back(s);
      }
      break;
    }
    case ChainKind::T: {
      Subspace s = Subspace::full(n, tol.rank_rel);  // S_{m-1} alongside
      fam.spaces.push_back(Subspace::full(n, tol.rank_rel));
      for (Index m = 1; m <= m_max; ++m) {
        fam.spaces.push_back(image(p.a0, s, tol));
        s = preimage(p.a1, image(p.a0, s, tol), tol);
      }
      break;
    }
    case ChainKind::U:
    case ChainKind::U_sg: {
      Subspace u = Subspace::zero(n, tol.rank_rel);
      fam.spaces.push_back(u);
      for (Index m = 1; m <= m_max; ++m) {
        u = preimage(p.a0, image(p.a1, u, tol), tol);
        fam.spaces.push_back(u);
      }
      break;
    }
    case ChainKind::V:
    case ChainKind::V_sg: {
      Subspace u = Subspace::zero(n, tol.rank_rel);
      fam.spaces.push_back(Subspace::zero(n, tol.rank_rel));
      for (Index m = 1; m <= m_max; ++m) {
        u = preimage(p.a0, image(p.a1, u, tol), tol);
        fam.spaces.push_back(image(p.a1, u, tol));
      }
      break;
    }
    default:
      fail(Errc::internal, "unreachable chain kind");
  }
  return fam;
}

AscentDescentReport ascent_descent(const OperatorPencil& p, Index m_max, const Tolerances& tol,
                                   Index interior_margin) {
  p.validate();
  if (m_max < 1) fail(Errc::invalid_params, "ascent_descent: m_max >= 1 required");
  Index n = p.dim();
  bool windowed = p.provenance && p.provenance->truncated;

  Subspace ker = nullspace(p.a0, tol);
  Subspace t1 = range(p.a0, tol);
  ChainFamily s_fam = chain_family(p, ChainKind::S, m_max, tol);
  ChainFamily v_fam = chain_family(p, ChainKind::V, m_max, tol);

  AscentDescentReport rep;
  rep.probe_limit = m_max;
  rep.interior_margin = windowed ? interior_margin : 0;
  for (Index m = 0; m <= m_max; ++m) {
    Subspace window = windowed ? Subspace::coordinate_window(n, n - m - interior_margin)
                               : Subspace::full(n);
    Subspace ker_cap_s = intersect(ker, s_fam.spaces[static_cast<size_t>(m)], tol);
    if (windowed) ker_cap_s = intersect(ker_cap_s, window, tol);
    bool ascent_ok = ker_cap_s.dim() == 0;

    Subspace sum = subspace_sum(t1, v_fam.spaces[static_cast<size_t>(m)], tol);
    bool sum_ok = contains(sum, window, tol);
    bool direct_ok =
        sum_ok && intersect(t1, v_fam.spaces[static_cast<size_t>(m)], tol).dim() == 0;

    rep.evidence.push_back({m, ker_cap_s.dim(), ascent_ok, sum.dim(), sum_ok, direct_ok,
                            window.dim()});
    if (ascent_ok && !rep.ascent) rep.ascent = m;
    if (sum_ok && !rep.descent) rep.descent = m;
    if (direct_ok && !rep.descent_direct) rep.descent_direct = m;
  }
  return rep;
}

JordanChainRecord extend_chain(const OperatorPencil& p, JordanKind kind, const Vec& generator,
                               Index length, const Tolerances& tol) {
  p.validate();
  if (generator.size() != p.dim()) fail(Errc::invalid_shape, "generator dimension mismatch");
  if (generator.norm() == 0.0) fail(Errc::invalid_params, "generator must be nonzero");
  if (length < 1) fail(Errc::invalid_params, "length >= 1 required");
  const Mat& m0 = (kind == JordanKind::singular) ? p.a0 : p.a1;
  const Mat& m1 = (kind == JordanKind::singular) ? p.a1 : p.a0;

  JordanChainRecord rec;
  rec.kind = kind;
  rec.generator = generator;

  ChainSolve best = solve_chain(m0, m1, generator, length, tol);
  if (!best.feasible) {
    // Longest feasible prefix by bisection; feasibility is monotone in length.
    Index lo = 1, hi = length - 1;  // length 1 (the bare generator) always works
    while (lo < hi) {
      Index mid = (lo + hi + 1) / 2;
      if (solve_chain(m0, m1, generator, mid, tol).feasible)
        lo = mid;
      else
        hi = mid - 1;
    }
    best = solve_chain(m0, m1, generator, lo, tol);
    rec.blocked_at = lo + 1;
  }
  rec.vectors = std::move(best.vectors);

  std::vector<double> norms;
  norms.reserve(rec.vectors.size());
  for (const auto& v : rec.vectors) norms.push_back(v.norm());
  rec.rate = (norms.size() >= 2) ? chain_rate(norms) : 0.0;
  return rec;
}

Subspace generating_subspace(const OperatorPencil& p, JordanKind kind, Index depth,
                             double rate_threshold, const Tolerances& tol) {
  p.validate();
  if (depth < 4) fail(Errc::invalid_params, "probe depth >= 4 required");
  if (!(rate_threshold > 0.0)) fail(Errc::invalid_params, "rate threshold must be positive");
  if (kind == JordanKind::regular)
    return generating_subspace(flip_pencil(p), JordanKind::singular, depth, rate_threshold, tol);

  Index n = p.dim();
  Index L = depth;
  Mat sys = stacked_chain_system(p.a0, p.a1, L);

  auto svd = full_svd(sys);
  const auto& sv = svd.singularValues();
  double cutoff = tol.rank_rel * (sv.size() ? sv(0) : 0.0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  Index d = L * n - rank;
  if (d == 0) return Subspace::zero(n, tol.rank_rel);
  Mat null_basis = svd.matrixV().rightCols(d);  // Ln x d

  // Generators reachable by some length-L chain: first block of the nullspace.
  Mat b1 = null_basis.topRows(n);
  Eigen::JacobiSVD<Mat> b1_svd(b1, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& b1s = b1_svd.singularValues();
  double b1cut = tol.rank_rel * (b1s.size() ? b1s(0) : 0.0);
  Index g = 0;
  while (g < b1s.size() && b1s(g) > b1cut) ++g;
  if (g == 0) return Subspace::zero(n, tol.rank_rel);
  Mat gen_basis = b1_svd.matrixU().leftCols(g);  // n x g
  Mat z = b1_svd.matrixV().rightCols(d - g);     // chains with zero generator

  // Rate weighting: block i scaled by rate_threshold^-i so that chains slower
  // than the threshold have bounded scaled tails and faster ones blow up.
  Mat weighted = null_basis;
  double w = 1.0;
  for (Index i = 0; i < L; ++i) {
    if (i > 0) w /= rate_threshold;
    weighted.middleRows(i * n, n) *= w;
  }

  // Per generator direction, the minimum weighted-energy chain; the minimizer
  // is linear in the generator, so a basis computation suffices.
  Eigen::CompleteOrthogonalDecomposition<Mat> b1_cod(b1);
  b1_cod.setThreshold(tol.rank_rel);
  Mat c = b1_cod.solve(gen_basis);  // d x g
  if (z.cols() > 0) {
    Mat wz = weighted * z;
    Eigen::CompleteOrthogonalDecomposition<Mat> wz_cod(wz);
    wz_cod.setThreshold(tol.rank_rel);
    c += z * (-wz_cod.solve(weighted * c));
  }

  Mat theta = weighted * c;  // Ln x g scaled chains
  Mat form = theta.adjoint() * theta;
  Eigen::SelfAdjointEigenSolver<Mat> es(form);
  if (es.info() != Eigen::Success) fail(Errc::internal, "tail-form eigendecomposition failed");

  // The eigenbasis of the tail form separates slow from fast mixtures; keep
  // the directions whose measured chain rate clears the threshold.
  std::vector<Index> kept;
  for (Index k = 0; k < g; ++k) {
    Vec a = es.eigenvectors().col(k);
    Vec chain = null_basis * (c * a);
    double gen_norm = chain.head(n).norm();
    if (gen_norm < tol.rank_rel) continue;
    auto norms = block_norms(chain, n, L);
    double rate = chain_rate(norms);
    if (rate <= rate_threshold) kept.push_back(k);
  }
  if (kept.empty()) return Subspace::zero(n, tol.rank_rel);
  Mat out(n, static_cast<Index>(kept.size()));
  for (size_t i = 0; i < kept.size(); ++i)
    out.col(static_cast<Index>(i)) = gen_basis * es.eigenvectors().col(kept[i]);
  return Subspace::from_columns(out, tol);
}

InclusionCheck verify_generating_inclusion(const Subspace& xs, const Mat& proj,
                                           const Tolerances& tol) {
  double idem = (proj * proj - proj).norm();
  if (idem > tol.residual_abs * std::max(1.0, proj.norm()))
    fail(Errc::invalid_params, "projection is not idempotent within tolerance");
  Subspace rng = range(proj, tol);
  if (rng.ambient_dim != xs.ambient_dim) fail(Errc::invalid_shape, "ambient dims differ");
  double a1 = containment_angle(xs, rng);
  double a2 = containment_angle(rng, xs);
  double angle = std::max(a1, a2);
  return {xs.dim() == rng.dim() && angle <= tol.angle_tol, angle};
}

}  // namespace pencilres
