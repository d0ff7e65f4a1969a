#include "pencilres/zoo.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pencilres {

const char* family_name(Family f) {
  switch (f) {
    case Family::example1: return "example1";
    case Family::example2: return "example2";
    case Family::example3: return "example3";
    case Family::jordan_block: return "jordan_block";
    case Family::diag_split: return "diag_split";
    case Family::random_regular: return "random_regular";
  }
  return "?";
}

std::optional<Family> family_from_name(const std::string& name) {
  for (Family f : {Family::example1, Family::example2, Family::example3, Family::jordan_block,
                   Family::diag_split, Family::random_regular})
    if (name == family_name(f)) return f;
  return std::nullopt;
}

Complex SequenceRule::term(Index n) const {
  switch (kind) {
    case Kind::factorial: {
      double v = 1.0;
      for (Index i = 2; i <= n; ++i) v /= static_cast<double>(i);
      return Complex(v, 0.0);
    }
    case Kind::gauss:
      return Complex(std::pow(base, static_cast<double>(n) * static_cast<double>(n)), 0.0);
    case Kind::geometric:
      return Complex(base * std::pow(ratio, static_cast<double>(n)), 0.0);
    case Kind::explicit_values:
      if (n < 1 || n > static_cast<Index>(values.size()))
        fail(Errc::invalid_params, "explicit sequence too short");
      return values[static_cast<size_t>(n - 1)];
  }
  fail(Errc::internal, "unreachable");
}

std::string SequenceRule::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::factorial: os << "1/n!"; break;
    case Kind::gauss: os << base << "^(n^2)"; break;
    case Kind::geometric: os << base << "*" << ratio << "^n"; break;
    case Kind::explicit_values: os << "explicit[" << values.size() << "]"; break;
  }
  return os.str();
}

namespace {

/// The decay hypothesis |a_n|^(1/n) -> 0 holds for factorial and gauss rules.
/// Geometric decay is admitted with a warning; explicit values only behind
/// the unchecked flag.
std::string admit_rule(const SequenceRule& rule) {
  switch (rule.kind) {
    case SequenceRule::Kind::factorial:
      return {};
    case SequenceRule::Kind::gauss:
      if (!(std::abs(rule.base) < 1.0))
        fail(Errc::invalid_params, "gauss rule needs |c| < 1");
      return {};
    case SequenceRule::Kind::geometric:
      return "geometric entry decay: |a_n|^(1/n) -> " + std::to_string(rule.ratio) +
             ", the super-exponential decay hypothesis fails";
    case SequenceRule::Kind::explicit_values:
      if (!rule.unchecked)
        fail(Errc::invalid_params, "explicit sequence values require the unchecked flag");
      return "explicit sequence admitted unchecked";
  }
  fail(Errc::internal, "unreachable");
}

Provenance make_provenance(const FamilySpec& spec, bool truncated, std::string warning) {
  Provenance pv;
  pv.family = family_name(spec.family);
  pv.truncation = spec.truncation;
  pv.truncated = truncated;
  pv.warning = std::move(warning);
  pv.params["rule"] = spec.rule.describe();
  switch (spec.family) {
    case Family::example3: {
      std::ostringstream os;
      os << spec.beta.real() << (spec.beta.imag() < 0 ? "-" : "+")
         << std::abs(spec.beta.imag()) << "i";
      pv.params["beta"] = os.str();
      break;
    }
    case Family::jordan_block:
      pv.params["m"] = std::to_string(spec.pole_order);
      break;
    case Family::diag_split:
      pv.params["regular_dim"] = std::to_string(spec.regular_dim);
      pv.params["singular_dim"] = std::to_string(spec.singular_dim);
      break;
    case Family::random_regular:
      pv.params["seed"] = std::to_string(spec.seed);
      pv.params["contour_radius"] = std::to_string(spec.contour_radius);
      break;
    default:
      break;
  }
  return pv;
}

OperatorPencil build_shift_family(const FamilySpec& spec, bool super /*else sub*/) {
  Index n = spec.truncation;
  if (n < 4) fail(Errc::invalid_params, "truncation >= 4 required");
  std::string warning = admit_rule(spec.rule);
  Mat a0 = Mat::Zero(n, n);
  for (Index j = 0; j + 1 < n; ++j) {
    Complex t = spec.rule.term(j + 1);
    if (super)
      a0(j, j + 1) = t;
    else
      a0(j + 1, j) = t;
  }
  OperatorPencil p{a0, Mat::Identity(n, n), make_provenance(spec, true, warning)};
  p.validate();
  return p;
}

OperatorPencil build_example3(const FamilySpec& spec) {
  Index n = spec.truncation;
  if (n < 6 || n % 2 != 0)
    fail(Errc::invalid_params, "example3 needs an even truncation >= 6");
  if (spec.beta == Complex(0.0, 0.0)) fail(Errc::invalid_params, "example3 needs beta != 0");
  std::string warning = admit_rule(spec.rule);
  Mat a0 = Mat::Zero(n, n);
  Mat a1 = Mat::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    Index one_based = j + 1;
    if (one_based == 2)
      a0(j, j) = spec.beta;
    else if (one_based % 2 == 1)
      a0(j, j) = 1.0;
    if (one_based % 2 == 0) a1(j, j) = 1.0;
    if (j + 1 < n) a0(j, j + 1) = spec.rule.term(one_based);
  }
  OperatorPencil p{a0, a1, make_provenance(spec, true, warning)};
  p.validate();
  return p;
}

OperatorPencil build_jordan(const FamilySpec& spec) {
  Index m = spec.pole_order;
  if (m < 1) fail(Errc::invalid_params, "jordan_block needs pole order >= 1");
  Mat a0 = Mat::Zero(m, m);
  for (Index j = 0; j + 1 < m; ++j) a0(j, j + 1) = 1.0;
  return OperatorPencil{a0, Mat::Identity(m, m), make_provenance(spec, false, {})};
}

OperatorPencil build_diag_split(const FamilySpec& spec) {
  Index k0 = spec.regular_dim, k1 = spec.singular_dim;
  if (k0 < 1 || k1 < 1) fail(Errc::invalid_params, "diag_split blocks must be nonempty");
  Index n = k0 + k1;
  Mat a0 = Mat::Zero(n, n), a1 = Mat::Zero(n, n);
  a0.topLeftCorner(k0, k0) = Mat::Identity(k0, k0);
  a1.bottomRightCorner(k1, k1) = Mat::Identity(k1, k1);
  return OperatorPencil{a0, a1, make_provenance(spec, false, {})};
}

}  // namespace

OperatorPencil build(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::example1: return build_shift_family(spec, true);
    case Family::example2: return build_shift_family(spec, false);
    case Family::example3: return build_example3(spec);
    case Family::jordan_block: return build_jordan(spec);
    case Family::diag_split: return build_diag_split(spec);
    case Family::random_regular: {
      OperatorPencil p = random_regular(spec.dim, spec.seed, spec.contour_radius);
      p.provenance = make_provenance(spec, false, {});
      return p;
    }
  }
  fail(Errc::internal, "unreachable");
}

Annulus family_annulus(const FamilySpec& spec, Region region) {
  switch (spec.family) {
    case Family::example3:
      if (region == Region::near_zero) return Annulus{0.0, std::abs(spec.beta)};
      return Annulus{std::abs(spec.beta), kInf};
    case Family::random_regular:
      return Annulus{spec.contour_radius / 1.25, spec.contour_radius * 1.25};
    default:
      return Annulus{0.0, kInf};
  }
}

ReferenceBundle analytic_reference(const FamilySpec& spec, Region region) {
  ReferenceBundle ref;
  switch (spec.family) {
    case Family::random_regular:
      fail(Errc::no_reference, "random_regular has no closed-form reference");
    case Family::example1:
    case Family::example2:
    case Family::jordan_block: {
      Index n = build(spec).dim();
      ref.p = Mat::Identity(n, n);
      ref.q = Mat::Identity(n, n);
      ref.pc = Mat::Zero(n, n);
      ref.qc = Mat::Zero(n, n);
      ref.r_m1 = Mat::Identity(n, n);
      ref.r_0 = Mat::Zero(n, n);
      ref.annulus = Annulus{0.0, kInf};
      return ref;
    }
    case Family::diag_split: {
      Index k0 = spec.regular_dim, k1 = spec.singular_dim, n = k0 + k1;
      Mat sing = Mat::Zero(n, n);
      sing.bottomRightCorner(k1, k1) = Mat::Identity(k1, k1);
      ref.p = sing;
      ref.q = sing;
      ref.pc = Mat::Identity(n, n) - sing;
      ref.qc = ref.pc;
      ref.r_m1 = sing;
      ref.r_0 = ref.pc;
      ref.annulus = Annulus{0.0, kInf};
      return ref;
    }
    case Family::example3:
      break;
  }

  // Example 3.  alpha(j) is 1-based; prod(a, b) = alpha_a ... alpha_b.
  Index n = spec.truncation;
  if (n < 6 || n % 2 != 0) fail(Errc::invalid_params, "example3 needs an even truncation >= 6");
  Complex beta = spec.beta;
  auto alpha = [&](Index j) { return spec.rule.term(j); };
  auto prod = [&](Index a, Index b) {
    Complex v = 1.0;
    for (Index j = a; j <= b; ++j) v *= alpha(j);
    return v;
  };
  auto sign = [](Index k) { return (k % 2 == 0) ? 1.0 : -1.0; };
  Mat zero = Mat::Zero(n, n);
  Mat id = Mat::Identity(n, n);
  ref.p = zero;
  ref.q = zero;
  ref.r_m1 = zero;
  ref.r_0 = zero;

  if (region == Region::near_zero) {
    ref.annulus = Annulus{0.0, std::abs(beta)};
    auto p_col = [&](Index m) {  // generator of the length-m terminating chain
      Vec v = Vec::Zero(n);
      Complex bm = std::pow(beta, static_cast<double>(m));
      v(0) = sign(m) * prod(1, 2 * m + 1) / bm;
      v(1) = -sign(m) * prod(2, 2 * m + 1) / bm;
      v(2 * m) = -alpha(2 * m + 1);
      v(2 * m + 1) = 1.0;
      return v;
    };
    for (Index m = 1; 2 * m + 2 <= n; ++m) {
      Vec pm = p_col(m);
      ref.p.col(2 * m + 1) = pm;
      ref.r_m1.col(2 * m + 1) = pm;
      if (2 * m + 3 <= n) ref.r_m1.col(2 * m + 2) = -alpha(2 * m + 2) * pm;
      Vec qm = Vec::Zero(n);
      qm(1) = -sign(m) * prod(2, 2 * m + 1) / std::pow(beta, static_cast<double>(m));
      qm(2 * m + 1) = 1.0;
      ref.q.col(2 * m + 1) = qm;
      if (2 * m + 3 <= n) ref.q.col(2 * m + 2) = -alpha(2 * m + 2) * qm;
    }
    ref.r_0(0, 0) = 1.0;
    for (Index m = 1; 2 * m <= n; ++m) {
      Complex bm = std::pow(beta, static_cast<double>(m));
      ref.r_0(0, 2 * m - 1) = sign(m) * prod(1, 2 * m - 1) / bm;
      ref.r_0(1, 2 * m - 1) = -sign(m) * prod(2, 2 * m - 1) / bm;
      if (2 * m + 1 <= n) {
        ref.r_0(0, 2 * m) = -sign(m) * prod(1, 2 * m) / bm;
        ref.r_0(1, 2 * m) = sign(m) * prod(2, 2 * m) / bm;
      }
    }
    for (Index k = 1; 2 * k + 1 <= n; ++k) ref.r_0(2 * k, 2 * k) = 1.0;
  } else {
    ref.annulus = Annulus{std::abs(beta), kInf};
    for (Index m = 1; 2 * m <= n; ++m) {
      Vec pm = Vec::Zero(n);
      pm(2 * m - 2) = -alpha(2 * m - 1);
      pm(2 * m - 1) = 1.0;
      ref.p.col(2 * m - 1) = pm;
      ref.r_m1.col(2 * m - 1) = pm;
      if (2 * m + 1 <= n) ref.r_m1.col(2 * m) = -alpha(2 * m) * pm;
      ref.q(2 * m - 1, 2 * m - 1) = 1.0;
      if (2 * m + 1 <= n) ref.q(2 * m - 1, 2 * m) = -alpha(2 * m);
      ref.r_0(2 * m - 2, 2 * m - 2) = 1.0;
    }
  }
  ref.pc = id - ref.p;
  ref.qc = id - ref.q;
  return ref;
}

OperatorPencil random_regular(Index n, uint64_t seed, double contour_radius) {
  if (n < 2) fail(Errc::invalid_params, "random_regular needs n >= 2");
  if (!(contour_radius > 0.0)) fail(Errc::invalid_params, "contour radius must be positive");
  std::mt19937_64 rng(seed);
  // Box-Muller on raw uniforms keeps the stream implementation-independent.
  auto gaussian_pair = [&rng]() {
    double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(2.0 * std::numbers::pi * u2),
                   r * std::sin(2.0 * std::numbers::pi * u2));
  };
  constexpr int kMaxResamples = 64;
  const double band = 1.25;
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    Mat a0(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) a0(i, j) = gaussian_pair() / std::sqrt(2.0);
    // Spectrum bounded away from the contour: no eigenvalue modulus inside
    // the exclusion band, and A(z) uniformly well conditioned on the circle.
    Eigen::ComplexEigenSolver<Mat> es(a0);
    if (es.info() != Eigen::Success) continue;
    bool band_clear = true;
    for (Index i = 0; i < n; ++i) {
      double mod = std::abs(es.eigenvalues()(i));
      if (mod > contour_radius / band && mod < contour_radius * band) band_clear = false;
    }
    if (!band_clear) continue;
    bool contour_ok = true;
    for (int k = 0; k < 128 && contour_ok; ++k) {
      double theta = 2.0 * std::numbers::pi * k / 128.0;
      Complex z = contour_radius * Complex(std::cos(theta), std::sin(theta));
      Mat az = a0 + z * Mat::Identity(n, n);
      double smin = az.jacobiSvd().singularValues().minCoeff();
      if (smin < 1e-3) contour_ok = false;
    }
    if (!contour_ok) continue;
    return OperatorPencil{std::move(a0), Mat::Identity(n, n), std::nullopt};
  }
  fail(Errc::resample_limit, "no admissible random pencil after 64 attempts");
}

}  // namespace pencilres
