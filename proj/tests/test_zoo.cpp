#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pencilres/pipeline.hpp"
#include "pencilres/zoo.hpp"
#include "test_util.hpp"

using namespace pencilres;

namespace {
const Tolerances tol;

double factorial_inv(Index j) {
  double v = 1.0;
  for (Index i = 2; i <= j; ++i) v /= static_cast<double>(i);
  return v;
}

FamilySpec ex3_spec(Index n = 12) {
  FamilySpec spec;
  spec.family = Family::example3;
  spec.truncation = n;
  spec.beta = 2.0;
  return spec;
}
}  // namespace

TEST_CASE("jordan_block build") {
  FamilySpec spec;
  spec.family = Family::jordan_block;
  spec.pole_order = 2;
  OperatorPencil p = build(spec);
  CHECK(p.dim() == 2);
  CHECK(std::abs(p.a0(0, 1) - Complex(1.0)) == 0.0);
  CHECK(std::abs(p.a0(0, 0)) == 0.0);
  CHECK((p.a1 - Mat::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("alternating family build") {
  OperatorPencil p = build(ex3_spec(8));
  // row 2 is (0, beta, a2, 0, ...)
  CHECK(std::abs(p.a0(1, 1) - Complex(2.0)) == 0.0);
  CHECK(std::abs(p.a0(1, 2) - Complex(0.5)) == 0.0);
  CHECK(std::abs(p.a0(1, 0)) == 0.0);
  CHECK(std::abs(p.a0(1, 3)) == 0.0);
  for (Index j = 0; j < 8; ++j) {
    CHECK(std::abs(p.a1(j, j) - Complex(j % 2 == 1 ? 1.0 : 0.0)) == 0.0);
    CHECK(std::abs(p.a0(j, j) - Complex(j == 1 ? 2.0 : (j % 2 == 0 ? 1.0 : 0.0))) == 0.0);
  }
  CHECK(p.provenance.has_value());
  CHECK(p.provenance->truncated);
}

TEST_CASE("superdiagonal family entries") {
  FamilySpec spec;
  spec.family = Family::example1;
  spec.truncation = 6;
  OperatorPencil p = build(spec);
  for (Index j = 0; j + 1 < 6; ++j)
    CHECK(std::abs(p.a0(j, j + 1) - Complex(factorial_inv(j + 1))) <= 1e-16);
  CHECK(p.a0.diagonal().norm() == 0.0);

  FamilySpec spec2 = spec;
  spec2.family = Family::example2;
  OperatorPencil q = build(spec2);
  CHECK((q.a0 - p.a0.transpose()).norm() == 0.0);
}

TEST_CASE("truncations are nested principal submatrices") {
  FamilySpec big = ex3_spec(16);
  FamilySpec small = ex3_spec(10);
  Mat a_big = build(big).a0;
  Mat a_small = build(small).a0;
  CHECK((a_big.topLeftCorner(10, 10) - a_small).norm() == 0.0);
}

TEST_CASE("parameter validation") {
  FamilySpec bad = ex3_spec(12);
  bad.beta = 0.0;
  CHECK_THROWS_AS(build(bad), Error);

  FamilySpec odd = ex3_spec(9);
  CHECK_THROWS_AS(build(odd), Error);

  FamilySpec explicit_rule = ex3_spec(12);
  explicit_rule.rule.kind = SequenceRule::Kind::explicit_values;
  explicit_rule.rule.values.assign(12, Complex(0.5, 0.0));
  CHECK_THROWS_AS(build(explicit_rule), Error);  // unchecked flag required
  explicit_rule.rule.unchecked = true;
  CHECK_NOTHROW(build(explicit_rule));

  FamilySpec geo = ex3_spec(12);
  geo.rule.kind = SequenceRule::Kind::geometric;
  geo.rule.base = 1.0;
  geo.rule.ratio = 0.5;
  OperatorPencil p = build(geo);
  CHECK(!p.provenance->warning.empty());

  FamilySpec gauss_bad = ex3_spec(12);
  gauss_bad.rule.kind = SequenceRule::Kind::gauss;
  gauss_bad.rule.base = 1.5;
  CHECK_THROWS_AS(build(gauss_bad), Error);
}

TEST_CASE("random pencils are deterministic and contour-admissible") {
  OperatorPencil a = random_regular(2, 1);
  OperatorPencil b = random_regular(2, 1);
  CHECK((a.a0 - b.a0).norm() == 0.0);

  OperatorPencil c = random_regular(4, 9);
  for (int k = 0; k < 32; ++k) {
    double theta = 2.0 * 3.14159265358979 * k / 32.0;
    Mat az = eval_pencil(c, Complex(std::cos(theta), std::sin(theta)));
    CHECK(az.jacobiSvd().singularValues().minCoeff() >= 1e-3);
  }
}

TEST_CASE("analytic reference entries for the alternating family") {
  ReferenceBundle nz = analytic_reference(ex3_spec(12), Region::near_zero);
  // (R_-1)_{1,4} = -a1 a2 a3 / beta = -1/24
  CHECK(std::abs(nz.r_m1(0, 3) - Complex(-1.0 / 24.0)) <= 1e-15);
  CHECK(std::abs(nz.r_0(0, 1) - Complex(-0.5)) <= 1e-15);
  CHECK(std::abs(nz.r_0(1, 1) - Complex(0.5)) <= 1e-15);
  CHECK(nz.annulus.outer == doctest::Approx(2.0));

  ReferenceBundle ni = analytic_reference(ex3_spec(12), Region::near_infinity);
  CHECK(std::abs(ni.r_m1(0, 1) - Complex(-1.0)) <= 1e-15);        // -a1
  CHECK(std::abs(ni.r_m1(0, 2) - Complex(0.5)) <= 1e-15);         // a1 a2
  CHECK(std::abs(ni.r_m1(1, 1) - Complex(1.0)) <= 1e-15);
  CHECK(std::abs(ni.r_m1(1, 2) - Complex(-0.5)) <= 1e-15);        // -a2
  for (Index j = 0; j < 12; ++j)
    CHECK(std::abs(ni.r_0(j, j) - Complex(j % 2 == 0 ? 1.0 : 0.0)) <= 1e-15);
}

TEST_CASE("analytic references satisfy the defining identities") {
  for (Region region : {Region::near_zero, Region::near_infinity}) {
    FamilySpec spec = ex3_spec(12);
    OperatorPencil p = build(spec);
    ReferenceBundle ref = analytic_reference(spec, region);
    Index w = 10;  // interior block of the truncation
    Mat id = Mat::Identity(12, 12);
    auto masked = [&](const Mat& m) { return m.topLeftCorner(w, w).norm(); };
    CHECK(masked(ref.p * ref.p - ref.p) <= 1e-12);
    CHECK(masked(ref.q * ref.q - ref.q) <= 1e-12);
    CHECK(masked(ref.r_m1 * p.a1 - ref.p) <= 1e-12);
    CHECK(masked(ref.r_0 * p.a0 - ref.pc) <= 1e-12);
    CHECK(masked(p.a1 * ref.r_m1 - ref.q) <= 1e-12);
    CHECK(masked(p.a0 * ref.r_0 - ref.qc) <= 1e-12);
    CHECK(masked(ref.r_m1 - ref.p * ref.r_m1 * ref.q) <= 1e-12);
    CHECK(masked(ref.r_0 - ref.pc * ref.r_0 * ref.qc) <= 1e-12);
    CHECK(masked(ref.r_m1 * p.a1 + ref.r_0 * p.a0 - id) <= 1e-12);
    CHECK(masked(p.a1 * ref.r_m1 + p.a0 * ref.r_0 - id) <= 1e-12);
  }
}

TEST_CASE("reference for the Neumann families") {
  FamilySpec spec;
  spec.family = Family::example1;
  spec.truncation = 8;
  ReferenceBundle ref = analytic_reference(spec, Region::near_zero);
  CHECK((ref.p - Mat::Identity(8, 8)).norm() == 0.0);
  CHECK(ref.r_0.norm() == 0.0);
  // R_-2 = -B from the Neumann expansion; check against the recursion.
  OperatorPencil p = build(spec);
  BasicSolution b{ref.r_m1, ref.r_0, ref.annulus};
  LaurentExpansion exp = laurent_coeffs(b, p, 3, 1);
  CHECK((exp.at(-2) + p.a0).norm() <= 1e-15);
}

TEST_CASE("no closed form for random pencils") {
  FamilySpec spec;
  spec.family = Family::random_regular;
  CHECK_THROWS_AS(analytic_reference(spec, Region::near_zero), Error);
}
