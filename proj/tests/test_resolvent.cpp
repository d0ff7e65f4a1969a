#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pencilres/pipeline.hpp"
#include "pencilres/zoo.hpp"
#include "test_util.hpp"

using namespace pencilres;
using test_util::jordan_pencil;
using test_util::mat2;
using test_util::shift_only_pencil;

namespace {
const Tolerances tol;

OperatorPencil example3(Index n = 12) {
  FamilySpec spec;
  spec.family = Family::example3;
  spec.truncation = n;
  spec.beta = 2.0;
  return build(spec);
}
}  // namespace

TEST_CASE("basic solution of the pure shift pencil") {
  OperatorPencil p = shift_only_pencil(2);
  PipelineResult res = run_pipeline(p, Annulus{0.0, kInf});
  CHECK((res.basic.r_m1 - Mat::Identity(2, 2)).norm() <= 1e-13);
  CHECK(res.basic.r_0.norm() <= 1e-13);
  CHECK(res.basic.annulus.inner <= 1e-12);
  CHECK(res.basic.annulus.outer == kInf);
}

TEST_CASE("basic solution entries for the alternating family") {
  OperatorPencil p = example3();
  PipelineResult nz = run_pipeline(p, Annulus{0.0, 2.0});
  CHECK(std::abs(nz.basic.r_0(0, 1) - Complex(-0.5)) <= 1e-9);  // -a1/beta
  CHECK(std::abs(nz.basic.r_0(1, 1) - Complex(0.5)) <= 1e-9);   // 1/beta

  PipelineResult ni = run_pipeline(p, Annulus{2.0, kInf});
  for (Index j = 0; j < 12; ++j) {
    double expect = (j % 2 == 0) ? 1.0 : 0.0;
    CHECK(std::abs(ni.basic.r_0(j, j) - Complex(expect)) <= 1e-9);
  }
}

TEST_CASE("laurent recursion for the nilpotent pencil") {
  OperatorPencil j2 = jordan_pencil(2);
  BasicSolution b{Mat::Identity(2, 2), Mat::Zero(2, 2), Annulus{0.0, kInf}};
  LaurentExpansion exp = laurent_coeffs(b, j2, 4, 2);
  CHECK((exp.at(-1) - Mat::Identity(2, 2)).norm() <= 1e-14);
  CHECK((exp.at(-2) + j2.a0).norm() <= 1e-14);
  CHECK(exp.at(-3).norm() <= 1e-14);
  for (Index l = 0; l <= 2; ++l) CHECK(exp.at(l).norm() <= 1e-14);
  CHECK(exp.annulus.inner <= 1e-12);

  OperatorPencil p = shift_only_pencil(2);
  BasicSolution bs{Mat::Identity(2, 2), Mat::Zero(2, 2), Annulus{0.0, kInf}};
  LaurentExpansion se = laurent_coeffs(bs, p, 3, 2);
  for (Index k = 2; k <= 3; ++k) CHECK(se.at(-k).norm() <= 1e-14);
}

TEST_CASE("outer radius is recovered from coefficient growth") {
  OperatorPencil p = example3();
  PipelineOptions opt;
  opt.k_max = 5;
  opt.l_max = 40;
  PipelineResult res = run_pipeline(p, Annulus{0.0, 2.0}, opt);
  CHECK(std::abs(res.laurent.rate_pos - 0.5) <= 0.05);
  CHECK(std::abs(res.laurent.annulus.outer - 2.0) <= 0.2);
}

TEST_CASE("eval_laurent partial sums") {
  LaurentExpansion exp;
  exp.k_max = 1;
  exp.l_max = 1;
  exp.coeffs = {Mat::Identity(2, 2), Mat::Zero(2, 2), Mat::Zero(2, 2)};
  exp.annulus = Annulus{0.0, kInf};
  Mat v = eval_laurent(exp, 2.0);
  CHECK((v - 0.5 * Mat::Identity(2, 2)).norm() <= 1e-15);

  OperatorPencil j2 = jordan_pencil(2);
  BasicSolution b{Mat::Identity(2, 2), Mat::Zero(2, 2), Annulus{0.0, kInf}};
  LaurentExpansion je = laurent_coeffs(b, j2, 4, 2);
  Mat r2 = eval_laurent(je, 2.0);
  CHECK(std::abs(r2(0, 0) - Complex(0.5)) <= 1e-14);
  CHECK(std::abs(r2(0, 1) - Complex(-0.25)) <= 1e-14);

  LaurentExpansion banded = je;
  banded.annulus = Annulus{0.5, 4.0};
  CHECK_THROWS_AS(eval_laurent(banded, Complex(0.1, 0.0)), Error);
  CHECK_THROWS_AS(eval_laurent(banded, Complex(5.0, 0.0)), Error);
}

TEST_CASE("contour oracle on exactly known pencils") {
  OperatorPencil p = shift_only_pencil(2);
  OracleConfig cfg{1.0, 64};
  LaurentExpansion exp = contour_oracle(p, cfg, -3, 3, tol);
  CHECK((exp.at(-1) - Mat::Identity(2, 2)).norm() <= 1e-12);
  for (Index j = -3; j <= 3; ++j)
    if (j != -1) CHECK(exp.at(j).norm() <= 1e-12);

  OperatorPencil j2 = jordan_pencil(2);
  LaurentExpansion je = contour_oracle(j2, cfg, -3, 1, tol);
  CHECK((je.at(-2) + j2.a0).norm() <= 1e-12);
  CHECK((je.at(-1) - Mat::Identity(2, 2)).norm() <= 1e-12);
}

TEST_CASE("contour oracle refuses a contour through the spectral set") {
  OperatorPencil p{mat2(1, 0, 0, -1), Mat::Identity(2, 2), std::nullopt};
  OracleConfig cfg{1.0, 64};  // nodes land on z = -1 and z = 1
  CHECK_THROWS_AS(contour_oracle(p, cfg, -2, 2, tol), Error);
}

TEST_CASE("oracle agrees with the pipeline recursion on a random pencil") {
  OperatorPencil p = random_regular(4, 7);
  PipelineResult res = run_pipeline(p, Annulus{1.0 / 1.25, 1.25});
  OracleConfig cfg{1.0, 512};
  LaurentExpansion oracle = contour_oracle(p, cfg, -5, 5, tol);
  for (Index j = -5; j <= 5; ++j) {
    double scale = std::max(1.0, oracle.at(j).norm());
    CHECK((oracle.at(j) - res.laurent.at(j)).norm() / scale <= 1e-6);
  }
}

TEST_CASE("validation report on the alternating family") {
  OperatorPencil p = example3();
  PipelineOptions opt;
  opt.k_max = 8;
  opt.l_max = 40;
  PipelineResult nz = run_pipeline(p, Annulus{0.0, 2.0}, opt);
  ValidationReport rep = validate_resolvent(
      p, nz.basic, nz.laurent,
      {Complex(0.3, 0.0), Complex(0.0, 0.5), Complex(-0.8, 0.0)}, tol);
  CHECK(rep.max_residual <= 1e-7);

  PipelineOptions opt2;
  opt2.k_max = 40;
  opt2.l_max = 8;
  PipelineResult ni = run_pipeline(p, Annulus{2.0, kInf}, opt2);
  ValidationReport rep2 = validate_resolvent(
      p, ni.basic, ni.laurent, {Complex(3.0, 0.0), Complex(0.0, -4.0), Complex(10.0, 0.0)},
      tol);
  CHECK(rep2.max_residual <= 1e-7);

  CHECK_THROWS_AS(
      validate_resolvent(p, nz.basic, nz.laurent, {Complex(5.0, 0.0)}, tol),
      Error);
}

TEST_CASE("coefficients stay inside the projection split") {
  OperatorPencil p = example3();
  PipelineResult res = run_pipeline(p, Annulus{0.0, 2.0});
  for (Index j = -res.laurent.k_max; j <= res.laurent.l_max; ++j) {
    const Mat& rj = res.laurent.at(j);
    double scale = std::max(1.0, rj.norm());
    if (j <= -1)
      CHECK((res.dec.p * rj * res.dec.q - rj).norm() / scale <= 1e-9);
    else
      CHECK((res.dec.pc * rj * res.dec.qc - rj).norm() / scale <= 1e-9);
  }
}
