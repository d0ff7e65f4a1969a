#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pencilres/pipeline.hpp"
#include "pencilres/zoo.hpp"
#include "test_util.hpp"

using namespace pencilres;
using test_util::mat2;
using test_util::shift_only_pencil;
using test_util::span_of;
using test_util::unit;

namespace {
const Tolerances tol;

double factorial_inv(Index j) {
  double v = 1.0;
  for (Index i = 2; i <= j; ++i) v /= static_cast<double>(i);
  return v;
}

OperatorPencil example3(Index n = 12) {
  FamilySpec spec;
  spec.family = Family::example3;
  spec.truncation = n;
  spec.beta = 2.0;
  return build(spec);
}
}  // namespace

TEST_CASE("coordinate split produces diagonal projections") {
  DomainAssembly dom = assemble_domain(span_of(unit(2, 1)), span_of(unit(2, 0)), tol);
  CHECK((dom.p - mat2(0, 0, 0, 1)).norm() <= 1e-14);
  CHECK((dom.pc - mat2(1, 0, 0, 0)).norm() <= 1e-14);
  CHECK((dom.frame.l * dom.frame.f + dom.frame.m * dom.frame.g - Mat::Identity(2, 2)).norm() <=
        1e-14);
}

TEST_CASE("oblique projection maps along xr onto xs") {
  Vec diag(2);
  diag << 1, 1;
  DomainAssembly dom = assemble_domain(span_of(diag), span_of(unit(2, 0)), tol);
  CHECK((dom.p * unit(2, 0)).norm() <= 1e-14);
  CHECK((dom.p * diag - diag).norm() <= 1e-14);
  CHECK((dom.p * dom.p - dom.p).norm() <= 1e-13);
}

TEST_CASE("frame identities hold for random complements") {
  Mat basis = test_util::random_mat(6, 6, 91);
  Subspace xs = span_of(Mat(basis.leftCols(2)));
  Subspace xr = span_of(Mat(basis.rightCols(4)));
  DomainAssembly dom = assemble_domain(xs, xr, tol);
  Index k1 = xs.dim(), k2 = xr.dim();
  CHECK((dom.frame.f * dom.frame.l - Mat::Identity(k1, k1)).norm() <= 1e-12);
  CHECK((dom.frame.g * dom.frame.m - Mat::Identity(k2, k2)).norm() <= 1e-12);
  CHECK((dom.frame.f * dom.frame.m).norm() <= 1e-12);
  CHECK((dom.frame.g * dom.frame.l).norm() <= 1e-12);
  CHECK((dom.p + dom.pc - Mat::Identity(6, 6)).norm() <= 1e-13);
  CHECK((dom.p * dom.pc).norm() <= 1e-12);
  CHECK((dom.pc * dom.p).norm() <= 1e-12);
}

TEST_CASE("overlapping subspaces are rejected") {
  Mat cols(3, 2);
  cols << 1, 1, 0, 1e-14, 0, 0;
  CHECK_THROWS_AS(assemble_domain(span_of(Mat(cols.col(0))), span_of(Mat(cols.col(1))), tol),
                  Error);
  // dimension shortfall
  CHECK_THROWS_AS(assemble_domain(span_of(unit(3, 0)), span_of(unit(3, 1)), tol), Error);
}

TEST_CASE("range assembly on the diagonal split") {
  OperatorPencil p{mat2(1, 0, 0, 0), mat2(0, 0, 0, 1), std::nullopt};
  RangeAssembly rng = assemble_range(p, span_of(unit(2, 1)), span_of(unit(2, 0)), tol);
  CHECK((rng.q - mat2(0, 0, 0, 1)).norm() <= 1e-14);
  CHECK(same_space(rng.ys, span_of(unit(2, 1)), tol));
  CHECK(same_space(rng.yr, span_of(unit(2, 0)), tol));
}

TEST_CASE("theorem-2 structure for the pure shift pencil") {
  OperatorPencil p = shift_only_pencil(2);
  SpectralDecomposition dec =
      make_decomposition(p, Subspace::full(2), Subspace::zero(2), tol);
  CHECK((dec.p - Mat::Identity(2, 2)).norm() <= 1e-14);
  CHECK((dec.q - Mat::Identity(2, 2)).norm() <= 1e-14);
  Theorem2Report rep = verify_theorem2(p, dec, tol);
  CHECK(rep.max_deviation() <= 1e-14);
}

TEST_CASE("near-infinity projections match the closed-form columns") {
  OperatorPencil p = example3();
  PipelineOptions opt;
  PipelineResult res = run_pipeline(p, Annulus{2.0, kInf}, opt);

  // Even columns carry -a_{2m-1} e_{2m-1} + e_{2m}; odd columns vanish.
  for (Index m = 1; 2 * m <= 12; ++m) {
    Vec col = res.dec.p.col(2 * m - 1);
    CHECK(std::abs(col(2 * m - 2) + factorial_inv(2 * m - 1)) <= 1e-9);
    CHECK(std::abs(col(2 * m - 1) - 1.0) <= 1e-9);
  }
  CHECK(res.dec.p.col(0).norm() <= 1e-9);
  CHECK(res.dec.p.col(2).norm() <= 1e-9);

  // Q columns follow [0, e2, -a2 e2, e4, -a4 e4, ...]
  CHECK(res.dec.q.col(0).norm() <= 1e-9);
  CHECK(std::abs(res.dec.q(1, 1) - 1.0) <= 1e-9);
  CHECK(std::abs(res.dec.q(1, 2) + factorial_inv(2)) <= 1e-9);
  CHECK(std::abs(res.dec.q(3, 3) - 1.0) <= 1e-9);
  CHECK(std::abs(res.dec.q(3, 4) + factorial_inv(4)) <= 1e-9);

  Theorem2Report rep = verify_theorem2(p, res.dec, tol);
  CHECK(rep.max_deviation() <= 1e-10);
}

TEST_CASE("near-zero range complement reproduces the display entry") {
  OperatorPencil p = example3();
  PipelineResult res = run_pipeline(p, Annulus{0.0, 2.0});
  // (Qc)_{2,4} = -a2 a3 / beta
  double expect = -factorial_inv(2) * factorial_inv(3) / 2.0;
  CHECK(std::abs(res.dec.qc(1, 3) - expect) <= 1e-9);
}

TEST_CASE("swapping the projections breaks the splitting identity") {
  OperatorPencil p = example3();
  PipelineResult res = run_pipeline(p, Annulus{0.0, 2.0});
  SpectralDecomposition swapped = res.dec;
  std::swap(swapped.p, swapped.pc);
  Theorem2Report rep = verify_theorem2(p, swapped, tol);
  CHECK(rep.max_deviation() > 0.1);
}

TEST_CASE("assembly depends only on the subspaces, not the bases") {
  OperatorPencil p = example3();
  PipelineResult res = run_pipeline(p, Annulus{0.0, 2.0});
  Index k1 = res.xs.dim(), k2 = res.xr.dim();
  // rotate both bases by random unitary factors
  Eigen::HouseholderQR<Mat> qr1(test_util::random_mat(k1, k1, 7));
  Eigen::HouseholderQR<Mat> qr2(test_util::random_mat(k2, k2, 9));
  Subspace xs2{12, res.xs.basis * Mat(qr1.householderQ()), tol.rank_rel};
  Subspace xr2{12, res.xr.basis * Mat(qr2.householderQ()), tol.rank_rel};
  DomainAssembly dom2 = assemble_domain(xs2, xr2, tol);
  CHECK((dom2.p - res.dec.p).norm() <= 1e-8);
}

TEST_CASE("separated systems reduce to identities") {
  OperatorPencil p = shift_only_pencil(2);
  PipelineResult res = run_pipeline(p, Annulus{0.0, kInf});
  CHECK(res.separated.dim_s == 2);
  CHECK(res.separated.dim_r == 0);
  CHECK(res.separated.max_deviation() <= 1e-12);

  OperatorPencil j3 = test_util::jordan_pencil(3);
  PipelineResult jres = run_pipeline(j3, Annulus{0.0, kInf});
  CHECK(jres.separated.dim_r == 0);  // pole-only pencil, the "c" system is empty
  CHECK(jres.separated.max_deviation() <= 1e-12);

  OperatorPencil ex3 = example3();
  PipelineResult eres = run_pipeline(ex3, Annulus{2.0, kInf});
  CHECK(eres.separated.dim_s == 6);
  CHECK(eres.separated.dim_r == 6);
  CHECK(eres.separated.max_deviation() <= 1e-8);
}
