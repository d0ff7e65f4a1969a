#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_util.hpp"

using namespace pencilres;
using test_util::mat2;
using test_util::random_mat;
using test_util::span_of;
using test_util::unit;

namespace {
const Tolerances tol;
}

TEST_CASE("nullspace of simple matrices") {
  Mat d = mat2(1, 0, 0, 0);
  Subspace ker = nullspace(d, tol);
  CHECK(ker.dim() == 1);
  CHECK(std::abs(ker.basis(1, 0)) == doctest::Approx(1.0));

  CHECK(nullspace(Mat::Identity(3, 3), tol).dim() == 0);

  Mat up = mat2(0, 1, 0, 0);
  Subspace ker2 = nullspace(up, tol);
  REQUIRE(ker2.dim() == 1);
  CHECK(std::abs(ker2.basis(0, 0)) == doctest::Approx(1.0));
  CHECK((up * ker2.basis).norm() <= tol.residual_abs);

  CHECK_THROWS_AS(nullspace(Mat(0, 0), tol), Error);
}

TEST_CASE("range of simple matrices") {
  CHECK(range(mat2(1, 0, 0, 0), tol).dim() == 1);
  CHECK(range(Mat::Zero(2, 2), tol).dim() == 0);

  Mat rank1 = mat2(1, 2, 2, 4);
  Subspace r = range(rank1, tol);
  REQUIRE(r.dim() == 1);
  Vec expect(2);
  expect << 1.0 / std::sqrt(5.0), 2.0 / std::sqrt(5.0);
  CHECK(containment_angle(span_of(expect), r) <= tol.angle_tol);
}

TEST_CASE("preimage") {
  Subspace e1 = span_of(unit(2, 0));
  Subspace pre = preimage(Mat::Identity(2, 2), e1, tol);
  CHECK(same_space(pre, e1, tol));

  Mat a = random_mat(3, 3, 11);
  CHECK(preimage(a, Subspace::full(3), tol).dim() == 3);

  // a x = (x2, 0) always lies in span(e1), so the preimage is everything.
  CHECK(preimage(mat2(0, 1, 0, 0), e1, tol).dim() == 2);
}

TEST_CASE("intersection and sum") {
  Subspace e1 = span_of(unit(3, 0));
  Mat e12(3, 2);
  e12 << 1, 0, 0, 1, 0, 0;
  Subspace both = span_of(e12);
  CHECK(same_space(intersect(e1, both, tol), e1, tol));
  CHECK(intersect(span_of(unit(2, 0)), span_of(unit(2, 1)), tol).dim() == 0);

  Vec diag3(3);
  diag3 << 1, 1, 0;
  Mat pair(3, 2);
  pair << 1, 0, 1, 0, 0, 1;
  Subspace inter = intersect(span_of(diag3), span_of(pair), tol);
  REQUIRE(inter.dim() == 1);
  CHECK(containment_angle(inter, span_of(diag3)) <= tol.angle_tol);

  CHECK(subspace_sum(span_of(unit(2, 0)), span_of(unit(2, 1)), tol).dim() == 2);
  Subspace u = span_of(unit(2, 0));
  CHECK(same_space(subspace_sum(u, Subspace::zero(2), tol), u, tol));
  Vec onezero(2), oneone(2);
  onezero << 1, 0;
  oneone << 1, 1;
  CHECK(subspace_sum(span_of(onezero), span_of(oneone), tol).dim() == 2);
}

TEST_CASE("solve is a minimum-norm least-squares solve") {
  Mat b = random_mat(3, 2, 5);
  CHECK((solve(Mat::Identity(3, 3), b, tol) - b).norm() <= 1e-12);

  Mat d = mat2(2, 0, 0, 4);
  Mat x = solve(d, Mat::Identity(2, 2), tol);
  CHECK(std::abs(x(0, 0) - Complex(0.5)) <= 1e-14);
  CHECK(std::abs(x(1, 1) - Complex(0.25)) <= 1e-14);

  Mat tri = mat2(1, 1, 0, 1);
  Mat e1 = Mat::Zero(2, 1);
  e1(0, 0) = 1;
  Mat y = solve(tri, e1, tol);
  CHECK(std::abs(y(0, 0) - Complex(1.0)) <= 1e-14);
  CHECK(std::abs(y(1, 0)) <= 1e-14);
}

TEST_CASE("growth_rate fits") {
  std::vector<double> pow2;
  for (int n = 0; n <= 20; ++n) pow2.push_back(std::pow(2.0, n));
  CHECK(growth_rate(pow2, 5, 20) == doctest::Approx(2.0).epsilon(1e-9));

  std::vector<double> ones(10, 1.0);
  CHECK(growth_rate(ones, 0, 9) == doctest::Approx(1.0));

  std::vector<double> poly;
  for (int n = 0; n <= 40; ++n) poly.push_back((n ? n * n : 1) * std::pow(0.5, n));
  double r = growth_rate(poly, 10, 40);
  CHECK(std::abs(r - 0.5) <= 0.05);

  CHECK_THROWS_AS(growth_rate(ones, 5, 4), Error);
  CHECK_THROWS_AS(growth_rate(ones, 0, 99), Error);

  std::vector<double> with_zero = {1.0, 0.5, 0.0, 0.1};
  CHECK(growth_rate(with_zero, 0, 3) == 0.0);
}

TEST_CASE("growth_rate is scale invariant") {
  std::mt19937_64 rng(3);
  std::vector<double> norms;
  for (int n = 0; n <= 30; ++n)
    norms.push_back(std::pow(1.7, n) * (1.0 + 0.3 * ((rng() >> 11) * 0x1p-53)));
  double r1 = growth_rate(norms, 10, 30);
  for (auto& v : norms) v *= 137.5;
  double r2 = growth_rate(norms, 10, 30);
  CHECK(r1 == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("subspace bases are orthonormal and dimension law holds") {
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Index n = 3 + static_cast<Index>(seed % 4);
    Mat a = random_mat(n, n, seed);
    // force rank deficiency half of the time
    if (seed % 2 == 0) a.col(0) = a.col(n - 1);
    Subspace u = range(a, tol);
    CHECK((u.basis.adjoint() * u.basis - Mat::Identity(u.dim(), u.dim())).norm() <=
          10 * tol.rank_rel);

    Subspace ker = nullspace(a, tol);
    CHECK(u.dim() + ker.dim() == n);

    Subspace v = range(random_mat(n, 2, seed * 31 + 7), tol);
    Index lhs = subspace_sum(u, v, tol).dim() + intersect(u, v, tol).dim();
    CHECK(lhs == u.dim() + v.dim());

    // nullspace(a) is contained in every preimage
    Subspace pre = preimage(a, v, tol);
    CHECK(contains(pre, ker, tol));
    CHECK(preimage(a, range(a, tol), tol).dim() == n);

    // solve recovers a x up to nullspace components
    Mat x = random_mat(n, 1, seed + 100);
    Mat ax = a * x;
    Mat recovered = solve(a, ax, tol);
    CHECK((a * recovered - ax).norm() <= tol.residual_abs * std::max(1.0, ax.norm()));
  }
}
