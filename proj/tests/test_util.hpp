#pragma once

#include "pencilres/pencil.hpp"

#include <random>

namespace test_util {

using namespace pencilres;

inline Mat mat2(Complex a, Complex b, Complex c, Complex d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return m;
}

inline Vec unit(Index n, Index i) {
  Vec v = Vec::Zero(n);
  v(i) = 1.0;
  return v;
}

/// Deterministic complex gaussian matrix for property tests.
inline Mat random_mat(Index rows, Index cols, uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng]() {
    double u1 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    double u2 = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    return Complex(r * std::cos(6.283185307179586 * u2), r * std::sin(6.283185307179586 * u2));
  };
  Mat m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = draw();
  return m;
}

inline Subspace span_of(const Mat& cols) {
  return Subspace::from_columns(cols, Tolerances{});
}

inline Subspace span_of(const Vec& v) { return span_of(Mat(v)); }

/// The standard nilpotent pencil: A0 the m x m Jordan block, A1 = I.
inline OperatorPencil jordan_pencil(Index m) {
  Mat a0 = Mat::Zero(m, m);
  for (Index j = 0; j + 1 < m; ++j) a0(j, j + 1) = 1.0;
  return OperatorPencil{a0, Mat::Identity(m, m), std::nullopt};
}

/// A(z) = A1 z with resolvent I/z, annulus (0, inf).
inline OperatorPencil shift_only_pencil(Index n) {
  return OperatorPencil{Mat::Zero(n, n), Mat::Identity(n, n), std::nullopt};
}

}  // namespace test_util
