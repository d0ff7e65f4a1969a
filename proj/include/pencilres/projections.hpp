#pragma once

#include "pencilres/chains.hpp"

namespace pencilres {

/// Augmented frame E = [L | M] with E^-1 = [F; G], so LF + MG = I and
/// FL = I, GM = I, FM = 0, GL = 0.
struct FrameAssembly {
  Mat l;  // basis of the first summand, as columns
  Mat m;  // basis of the second summand
  Mat e;  // [L | M]
  Mat f;  // top block of E^-1   (rows = cols of L)
  Mat g;  // bottom block of E^-1
};

struct DomainAssembly {
  FrameAssembly frame;
  Mat p;   // oblique projection onto span(L) along span(M)
  Mat pc;  // I - p
};

struct RangeAssembly {
  FrameAssembly frame;  // built over [A1 L | A0 M]
  Mat q;
  Mat qc;
  Subspace ys;  // A1(xs)
  Subspace yr;  // A0(xr)
};

/// Full spectral separation data for one annulus.
struct SpectralDecomposition {
  Mat p, pc, q, qc;
  Subspace xs, xr, ys, yr;
  FrameAssembly domain_frame;
  FrameAssembly range_frame;
};

DomainAssembly assemble_domain(const Subspace& xs, const Subspace& xr, const Tolerances& tol);

RangeAssembly assemble_range(const OperatorPencil& p, const Subspace& xs, const Subspace& xr,
                             const Tolerances& tol);

SpectralDecomposition make_decomposition(const OperatorPencil& p, const Subspace& xs,
                                         const Subspace& xr, const Tolerances& tol);

/// Frobenius deviations of the projection structure: idempotence,
/// complementarity, the two-sided splitting A_i = Q A_i P + Qc A_i Pc and the
/// four intertwining identities Q A1 = A1 P, Qc A0 = A0 Pc, Q A0 = A0 P,
/// Qc A1 = A1 Pc.
struct Theorem2Report {
  double idem_p = 0, idem_q = 0;
  double compl_p = 0, compl_q = 0;
  double split_a0 = 0, split_a1 = 0;
  double q_a1_a1_p = 0, qc_a0_a0_pc = 0;
  double q_a0_a0_p = 0, qc_a1_a1_pc = 0;

  double max_deviation() const;
};

Theorem2Report verify_theorem2(const OperatorPencil& p, const SpectralDecomposition& dec,
                               const Tolerances& tol);

/// Residuals of the separated fundamental identities in frame coordinates:
/// with A1_s = F_y A1 L, A0_r = G_y A0 M, N_m1 = F R_-1 (A1 L), N_0 = G R_0 (A0 M),
/// checks N_m1 A1_s = I on X_s, A1_s N_m1 = I on Y_s and the complementary pair.
struct SeparatedReport {
  Index dim_s = 0, dim_r = 0;
  double left_s = 0, right_s = 0;  // N_m1 A1_s - I, A1_s N_m1 - I
  double left_r = 0, right_r = 0;  // N_0 A0_r - I, A0_r N_0 - I

  double max_deviation() const { return std::max(std::max(left_s, right_s), std::max(left_r, right_r)); }
};

SeparatedReport separated_operators(const OperatorPencil& p, const SpectralDecomposition& dec,
                                    const BasicSolution& b, const Tolerances& tol);

}  // namespace pencilres
