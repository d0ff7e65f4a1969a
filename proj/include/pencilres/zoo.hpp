#pragma once

#include "pencilres/pencil.hpp"

namespace pencilres {

enum class Family { example1, example2, example3, jordan_block, diag_split, random_regular };
enum class Region { near_zero, near_infinity };

const char* family_name(Family f);
std::optional<Family> family_from_name(const std::string& name);

/// Whitelisted sequence rules for the super-exponentially decaying entries.
/// `factorial` gives 1/n!, `gauss` gives c^(n^2) with |c| < 1; `geometric`
/// gives c q^n, which violates the decay hypothesis and is admitted with a
/// provenance warning.  Explicit values require the unchecked flag.
struct SequenceRule {
  enum class Kind { factorial, gauss, geometric, explicit_values };
  Kind kind = Kind::factorial;
  double base = 0.5;   // c
  double ratio = 0.5;  // q, geometric only
  std::vector<Complex> values;
  bool unchecked = false;

  Complex term(Index n) const;  // n is 1-based
  std::string describe() const;
};

struct FamilySpec {
  Family family = Family::example3;
  Index truncation = 12;  // N for the semi-infinite families
  Complex beta = Complex(2.0, 0.0);
  SequenceRule rule;       // beta_n (ex1), gamma_n (ex2), alpha_j (ex3)
  Index pole_order = 2;    // jordan_block
  Index regular_dim = 2;   // diag_split leading identity block
  Index singular_dim = 2;  // diag_split trailing z-block
  Index dim = 4;           // random_regular
  uint64_t seed = 1;
  double contour_radius = 1.0;  // random_regular admission contour
};

OperatorPencil build(const FamilySpec& spec);

/// Annulus of analyticity for the family (the recorded admission band for
/// random pencils).  Region selects between the two Laurent regions where the
/// family has more than one.
Annulus family_annulus(const FamilySpec& spec, Region region);

/// Entry-level reference matrices generated from the closed-form displays,
/// truncated to the spec dimensions.  Throws NoReference for random_regular.
struct ReferenceBundle {
  Mat p, pc, q, qc, r_m1, r_0;
  Annulus annulus;
};

ReferenceBundle analytic_reference(const FamilySpec& spec, Region region);

/// A1 = I and A0 random complex, resampled until the recorded contour is well
/// inside a spectral gap: min singular value of A(z) on |z| = radius at least
/// 1e-3 and no eigenvalue modulus within a factor 1.25 of the radius.
/// Deterministic for a fixed seed.
OperatorPencil random_regular(Index n, uint64_t seed, double contour_radius = 1.0);

}  // namespace pencilres
