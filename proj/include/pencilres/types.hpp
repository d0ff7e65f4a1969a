#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace pencilres {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Numerical knobs shared by every operation.
///
/// rank_rel     relative singular-value cutoff (sigma <= rank_rel * sigma_max is zero)
/// residual_abs absolute bound accepted for algebraic identities
/// angle_tol    principal-angle bound, radians, for subspace comparisons
struct Tolerances {
  double rank_rel = 1e-10;
  double residual_abs = 1e-8;
  double angle_tol = 1e-8;

  void validate() const;
};

enum class Errc {
  invalid_shape,
  invalid_params,
  empty_window,
  missing_coefficient,
  singular_shift,
  blocked,
  empty_subspace,
  not_complementary,
  not_invertible_on_subspace,
  singular_node,
  outside_annulus,
  resample_limit,
  no_reference,
  parse_error,
  io_error,
  internal,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Open annulus { z : inner < |z| < outer }, outer may be +inf.
struct Annulus {
  double inner = 0.0;
  double outer = kInf;

  bool contains(Complex z) const {
    double a = std::abs(z);
    return a > inner && a < outer;
  }
  void validate() const {
    if (!(inner >= 0.0) || !(inner < outer)) fail(Errc::invalid_params, "need 0 <= inner < outer");
  }
};

/// Where a matrix came from: named family, parameters, truncation order.
/// Identities on truncations of semi-infinite operators are only asserted on
/// the interior coordinate block; `truncated` gates that masking.
struct Provenance {
  std::string family;
  std::map<std::string, std::string> params;
  Index truncation = 0;
  bool truncated = false;
  std::string warning;  // set when a parameter choice weakens a hypothesis
};

void ensure_finite(const Mat& a, const char* label);

}  // namespace pencilres
