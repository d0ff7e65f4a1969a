#pragma once

#include "pencilres/pencil.hpp"

namespace pencilres {

enum class ChainKind { S, T, U, V, U_sg, V_sg, U_rg, V_rg };

/// One of the Bart-Lay subspace sequences, spaces[m] for m = 0..m_max.
/// S and T decrease by containment, the U/V kinds increase.
struct ChainFamily {
  ChainKind kind;
  std::vector<Subspace> spaces;
};

ChainFamily chain_family(const OperatorPencil& p, ChainKind kind, Index m_max,
                         const Tolerances& tol);

struct AscentDescentEvidence {
  Index m;
  Index ker_cap_s_dim;    // dim of null(A0) ∩ S_m restricted to the window
  bool ascent_ok;
  Index sum_dim;          // dim of T_1 + V_m
  bool descent_sum_ok;    // window ⊆ T_1 + V_m (the operative reading)
  bool descent_direct_ok; // additionally T_1 ∩ V_m trivial (direct-sum reading)
  Index window_dim;
};

/// Ascent/descent probe up to m_max.  A missing value means "exceeds m_max".
/// Both descent readings are reported; `descent` is the sum form.
struct AscentDescentReport {
  Index probe_limit = 0;
  Index interior_margin = 0;
  std::optional<Index> ascent;
  std::optional<Index> descent;
  std::optional<Index> descent_direct;
  std::vector<AscentDescentEvidence> evidence;
};

/// For truncated families the predicates are evaluated against the interior
/// coordinate window spanned by the first dim - m - margin coordinates, which
/// suppresses boundary artifacts of the truncation.
AscentDescentReport ascent_descent(const OperatorPencil& p, Index m_max, const Tolerances& tol,
                                   Index interior_margin = 2);

enum class JordanKind { singular, regular };

/// A finite probe of a Jordan chain: generator, the continuation vectors, the
/// measured growth rate of their norms, and where the continuation stopped
/// (blocked_at = smallest chain length that is infeasible, when any).
struct JordanChainRecord {
  JordanKind kind = JordanKind::singular;
  Vec generator;
  std::vector<Vec> vectors;  // vectors[0] is the generator
  double rate = 0.0;
  std::optional<Index> blocked_at;

  bool blocked() const { return blocked_at.has_value(); }
};

/// Extends the chain to length `length` by solving the stacked chain
/// equations with the generator pinned, taking the minimum-energy
/// representative when the continuation is non-unique.
JordanChainRecord extend_chain(const OperatorPencil& p, JordanKind kind, const Vec& generator,
                               Index length, const Tolerances& tol);

/// Generating subspace of infinite-length Jordan chains, certified at finite
/// probe depth: generators that extend to length `depth` and whose minimal
/// chain grows at rate <= rate_threshold.  Singular chains satisfy
/// A0 x_{-n} + A1 x_{-n-1} = 0; the regular kind is routed through the
/// flipped pencil.  A dimension-0 result is a legal outcome.
Subspace generating_subspace(const OperatorPencil& p, JordanKind kind, Index depth,
                             double rate_threshold, const Tolerances& tol);

struct InclusionCheck {
  bool equal = false;
  double max_angle = 0.0;
};

/// True iff range(proj) equals xs within the angle tolerance; proj must be
/// idempotent within residual_abs.
InclusionCheck verify_generating_inclusion(const Subspace& xs, const Mat& proj,
                                           const Tolerances& tol);

}  // namespace pencilres
