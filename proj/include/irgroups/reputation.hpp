// Reputation dynamics for two groups under a public norm.
//
// With G = [G_M, G_m] the fraction of good individuals per group,
//
//   dG/dt = diag(p, 1 - p) * ((A - I) G + b)
//
// where A and b collect the expected judgements J(relation, reputation) of
// each group's donors. The unique stable fixed point is G* = (I - A)^-1 b.

#pragma once

#include <array>
#include <stdexcept>

#include "irgroups/model.hpp"

namespace irgroups {

struct ReputationState {
  std::array<double, 2> good{0.0, 0.0};

  double operator[](Group g) const { return good[index(g)]; }
  double& operator[](Group g) { return good[index(g)]; }
};

/// Everything needed to evaluate the expected judgement of one donor type.
struct JContext {
  Strategy strategy;
  double eps = 0.0;
  Norm norm;
  double delta = 0.0;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Vector2 = std::array<double, 2>;

struct LinearSystem {
  Matrix2 a{};
  Vector2 b{};
};

struct StabilityReport {
  bool stable = false;
  double trace = 0.0;
  double det = 0.0;
};

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kSingularityTolerance = 1e-14;

/// Probability that a donor actually cooperates: (1 - eps) * sigma(rel, rep).
double expected_action(Strategy s, Relation rel, Reputation rep, double eps);

/// Assignment noise: the intended reputation y is flipped with rate delta.
inline double with_assignment_error(double y, double delta) {
  return (1.0 - delta) * y + delta * (1.0 - y);
}

/// Expected reputation a donor receives after acting in context (rel, rep).
/// Norms are extended linearly to fractional actions.
double expected_judgement(const JContext& ctx, Relation rel, Reputation rep);

JContext judgement_context(const Params& params, const NSS& nss, Group g);

LinearSystem build_system(const Params& params, const NSS& nss);

/// Throws SingularSystemError when |det(A - I)| < kSingularityTolerance.
ReputationState stationary_reputations(const LinearSystem& sys);

StabilityReport check_stability(const LinearSystem& sys);

enum class Integrator { RK4, Euler };

/// Fixed-step integration of the reputation ODE from `initial` over [0, horizon].
ReputationState integrate_ode(const LinearSystem& sys, const Params& params,
                              const ReputationState& initial, double dt, double horizon,
                              Integrator method = Integrator::RK4);

/// Stationary reputation of a single mutant playing `mutant` inside `group`
/// while the incumbents sit at their fixed point `incumbents`.
double mutant_stationary_reputation(const Params& params, Norm norm, Strategy mutant, Group group,
                                    const ReputationState& incumbents);

}  // namespace irgroups
