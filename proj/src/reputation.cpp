#include "irgroups/reputation.hpp"

#include <cmath>
#include <stdexcept>

namespace irgroups {

double expected_action(Strategy s, Relation rel, Reputation rep, double eps) {
  return (1.0 - eps) * bit(s.action(rel, rep));
}

double expected_judgement(const JContext& ctx, Relation rel, Reputation rep) {
  const double x = expected_action(ctx.strategy, rel, rep, ctx.eps);
  const double if_cooperate = bit(ctx.norm.judge(rel, rep, Action::Cooperate));
  const double if_defect = bit(ctx.norm.judge(rel, rep, Action::Defect));
  const double y = x * if_cooperate + (1.0 - x) * if_defect;
  return with_assignment_error(y, ctx.delta);
}

JContext judgement_context(const Params& params, const NSS& nss, Group g) {
  return JContext{nss.strategy(g), params.eps_of(g), nss.norm, params.delta};
}

LinearSystem build_system(const Params& params, const NSS& nss) {
  const double p = params.p;
  const JContext maj = judgement_context(params, nss, Group::Majority);
  const JContext min = judgement_context(params, nss, Group::Minority);
  auto jm = [&](Relation rel, Reputation rep) { return expected_judgement(maj, rel, rep); };
  auto jn = [&](Relation rel, Reputation rep) { return expected_judgement(min, rel, rep); };
  using enum Relation;
  using enum Reputation;

  LinearSystem sys;
  sys.a[0][0] = p * (jm(In, Good) - jm(In, Bad));
  sys.a[0][1] = (1.0 - p) * (jm(Out, Good) - jm(Out, Bad));
  sys.a[1][0] = p * (jn(Out, Good) - jn(Out, Bad));
  sys.a[1][1] = (1.0 - p) * (jn(In, Good) - jn(In, Bad));
  // Majority donors meet the in-group with rate p, minority donors meet the
  // out-group (the majority) with rate p.
  sys.b[0] = p * jm(In, Bad) + (1.0 - p) * jm(Out, Bad);
  sys.b[1] = p * jn(Out, Bad) + (1.0 - p) * jn(In, Bad);
  return sys;
}

namespace {

Matrix2 minus_identity(const Matrix2& a) {
  return {{{a[0][0] - 1.0, a[0][1]}, {a[1][0], a[1][1] - 1.0}}};
}

double det(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

}  // namespace

ReputationState stationary_reputations(const LinearSystem& sys) {
  const Matrix2 m = minus_identity(sys.a);
  const double d = det(m);
  if (!(std::abs(d) >= kSingularityTolerance))
    throw SingularSystemError("reputation system is singular (|det(A - I)| < 1e-14); "
                              "execution error rates must be positive");
  // G* = -(A - I)^-1 b
  ReputationState g;
  g.good[0] = -(m[1][1] * sys.b[0] - m[0][1] * sys.b[1]) / d;
  g.good[1] = -(-m[1][0] * sys.b[0] + m[0][0] * sys.b[1]) / d;
  return g;
}

StabilityReport check_stability(const LinearSystem& sys) {
  const Matrix2 m = minus_identity(sys.a);
  StabilityReport r;
  r.trace = m[0][0] + m[1][1];
  r.det = det(m);
  r.stable = r.trace < 0.0 && r.det > 0.0;
  return r;
}

ReputationState integrate_ode(const LinearSystem& sys, const Params& params,
                              const ReputationState& initial, double dt, double horizon,
                              Integrator method) {
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("integrate_ode: dt and horizon must be positive");
  const Vector2 rate{params.p, 1.0 - params.p};
  auto f = [&](const Vector2& g) {
    Vector2 out;
    for (int i = 0; i < 2; ++i)
      out[i] = rate[i] * (sys.a[i][0] * g[0] + sys.a[i][1] * g[1] - g[i] + sys.b[i]);
    return out;
  };
  auto axpy = [](const Vector2& x, double h, const Vector2& k) {
    return Vector2{x[0] + h * k[0], x[1] + h * k[1]};
  };

  const auto steps = static_cast<long long>(std::llround(horizon / dt));
  Vector2 g = initial.good;
  for (long long s = 0; s < steps; ++s) {
    if (method == Integrator::Euler) {
      g = axpy(g, dt, f(g));
      continue;
    }
    const Vector2 k1 = f(g);
    const Vector2 k2 = f(axpy(g, dt / 2, k1));
    const Vector2 k3 = f(axpy(g, dt / 2, k2));
    const Vector2 k4 = f(axpy(g, dt, k3));
    for (int i = 0; i < 2; ++i) g[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return ReputationState{g};
}

double mutant_stationary_reputation(const Params& params, Norm norm, Strategy mutant, Group group,
                                    const ReputationState& incumbents) {
  const JContext ctx{mutant, params.eps_of(group), norm, params.delta};
  double g = 0.0;
  for (Group partner : kGroups) {
    const Relation rel = relation_between(group, partner);
    const double good = incumbents[partner];
    g += params.proportion(partner) * (good * expected_judgement(ctx, rel, Reputation::Good) +
                                       (1.0 - good) * expected_judgement(ctx, rel, Reputation::Bad));
  }
  return g;
}

}  // namespace irgroups
