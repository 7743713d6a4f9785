#include "irgroups/egt.hpp"

#include <stdexcept>

#include "irgroups/parallel.hpp"

namespace irgroups {

double donation_probability(Group donor, Group recipient, Strategy strategy, double donor_eps,
                            double recipient_good) {
  const Relation rel = relation_between(donor, recipient);
  return recipient_good * expected_action(strategy, rel, Reputation::Good, donor_eps) +
         (1.0 - recipient_good) * expected_action(strategy, rel, Reputation::Bad, donor_eps);
}

namespace {

// Utility of one individual of `group` playing `own` with good-fraction
// `own_good`, among incumbents at reputations `g`.
double utility_of(const Params& params, const NSS& nss, Group group, Strategy own, double own_good,
                  const ReputationState& g) {
  double u = 0.0;
  for (Group partner : kGroups) {
    const double received = donation_probability(partner, group, nss.strategy(partner),
                                                  params.eps_of(partner), own_good);
    const double given = donation_probability(group, partner, own, params.eps_of(group), g[partner]);
    u += params.proportion(partner) * (params.benefit_of(group) * received - params.cost_of(group) * given);
  }
  return u;
}

}  // namespace

GroupUtilities incumbent_utilities(const Params& params, const NSS& nss, const ReputationState& g) {
  GroupUtilities u;
  for (Group grp : kGroups) u[grp] = utility_of(params, nss, grp, nss.strategy(grp), g[grp], g);
  return u;
}

double mutant_utility(const Params& params, const NSS& nss, Group group, Strategy mutant,
                      const ReputationState& g, double mutant_good) {
  return utility_of(params, nss, group, mutant, mutant_good, g);
}

StabilityVerdict find_invaders(const Params& params, const NSS& nss, const ReputationState& g,
                               const GroupUtilities& u, bool stop_at_first) {
  StabilityVerdict verdict;
  for (Group grp : kGroups) {
    for (int code = 0; code < Strategy::kCount; ++code) {
      const Strategy mutant(code);
      if (mutant == nss.strategy(grp)) continue;
      const double mutant_good = mutant_stationary_reputation(params, nss.norm, mutant, grp, g);
      const double gain = mutant_utility(params, nss, grp, mutant, g, mutant_good) - u[grp];
      if (gain > kInvasionTolerance) {
        verdict.stable = false;
        verdict.invaders.push_back({grp, mutant, gain});
        if (stop_at_first) return verdict;
      }
    }
  }
  return verdict;
}

StabilityVerdict is_ess(const Params& params, const NSS& nss) {
  const ReputationState g = stationary_reputations(build_system(params, nss));
  return find_invaders(params, nss, g, incumbent_utilities(params, nss, g));
}

double cooperativeness(const Params& params, const NSS& nss, const ReputationState& g) {
  double coop = 0.0;
  for (Group donor : kGroups)
    for (Group recipient : kGroups)
      coop += params.proportion(donor) * params.proportion(recipient) *
              donation_probability(donor, recipient, nss.strategy(donor), params.eps_of(donor),
                                   g[recipient]);
  return coop;
}

double fairness(const GroupUtilities& u) {
  const double lo = std::min(u.value[0], u.value[1]);
  const double hi = std::max(u.value[0], u.value[1]);
  if (lo == hi) return 1.0;
  if (lo >= 0.0) return lo / hi;
  if (hi > 0.0) return 0.0;
  return hi / lo;
}

bool fairness_edge_rule(const GroupUtilities& u) {
  const double lo = std::min(u.value[0], u.value[1]);
  const double hi = std::max(u.value[0], u.value[1]);
  if (lo == hi) return hi <= 0.0;
  return lo < 0.0;
}

EvalResult evaluate(const Params& params, const NSS& nss) {
  EvalResult r;
  r.nss = nss;
  r.reputations = stationary_reputations(build_system(params, nss));
  r.utilities = incumbent_utilities(params, nss, r.reputations);
  r.cooperativeness = cooperativeness(params, nss, r.reputations);
  r.fairness = fairness(r.utilities);
  r.fairness_edge_rule = fairness_edge_rule(r.utilities);
  auto verdict = find_invaders(params, nss, r.reputations, r.utilities);
  r.stable = verdict.stable;
  r.invaders = std::move(verdict.invaders);
  return r;
}

std::size_t CategoryCounts::total() const {
  std::size_t n = 0;
  for (const auto& row : counts)
    for (std::size_t c : row) n += c;
  return n;
}

Enumeration enumerate_all(const Params& params, unsigned threads) {
  Enumeration out;
  out.results.resize(NSS::kCount);
  parallel_for(NSS::kCount, threads,
               [&](std::size_t i) { out.results[i] = evaluate(params, NSS::from_index(i)); });
  for (const EvalResult& r : out.results) {
    if (!r.stable) continue;
    ++out.stable_count;
    ++out.counts.counts[static_cast<std::size_t>(classify(r.nss.majority))]
                       [static_cast<std::size_t>(classify(r.nss.minority))];
  }
  return out;
}

std::vector<bool> stability_mask(const Params& params, unsigned threads) {
  std::vector<char> stable(NSS::kCount, 0);
  parallel_for(NSS::kCount, threads, [&](std::size_t i) {
    const NSS nss = NSS::from_index(i);
    const ReputationState g = stationary_reputations(build_system(params, nss));
    stable[i] = find_invaders(params, nss, g, incumbent_utilities(params, nss, g), true).stable;
  });
  return {stable.begin(), stable.end()};
}

std::vector<HalfNorm> famous_half_norms() {
  return {half_norms::Shunning, half_norms::SternJudging, half_norms::ImageScoring,
          half_norms::SimpleStanding};
}

std::vector<GridEntry> famous_grid(const Params& params, std::span<const HalfNorm> halves,
                                   unsigned threads) {
  if (halves.empty()) throw std::invalid_argument("famous_grid: half-norm list is empty");
  const std::size_t cells = halves.size() * halves.size();
  std::vector<GridEntry> grid(cells);
  parallel_for(cells, threads, [&](std::size_t cell) {
    const Norm norm(halves[cell / halves.size()], halves[cell % halves.size()]);
    std::vector<EvalResult> stable;
    for (int sm = 0; sm < Strategy::kCount; ++sm)
      for (int sn = 0; sn < Strategy::kCount; ++sn) {
        EvalResult r = evaluate(params, NSS{norm, Strategy(sm), Strategy(sn)});
        if (r.stable) stable.push_back(std::move(r));
      }
    if (stable.empty()) throw std::logic_error("famous_grid: no stable strategy pair");

    double best_coop = stable.front().cooperativeness;
    for (const auto& r : stable) best_coop = std::max(best_coop, r.cooperativeness);
    auto mean_rep = [&](const EvalResult& r) {
      return params.p * r.reputations.good[0] + (1.0 - params.p) * r.reputations.good[1];
    };
    const EvalResult* best = nullptr;
    std::size_t ties = 0;
    // Candidates are visited in ascending code-pair order, so a strict
    // comparison keeps the lowest pair among equal reputations.
    for (const auto& r : stable) {
      if (r.cooperativeness < best_coop - kTieTolerance) continue;
      ++ties;
      if (best == nullptr || mean_rep(r) > mean_rep(*best)) best = &r;
    }
    grid[cell] = GridEntry{norm.in_half(), norm.out_half(), *best, ties};
  });
  return grid;
}

}  // namespace irgroups
