// Evolutionary stability of norm-strategy-strategy combinations.
//
// Incumbent utility of group i, with partner weights w_j = p_j:
//   U_i = sum_j w_j (b_i P(j donates to i) - c_i P(i donates to j))
// A mutant strategy invades when its utility beats U_i by more than
// kInvasionTolerance.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "irgroups/model.hpp"
#include "irgroups/reputation.hpp"

namespace irgroups {

inline constexpr double kInvasionTolerance = 1e-9;

struct GroupUtilities {
  std::array<double, 2> value{0.0, 0.0};

  double operator[](Group g) const { return value[index(g)]; }
  double& operator[](Group g) { return value[index(g)]; }
};

struct Invader {
  Group group = Group::Majority;
  Strategy mutant;
  double gain = 0.0;
};

struct StabilityVerdict {
  bool stable = true;
  std::vector<Invader> invaders;
};

struct EvalResult {
  NSS nss;
  ReputationState reputations;
  GroupUtilities utilities;
  double cooperativeness = 0.0;
  double fairness = 0.0;
  bool fairness_edge_rule = false;
  bool stable = true;
  std::vector<Invader> invaders;
};

/// Probability a donor of `donor` playing `strategy` donates to a recipient
/// of `recipient` whose group has good-fraction `recipient_good`.
double donation_probability(Group donor, Group recipient, Strategy strategy, double donor_eps,
                            double recipient_good);

GroupUtilities incumbent_utilities(const Params& params, const NSS& nss, const ReputationState& g);

/// Utility of a lone mutant in `group` with stationary reputation `mutant_good`.
double mutant_utility(const Params& params, const NSS& nss, Group group, Strategy mutant,
                      const ReputationState& g, double mutant_good);

/// Scans the 15 alternative strategies of both groups. With `stop_at_first`
/// the verdict holds at most one invader.
StabilityVerdict find_invaders(const Params& params, const NSS& nss, const ReputationState& g,
                               const GroupUtilities& u, bool stop_at_first = false);

StabilityVerdict is_ess(const Params& params, const NSS& nss);

double cooperativeness(const Params& params, const NSS& nss, const ReputationState& g);

/// Worst-off over best-off utility. Equal utilities give 1 (including 0/0);
/// a negative worst-off against a positive best-off gives 0; when both are
/// negative the ratio of magnitudes |best| / |worst| is used.
double fairness(const GroupUtilities& u);
/// True when fairness() used one of the non-ratio rules above.
bool fairness_edge_rule(const GroupUtilities& u);

EvalResult evaluate(const Params& params, const NSS& nss);

struct CategoryCounts {
  /// [majority category][minority category]
  std::array<std::array<std::size_t, 3>, 3> counts{};

  std::size_t at(StrategyCategory majority, StrategyCategory minority) const {
    return counts[static_cast<std::size_t>(majority)][static_cast<std::size_t>(minority)];
  }
  std::size_t total() const;
};

struct Enumeration {
  /// One entry per NSS, in code-triple order (NSS::index()).
  std::vector<EvalResult> results;
  CategoryCounts counts;
  std::size_t stable_count = 0;
};

Enumeration enumerate_all(const Params& params, unsigned threads = 1);

/// Stability of every NSS, indexed by NSS::index(). Early-exits per NSS.
std::vector<bool> stability_mask(const Params& params, unsigned threads = 1);

struct GridEntry {
  HalfNorm in_half;
  HalfNorm out_half;
  EvalResult best;
  /// Stable strategy pairs whose cooperativeness is within kTieTolerance of the best.
  std::size_t ties = 1;
};

inline constexpr double kTieTolerance = 1e-12;

/// Best stable strategy pair (highest cooperativeness) for every (in, out)
/// combination of `halves`. Ties prefer the higher population-mean
/// reputation, then the lower (majority, minority) code pair.
std::vector<GridEntry> famous_grid(const Params& params, std::span<const HalfNorm> halves,
                                   unsigned threads = 1);

std::vector<HalfNorm> famous_half_norms();

}  // namespace irgroups
