// Finite-population donation game with public reputations and independent
// tabular Q-learners.
//
// Each interaction: a uniformly drawn donor acts toward a uniformly drawn
// recipient; the donor's Q-cell for the realized action is updated with the
// cost paid, the recipient credits the benefit received to the last action it
// took as a donor, and a noisy observer re-judges the donor under the norm.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "irgroups/model.hpp"
#include "irgroups/rng.hpp"

namespace irgroups {

enum class QInit : std::uint8_t { UniformSmall, Zero };
enum class ReputationInit : std::uint8_t { Coin, AllGood, AllBad };
/// What an exploring agent does: take the action opposite to its greedy
/// choice, or draw an action uniformly at random.
enum class Exploration : std::uint8_t { Flip, Uniform };

std::string_view to_string(QInit q);
std::string_view to_string(ReputationInit r);
std::string_view to_string(Exploration e);
QInit parse_q_init(std::string_view text);
ReputationInit parse_reputation_init(std::string_view text);
Exploration parse_exploration(std::string_view text);

/// Half-width of the default uniform Q initialisation.
inline constexpr double kQInitScale = 0.01;
/// Q-value placed on the prescribed action of a seeded agent.
inline constexpr double kSeedQValue = 1.0;

struct DonorContext {
  Relation relation = Relation::In;
  Reputation reputation = Reputation::Good;
  Action action = Action::Defect;
};

struct AgentState {
  Group group = Group::Majority;
  /// Indexed by q_index(relation, reputation, action).
  std::array<double, 8> q{};
  Reputation reputation = Reputation::Good;
  std::optional<DonorContext> last_donor_context;
  double cumulative_payoff = 0.0;
  double window_payoff = 0.0;

  static constexpr std::size_t q_index(Relation rel, Reputation rep, Action a) {
    return 4 * static_cast<std::size_t>(bit(rel)) + 2 * static_cast<std::size_t>(bit(rep)) +
           static_cast<std::size_t>(bit(a));
  }
  double& q_at(Relation rel, Reputation rep, Action a) { return q[q_index(rel, rep, a)]; }
  double q_at(Relation rel, Reputation rep, Action a) const { return q[q_index(rel, rep, a)]; }

  /// Greedy policy read off the table; an exact tie counts as defection.
  Strategy effective_strategy() const;
};

struct SimConfig {
  std::size_t n_total = 50;
  std::size_t n_majority = 45;
  double mu = 0.1;
  Exploration exploration = Exploration::Flip;
  double alpha = 0.1;
  std::size_t n_interactions = 250'000;
  double b = 5.0;
  double c = 1.0;
  double eps = 0.01;
  double delta = 0.01;
  Norm norm{half_norms::SternJudging, half_norms::SternJudging};
  double seed_fraction = 0.0;
  Strategy seed_strategy = strategies::Disc;
  QInit init_scheme = QInit::UniformSmall;
  ReputationInit init_reputation_scheme = ReputationInit::Coin;
  double measure_fraction = 0.2;
  std::uint64_t rng_seed = 1;
  std::size_t trajectory_bucket = 1000;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  std::size_t window_length() const;
};

struct InteractionRecord {
  std::size_t donor = 0;
  std::size_t recipient = 0;
  Relation relation = Relation::In;
  Reputation recipient_reputation = Reputation::Good;
  Action intended = Action::Defect;
  Action realized = Action::Defect;
  Reputation donor_new_reputation = Reputation::Good;
};

/// Number of seeded agents per group: ceil(fraction * n_total) split by
/// group size with largest-remainder rounding (ties favour the minority).
std::array<std::size_t, 2> seeded_counts(const SimConfig& cfg);

/// Majority agents first, then minority. Draw order per agent: eight Q-cells
/// (uniform scheme, unseeded agents only) then the initial reputation.
std::vector<AgentState> initial_population(const SimConfig& cfg, Rng& rng);

/// Greedy action with random tie-breaks, replaced by an exploratory action
/// with probability mu.
Action choose_action(const AgentState& agent, Relation rel, Reputation rep, double mu, Rng& rng,
                     Exploration mode = Exploration::Flip);

InteractionRecord step(std::vector<AgentState>& population, Norm norm, const SimConfig& cfg, Rng& rng);

struct SimResult {
  std::uint64_t seed = 0;
  double cooperation = 0.0;
  double fairness = 0.0;
  bool fairness_edge_rule = false;
  std::array<double, 2> mean_window_payoff{0.0, 0.0};
  /// [group][strategy code] share of agents whose greedy policy is that strategy.
  std::array<std::array<double, 16>, 2> prevalence{};
  /// Realized cooperation rate per trajectory bucket.
  std::vector<double> trajectory;
  std::size_t window_length = 0;
};

SimResult run(const SimConfig& cfg);

struct BatchAggregate {
  double mean_cooperation = 0.0;
  double sd_cooperation = 0.0;
  double mean_fairness = 0.0;
  double sd_fairness = 0.0;
};

struct BatchResult {
  std::vector<SimResult> runs;
  BatchAggregate aggregate;
};

/// Runs seeds rng_seed, rng_seed + 1, ..., rng_seed + n_seeds - 1.
BatchResult run_batch(const SimConfig& cfg, std::size_t n_seeds, unsigned threads = 1);

struct SeedSweepCell {
  double fraction = 0.0;
  double bc_ratio = 0.0;
  BatchAggregate aggregate;
};

/// Grid over seed fractions (outer) and benefit/cost ratios (inner); each
/// cell sets b = ratio * c and runs a batch.
std::vector<SeedSweepCell> seed_fraction_sweep(const SimConfig& cfg, std::span<const double> fractions,
                                               std::span<const double> bc_ratios, std::size_t n_seeds,
                                               unsigned threads = 1);

}  // namespace irgroups
