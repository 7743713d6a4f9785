#include "irgroups/rl.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "irgroups/egt.hpp"
#include "irgroups/parallel.hpp"

namespace irgroups {

std::string_view to_string(QInit q) { return q == QInit::Zero ? "zero" : "uniform"; }

std::string_view to_string(ReputationInit r) {
  switch (r) {
    case ReputationInit::Coin: return "coin";
    case ReputationInit::AllGood: return "good";
    case ReputationInit::AllBad: return "bad";
  }
  return "?";
}

std::string_view to_string(Exploration e) { return e == Exploration::Flip ? "flip" : "uniform"; }

Exploration parse_exploration(std::string_view text) {
  if (text == "flip") return Exploration::Flip;
  if (text == "uniform") return Exploration::Uniform;
  throw std::invalid_argument("unknown exploration mode '" + std::string(text) + "' (flip, uniform)");
}

QInit parse_q_init(std::string_view text) {
  if (text == "uniform") return QInit::UniformSmall;
  if (text == "zero") return QInit::Zero;
  throw std::invalid_argument("unknown Q initialisation '" + std::string(text) + "' (uniform, zero)");
}

ReputationInit parse_reputation_init(std::string_view text) {
  if (text == "coin") return ReputationInit::Coin;
  if (text == "good") return ReputationInit::AllGood;
  if (text == "bad") return ReputationInit::AllBad;
  throw std::invalid_argument("unknown reputation initialisation '" + std::string(text) +
                              "' (coin, good, bad)");
}

Strategy AgentState::effective_strategy() const {
  Strategy::Table t{};
  for (Relation rel : {Relation::Out, Relation::In})
    for (Reputation rep : {Reputation::Bad, Reputation::Good})
      t[bit(rel)][bit(rep)] = q_at(rel, rep, Action::Cooperate) > q_at(rel, rep, Action::Defect)
                                  ? Action::Cooperate
                                  : Action::Defect;
  return Strategy::from_table(t);
}

void SimConfig::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  auto in_open_unit = [](double x) { return std::isfinite(x) && x > 0.0 && x < 1.0; };
  if (!(n_majority > 0 && n_majority < n_total)) fail("n_majority must satisfy 0 < n_majority < n_total");
  if (!std::isfinite(mu) || !(mu >= 0.0 && mu <= 1.0)) fail("mu must lie in [0, 1]");
  if (!in_open_unit(alpha)) fail("alpha must lie in (0, 1)");
  if (n_interactions == 0) fail("n_interactions must be positive");
  if (!std::isfinite(b) || !std::isfinite(c) || !(c > 0.0) || !(b > c)) fail("payoffs must satisfy b > c > 0");
  if (!std::isfinite(eps) || !(eps >= 0.0 && eps < 1.0)) fail("eps must lie in [0, 1)");
  if (!std::isfinite(delta) || !(delta >= 0.0 && delta < 0.5)) fail("delta must lie in [0, 0.5)");
  if (!std::isfinite(seed_fraction) || !(seed_fraction >= 0.0 && seed_fraction <= 1.0))
    fail("seed_fraction must lie in [0, 1]");
  if (!std::isfinite(measure_fraction) || !(measure_fraction > 0.0 && measure_fraction <= 1.0))
    fail("measure_fraction must lie in (0, 1]");
  if (trajectory_bucket == 0) fail("trajectory_bucket must be positive");
}

std::size_t SimConfig::window_length() const {
  const auto len = static_cast<std::size_t>(std::llround(measure_fraction * static_cast<double>(n_interactions)));
  return std::clamp<std::size_t>(len, 1, n_interactions);
}

std::array<std::size_t, 2> seeded_counts(const SimConfig& cfg) {
  const double n = static_cast<double>(cfg.n_total);
  // The tolerance keeps e.g. 0.2 * 50 from rounding up to 11.
  const auto k = std::min(cfg.n_total, static_cast<std::size_t>(std::ceil(cfg.seed_fraction * n - 1e-9)));
  const std::array<std::size_t, 2> sizes{cfg.n_majority, cfg.n_total - cfg.n_majority};
  std::array<std::size_t, 2> counts{};
  std::array<double, 2> remainder{};
  std::size_t assigned = 0;
  for (std::size_t g = 0; g < 2; ++g) {
    const double exact = static_cast<double>(k) * static_cast<double>(sizes[g]) / n;
    counts[g] = static_cast<std::size_t>(std::floor(exact));
    remainder[g] = exact - std::floor(exact);
    assigned += counts[g];
  }
  while (assigned < k) {
    const std::size_t g = remainder[1] >= remainder[0] ? 1 : 0;
    ++counts[g];
    remainder[g] = -1.0;
    ++assigned;
  }
  return counts;
}

std::vector<AgentState> initial_population(const SimConfig& cfg, Rng& rng) {
  const auto seeded = seeded_counts(cfg);
  std::vector<AgentState> pop(cfg.n_total);
  for (std::size_t i = 0; i < cfg.n_total; ++i) {
    AgentState& agent = pop[i];
    agent.group = i < cfg.n_majority ? Group::Majority : Group::Minority;
    const std::size_t rank = agent.group == Group::Majority ? i : i - cfg.n_majority;
    if (rank < seeded[index(agent.group)]) {
      for (Relation rel : {Relation::Out, Relation::In})
        for (Reputation rep : {Reputation::Bad, Reputation::Good})
          agent.q_at(rel, rep, cfg.seed_strategy.action(rel, rep)) = kSeedQValue;
    } else if (cfg.init_scheme == QInit::UniformSmall) {
      for (double& cell : agent.q) cell = rng.uniform(-kQInitScale, kQInitScale);
    }
    switch (cfg.init_reputation_scheme) {
      case ReputationInit::Coin:
        agent.reputation = rng.bernoulli(0.5) ? Reputation::Good : Reputation::Bad;
        break;
      case ReputationInit::AllGood: agent.reputation = Reputation::Good; break;
      case ReputationInit::AllBad: agent.reputation = Reputation::Bad; break;
    }
  }
  return pop;
}

namespace {

Action random_action(Rng& rng) { return rng.bernoulli(0.5) ? Action::Cooperate : Action::Defect; }

}  // namespace

Action choose_action(const AgentState& agent, Relation rel, Reputation rep, double mu, Rng& rng,
                     Exploration mode) {
  const bool explore = rng.bernoulli(mu);
  if (explore && mode == Exploration::Uniform) return random_action(rng);
  const double qc = agent.q_at(rel, rep, Action::Cooperate);
  const double qd = agent.q_at(rel, rep, Action::Defect);
  Action greedy = qc > qd ? Action::Cooperate : Action::Defect;
  if (qc == qd) greedy = random_action(rng);
  if (!explore) return greedy;
  return greedy == Action::Cooperate ? Action::Defect : Action::Cooperate;
}

InteractionRecord step(std::vector<AgentState>& population, Norm norm, const SimConfig& cfg, Rng& rng) {
  const std::size_t n = population.size();
  if (n < 2) throw std::invalid_argument("step: population needs at least two agents");
  InteractionRecord rec;
  rec.donor = rng.below(n);
  rec.recipient = rng.below(n - 1);
  if (rec.recipient >= rec.donor) ++rec.recipient;

  AgentState& donor = population[rec.donor];
  AgentState& recipient = population[rec.recipient];
  rec.relation = relation_between(donor.group, recipient.group);
  rec.recipient_reputation = recipient.reputation;

  rec.intended = choose_action(donor, rec.relation, rec.recipient_reputation, cfg.mu, rng, cfg.exploration);
  rec.realized = rec.intended;
  if (rec.intended == Action::Cooperate && rng.bernoulli(cfg.eps)) rec.realized = Action::Defect;
  const double a = bit(rec.realized);

  donor.cumulative_payoff -= a * cfg.c;
  recipient.cumulative_payoff += a * cfg.b;

  double& donor_cell = donor.q_at(rec.relation, rec.recipient_reputation, rec.realized);
  donor_cell = (1.0 - cfg.alpha) * donor_cell - cfg.alpha * a * cfg.c;
  if (const auto& ctx = recipient.last_donor_context) {
    double& cell = recipient.q_at(ctx->relation, ctx->reputation, ctx->action);
    cell = (1.0 - cfg.alpha) * cell + cfg.alpha * a * cfg.b;
  }

  Reputation judged = norm.judge(rec.relation, rec.recipient_reputation, rec.realized);
  if (rng.bernoulli(cfg.delta))
    judged = judged == Reputation::Good ? Reputation::Bad : Reputation::Good;
  donor.reputation = judged;
  rec.donor_new_reputation = judged;
  donor.last_donor_context = DonorContext{rec.relation, rec.recipient_reputation, rec.realized};
  return rec;
}

SimResult run(const SimConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.rng_seed);
  std::vector<AgentState> pop = initial_population(cfg, rng);

  SimResult result;
  result.seed = cfg.rng_seed;
  result.window_length = cfg.window_length();
  const std::size_t window_start = cfg.n_interactions - result.window_length;
  std::size_t window_coop = 0;
  std::size_t bucket_coop = 0, bucket_size = 0;
  result.trajectory.reserve(cfg.n_interactions / cfg.trajectory_bucket + 1);

  for (std::size_t t = 0; t < cfg.n_interactions; ++t) {
    const InteractionRecord rec = step(pop, cfg.norm, cfg, rng);
    const bool cooperated = rec.realized == Action::Cooperate;
    if (t >= window_start && cooperated) {
      ++window_coop;
      pop[rec.donor].window_payoff -= cfg.c;
      pop[rec.recipient].window_payoff += cfg.b;
    }
    bucket_coop += cooperated;
    if (++bucket_size == cfg.trajectory_bucket) {
      result.trajectory.push_back(static_cast<double>(bucket_coop) / static_cast<double>(bucket_size));
      bucket_coop = bucket_size = 0;
    }
  }
  if (bucket_size > 0)
    result.trajectory.push_back(static_cast<double>(bucket_coop) / static_cast<double>(bucket_size));

  result.cooperation = static_cast<double>(window_coop) / static_cast<double>(result.window_length);

  std::array<std::size_t, 2> group_size{};
  for (const AgentState& agent : pop) {
    const std::size_t g = index(agent.group);
    ++group_size[g];
    result.mean_window_payoff[g] += agent.window_payoff;
    result.prevalence[g][static_cast<std::size_t>(agent.effective_strategy().code())] += 1.0;
  }
  for (std::size_t g = 0; g < 2; ++g) {
    result.mean_window_payoff[g] /= static_cast<double>(group_size[g]);
    for (double& share : result.prevalence[g]) share /= static_cast<double>(group_size[g]);
  }
  const GroupUtilities u{result.mean_window_payoff};
  result.fairness = fairness(u);
  result.fairness_edge_rule = fairness_edge_rule(u);
  return result;
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

BatchAggregate aggregate(const std::vector<SimResult>& runs) {
  std::vector<double> coop, fair;
  for (const auto& r : runs) {
    coop.push_back(r.cooperation);
    fair.push_back(r.fairness);
  }
  BatchAggregate agg;
  std::tie(agg.mean_cooperation, agg.sd_cooperation) = mean_sd(coop);
  std::tie(agg.mean_fairness, agg.sd_fairness) = mean_sd(fair);
  return agg;
}

}  // namespace

BatchResult run_batch(const SimConfig& cfg, std::size_t n_seeds, unsigned threads) {
  if (n_seeds == 0) throw std::invalid_argument("run_batch: n_seeds must be at least 1");
  cfg.validate();
  BatchResult batch;
  batch.runs.resize(n_seeds);
  parallel_for(n_seeds, threads, [&](std::size_t k) {
    SimConfig local = cfg;
    local.rng_seed = cfg.rng_seed + k;
    batch.runs[k] = run(local);
  });
  batch.aggregate = aggregate(batch.runs);
  return batch;
}

std::vector<SeedSweepCell> seed_fraction_sweep(const SimConfig& cfg, std::span<const double> fractions,
                                               std::span<const double> bc_ratios, std::size_t n_seeds,
                                               unsigned threads) {
  if (n_seeds == 0) throw std::invalid_argument("seed_fraction_sweep: n_seeds must be at least 1");
  for (double f : fractions)
    if (!(f >= 0.0 && f <= 1.0)) throw std::invalid_argument("seed fractions must lie in [0, 1]");
  for (double r : bc_ratios)
    if (!(r > 1.0)) throw std::invalid_argument("benefit/cost ratios must exceed 1");

  const std::size_t cells = fractions.size() * bc_ratios.size();
  auto cell_config = [&](std::size_t cell) {
    SimConfig local = cfg;
    local.seed_fraction = fractions[cell / bc_ratios.size()];
    local.b = bc_ratios[cell % bc_ratios.size()] * cfg.c;
    return local;
  };
  for (std::size_t cell = 0; cell < cells; ++cell) cell_config(cell).validate();

  // Flatten (cell, seed) so every run is an independent work item.
  std::vector<SimResult> runs(cells * n_seeds);
  parallel_for(runs.size(), threads, [&](std::size_t i) {
    SimConfig local = cell_config(i / n_seeds);
    local.rng_seed = cfg.rng_seed + i % n_seeds;
    runs[i] = run(local);
  });

  std::vector<SeedSweepCell> out(cells);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::vector<SimResult> slice(runs.begin() + static_cast<std::ptrdiff_t>(cell * n_seeds),
                                 runs.begin() + static_cast<std::ptrdiff_t>((cell + 1) * n_seeds));
    out[cell] = SeedSweepCell{fractions[cell / bc_ratios.size()], bc_ratios[cell % bc_ratios.size()],
                              aggregate(slice)};
  }
  return out;
}

}  // namespace irgroups
