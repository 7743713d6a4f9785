#include "irgroups/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace irgroups::io {

std::string format_double(double x) {
  std::array<char, 40> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.17g", x);
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

namespace {

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << '=' << value << '\n';
}

std::string_view bool01(bool b) { return b ? "1" : "0"; }

int top_strategy(const std::array<double, 16>& shares) {
  return static_cast<int>(std::max_element(shares.begin(), shares.end()) - shares.begin());
}

}  // namespace

void write_enumeration_csv(std::ostream& os, const Enumeration& e) {
  os << kEnumerationHeader << '\n';
  for (const EvalResult& r : e.results) {
    os << r.nss.norm.code() << ',' << r.nss.majority.code() << ',' << r.nss.minority.code() << ','
       << bool01(r.nss.norm.is_fair()) << ',' << format_double(r.reputations.good[0]) << ',' << format_double(r.reputations.good[1]) << ','
       << format_double(r.utilities.value[0]) << ',' << format_double(r.utilities.value[1]) << ','
       << format_double(r.cooperativeness) << ',' << format_double(r.fairness) << ',' << bool01(r.stable) << ','
       << r.invaders.size() << ',' << to_string(classify(r.nss.majority)) << ','
       << to_string(classify(r.nss.minority)) << '\n';
  }
}

void write_grid_csv(std::ostream& os, const std::vector<GridEntry>& grid) {
  os << kGridHeader << '\n';
  for (const GridEntry& g : grid) {
    const EvalResult& r = g.best;
    os << label(g.in_half) << ',' << label(g.out_half) << ',' << r.nss.norm.code() << ','
       << sub_strategy_name(r.nss.majority, Relation::In) << ','
       << sub_strategy_name(r.nss.majority, Relation::Out) << ','
       << sub_strategy_name(r.nss.minority, Relation::In) << ','
       << sub_strategy_name(r.nss.minority, Relation::Out) << ',' << r.nss.majority.code() << ','
       << r.nss.minority.code() << ',' << format_double(r.reputations.good[0]) << ','
       << format_double(r.reputations.good[1]) << ',' << format_double(r.utilities.value[0]) << ','
       << format_double(r.utilities.value[1]) << ',' << format_double(r.cooperativeness) << ','
       << format_double(r.fairness) << ',' << g.ties << '\n';
  }
}

void write_phase_csv(std::ostream& os, const PhaseGrid& grid, const Metadata& meta) {
  write_metadata(os, meta);
  os << "# bc_axis=" << format_double(grid.bc_axis.min) << ':' << format_double(grid.bc_axis.max) << ':'
     << grid.bc_axis.n_points << (grid.bc_axis.linear ? ":linear" : ":log") << '\n';
  os << "# eps_axis=" << format_double(grid.eps_axis.min) << ':' << format_double(grid.eps_axis.max) << ':'
     << grid.eps_axis.n_points << (grid.eps_axis.linear ? ":linear" : ":log") << '\n';
  os << "# vary_both_benefits=" << bool01(grid.vary_both_benefits) << '\n';
  os << kPhaseHeader << '\n';
  for (const PhaseCell& c : grid.cells)
    os << format_double(c.bc_ratio) << ',' << format_double(c.eps_majority) << ',' << c.stable << ','
       << c.stable_cooperative << '\n';
}

void write_groupsize_csv(std::ostream& os, const GroupsizeSweep& sweep, const Metadata& meta) {
  write_metadata(os, meta);
  os << kGroupsizeHeader << '\n';
  for (const GroupsizeTrajectory& t : sweep.trajectories) {
    const std::string largest = t.largest_stable_p ? format_double(*t.largest_stable_p) : "";
    for (std::size_t k = 0; k < sweep.p_values.size(); ++k) {
      const GroupsizePoint& pt = t.points[k];
      os << t.nss.norm.code() << ',' << t.nss.majority.code() << ',' << t.nss.minority.code() << ','
         << bool01(t.nss.norm.is_fair()) << ',' << format_double(sweep.p_values[k]) << ','
         << bool01(pt.stable) << ',' << format_double(pt.cooperativeness) << ','
         << format_double(pt.fairness) << ',' << largest << '\n';
    }
  }
}

void write_bc_csv(std::ostream& os, const std::vector<BcPair>& pairs, const Metadata& meta) {
  write_metadata(os, meta);
  os << kBcHeader << '\n';
  for (const BcPair& p : pairs)
    os << p.nss.norm.code() << ',' << p.nss.majority.code() << ',' << p.nss.minority.code() << ','
       << bool01(p.nss.norm.is_fair()) << ',' << format_double(p.coop_high) << ','
       << format_double(p.fair_high) << ',' << format_double(p.coop_low) << ',' << format_double(p.fair_low)
       << '\n';
}

void write_rl_runs_csv(std::ostream& os, const BatchResult& batch) {
  os << kRlRunsHeader << '\n';
  for (std::size_t k = 0; k < batch.runs.size(); ++k) {
    const SimResult& r = batch.runs[k];
    os << k << ',' << r.seed << ',' << format_double(r.cooperation) << ',' << format_double(r.fairness) << ','
       << format_double(r.mean_window_payoff[0]) << ',' << format_double(r.mean_window_payoff[1]) << ','
       << r.window_length << ',' << top_strategy(r.prevalence[0]) << ',' << top_strategy(r.prevalence[1])
       << '\n';
  }
}

void write_rl_aggregate_csv(std::ostream& os, const BatchResult& batch, Norm norm) {
  const BatchAggregate& a = batch.aggregate;
  os << kRlAggregateHeader << '\n'
     << norm.code() << ',' << batch.runs.size() << ',' << format_double(a.mean_cooperation) << ',' << format_double(a.sd_cooperation)
     << ',' << format_double(a.mean_fairness) << ',' << format_double(a.sd_fairness) << '\n';
}

void write_rl_trajectory_csv(std::ostream& os, const BatchResult& batch) {
  os << kRlTrajectoryHeader << '\n';
  for (std::size_t k = 0; k < batch.runs.size(); ++k) {
    const SimResult& r = batch.runs[k];
    for (std::size_t i = 0; i < r.trajectory.size(); ++i)
      os << k << ',' << r.seed << ',' << i << ',' << format_double(r.trajectory[i]) << '\n';
  }
}

void write_rl_prevalence_csv(std::ostream& os, const BatchResult& batch) {
  os << kRlPrevalenceHeader << '\n';
  for (std::size_t k = 0; k < batch.runs.size(); ++k) {
    const SimResult& r = batch.runs[k];
    for (Group g : kGroups)
      for (int s = 0; s < 16; ++s)
        os << k << ',' << r.seed << ',' << to_string(g) << ',' << s << ','
           << format_double(r.prevalence[index(g)][static_cast<std::size_t>(s)]) << '\n';
  }
}

void write_seed_sweep_csv(std::ostream& os, const std::vector<SeedSweepCell>& cells, std::size_t n_seeds,
                          const Metadata& meta) {
  write_metadata(os, meta);
  os << kSeedSweepHeader << '\n';
  for (const SeedSweepCell& c : cells) {
    const BatchAggregate& a = c.aggregate;
    os << format_double(c.fraction) << ',' << format_double(c.bc_ratio) << ',' << n_seeds << ','
       << format_double(a.mean_cooperation) << ',' << format_double(a.sd_cooperation) << ','
       << format_double(a.mean_fairness) << ',' << format_double(a.sd_fairness) << '\n';
  }
}

nlohmann::json to_json(const Params& p) {
  return {
      {"p", p.p},
      {"b_M", p.benefit[0]},
      {"b_m", p.benefit[1]},
      {"c_M", p.cost[0]},
      {"c_m", p.cost[1]},
      {"eps_M", p.eps[0]},
      {"eps_m", p.eps[1]},
      {"delta", p.delta},
  };
}

nlohmann::json to_json(const SimConfig& c) {
  return {
      {"n_total", c.n_total},
      {"n_majority", c.n_majority},
      {"mu", c.mu},
      {"exploration", to_string(c.exploration)},
      {"alpha", c.alpha},
      {"n_interactions", c.n_interactions},
      {"b", c.b},
      {"c", c.c},
      {"eps", c.eps},
      {"delta", c.delta},
      {"norm", label(c.norm)},
      {"norm_code", c.norm.code()},
      {"seed_fraction", c.seed_fraction},
      {"seed_strategy", c.seed_strategy.code()},
      {"q_init", to_string(c.init_scheme)},
      {"reputation_init", to_string(c.init_reputation_scheme)},
      {"measure_fraction", c.measure_fraction},
      {"window_length", c.window_length()},
      {"rng_seed", c.rng_seed},
      {"trajectory_bucket", c.trajectory_bucket},
  };
}

nlohmann::json to_json(const EvalResult& r) {
  nlohmann::json invaders = nlohmann::json::array();
  for (const Invader& inv : r.invaders)
    invaders.push_back({{"group", to_string(inv.group)}, {"mutant", inv.mutant.code()},
                        {"mutant_label", label(inv.mutant)}, {"gain", inv.gain}});
  return {
      {"norm", label(r.nss.norm)},
      {"norm_code", r.nss.norm.code()},
      {"sigma_M", r.nss.majority.code()},
      {"sigma_m", r.nss.minority.code()},
      {"G", {{"M", r.reputations.good[0]}, {"m", r.reputations.good[1]}}},
      {"U", {{"M", r.utilities.value[0]}, {"m", r.utilities.value[1]}}},
      {"cooperativeness", r.cooperativeness},
      {"fairness", r.fairness},
      {"fairness_edge_rule", r.fairness_edge_rule},
      {"stable", r.stable},
      {"invaders", invaders},
  };
}

nlohmann::json to_json(const SimResult& r) {
  nlohmann::json prevalence;
  for (Group g : kGroups) prevalence[std::string(to_string(g))] = r.prevalence[index(g)];
  return {
      {"seed", r.seed},
      {"cooperation", r.cooperation},
      {"fairness", r.fairness},
      {"fairness_edge_rule", r.fairness_edge_rule},
      {"mean_window_payoff", {{"M", r.mean_window_payoff[0]}, {"m", r.mean_window_payoff[1]}}},
      {"window_length", r.window_length},
      {"prevalence", prevalence},
  };
}

nlohmann::json encoding_description() {
  return {
      {"strategy", "bit (2*reputation + relation) = action; relation 1 = in-group, reputation 1 = good"},
      {"half_norm", "bit (2*action + reputation) = assigned reputation"},
      {"norm", "code = 16 * in_group_half + out_group_half"},
  };
}

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw std::runtime_error("sha256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace irgroups::io
