// CSV/JSON serialisation of results and run manifests.
//
// Doubles are written with 17 significant digits so values round-trip.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "irgroups/egt.hpp"
#include "irgroups/rl.hpp"
#include "irgroups/sweep.hpp"

namespace irgroups::io {

std::string format_double(double x);

inline constexpr std::string_view kEnumerationHeader =
    "norm_code,sigma_M_code,sigma_m_code,fair_norm,G_M,G_m,U_M,U_m,coop,fairness,stable,n_invaders,"
    "maj_category,min_category";
inline constexpr std::string_view kGridHeader =
    "in_norm,out_norm,norm_code,maj_in,maj_out,min_in,min_out,sigma_M_code,sigma_m_code,G_M,G_m,U_M,U_m,"
    "coop,fairness,ties";
inline constexpr std::string_view kPhaseHeader = "bc_ratio,eps_M,stable_count,stable_cooperative_count";
inline constexpr std::string_view kGroupsizeHeader =
    "norm_code,sigma_M_code,sigma_m_code,fair_norm,p,stable,coop,fairness,largest_stable_p";
inline constexpr std::string_view kBcHeader =
    "norm_code,sigma_M_code,sigma_m_code,fair_norm,coop_high,fair_high,coop_low,fair_low";
inline constexpr std::string_view kRlRunsHeader =
    "run,seed,cooperation,fairness,payoff_M,payoff_m,window_length,top_strategy_M,top_strategy_m";
inline constexpr std::string_view kRlAggregateHeader =
    "norm_code,n_runs,mean_cooperation,sd_cooperation,mean_fairness,sd_fairness";
inline constexpr std::string_view kRlTrajectoryHeader = "run,seed,bucket,cooperation";
inline constexpr std::string_view kRlPrevalenceHeader = "run,seed,group,strategy_code,share";
inline constexpr std::string_view kSeedSweepHeader =
    "seed_fraction,bc_ratio,n_seeds,mean_cooperation,sd_cooperation,mean_fairness,sd_fairness";

/// Lines starting with '#' carry key=value metadata ahead of the header row.
using Metadata = std::vector<std::pair<std::string, std::string>>;

void write_enumeration_csv(std::ostream& os, const Enumeration& e);
void write_grid_csv(std::ostream& os, const std::vector<GridEntry>& grid);
void write_phase_csv(std::ostream& os, const PhaseGrid& grid, const Metadata& meta);
void write_groupsize_csv(std::ostream& os, const GroupsizeSweep& sweep, const Metadata& meta);
void write_bc_csv(std::ostream& os, const std::vector<BcPair>& pairs, const Metadata& meta);
void write_rl_runs_csv(std::ostream& os, const BatchResult& batch);
void write_rl_aggregate_csv(std::ostream& os, const BatchResult& batch, Norm norm);
void write_rl_trajectory_csv(std::ostream& os, const BatchResult& batch);
/// Share of each group's agents whose greedy policy is each strategy, per run.
void write_rl_prevalence_csv(std::ostream& os, const BatchResult& batch);
void write_seed_sweep_csv(std::ostream& os, const std::vector<SeedSweepCell>& cells, std::size_t n_seeds,
                          const Metadata& meta);

nlohmann::json to_json(const Params& p);
nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const EvalResult& r);
nlohmann::json to_json(const SimResult& r);

/// Fixed encodings, written into every manifest.
nlohmann::json encoding_description();

std::string sha256_hex(std::string_view data);

}  // namespace irgroups::io
