// Parameter sweeps over the analytical model.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "irgroups/egt.hpp"
#include "irgroups/model.hpp"

namespace irgroups {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t n_points = 2;
  bool linear = true;

  void validate() const;
  /// Grid point i. The position along the axis is the exact rational
  /// i / (n - 1), so points shared by a coarse and a refined grid coincide.
  double at(std::size_t i) const;
  std::vector<double> values() const;
};

struct PhaseCell {
  double bc_ratio = 0.0;
  double eps_majority = 0.0;
  std::size_t stable = 0;
  /// Stable combinations with strictly positive cooperativeness.
  std::size_t stable_cooperative = 0;
};

struct PhaseGrid {
  Axis bc_axis;
  Axis eps_axis;
  bool vary_both_benefits = false;
  /// Row-major: bc index outer, eps index inner.
  std::vector<PhaseCell> cells;

  const PhaseCell& at(std::size_t bc_index, std::size_t eps_index) const {
    return cells[bc_index * eps_axis.n_points + eps_index];
  }
};

/// Parameters of one phase-diagram cell: the majority benefit (and, when
/// requested, the minority benefit) becomes ratio * cost, and the majority
/// execution error rate is overridden.
Params phase_cell_params(const Params& base, double bc_ratio, double eps_majority, bool vary_both_benefits);

PhaseCell phase_cell(const Params& base, double bc_ratio, double eps_majority, bool vary_both_benefits,
                     unsigned threads = 1);

PhaseGrid phase_diagram(const Params& base, const Axis& bc_axis, const Axis& eps_axis,
                        bool vary_both_benefits = false, unsigned threads = 1);

struct GroupsizePoint {
  bool stable = false;
  double cooperativeness = 0.0;
  double fairness = 0.0;
};

struct GroupsizeTrajectory {
  NSS nss;
  /// One point per sampled p, in axis order.
  std::vector<GroupsizePoint> points;
  std::optional<double> largest_stable_p;
};

struct GroupsizeSweep {
  std::vector<double> p_values;
  /// NSS stable at one or more sampled p, in code-triple order.
  std::vector<GroupsizeTrajectory> trajectories;
};

GroupsizeSweep groupsize_sweep(const Params& base, const Axis& p_axis, unsigned threads = 1);

struct BcPair {
  NSS nss;
  double coop_high = 0.0;
  double fair_high = 0.0;
  double coop_low = 0.0;
  double fair_low = 0.0;
};

/// Sets b_i = ratio * c_i for both groups.
Params with_bc_ratio(const Params& base, double ratio);

/// Records for every NSS stable at both benefit/cost ratios.
std::vector<BcPair> bc_comparison(const Params& base, double bc_high, double bc_low, unsigned threads = 1);

}  // namespace irgroups
