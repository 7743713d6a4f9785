#include "irgroups/sweep.hpp"

#include <cmath>
#include <stdexcept>

#include "irgroups/parallel.hpp"

namespace irgroups {

void Axis::validate() const {
  if (n_points < 2) throw std::invalid_argument("axis '" + name + "' needs at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max) || !(min < max))
    throw std::invalid_argument("axis '" + name + "' needs finite min < max");
  if (!linear && !(min > 0.0))
    throw std::invalid_argument("logarithmic axis '" + name + "' needs min > 0");
}

double Axis::at(std::size_t i) const {
  const double t = static_cast<double>(i) / static_cast<double>(n_points - 1);
  if (linear) return std::lerp(min, max, t);
  return std::exp(std::lerp(std::log(min), std::log(max), t));
}

std::vector<double> Axis::values() const {
  validate();
  std::vector<double> out(n_points);
  for (std::size_t i = 0; i < n_points; ++i) out[i] = at(i);
  return out;
}

namespace {

struct Quick {
  bool stable = false;
  double cooperativeness = 0.0;
  double fairness = 0.0;
};

Quick quick_eval(const Params& params, const NSS& nss) {
  const ReputationState g = stationary_reputations(build_system(params, nss));
  const GroupUtilities u = incumbent_utilities(params, nss, g);
  return Quick{find_invaders(params, nss, g, u, true).stable, cooperativeness(params, nss, g), fairness(u)};
}

}  // namespace

Params phase_cell_params(const Params& base, double bc_ratio, double eps_majority, bool vary_both_benefits) {
  Params p = base;
  p.benefit[index(Group::Majority)] = bc_ratio * base.cost_of(Group::Majority);
  if (vary_both_benefits) p.benefit[index(Group::Minority)] = bc_ratio * base.cost_of(Group::Minority);
  p.eps[index(Group::Majority)] = eps_majority;
  return p;
}

PhaseCell phase_cell(const Params& base, double bc_ratio, double eps_majority, bool vary_both_benefits,
                     unsigned threads) {
  const Params params = phase_cell_params(base, bc_ratio, eps_majority, vary_both_benefits);
  params.validate();
  std::vector<Quick> evals(NSS::kCount);
  parallel_for(NSS::kCount, threads, [&](std::size_t i) { evals[i] = quick_eval(params, NSS::from_index(i)); });
  PhaseCell cell{bc_ratio, eps_majority, 0, 0};
  for (const Quick& q : evals) {
    if (!q.stable) continue;
    ++cell.stable;
    if (q.cooperativeness > 0.0) ++cell.stable_cooperative;
  }
  return cell;
}

PhaseGrid phase_diagram(const Params& base, const Axis& bc_axis, const Axis& eps_axis, bool vary_both_benefits,
                        unsigned threads) {
  const auto ratios = bc_axis.values();
  const auto rates = eps_axis.values();
  PhaseGrid grid{bc_axis, eps_axis, vary_both_benefits, {}};
  grid.cells.reserve(ratios.size() * rates.size());
  for (double r : ratios)
    for (double e : rates) grid.cells.push_back(phase_cell(base, r, e, vary_both_benefits, threads));
  return grid;
}

GroupsizeSweep groupsize_sweep(const Params& base, const Axis& p_axis, unsigned threads) {
  GroupsizeSweep sweep;
  sweep.p_values = p_axis.values();
  for (double p : sweep.p_values)
    if (!(p > 0.5 && p < 1.0)) throw std::invalid_argument("group-size axis must lie within (0.5, 1)");

  const std::size_t np = sweep.p_values.size();
  std::vector<Quick> evals(NSS::kCount * np);
  for (std::size_t k = 0; k < np; ++k) {
    Params params = base;
    params.p = sweep.p_values[k];
    params.validate();
    parallel_for(NSS::kCount, threads,
                 [&](std::size_t i) { evals[i * np + k] = quick_eval(params, NSS::from_index(i)); });
  }

  for (std::size_t i = 0; i < NSS::kCount; ++i) {
    GroupsizeTrajectory traj{NSS::from_index(i), {}, std::nullopt};
    bool any = false;
    for (std::size_t k = 0; k < np; ++k) {
      const Quick& q = evals[i * np + k];
      traj.points.push_back({q.stable, q.cooperativeness, q.fairness});
      if (q.stable) {
        any = true;
        if (!traj.largest_stable_p || sweep.p_values[k] > *traj.largest_stable_p)
          traj.largest_stable_p = sweep.p_values[k];
      }
    }
    if (any) sweep.trajectories.push_back(std::move(traj));
  }
  return sweep;
}

Params with_bc_ratio(const Params& base, double ratio) {
  Params p = base;
  for (Group g : kGroups) p.benefit[index(g)] = ratio * base.cost_of(g);
  return p;
}

std::vector<BcPair> bc_comparison(const Params& base, double bc_high, double bc_low, unsigned threads) {
  if (!(bc_high > 1.0) || !(bc_low > 1.0)) throw std::invalid_argument("benefit/cost ratios must exceed 1");
  const Params high = with_bc_ratio(base, bc_high);
  const Params low = with_bc_ratio(base, bc_low);
  high.validate();
  low.validate();
  std::vector<Quick> eh(NSS::kCount), el(NSS::kCount);
  parallel_for(NSS::kCount, threads, [&](std::size_t i) {
    const NSS nss = NSS::from_index(i);
    eh[i] = quick_eval(high, nss);
    el[i] = quick_eval(low, nss);
  });
  std::vector<BcPair> out;
  for (std::size_t i = 0; i < NSS::kCount; ++i) {
    if (!eh[i].stable || !el[i].stable) continue;
    out.push_back({NSS::from_index(i), eh[i].cooperativeness, eh[i].fairness, el[i].cooperativeness,
                   el[i].fairness});
  }
  return out;
}

}  // namespace irgroups
