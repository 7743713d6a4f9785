// irgroups command-line driver.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irgroups/egt.hpp"
#include "irgroups/io.hpp"
#include "irgroups/model.hpp"
#include "irgroups/reputation.hpp"
#include "irgroups/rl.hpp"
#include "irgroups/rng.hpp"
#include "irgroups/sweep.hpp"
#include "irgroups/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace irgroups;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSingular = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads --config files as JSON. Nested objects address subcommands, so
// {"rl": {"run": {"seeds": 10}}} sets `rl run --seeds 10`.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    return dump(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      input >> j;
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError("config", e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config", "top level must be a JSON object");
    // A run manifest replays the options it recorded.
    if (j.contains("resolved_options") && j["resolved_options"].is_object()) j = json(j["resolved_options"]);
    std::vector<CLI::ConfigItem> items;
    collect(j, {}, items);
    return items;
  }

 private:
  static void collect(const json& j, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it->is_object()) {
        auto nested = parents;
        nested.push_back(it.key());
        collect(*it, nested, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = it.key();
      if (it->is_array()) {
        for (const json& v : *it) item.inputs.push_back(scalar(v));
      } else {
        item.inputs.push_back(scalar(*it));
      }
      items.push_back(std::move(item));
    }
  }

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static json dump(const CLI::App* app, bool default_also) {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string& name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& results = opt->results();
        if (results.size() == 1 && opt->get_expected_max() <= 1)
          out[name] = results.front();
        else
          out[name] = results;
      } else if (default_also && !opt->get_default_str().empty()) {
        out[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      if (!*sub) continue;
      json nested = dump(sub, default_also);
      if (!nested.empty()) out[sub->get_name()] = nested;
    }
    return out;
  }
};

struct Shared {
  double p = 0.9;
  double b = 5.0;
  double c = 1.0;
  std::optional<double> b_min;
  std::optional<double> c_min;
  double eps = 0.01;
  std::optional<double> eps_min;
  double delta = 0.01;
  std::string out = "out";
  unsigned threads = 0;
  bool force = false;
  std::vector<std::string> argv;
  json resolved_options;

  Params params() const {
    auto require = [](bool ok, const char* flag, const char* rule) {
      if (!ok) throw UsageError(std::string(flag) + " " + rule);
    };
    const double bm = b_min.value_or(b), cm = c_min.value_or(c), em = eps_min.value_or(eps);
    require(p > 0.0 && p < 1.0, "--p", "must lie in (0, 1)");
    require(c > 0.0, "--c", "must be positive");
    require(b > c, "--b", "must exceed --c");
    require(cm > 0.0, "--c-min", "must be positive");
    require(bm > cm, "--b-min", "must exceed the minority cost");
    require(eps > 0.0 && eps < 1.0, "--eps", "must lie in (0, 1)");
    require(em > 0.0 && em < 1.0, "--eps-min", "must lie in (0, 1)");
    require(delta >= 0.0 && delta < 0.5, "--delta", "must lie in [0, 0.5)");
    Params prm{p, {b, bm}, {c, cm}, {eps, em}, delta};
    prm.validate();
    return prm;
  }

  unsigned worker_count() const {
    if (threads > 0) return threads;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects output payloads, then writes them together with manifest.json.
class OutputSet {
 public:
  OutputSet(const Shared& shared, std::string command) : shared_(shared), command_(std::move(command)) {}

  void add(const std::string& name, std::string payload) { files_.emplace_back(name, std::move(payload)); }

  json manifest;

  void commit() {
    const fs::path dir(shared_.out);
    std::vector<fs::path> targets;
    for (const auto& [name, _] : files_) targets.push_back(dir / name);
    targets.push_back(dir / "manifest.json");
    if (!shared_.force)
      for (const fs::path& t : targets)
        if (fs::exists(t)) throw UsageError("refusing to overwrite " + t.string() + " (use --force)");
    fs::create_directories(dir);

    json digests = json::object();
    for (const auto& [name, payload] : files_) {
      write_file(dir / name, payload);
      digests[name] = io::sha256_hex(payload);
    }
    manifest["tool"] = "irgroups";
    manifest["version"] = kVersion;
    manifest["command"] = command_;
    manifest["argv"] = shared_.argv;
    manifest["resolved_options"] = shared_.resolved_options;
    manifest["encodings"] = io::encoding_description();
    manifest["timestamp"] = utc_timestamp();
    manifest["files"] = digests;
    if (!manifest.contains("rng")) manifest["rng"] = {{"algorithm", Rng::kAlgorithm}, {"seeds", json::array()}};
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  }

 private:
  static void write_file(const fs::path& path, const std::string& payload) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << payload;
    if (!os) throw std::runtime_error("failed writing " + path.string());
  }

  const Shared& shared_;
  std::string command_;
  std::vector<std::pair<std::string, std::string>> files_;
};

template <class Fn>
std::string render(Fn&& fn) {
  std::ostringstream os;
  fn(os);
  return os.str();
}

io::Metadata params_metadata(const Params& prm) {
  return {{"p", io::format_double(prm.p)},
          {"b_M", io::format_double(prm.benefit[0])},
          {"b_m", io::format_double(prm.benefit[1])},
          {"c_M", io::format_double(prm.cost[0])},
          {"c_m", io::format_double(prm.cost[1])},
          {"eps_M", io::format_double(prm.eps[0])},
          {"eps_m", io::format_double(prm.eps[1])},
          {"delta", io::format_double(prm.delta)}};
}

struct AxisArgs {
  double start = 0.0;
  double stop = 1.0;
  std::size_t points = 2;
  bool log = false;

  Axis axis(std::string name) const { return Axis{std::move(name), start, stop, points, !log}; }
};

void add_axis(CLI::App* cmd, const std::string& prefix, AxisArgs& a, const std::string& what) {
  cmd->add_option("--" + prefix + "-start", a.start, "First " + what + " value")->capture_default_str();
  cmd->add_option("--" + prefix + "-stop", a.stop, "Last " + what + " value")->capture_default_str();
  cmd->add_option("--" + prefix + "-points", a.points, "Number of " + what + " values")->capture_default_str();
  cmd->add_flag("--" + prefix + "-log", a.log, "Space " + what + " values logarithmically");
}

struct RlArgs {
  std::string norm = "SJ/SJ";
  std::size_t n_total = 50;
  std::size_t n_majority = 45;
  double mu = 0.1;
  std::string exploration = "flip";
  double alpha = 0.1;
  std::size_t interactions = 250'000;
  std::string seed_strategy = "Disc";
  std::string q_init = "uniform";
  std::string rep_init = "coin";
  double measure_fraction = 0.2;
  std::uint64_t rng_seed = 1;
  std::size_t bucket = 1000;
  std::size_t seeds = 50;

  SimConfig config(const Shared& shared) const {
    SimConfig cfg;
    cfg.n_total = n_total;
    cfg.n_majority = n_majority;
    cfg.mu = mu;
    cfg.exploration = parse_exploration(exploration);
    cfg.alpha = alpha;
    cfg.n_interactions = interactions;
    cfg.b = shared.b;
    cfg.c = shared.c;
    cfg.eps = shared.eps;
    cfg.delta = shared.delta;
    cfg.norm = parse_norm(norm);
    cfg.seed_strategy = parse_strategy(seed_strategy);
    cfg.init_scheme = parse_q_init(q_init);
    cfg.init_reputation_scheme = parse_reputation_init(rep_init);
    cfg.measure_fraction = measure_fraction;
    cfg.rng_seed = rng_seed;
    cfg.trajectory_bucket = bucket;
    cfg.validate();
    return cfg;
  }
};

void add_rl_options(CLI::App* cmd, RlArgs& a) {
  cmd->add_option("--norm", a.norm, "Norm as IN/OUT half-norm names or a code")->capture_default_str();
  cmd->add_option("--agents", a.n_total, "Population size")->capture_default_str();
  cmd->add_option("--majority", a.n_majority, "Majority group size")->capture_default_str();
  cmd->add_option("--mu", a.mu, "Exploration rate")->capture_default_str();
  cmd->add_option("--exploration", a.exploration, "Exploratory action: flip or uniform")->capture_default_str();
  cmd->add_option("--alpha", a.alpha, "Learning rate")->capture_default_str();
  cmd->add_option("--interactions", a.interactions, "Interactions per run")->capture_default_str();
  cmd->add_option("--seed-strategy", a.seed_strategy, "Strategy of seeded agents")->capture_default_str();
  cmd->add_option("--q-init", a.q_init, "Q initialisation: uniform or zero")->capture_default_str();
  cmd->add_option("--rep-init", a.rep_init, "Initial reputations: coin, good or bad")->capture_default_str();
  cmd->add_option("--measure-fraction", a.measure_fraction, "Final fraction of interactions measured")
      ->capture_default_str();
  cmd->add_option("--rng-seed", a.rng_seed, "Seed of the first run")->capture_default_str();
  cmd->add_option("--bucket", a.bucket, "Trajectory bucket size")->capture_default_str();
  cmd->add_option("--seeds", a.seeds, "Number of runs")->capture_default_str();
}

json seed_list(std::uint64_t first, std::size_t n) {
  json seeds = json::array();
  for (std::size_t k = 0; k < n; ++k) seeds.push_back(first + k);
  return seeds;
}

int cmd_evaluate(const Shared& shared, const std::string& norm, const std::string& maj, const std::string& min) {
  const Params prm = shared.params();
  const NSS nss{parse_norm(norm), parse_strategy(maj), parse_strategy(min)};
  json out = io::to_json(evaluate(prm, nss));
  out["params"] = io::to_json(prm);
  std::cout << out.dump(2) << '\n';
  return 0;
}

int cmd_enumerate(const Shared& shared) {
  const Params prm = shared.params();
  const Enumeration e = enumerate_all(prm, shared.worker_count());
  OutputSet out(shared, "enumerate");
  out.add("enumeration.csv", render([&](std::ostream& os) { io::write_enumeration_csv(os, e); }));
  out.manifest["params"] = io::to_json(prm);
  out.manifest["stable_count"] = e.stable_count;
  out.commit();
  std::cout << "stable combinations: " << e.stable_count << " of " << e.results.size() << '\n';
  return 0;
}

int cmd_grid(const Shared& shared, const std::vector<std::string>& halves) {
  const Params prm = shared.params();
  std::vector<HalfNorm> hs;
  for (const auto& h : halves) hs.push_back(parse_half_norm(h));
  const auto grid = famous_grid(prm, hs, shared.worker_count());
  OutputSet out(shared, "grid");
  out.add("grid.csv", render([&](std::ostream& os) { io::write_grid_csv(os, grid); }));
  out.manifest["params"] = io::to_json(prm);
  out.commit();
  for (const GridEntry& g : grid)
    std::cout << label(g.best.nss.norm) << "  " << label(g.best.nss.majority) << " / "
              << label(g.best.nss.minority) << "  coop=" << g.best.cooperativeness
              << "  fairness=" << g.best.fairness << '\n';
  return 0;
}

int cmd_phase(const Shared& shared, const AxisArgs& bc, const AxisArgs& eps, bool vary_both) {
  const Params prm = shared.params();
  const PhaseGrid grid = phase_diagram(prm, bc.axis("bc_ratio"), eps.axis("eps_M"), vary_both, shared.worker_count());
  OutputSet out(shared, "phase");
  out.add("phase.csv", render([&](std::ostream& os) { io::write_phase_csv(os, grid, params_metadata(prm)); }));
  out.manifest["params"] = io::to_json(prm);
  out.commit();
  return 0;
}

int cmd_groupsize(const Shared& shared, const AxisArgs& p_axis) {
  const Params prm = shared.params();
  const GroupsizeSweep sweep = groupsize_sweep(prm, p_axis.axis("p"), shared.worker_count());
  OutputSet out(shared, "groupsize");
  out.add("groupsize.csv",
          render([&](std::ostream& os) { io::write_groupsize_csv(os, sweep, params_metadata(prm)); }));
  out.manifest["params"] = io::to_json(prm);
  out.commit();
  std::cout << "combinations stable at some p: " << sweep.trajectories.size() << '\n';
  return 0;
}

int cmd_bc_compare(const Shared& shared, double high, double low) {
  const Params prm = shared.params();
  const auto pairs = bc_comparison(prm, high, low, shared.worker_count());
  io::Metadata meta = params_metadata(prm);
  meta.emplace_back("bc_high", io::format_double(high));
  meta.emplace_back("bc_low", io::format_double(low));
  OutputSet out(shared, "bc-compare");
  out.add("bc_compare.csv", render([&](std::ostream& os) { io::write_bc_csv(os, pairs, meta); }));
  out.manifest["params"] = io::to_json(prm);
  out.manifest["bc_high"] = high;
  out.manifest["bc_low"] = low;
  out.commit();
  std::cout << "combinations stable at both ratios: " << pairs.size() << '\n';
  return 0;
}

int cmd_rl_run(const Shared& shared, const RlArgs& args) {
  const SimConfig cfg = args.config(shared);
  if (args.seeds == 0) throw std::invalid_argument("--seeds must be at least 1");
  const BatchResult batch = run_batch(cfg, args.seeds, shared.worker_count());
  OutputSet out(shared, "rl run");
  out.add("rl_runs.csv", render([&](std::ostream& os) { io::write_rl_runs_csv(os, batch); }));
  out.add("rl_aggregate.csv", render([&](std::ostream& os) { io::write_rl_aggregate_csv(os, batch, cfg.norm); }));
  out.add("rl_prevalence.csv", render([&](std::ostream& os) { io::write_rl_prevalence_csv(os, batch); }));
  out.add("rl_trajectory.csv", render([&](std::ostream& os) { io::write_rl_trajectory_csv(os, batch); }));
  json runs = json::array();
  for (const SimResult& r : batch.runs) runs.push_back(io::to_json(r));
  out.add("rl_runs.json", runs.dump(2) + "\n");
  out.manifest["config"] = io::to_json(cfg);
  out.manifest["rng"] = {{"algorithm", Rng::kAlgorithm}, {"seeds", seed_list(cfg.rng_seed, args.seeds)}};
  out.commit();
  std::cout << "mean cooperation " << batch.aggregate.mean_cooperation << " (sd " << batch.aggregate.sd_cooperation
            << "), mean fairness " << batch.aggregate.mean_fairness << '\n';
  return 0;
}

int cmd_rl_sweep(const Shared& shared, const RlArgs& args, const std::vector<double>& fractions,
                 const std::vector<double>& ratios) {
  const SimConfig cfg = args.config(shared);
  if (args.seeds == 0) throw std::invalid_argument("--seeds must be at least 1");
  const auto cells = seed_fraction_sweep(cfg, fractions, ratios, args.seeds, shared.worker_count());
  io::Metadata meta{{"norm", label(cfg.norm)},
                    {"seed_strategy", std::to_string(cfg.seed_strategy.code())},
                    {"interactions", std::to_string(cfg.n_interactions)},
                    {"measure_fraction", io::format_double(cfg.measure_fraction)},
                    {"exploration", std::string(to_string(cfg.exploration))}};
  OutputSet out(shared, "rl sweep");
  out.add("seed_sweep.csv",
          render([&](std::ostream& os) { io::write_seed_sweep_csv(os, cells, args.seeds, meta); }));
  out.manifest["config"] = io::to_json(cfg);
  out.manifest["fractions"] = fractions;
  out.manifest["bc_ratios"] = ratios;
  out.manifest["rng"] = {{"algorithm", Rng::kAlgorithm}, {"seeds", seed_list(cfg.rng_seed, args.seeds)}};
  out.commit();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indirect reciprocity in two-group populations: stability analysis and Q-learning simulation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file with option values");
  app.require_subcommand(1);

  Shared shared;
  app.add_option("--p", shared.p, "Majority fraction of the population")->capture_default_str();
  app.add_option("--b", shared.b, "Benefit of a donation")->capture_default_str();
  app.add_option("--c", shared.c, "Cost of a donation")->capture_default_str();
  app.add_option("--b-min", shared.b_min, "Minority benefit (defaults to --b)");
  app.add_option("--c-min", shared.c_min, "Minority cost (defaults to --c)");
  app.add_option("--eps", shared.eps, "Execution error rate")->capture_default_str();
  app.add_option("--eps-min", shared.eps_min, "Minority execution error rate (defaults to --eps)");
  app.add_option("--delta", shared.delta, "Assignment error rate")->capture_default_str();
  app.add_option("--out", shared.out, "Output directory")->capture_default_str();
  app.add_option("--threads", shared.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--force", shared.force, "Overwrite existing output files");

  std::string norm = "SJ/SJ", maj = "Disc", min = "Disc";
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate one norm and strategy pair (JSON to stdout)");
  evaluate_cmd->add_option("--norm", norm, "Norm as IN/OUT half-norm names or a code")->capture_default_str();
  evaluate_cmd->add_option("--maj", maj, "Majority strategy")->capture_default_str();
  evaluate_cmd->add_option("--min", min, "Minority strategy")->capture_default_str();

  auto* enumerate_cmd = app.add_subcommand("enumerate", "Evaluate all 65536 combinations");

  std::vector<std::string> halves{"Sh", "SJ", "IS", "SS"};
  auto* grid_cmd = app.add_subcommand("grid", "Best stable strategies for each pair of half-norms");
  grid_cmd->add_option("--half-norms", halves, "Comma-separated half-norms forming the grid")
      ->delimiter(',')
      ->capture_default_str();

  AxisArgs bc_axis{1.05, 10.0, 50, false}, eps_axis{0.005, 0.45, 50, false};
  bool vary_both = false;
  auto* phase_cmd = app.add_subcommand("phase", "Stable combination counts over b/c and majority error rate");
  add_axis(phase_cmd, "bc", bc_axis, "benefit/cost ratio");
  add_axis(phase_cmd, "err", eps_axis, "majority execution error");
  phase_cmd->add_flag("--vary-both", vary_both, "Scale the minority benefit as well");

  AxisArgs p_axis{0.52, 0.90, 20, false};
  auto* groupsize_cmd = app.add_subcommand("groupsize", "Stability as the majority fraction varies");
  add_axis(groupsize_cmd, "p", p_axis, "majority fraction");

  double bc_high = 5.0, bc_low = 1.25;
  auto* bc_cmd = app.add_subcommand("bc-compare", "Compare combinations stable at two benefit/cost ratios");
  bc_cmd->add_option("--high", bc_high, "Higher benefit/cost ratio")->capture_default_str();
  bc_cmd->add_option("--low", bc_low, "Lower benefit/cost ratio")->capture_default_str();

  auto* rl_cmd = app.add_subcommand("rl", "Q-learning simulations");
  rl_cmd->require_subcommand(1);
  RlArgs run_args;
  auto* rl_run_cmd = rl_cmd->add_subcommand("run", "Batch of independent runs");
  add_rl_options(rl_run_cmd, run_args);

  RlArgs sweep_args;
  sweep_args.seeds = 20;
  std::vector<double> fractions{0.0, 0.2, 0.4, 0.6, 0.8, 1.0}, ratios{2.0, 5.0, 10.0};
  auto* rl_sweep_cmd = rl_cmd->add_subcommand("sweep", "Seed fraction by benefit/cost grid");
  add_rl_options(rl_sweep_cmd, sweep_args);
  rl_sweep_cmd->add_option("--fractions", fractions, "Comma-separated seeded fractions")
      ->delimiter(',')
      ->capture_default_str();
  rl_sweep_cmd->add_option("--bc-ratios", ratios, "Comma-separated benefit/cost ratios")
      ->delimiter(',')
      ->capture_default_str();

  for (CLI::App* sub : {evaluate_cmd, enumerate_cmd, grid_cmd, phase_cmd, groupsize_cmd, bc_cmd, rl_cmd,
                        rl_run_cmd, rl_sweep_cmd}) {
    sub->fallthrough();
    sub->configurable();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  shared.argv.assign(argv, argv + argc);
  shared.resolved_options = json::parse(app.config_to_str(true, false));

  try {
    if (*evaluate_cmd) return cmd_evaluate(shared, norm, maj, min);
    if (*enumerate_cmd) return cmd_enumerate(shared);
    if (*grid_cmd) return cmd_grid(shared, halves);
    if (*phase_cmd) return cmd_phase(shared, bc_axis, eps_axis, vary_both);
    if (*groupsize_cmd) return cmd_groupsize(shared, p_axis);
    if (*bc_cmd) return cmd_bc_compare(shared, bc_high, bc_low);
    if (*rl_run_cmd) return cmd_rl_run(shared, run_args);
    if (*rl_sweep_cmd) return cmd_rl_sweep(shared, sweep_args, fractions, ratios);
  } catch (const SingularSystemError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSingular;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
