#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <sstream>

#include "irgroups/io.hpp"
#include "irgroups/version.hpp"

namespace py = pybind11;
using namespace irgroups;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

Strategy as_strategy(const py::object& o) {
  if (py::isinstance<py::int_>(o)) return Strategy(o.cast<int>());
  return parse_strategy(o.cast<std::string>());
}

Norm as_norm(const py::object& o) {
  if (py::isinstance<py::int_>(o)) return Norm(o.cast<int>());
  return parse_norm(o.cast<std::string>());
}

NSS as_nss(const py::object& norm, const py::object& majority, const py::object& minority) {
  return NSS{as_norm(norm), as_strategy(majority), as_strategy(minority)};
}

template <typename Writer>
std::string to_csv(Writer&& write) {
  std::ostringstream os;
  write(os);
  return os.str();
}

py::dict aggregate_dict(const BatchAggregate& a) {
  py::dict d;
  d["mean_cooperation"] = a.mean_cooperation;
  d["sd_cooperation"] = a.sd_cooperation;
  d["mean_fairness"] = a.mean_fairness;
  d["sd_fairness"] = a.sd_fairness;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Indirect reciprocity in two-group populations";
  m.attr("__version__") = kVersion;

  py::register_exception<SingularSystemError>(m, "SingularSystemError", PyExc_ArithmeticError);

  py::class_<Params>(m, "Params")
      .def(py::init<>())
      .def_readwrite("p", &Params::p)
      .def_readwrite("benefit", &Params::benefit)
      .def_readwrite("cost", &Params::cost)
      .def_readwrite("eps", &Params::eps)
      .def_readwrite("delta", &Params::delta)
      .def("validate", &Params::validate)
      .def("to_dict", [](const Params& p) { return to_python(io::to_json(p)); });

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("n_total", &SimConfig::n_total)
      .def_readwrite("n_majority", &SimConfig::n_majority)
      .def_readwrite("mu", &SimConfig::mu)
      .def_readwrite("alpha", &SimConfig::alpha)
      .def_readwrite("n_interactions", &SimConfig::n_interactions)
      .def_readwrite("b", &SimConfig::b)
      .def_readwrite("c", &SimConfig::c)
      .def_readwrite("eps", &SimConfig::eps)
      .def_readwrite("delta", &SimConfig::delta)
      .def_readwrite("seed_fraction", &SimConfig::seed_fraction)
      .def_readwrite("measure_fraction", &SimConfig::measure_fraction)
      .def_readwrite("rng_seed", &SimConfig::rng_seed)
      .def_readwrite("trajectory_bucket", &SimConfig::trajectory_bucket)
      .def_property(
          "norm", [](const SimConfig& c) { return label(c.norm); },
          [](SimConfig& c, const py::object& o) { c.norm = as_norm(o); })
      .def_property(
          "seed_strategy", [](const SimConfig& c) { return label(c.seed_strategy); },
          [](SimConfig& c, const py::object& o) { c.seed_strategy = as_strategy(o); })
      .def_property(
          "exploration", [](const SimConfig& c) { return std::string(to_string(c.exploration)); },
          [](SimConfig& c, const std::string& s) { c.exploration = parse_exploration(s); })
      .def("validate", &SimConfig::validate)
      .def("to_dict", [](const SimConfig& c) { return to_python(io::to_json(c)); });

  m.def(
      "evaluate",
      [](const py::object& norm, const py::object& majority, const py::object& minority, const Params& params) {
        params.validate();
        return to_python(io::to_json(evaluate(params, as_nss(norm, majority, minority))));
      },
      py::arg("norm"), py::arg("majority"), py::arg("minority"), py::arg("params") = Params{},
      "Reputations, utilities, cooperativeness, fairness and stability of one combination.");

  m.def(
      "stationary_reputations",
      [](const py::object& norm, const py::object& majority, const py::object& minority, const Params& params) {
        const ReputationState g = stationary_reputations(build_system(params, as_nss(norm, majority, minority)));
        return py::make_tuple(g.good[0], g.good[1]);
      },
      py::arg("norm"), py::arg("majority"), py::arg("minority"), py::arg("params") = Params{});

  m.def(
      "stable_count",
      [](const Params& params, unsigned threads) {
        params.validate();
        py::gil_scoped_release release;
        const auto mask = stability_mask(params, threads);
        return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true));
      },
      py::arg("params") = Params{}, py::arg("threads") = 1);

  m.def(
      "enumeration_csv",
      [](const Params& params, unsigned threads) {
        params.validate();
        py::gil_scoped_release release;
        const Enumeration e = enumerate_all(params, threads);
        return to_csv([&](std::ostream& os) { io::write_enumeration_csv(os, e); });
      },
      py::arg("params") = Params{}, py::arg("threads") = 1);

  m.def(
      "famous_grid",
      [](const Params& params, const std::vector<std::string>& halves) {
        params.validate();
        std::vector<HalfNorm> hs;
        for (const std::string& h : halves) hs.push_back(parse_half_norm(h));
        if (hs.empty()) hs = famous_half_norms();
        py::list out;
        for (const GridEntry& g : famous_grid(params, hs)) {
          py::dict row = to_python(io::to_json(g.best));
          row["in_norm"] = label(g.in_half);
          row["out_norm"] = label(g.out_half);
          row["ties"] = g.ties;
          out.append(row);
        }
        return out;
      },
      py::arg("params") = Params{}, py::arg("halves") = std::vector<std::string>{});

  m.def(
      "phase_cell",
      [](const Params& params, double bc_ratio, double eps_majority, bool vary_both, unsigned threads) {
        py::gil_scoped_release release;
        const PhaseCell c = phase_cell(params, bc_ratio, eps_majority, vary_both, threads);
        return std::make_pair(c.stable, c.stable_cooperative);
      },
      py::arg("params"), py::arg("bc_ratio"), py::arg("eps_majority"), py::arg("vary_both") = false,
      py::arg("threads") = 1, "(stable, stable and cooperative) counts for one phase-diagram cell.");

  m.def(
      "run_batch",
      [](const SimConfig& cfg, std::size_t n_seeds, unsigned threads) {
        BatchResult batch;
        {
          py::gil_scoped_release release;
          batch = run_batch(cfg, n_seeds, threads);
        }
        py::list runs;
        for (const SimResult& r : batch.runs) runs.append(to_python(io::to_json(r)));
        py::dict out;
        out["runs"] = runs;
        out["aggregate"] = aggregate_dict(batch.aggregate);
        out["runs_csv"] = to_csv([&](std::ostream& os) { io::write_rl_runs_csv(os, batch); });
        out["aggregate_csv"] =
            to_csv([&](std::ostream& os) { io::write_rl_aggregate_csv(os, batch, cfg.norm); });
        out["prevalence_csv"] = to_csv([&](std::ostream& os) { io::write_rl_prevalence_csv(os, batch); });
        out["trajectory_csv"] = to_csv([&](std::ostream& os) { io::write_rl_trajectory_csv(os, batch); });
        return out;
      },
      py::arg("config"), py::arg("n_seeds"), py::arg("threads") = 1);

  m.def(
      "seed_fraction_sweep",
      [](const SimConfig& cfg, const std::vector<double>& fractions, const std::vector<double>& ratios,
         std::size_t n_seeds, unsigned threads) {
        std::vector<SeedSweepCell> cells;
        {
          py::gil_scoped_release release;
          cells = seed_fraction_sweep(cfg, fractions, ratios, n_seeds, threads);
        }
        py::list out;
        for (const SeedSweepCell& c : cells) {
          py::dict d = aggregate_dict(c.aggregate);
          d["seed_fraction"] = c.fraction;
          d["bc_ratio"] = c.bc_ratio;
          out.append(d);
        }
        return out;
      },
      py::arg("config"), py::arg("fractions"), py::arg("bc_ratios"), py::arg("n_seeds"), py::arg("threads") = 1);

  m.attr("ENUMERATION_HEADER") = std::string(io::kEnumerationHeader);
  m.attr("RL_RUNS_HEADER") = std::string(io::kRlRunsHeader);
}
