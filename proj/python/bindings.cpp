// Python bindings for the main operations. JSON values cross the boundary as
// strings and are decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "trajhedge/analysis.hpp"
#include "trajhedge/config.hpp"
#include "trajhedge/graph.hpp"
#include "trajhedge/market_data.hpp"
#include "trajhedge/pruning.hpp"
#include "trajhedge/superhedge.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace trajhedge;

namespace {

Direction parse_direction(const std::string& s) {
  if (s == "super") return Direction::Super;
  if (s == "under") return Direction::Under;
  throw ValidationError("direction must be \"super\" or \"under\"");
}

/// Config with its chart path resolved against the config file's directory.
RunConfig load_resolved(const fs::path& path) {
  auto cfg = load_config(path);
  if (!cfg.chart.empty() && cfg.chart.is_relative()) cfg.chart = path.parent_path() / cfg.chart;
  return cfg;
}

TrajectoryGraph build_from_config(const fs::path& path) {
  const auto cfg = load_resolved(path);
  if (cfg.chart.empty()) throw ValidationError("config: input.chart is required for this command");
  const auto discounted = discount(load_chart(cfg.chart, cfg.schema), cfg.numeraire);
  const auto ne = build_empirical_set(discounted, cfg.grid, cfg.escape, cfg.disc);
  const auto tables = build_tables(discounted, cfg.grid, cfg.escape, cfg.disc);
  return build_graph(root_from_chart(discounted, cfg.disc), ne, tables, cfg.build);
}

py::dict node_dict(const GraphNode& n) {
  py::dict d;
  d["k1"] = n.k1;
  d["k2"] = n.k2;
  d["i"] = n.i;
  d["t_steps"] = n.t_steps;
  d["w"] = n.w;
  d["node_class"] = std::string(to_string(n.node_class));
  d["terminal"] = n.terminal;
  return d;
}

py::tuple one_step(double s, const std::vector<std::pair<double, double>>& children, Direction dir) {
  OneStepMarket m{s, {}};
  for (const auto& [price, value] : children) m.children.push_back({price, value});
  const auto r = dir == Direction::Super ? one_step_super(m) : one_step_under(m);
  return py::make_tuple(r.value.to_double(), r.hedge);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Model-free price bounds from trajectory graphs";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_RuntimeError);

  m.def("config_schema_json", [] { return config_schema().dump(); });
  m.def(
      "resolved_config_json",
      [](const fs::path& path) {
        const auto cfg = load_config(path);
        return py::make_tuple(cfg.json.dump(), cfg.hash());
      },
      py::arg("path"), "Canonical config JSON and its hash.");

  m.def(
      "classify",
      [](const std::vector<std::pair<std::int64_t, std::int64_t>>& points) {
        std::vector<GridPoint> pts;
        for (const auto& [a, b] : points) pts.push_back({a, b});
        return std::string(to_string(classify(pts)));
      },
      py::arg("displacements"), "Class of 0 relative to the hull of the displacements.");

  m.def(
      "one_step_super",
      [](double s, const std::vector<std::pair<double, double>>& c) { return one_step(s, c, Direction::Super); },
      py::arg("price"), py::arg("children"), "(value, hedge) for children given as (price, payoff) pairs.");
  m.def(
      "one_step_under",
      [](double s, const std::vector<std::pair<double, double>>& c) { return one_step(s, c, Direction::Under); },
      py::arg("price"), py::arg("children"));

  py::class_<TrajectoryGraph>(m, "Graph")
      .def_property_readonly("node_count", &TrajectoryGraph::node_count)
      .def_property_readonly("edge_count", &TrajectoryGraph::edge_count)
      .def_property_readonly("degenerate", &TrajectoryGraph::degenerate)
      .def("node", [](const TrajectoryGraph& g, NodeId id) { return node_dict(g.node(id)); }, py::arg("id"))
      .def(
          "children",
          [](const TrajectoryGraph& g, NodeId id) {
            const auto c = g.children(id);
            return std::vector<NodeId>(c.begin(), c.end());
          },
          py::arg("id"))
      .def("price", &TrajectoryGraph::price, py::arg("id"), py::arg("asset"), "Real price of a coordinate.")
      .def("nodes_csv",
           [](const TrajectoryGraph& g) {
             std::ostringstream out;
             write_nodes_csv(out, g);
             return out.str();
           })
      .def("edges_csv", [](const TrajectoryGraph& g) {
        std::ostringstream out;
        write_edges_csv(out, g);
        return out.str();
      });

  m.def("build", &build_from_config, py::arg("config_path"),
        "Ingest the configured chart and build its trajectory graph.");

  py::class_<PricingResult>(m, "PricingResult")
      .def_property_readonly("root_value", [](const PricingResult& r) { return r.root_value().to_double(); })
      .def_property_readonly("degenerate", &PricingResult::degenerate)
      .def_property_readonly("values",
                             [](const PricingResult& r) {
                               std::vector<double> v;
                               for (const auto& x : r.value) v.push_back(x.to_double());
                               return v;
                             })
      .def_readonly("hedge", &PricingResult::hedge)
      .def_readonly("traded", &PricingResult::traded);

  m.def(
      "price",
      [](const TrajectoryGraph& g, int target, int traded, const std::string& direction) {
        return price(g, Payoff::asset(target), traded, parse_direction(direction));
      },
      py::arg("graph"), py::arg("target") = 2, py::arg("traded") = 1, py::arg("direction") = "super");

  m.def(
      "pnl",
      [](const TrajectoryGraph& g, const PricingResult& r, double capital, int target, std::size_t samples,
         std::uint64_t seed, double epsilon, unsigned threads) {
        PnLReport rep;
        {
          py::gil_scoped_release release;
          rep = pnl(g, r, Payoff::asset(target), capital, samples, seed, epsilon, threads);
        }
        py::dict d;
        d["capital"] = rep.capital;
        d["samples"] = rep.samples;
        d["percent_profitable"] = rep.percent_profitable;
        d["profits"] = rep.profits;
        d["bin_edges"] = rep.histogram.edges;
        d["bin_counts"] = rep.histogram.counts;
        return d;
      },
      py::arg("graph"), py::arg("pricing"), py::arg("capital"), py::arg("target") = 2, py::arg("samples") = 1000,
      py::arg("seed") = 1, py::arg("epsilon") = 1e-6, py::arg("threads") = 1);
}
