// Command-line front end. Every subcommand reads one JSON config, delegates to
// the library and writes its artifacts under `output_dir`.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "trajhedge/analysis.hpp"
#include "trajhedge/config.hpp"
#include "trajhedge/escape.hpp"
#include "trajhedge/graph.hpp"
#include "trajhedge/market_data.hpp"
#include "trajhedge/pruning.hpp"
#include "trajhedge/superhedge.hpp"

namespace fs = std::filesystem;
using namespace trajhedge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDegenerate = 1;
constexpr int kExitValidation = 2;

class Artifacts {
 public:
  explicit Artifacts(const RunConfig& cfg) : dir_(cfg.output_dir), hash_(cfg.hash()) {
    fs::create_directories(dir_);
  }

  [[nodiscard]] fs::path path(const std::string& name) const { return dir_ / name; }

  /// Opens a CSV artifact with the provenance line already written.
  std::ofstream csv(const std::string& name) const {
    const auto p = path(name);
    fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) throw ValidationError("cannot write '" + p.string() + "'");
    out << "# trajhedge config_hash=" << hash_ << '\n';
    return out;
  }

  void json_file(const std::string& name, const json& doc) const {
    std::ofstream out(path(name));
    if (!out) throw ValidationError("cannot write '" + path(name).string() + "'");
    out << doc.dump(2) << '\n';
  }

  std::ifstream input(const std::string& name) const {
    const auto p = path(name);
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot open '" + p.string() + "'; run the producing command first");
    return in;
  }

 private:
  fs::path dir_;
  std::string hash_;
};

struct Inputs {
  UndiscountedChart chart;
  DiscountedChart discounted;
};

Inputs load_inputs(const RunConfig& cfg) {
  if (cfg.chart.empty()) throw ValidationError("config: input.chart is required for this command");
  Inputs in;
  in.chart = load_chart(cfg.chart, cfg.schema);
  in.discounted = discount(in.chart, cfg.numeraire);
  return in;
}

TrajectoryGraph load_graph(const RunConfig& cfg, const Artifacts& art) {
  auto nodes = art.input("nodes.csv");
  auto edges = art.input("edges.csv");
  auto g = read_graph(nodes, edges, cfg.disc);
  g.options = cfg.build;
  return g;
}

json value_json(const ExtendedValue& v) {
  if (v.is_finite()) return v.value();
  return v.to_string();
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int cmd_ingest(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto in = load_inputs(cfg);
  const auto ws = windows(in.discounted, cfg.grid, cfg.disc);
  const auto ne = build_empirical_set(std::span<const Window>(ws), cfg.escape);
  const auto tables = build_tables(in.discounted, cfg.grid, cfg.escape, cfg.disc);

  {
    auto out = art.csv("windows.csv");
    write_windows(out, ws);
  }
  {
    auto out = art.csv("escapes.csv");
    out << "window,i,step,k1,k2,w\n";
    for (std::size_t j = 0; j < ws.size(); ++j) {
      const auto times = escape_times(ws[j], cfg.escape);
      const auto w = variation_series(ws[j]);
      for (std::size_t i = 0; i < times.steps.size(); ++i) {
        const int s = times.steps[i];
        out << j << ',' << i << ',' << s << ',' << ws[j].k1[s] << ',' << ws[j].k2[s] << ',' << w[s] << '\n';
      }
    }
  }
  {
    auto out = art.csv("empirical_set.csv");
    write_empirical_set(out, ne);
  }
  {
    auto out = art.csv("hull.csv");
    write_hull(out, hull2d(ne));
  }
  const std::pair<const char*, std::span<const Bounds<std::int64_t>>> int_tables[] = {
      {"n_of_t", tables.n_of_t}, {"t_of_i", tables.t_of_i}, {"w_of_t", tables.w_of_t}, {"w_of_i", tables.w_of_i}};
  for (const auto& [name, rows] : int_tables) {
    auto out = art.csv(std::string("tables/") + name + ".csv");
    write_table(out, rows);
  }
  {
    auto out = art.csv("tables/x_norm.csv");
    write_table(out, std::span<const Bounds<double>>(tables.x_norm));
  }
  {
    auto out = art.csv("tables/n_of_w.csv");
    write_table(out, std::span<const std::optional<Bounds<std::int64_t>>>(tables.n_of_w));
  }
  {
    auto out = art.csv("tables/t_of_w.csv");
    write_table(out, std::span<const std::optional<Bounds<std::int64_t>>>(tables.t_of_w));
  }
  art.json_file("ingest.json", {{"samples", in.chart.size()},
                                {"windows", ws.size()},
                                {"empirical_set_size", ne.size()},
                                {"i_star", tables.i_star},
                                {"w_star", tables.w_star}});
  std::cout << "ingested " << in.chart.size() << " samples, " << ws.size() << " windows, |N_E| = " << ne.size()
            << ", i* = " << tables.i_star << ", w* = " << tables.w_star << '\n';
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_name) {
  const Artifacts art(cfg);
  const auto chart = simulate_gbm(cfg.gbm, cfg.grid);
  {
    auto out = art.csv(out_name);
    write_chart(out, chart);
  }
  std::cout << "wrote " << chart.size() << " samples to " << art.path(out_name).string() << '\n';
  return kExitOk;
}

int cmd_calibrate(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto in = load_inputs(cfg);
  const auto sweep = calibration_sweep(in.discounted, cfg.grid, cfg.disc, cfg.escape.model, cfg.calibration.first,
                                       cfg.calibration.second);
  auto out = art.csv("calibration.csv");
  write_sweep_csv(out, sweep);
  std::cout << "calibration: " << sweep.cells.size() << " cells\n";
  return kExitOk;
}

int cmd_build(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto in = load_inputs(cfg);
  const auto start = std::chrono::steady_clock::now();
  const auto ne = build_empirical_set(in.discounted, cfg.grid, cfg.escape, cfg.disc);
  const auto tables = build_tables(in.discounted, cfg.grid, cfg.escape, cfg.disc);
  const auto root = root_from_chart(in.discounted, cfg.disc);
  const auto graph = build_graph(root, ne, tables, cfg.build);
  const double seconds = elapsed(start);

  {
    auto out = art.csv("nodes.csv");
    write_nodes_csv(out, graph);
  }
  {
    auto out = art.csv("edges.csv");
    write_edges_csv(out, graph);
  }
  std::map<std::string, std::size_t> classes;
  std::size_t terminal = 0;
  for (const auto& n : graph.nodes()) {
    ++classes[std::string(to_string(n.node_class))];
    terminal += n.terminal ? 1 : 0;
  }
  art.json_file("build.json", {{"nodes", graph.node_count()},
                               {"edges", graph.edge_count()},
                               {"terminal", terminal},
                               {"classes", classes},
                               {"root", {{"k1", root.k1}, {"k2", root.k2}}}});
  std::cout << "graph: " << graph.node_count() << " nodes, " << graph.edge_count() << " edges (" << seconds
            << " s)\n";
  if (graph.degenerate()) {
    std::cerr << "degenerate: the root has no admissible children\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_price(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto graph = load_graph(cfg, art);
  const auto payoff = Payoff::asset(cfg.target);
  const auto super = price(graph, payoff, cfg.trade, Direction::Super);
  const auto under = price(graph, payoff, cfg.trade, Direction::Under);
  {
    auto out = art.csv("pricing.csv");
    write_pricing_csv(out, super, under);
  }
  const double spot = graph.price(graph.root(), cfg.target);
  art.json_file("bounds.json", {{"target", cfg.target},
                                {"trade", cfg.trade},
                                {"spot", spot},
                                {"upper", value_json(super.root_value())},
                                {"lower", value_json(under.root_value())},
                                {"hedge_upper", super.hedge.front()},
                                {"hedge_lower", under.hedge.front()}});
  std::cout << "lower " << under.root_value().to_string() << "  spot " << spot << "  upper "
            << super.root_value().to_string() << '\n';
  if (super.degenerate() || under.degenerate()) {
    std::cerr << "degenerate: root bound is infinite\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_pnl(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto graph = load_graph(cfg, art);
  const auto payoff = Payoff::asset(cfg.target);
  const auto result = price(graph, payoff, cfg.trade, cfg.pnl.strategy);

  double base = 0.0;
  switch (cfg.pnl.capital.base) {
    case CapitalSpec::Base::Absolute: break;
    case CapitalSpec::Base::Spot: base = graph.price(graph.root(), cfg.target); break;
    case CapitalSpec::Base::Upper:
    case CapitalSpec::Base::Lower: {
      const auto dir = cfg.pnl.capital.base == CapitalSpec::Base::Upper ? Direction::Super : Direction::Under;
      const auto v = dir == cfg.pnl.strategy ? result.root_value()
                                              : price(graph, payoff, cfg.trade, dir).root_value();
      if (!v.is_finite()) throw DegenerateError("pnl: capital base bound is " + v.to_string());
      base = v.value();
      break;
    }
  }
  const double capital = base + cfg.pnl.capital.offset;
  const auto report =
      pnl(graph, result, payoff, capital, cfg.pnl.samples, cfg.pnl.seed, cfg.pnl.epsilon, cfg.threads);
  {
    std::ofstream out(art.path("pnl.json"));
    write_pnl_json(out, report);
  }
  {
    auto out = art.csv("histogram.csv");
    write_histogram_csv(out, report.histogram);
  }
  {
    // A fixed number of sampled paths for trajectory fans.
    constexpr std::size_t kFan = 100;
    auto out = art.csv("trajectories.csv");
    out << "sample,step,node_id,x1,x2\n";
    std::mt19937_64 rng(cfg.pnl.seed);
    for (std::size_t s = 0; s < std::min(kFan, cfg.pnl.samples); ++s) {
      const auto path = sample_trajectory(graph, rng);
      for (std::size_t i = 0; i < path.size(); ++i) {
        out << s << ',' << i << ',' << path[i] << ',' << graph.price(path[i], 1) << ','
            << graph.price(path[i], 2) << '\n';
      }
    }
  }
  std::cout << "capital " << capital << ": " << report.percent_profitable << "% of " << report.samples
            << " samples profitable\n";
  return kExitOk;
}

int cmd_match(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto in = load_inputs(cfg);
  DiscountedChart held = in.discounted;
  if (!cfg.match.chart.empty()) held = discount(load_chart(cfg.match.chart, cfg.schema), cfg.numeraire);
  const auto ws = windows(held, cfg.grid, cfg.disc);
  const int count = static_cast<int>(ws.size());
  const int idx = cfg.match.window < 0 ? count + cfg.match.window : cfg.match.window;
  if (idx < 0 || idx >= count) {
    throw ValidationError("config: match.window " + std::to_string(cfg.match.window) + " out of range for " +
                          std::to_string(count) + " windows");
  }
  const auto& window = ws[static_cast<std::size_t>(idx)];

  MatchResult m;
  if (cfg.match.through_graph) {
    const auto graph = load_graph(cfg, art);
    m = match(graph, window, cfg.escape);
  } else {
    const auto ne = build_empirical_set(in.discounted, cfg.grid, cfg.escape, cfg.disc);
    const int n_max = cfg.match.n_max > 0 ? cfg.match.n_max : escape_times(window, cfg.escape).count();
    m = match(ne, window, cfg.escape, cfg.disc, n_max);
  }
  const auto observed = observed_states(window, cfg.escape);
  {
    auto out = art.csv("match.csv");
    out << "step,k1,k2,i,t,w,obs_k1,obs_k2,obs_t,obs_w,error\n";
    for (std::size_t s = 0; s < m.path.size(); ++s) {
      const auto& n = m.path[s];
      const auto& o = observed[s];
      out << s << ',' << n.k1 << ',' << n.k2 << ',' << n.i << ',' << n.t_steps << ',' << n.w << ',' << o.k1
          << ',' << o.k2 << ',' << o.t_steps << ',' << o.w << ',' << m.errors[s] << '\n';
    }
  }
  art.json_file("match.json", {{"window", idx}, {"steps", m.path.size()}, {"total_error", m.total_error}});
  std::cout << "matched " << m.path.size() << " states of window " << idx << ", total error " << m.total_error
            << '\n';
  return kExitOk;
}

int cmd_export(const RunConfig& cfg) {
  const Artifacts art(cfg);
  const auto graph = load_graph(cfg, art);
  std::ofstream out(art.path("graph.json"));
  write_adjacency_json(out, graph);
  std::cout << "wrote " << art.path("graph.json").string() << '\n';
  return kExitOk;
}

std::string asset_name(int c) { return c == 1 ? "asset1" : "asset2"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-free price bounds from trajectory graphs"};
  app.require_subcommand(1);

  std::string config_path;
  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", config_path, "JSON run configuration")->required();
    return sub;
  };

  auto* config_cmd = app.add_subcommand("config", "Print the config schema or a resolved config");
  bool schema = false;
  config_cmd->add_flag("--schema", schema, "Print the key schema with defaults");
  config_cmd->add_option("-c,--config", config_path, "Print this config with defaults filled in");

  auto* ingest = add("ingest", "Discount, window and sample escapes; write N_E, hull and tables");
  auto* simulate = add("simulate-gbm", "Write a simulated chart");
  std::string sim_out = "gbm_chart.csv";
  simulate->add_option("-o,--out", sim_out, "Output file name inside output_dir");
  auto* calibrate = add("calibrate", "Sweep escape thresholds and report count envelopes");
  auto* build = add("build", "Build the trajectory graph");
  auto* price_cmd = add("price", "Price the target on the built graph");
  std::string target, trade;
  price_cmd->add_option("--target", target, "Payoff coordinate")->check(CLI::IsMember({"asset1", "asset2"}));
  price_cmd->add_option("--trade", trade, "Traded coordinate")->check(CLI::IsMember({"asset1", "asset2"}));
  auto* pnl_cmd = add("pnl", "Trade the hedge along sampled trajectories");
  auto* match_cmd = add("match", "Match a window against the model");
  auto* export_cmd = add("export-graph", "Write the graph as adjacency JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (config_cmd->parsed()) {
      if (schema || config_path.empty()) {
        std::cout << config_schema().dump(2) << '\n';
      } else {
        const auto cfg = load_config(config_path);
        std::cout << cfg.json.dump(2) << "\n# config_hash=" << cfg.hash() << '\n';
      }
      return kExitOk;
    }

    auto doc_cfg = load_config(config_path);
    // Paths in the config are relative to the config file.
    const auto base = fs::path(config_path).parent_path();
    auto resolve = [&](fs::path& p) {
      if (!p.empty() && p.is_relative()) p = base / p;
    };
    if (!target.empty() || !trade.empty()) {
      auto doc = doc_cfg.json;
      if (!target.empty()) doc["pricing"]["target"] = target;
      if (!trade.empty()) doc["pricing"]["trade"] = trade;
      doc_cfg = parse_config(doc);
    }
    RunConfig cfg = doc_cfg;
    resolve(cfg.chart);
    resolve(cfg.match.chart);
    resolve(cfg.output_dir);
    if (cfg.target == cfg.trade) {
      std::cerr << "note: target and traded coordinate are both " << asset_name(cfg.target) << '\n';
    }

    if (ingest->parsed()) return cmd_ingest(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg, sim_out);
    if (calibrate->parsed()) return cmd_calibrate(cfg);
    if (build->parsed()) return cmd_build(cfg);
    if (price_cmd->parsed()) return cmd_price(cfg);
    if (pnl_cmd->parsed()) return cmd_pnl(cfg);
    if (match_cmd->parsed()) return cmd_match(cfg);
    if (export_cmd->parsed()) return cmd_export(cfg);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  }
  return kExitOk;
}
