#include "fixtures.hpp"

namespace fixture {

using namespace trajhedge;

TrajectoryGraph random_tree(std::mt19937_64& rng, const TreeShape& shape) {
  std::uniform_int_distribution<int> depth_dist(1, shape.max_depth);
  std::uniform_int_distribution<int> fan(1, shape.max_fanout);
  std::uniform_int_distribution<int> move(-shape.move, shape.move);
  std::bernoulli_distribution leaf(shape.stop);
  const int depth = depth_dist(rng);

  GraphNode root;
  root.k1 = shape.origin;
  root.k2 = shape.origin;
  root.terminal = false;
  TrajectoryGraph g(DiscretizationParams{1.0, 1.0}, root);
  g.options.merge = false;
  std::vector<NodeId> frontier{g.root()};
  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (const NodeId id : frontier) {
      const GraphNode parent = g.node(id);
      if (parent.i >= depth || (parent.i > 0 && leaf(rng))) {
        g.node(id).terminal = true;
        continue;
      }
      const int n = fan(rng);
      for (int c = 0; c < n; ++c) {
        GraphNode kid = parent;
        kid.k1 += move(rng);
        kid.k2 += move(rng);
        kid.i += 1;
        kid.t_steps += 1;
        kid.terminal = false;
        const NodeId kid_id = g.add_node(kid);
        g.add_edge(id, kid_id);
        next.push_back(kid_id);
      }
    }
    frontier = std::move(next);
  }
  return g;
}

Payoff random_payoff(const TrajectoryGraph& tree, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> value(-10, 10);
  std::vector<double> table(tree.node_count());
  for (auto& v : table) v = value(rng);
  return Payoff::terminal([table](const TrajectoryGraph&, NodeId id) { return table.at(id); });
}

TrajectoryGraph null_set_graph(bool excise) {
  auto node = [](std::int64_t k1, std::int64_t k2, int i) {
    GraphNode n;
    n.k1 = k1;
    n.k2 = k2;
    n.i = i;
    n.t_steps = i;
    n.terminal = false;
    return n;
  };
  TrajectoryGraph g(DiscretizationParams{1.0, 1.0}, node(0, 0, 0));
  g.options.merge = false;
  if (!excise) {
    const auto n1 = g.add_node(node(1, 0, 1));
    g.add_edge(0, n1);
  }
  const auto n2 = g.add_node(node(0, 2, 1));
  const auto n3 = g.add_node(node(0, -2, 1));
  g.add_edge(0, n2);
  g.add_edge(0, n3);
  if (!excise) {
    const auto n4 = g.add_node(node(2, 1, 2));
    const auto n5 = g.add_node(node(0, -1, 2));
    g.add_edge(1, n4);
    g.add_edge(1, n5);
    const auto n6 = g.add_node(node(1, -1, 3));
    const auto n7 = g.add_node(node(2, 0, 3));
    g.add_edge(n5, n6);
    g.add_edge(n5, n7);
  }
  for (NodeId id = 0; id < g.node_count(); ++id) {
    const auto kids = g.children(id);
    auto& n = g.node(id);
    n.terminal = kids.empty();
    if (kids.empty()) {
      n.node_class = NodeClass::TerminalOnly;
      continue;
    }
    std::vector<GraphNode> cs;
    for (const NodeId c : kids) cs.push_back(g.node(c));
    n.node_class = classify(n, cs);
  }
  return g;
}

Pipeline run_pipeline(const UndiscountedChart& chart, const PipelineSpec& s) {
  Pipeline p;
  p.chart = chart;
  p.discounted = discount(p.chart, 0);
  p.ne = build_empirical_set(p.discounted, s.grid, s.escape, s.disc);
  p.tables = build_tables(p.discounted, s.grid, s.escape, s.disc);
  p.root = root_from_chart(p.discounted, s.disc);
  p.graph = build_graph(p.root, p.ne, p.tables, s.build);
  return p;
}

Pipeline run_pipeline(const PipelineSpec& s) { return run_pipeline(simulate_gbm(s.gbm, s.grid), s); }

PipelineSpec bundled_spec() {
  PipelineSpec s;
  s.gbm.mu1 = 0.0;
  s.gbm.sigma1 = 0.001;
  s.gbm.mu2 = 0.0;
  s.gbm.sigma2 = 0.002;
  s.gbm.s_init = {100.0, 154.55, 333.78};
  s.gbm.days = 10;
  s.gbm.seed = 7;
  s.grid = {3, 130};
  s.escape = EscapeParams::model_b(0.011);
  s.disc = {0.01, 0.01};
  s.build.n_max = 3;
  return s;
}

PipelineSpec brownian_spec(std::uint64_t seed) {
  PipelineSpec s;
  s.gbm.mu1 = 0.0;
  s.gbm.sigma1 = 0.01;
  s.gbm.mu2 = 0.0;
  s.gbm.sigma2 = 0.02;
  s.gbm.s_init = {100.0, 154.55, 333.78};
  s.gbm.days = 10;
  s.gbm.seed = seed;
  s.grid = {3, 130};
  s.escape = EscapeParams::model_a(0.15, 0.1);
  s.disc = {0.01, 0.01};
  s.build.n_max = 3;
  return s;
}

bool all_arbitrage_free(const TrajectoryGraph& g) {
  for (NodeId id = 0; id < g.node_count(); ++id) {
    const auto kids = g.children(id);
    if (kids.empty()) continue;
    std::vector<GraphNode> cs;
    for (const NodeId c : kids) cs.push_back(g.node(c));
    if (classify(g.node(id), cs) != NodeClass::ArbitrageFree) return false;
  }
  return true;
}

}  // namespace fixture
