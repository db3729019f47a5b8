#include "trajhedge/graph.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <unordered_map>

#include "csv.hpp"
#include "trajhedge/cone.hpp"

namespace trajhedge {

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::ArbitrageFree: return "arbitrage_free";
    case NodeClass::TypeI: return "type_i";
    case NodeClass::TypeII: return "type_ii";
    case NodeClass::TerminalOnly: return "terminal_only";
  }
  return "unknown";
}

NodeClass node_class_from_string(std::string_view s) {
  for (auto c : {NodeClass::ArbitrageFree, NodeClass::TypeI, NodeClass::TypeII, NodeClass::TerminalOnly}) {
    if (to_string(c) == s) return c;
  }
  throw ValidationError("unknown node class '" + std::string(s) + "'");
}

void BuildOptions::validate() const {
  if (n_max < 0) throw ValidationError("build: n_max must be >= 0");
  if (!(hull_shrink >= 0.0) || !(hull_shrink < 1.0)) {
    throw ValidationError("build: hull_shrink must lie in [0, 1)");
  }
  if (dubin.enabled && (!(dubin.alpha >= 0.0) || !(dubin.alpha < dubin.beta))) {
    throw ValidationError("build: dubin requires 0 <= alpha < beta");
  }
}

TrajectoryGraph::TrajectoryGraph(DiscretizationParams disc, GraphNode root) : disc_(disc) {
  add_node(root);
}

NodeId TrajectoryGraph::add_node(const GraphNode& n) {
  nodes_.push_back(n);
  children_.emplace_back();
  parents_.emplace_back();
  return static_cast<NodeId>(nodes_.size() - 1);
}

void TrajectoryGraph::add_edge(NodeId parent, NodeId child) {
  auto& kids = children_.at(parent);
  if (std::find(kids.begin(), kids.end(), child) != kids.end()) return;
  kids.push_back(child);
  parents_.at(child).push_back(parent);
  ++edge_count_;
}

bool TrajectoryGraph::is_tree() const {
  for (std::size_t id = 1; id < nodes_.size(); ++id) {
    if (parents_[id].size() != 1) return false;
  }
  return true;
}

double TrajectoryGraph::price(NodeId id, int asset) const {
  const auto& n = node(id);
  if (asset == 1) return static_cast<double>(n.k1) * disc_.dhat1;
  if (asset == 2) return static_cast<double>(n.k2) * disc_.dhat2;
  throw ValidationError("coordinate must be 1 or 2");
}

std::vector<NodeId> TrajectoryGraph::path_to(NodeId id) const {
  std::vector<NodeId> path{id};
  while (id != root()) {
    const auto& ps = parents_.at(id);
    if (ps.size() != 1) throw ValidationError("path_to: node has no unique parent");
    id = ps.front();
    path.push_back(id);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

NodeClass classify(std::span<const GridPoint> d) {
  if (d.empty()) throw ValidationError("classify: empty child set");
  const GridPoint o{0, 0};
  const GridPoint p0 = d.front();
  const auto p1 = std::find_if(d.begin(), d.end(), [&](const GridPoint& p) { return p != p0; });
  if (p1 == d.end()) return p0 == o ? NodeClass::ArbitrageFree : NodeClass::TypeII;

  const bool planar = std::any_of(d.begin(), d.end(), [&](const GridPoint& p) { return cross(p0, *p1, p) != 0; });
  if (!planar) {
    if (cross(p0, *p1, o) != 0) return NodeClass::TypeII;
    const GridPoint dir{p1->x - p0.x, p1->y - p0.y};
    auto along = [&](const GridPoint& p) { return (p.x - p0.x) * dir.x + (p.y - p0.y) * dir.y; };
    std::int64_t lo = 0, hi = 0;
    for (const auto& p : d) {
      lo = std::min(lo, along(p));
      hi = std::max(hi, along(p));
    }
    const auto t = along(o);
    if (lo < t && t < hi) return NodeClass::ArbitrageFree;
    if (t == lo || t == hi) return NodeClass::TypeI;
    return NodeClass::TypeII;
  }

  const auto h = hull2d(d);
  bool boundary = false;
  for (std::size_t e = 0; e < h.size(); ++e) {
    const auto c = cross(h[e], h[(e + 1) % h.size()], o);
    if (c < 0) return NodeClass::TypeII;
    if (c == 0) boundary = true;
  }
  return boundary ? NodeClass::TypeI : NodeClass::ArbitrageFree;
}

NodeClass classify(const GraphNode& node, std::span<const GraphNode> children) {
  std::vector<GridPoint> d;
  d.reserve(children.size());
  for (const auto& c : children) d.push_back({c.k1 - node.k1, c.k2 - node.k2});
  return classify(d);
}

GridPoint shrink_move(std::int64_t m1, std::int64_t m2, double eps) {
  if (eps == 0.0) return {m1, m2};
  const double f = 1.0 - eps;
  return {round_half_away(f * static_cast<double>(m1)), round_half_away(f * static_cast<double>(m2))};
}

std::vector<GraphNode> generate_children(const GraphNode& node, const GraphNode& root,
                                         const EmpiricalSet& ne, const PruningTables* tables,
                                         int n_max, double hull_shrink) {
  std::vector<GraphNode> out;
  if (node.i >= n_max) return out;
  for (const auto& inc : ne.increments) {
    const auto mv = shrink_move(inc.m1, inc.m2, hull_shrink);
    GraphNode c;
    c.k1 = node.k1 + mv.x;
    c.k2 = node.k2 + mv.y;
    c.i = node.i + 1;
    c.t_steps = node.t_steps + inc.q;
    c.w = node.w + inc.eta;
    c.terminal = false;
    if (tables && !admissible(root, c, *tables)) continue;
    if (std::any_of(out.begin(), out.end(), [&](const GraphNode& o) { return o.same_state(c); })) continue;
    out.push_back(c);
  }
  return out;
}

namespace {

struct Key {
  std::int64_t k1, k2, t, w;
  int i;
  bool leaf;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (std::uint64_t v : {static_cast<std::uint64_t>(k.k1), static_cast<std::uint64_t>(k.k2),
                            static_cast<std::uint64_t>(k.t), static_cast<std::uint64_t>(k.w),
                            static_cast<std::uint64_t>(k.i), static_cast<std::uint64_t>(k.leaf)}) {
      h = (h ^ v) * 1099511628211ULL;
      h ^= h >> 29;
    }
    return static_cast<std::size_t>(h);
  }
};

void add_state(std::vector<CrossingState>& states, const CrossingState& s) {
  for (const auto& e : states) {
    if (e.same_future(s)) return;
  }
  states.push_back(s);
}

}  // namespace

TrajectoryGraph build_graph(const GraphNode& root_in, const EmpiricalSet& ne, const PruningTables& tables,
                            const BuildOptions& options) {
  options.validate();
  GraphNode root = root_in;
  root.i = 0;
  root.t_steps = 0;
  root.w = 0;
  root.terminal = false;
  root.node_class = NodeClass::TerminalOnly;
  TrajectoryGraph g(tables.disc, root);
  g.options = options;

  const auto& dub = options.dubin;
  const double ratio = dub.enabled ? dub.alpha / dub.beta : 0.0;
  std::vector<std::vector<CrossingState>> states;
  auto f1 = [&](const GraphNode& n) { return static_cast<double>(n.k1) * tables.disc.dhat1; };
  auto f2 = [&](const GraphNode& n) { return static_cast<double>(n.k2) * tables.disc.dhat2; };
  if (dub.enabled) {
    states.emplace_back();
    CrossingState s(dub.alpha, dub.beta);
    s.advance(f1(root), f2(root));
    states[0].push_back(s);
  }

  std::unordered_map<Key, NodeId, KeyHash> index;
  std::vector<NodeId> frontier{g.root()};
  const PruningTables* pt = options.pruning ? &tables : nullptr;

  while (!frontier.empty()) {
    std::vector<NodeId> next;
    for (const NodeId id : frontier) {
      const GraphNode node = g.node(id);
      auto finish = [&] {
        g.node(id).terminal = true;
        g.node(id).node_class = NodeClass::TerminalOnly;
      };
      if (node.i >= options.n_max) {
        finish();
        continue;
      }
      if (dub.enabled && std::all_of(states[id].begin(), states[id].end(), [&](const CrossingState& s) {
            return std::pow(ratio, s.count()) < dub.threshold;
          })) {
        finish();
        continue;
      }
      const auto kids = generate_children(node, root, ne, pt, options.n_max, options.hull_shrink);
      if (kids.empty()) {
        finish();
        continue;
      }
      const NodeClass cls = classify(node, kids);
      g.node(id).node_class = cls;
      const bool leaves = cls != NodeClass::ArbitrageFree;
      for (GraphNode kid : kids) {
        kid.terminal = leaves;
        kid.node_class = NodeClass::TerminalOnly;
        NodeId kid_id;
        const Key key{kid.k1, kid.k2, kid.t_steps, kid.w, kid.i, leaves};
        auto it = options.merge ? index.find(key) : index.end();
        if (it != index.end()) {
          kid_id = it->second;
        } else {
          kid_id = g.add_node(kid);
          if (options.merge) index.emplace(key, kid_id);
          if (!leaves) next.push_back(kid_id);
          if (dub.enabled) states.emplace_back();
        }
        g.add_edge(id, kid_id);
        if (dub.enabled) {
          for (auto s : states[id]) {
            s.advance(f1(kid), f2(kid));
            add_state(states[kid_id], s);
          }
        }
      }
      if (dub.enabled) states[id].clear();
    }
    frontier = std::move(next);
  }
  return g;
}

GraphNode root_from_chart(const DiscountedChart& chart, const DiscretizationParams& disc) {
  if (chart.size() == 0) throw ValidationError("root: empty chart");
  GraphNode r;
  r.k1 = to_grid(chart.x1.back(), disc.dhat1);
  r.k2 = to_grid(chart.x2.back(), disc.dhat2);
  r.terminal = false;
  return r;
}

std::vector<NodeId> sample_trajectory(const TrajectoryGraph& graph, std::mt19937_64& rng) {
  std::vector<NodeId> path{graph.root()};
  while (true) {
    const auto kids = graph.children(path.back());
    if (kids.empty()) return path;
    std::uniform_int_distribution<std::size_t> pick(0, kids.size() - 1);
    path.push_back(kids[pick(rng)]);
  }
}

void write_nodes_csv(std::ostream& out, const TrajectoryGraph& graph) {
  out << "id,k1,k2,i,t,w,class,terminal\n";
  for (std::size_t id = 0; id < graph.node_count(); ++id) {
    const auto& n = graph.nodes()[id];
    out << id << ',' << n.k1 << ',' << n.k2 << ',' << n.i << ',' << n.t_steps << ',' << n.w << ','
        << to_string(n.node_class) << ',' << (n.terminal ? 1 : 0) << '\n';
  }
}

void write_edges_csv(std::ostream& out, const TrajectoryGraph& graph) {
  out << "parent_id,child_id\n";
  for (std::size_t id = 0; id < graph.node_count(); ++id) {
    for (const auto c : graph.children(static_cast<NodeId>(id))) out << id << ',' << c << '\n';
  }
}

void write_adjacency_json(std::ostream& out, const TrajectoryGraph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t id = 0; id < graph.node_count(); ++id) {
    const auto& n = graph.nodes()[id];
    const auto kids = graph.children(static_cast<NodeId>(id));
    nodes.push_back({{"id", id},
                     {"k1", n.k1},
                     {"k2", n.k2},
                     {"i", n.i},
                     {"t", n.t_steps},
                     {"w", n.w},
                     {"class", to_string(n.node_class)},
                     {"terminal", n.terminal},
                     {"children", std::vector<NodeId>(kids.begin(), kids.end())}});
  }
  const nlohmann::json doc{{"dhat1", graph.disc().dhat1},
                           {"dhat2", graph.disc().dhat2},
                           {"node_count", graph.node_count()},
                           {"edge_count", graph.edge_count()},
                           {"nodes", nodes}};
  out << doc.dump() << '\n';
}

TrajectoryGraph read_graph(std::istream& nodes_csv, std::istream& edges_csv,
                           const DiscretizationParams& disc) {
  std::vector<std::string> f;
  std::size_t line_no = 0;
  if (!csv::next_record(nodes_csv, f, line_no)) throw ValidationError("nodes csv: empty input");
  const std::vector<std::string> want{"id", "k1", "k2", "i", "t", "w", "class", "terminal"};
  std::vector<int> col;
  for (const auto& name : want) {
    col.push_back(csv::column(f, name));
    if (col.back() < 0) throw ValidationError("nodes csv: missing column '" + name + "'");
  }
  std::vector<std::pair<std::int64_t, GraphNode>> rows;
  while (csv::next_record(nodes_csv, f, line_no)) {
    GraphNode n;
    const auto id = csv::to_int(f.at(col[0]), line_no);
    n.k1 = csv::to_int(f.at(col[1]), line_no);
    n.k2 = csv::to_int(f.at(col[2]), line_no);
    n.i = static_cast<int>(csv::to_int(f.at(col[3]), line_no));
    n.t_steps = csv::to_int(f.at(col[4]), line_no);
    n.w = csv::to_int(f.at(col[5]), line_no);
    n.node_class = node_class_from_string(f.at(col[6]));
    n.terminal = csv::to_int(f.at(col[7]), line_no) != 0;
    rows.emplace_back(id, n);
  }
  if (rows.empty()) throw ValidationError("nodes csv: no nodes");
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].first != static_cast<std::int64_t>(j)) {
      throw ValidationError("nodes csv: ids must be 0..n-1 without gaps");
    }
  }
  TrajectoryGraph g(disc, rows[0].second);
  for (std::size_t j = 1; j < rows.size(); ++j) g.add_node(rows[j].second);

  line_no = 0;
  if (!csv::next_record(edges_csv, f, line_no)) throw ValidationError("edges csv: empty input");
  const int cp = csv::column(f, "parent_id"), cc = csv::column(f, "child_id");
  if (cp < 0 || cc < 0) throw ValidationError("edges csv: header must contain parent_id,child_id");
  while (csv::next_record(edges_csv, f, line_no)) {
    const auto p = csv::to_int(f.at(cp), line_no);
    const auto c = csv::to_int(f.at(cc), line_no);
    const auto n = static_cast<std::int64_t>(g.node_count());
    if (p < 0 || p >= n || c < 0 || c >= n) {
      throw ValidationError("edges csv: line " + std::to_string(line_no) + " references an unknown node");
    }
    g.add_edge(static_cast<NodeId>(p), static_cast<NodeId>(c));
  }
  return g;
}

}  // namespace trajhedge
