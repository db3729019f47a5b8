#include "trajhedge/superhedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "csv.hpp"
#include "trajhedge/lp.hpp"

namespace trajhedge {

double ExtendedValue::value() const {
  if (kind_ != Kind::Finite) throw DegenerateError("value is " + to_string());
  return value_;
}

ExtendedValue ExtendedValue::negated() const {
  switch (kind_) {
    case Kind::Finite: return finite(-value_);
    case Kind::MinusInfinity: return plus_infinity();
    case Kind::PlusInfinity: return minus_infinity();
  }
  return *this;
}

std::string ExtendedValue::to_string() const {
  switch (kind_) {
    case Kind::Finite: return csv::format(value_);
    case Kind::MinusInfinity: return "-inf";
    case Kind::PlusInfinity: return "inf";
  }
  return "?";
}

double ExtendedValue::to_double() const {
  switch (kind_) {
    case Kind::Finite: return value_;
    case Kind::MinusInfinity: return -std::numeric_limits<double>::infinity();
    case Kind::PlusInfinity: return std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

OneStepSolution one_step_super(const OneStepMarket& market) {
  if (market.children.empty()) throw ValidationError("one-step market without children");
  // Highest value per distinct price, ascending in price.
  std::vector<OneStepChild> pts = market.children;
  std::sort(pts.begin(), pts.end(), [](const OneStepChild& a, const OneStepChild& b) {
    return a.price < b.price || (a.price == b.price && a.value > b.value);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const OneStepChild& a, const OneStepChild& b) { return a.price == b.price; }),
            pts.end());

  const double s = market.price;
  const double lo = pts.front().price;
  const double hi = pts.back().price;
  if (s < lo || s > hi) return {ExtendedValue::minus_infinity(), 0.0};

  if (s == lo || s == hi) {
    const auto at = std::find_if(pts.begin(), pts.end(), [&](const OneStepChild& c) { return c.price == s; });
    const double v = at->value;
    // Smallest-magnitude hedge that still dominates every other child.
    double h = 0.0;
    bool first = true;
    for (const auto& c : pts) {
      if (c.price == s) continue;
      const double slope = (c.value - v) / (c.price - s);
      if (first) {
        h = slope;
        first = false;
      } else {
        h = s == lo ? std::max(h, slope) : std::min(h, slope);
      }
    }
    return {ExtendedValue::finite(v), h};
  }

  // Upper hull, left to right.
  std::vector<OneStepChild> up;
  for (const auto& p : pts) {
    while (up.size() >= 2) {
      const auto& a = up[up.size() - 2];
      const auto& b = up.back();
      const double cr = (b.price - a.price) * (p.value - a.value) - (b.value - a.value) * (p.price - a.price);
      if (cr < 0.0) break;
      up.pop_back();
    }
    up.push_back(p);
  }
  const auto right = std::find_if(up.begin(), up.end(), [&](const OneStepChild& c) { return c.price >= s; });
  const auto r = static_cast<std::size_t>(right - up.begin());
  const auto slope = [&](std::size_t j) {
    return (up[j + 1].value - up[j].value) / (up[j + 1].price - up[j].price);
  };
  if (up[r].price == s) {
    return {ExtendedValue::finite(up[r].value), 0.5 * (slope(r - 1) + slope(r))};
  }
  const double h = slope(r - 1);
  return {ExtendedValue::finite(up[r - 1].value + h * (s - up[r - 1].price)), h};
}

OneStepSolution one_step_under(const OneStepMarket& market) {
  OneStepMarket neg = market;
  for (auto& c : neg.children) c.value = -c.value;
  const auto sol = one_step_super(neg);
  return {sol.value.negated(), 0.0 - sol.hedge};
}

Payoff Payoff::asset(int coordinate) {
  if (coordinate != 1 && coordinate != 2) throw ValidationError("payoff coordinate must be 1 or 2");
  return terminal([coordinate](const TrajectoryGraph& g, NodeId id) { return g.price(id, coordinate); });
}

Payoff Payoff::terminal(NodeFn fn) {
  Payoff p;
  p.node_ = std::move(fn);
  return p;
}

Payoff Payoff::path(PathFn fn) {
  Payoff p;
  p.path_ = std::move(fn);
  return p;
}

double Payoff::operator()(const TrajectoryGraph& graph, NodeId leaf) const {
  const double v = node_ ? node_(graph, leaf) : path_(graph, graph.path_to(leaf));
  if (!std::isfinite(v)) {
    throw ValidationError("payoff undefined on terminal node " + std::to_string(leaf));
  }
  return v;
}

Payoff Payoff::negated() const {
  if (node_) {
    return terminal([fn = node_](const TrajectoryGraph& g, NodeId id) { return -fn(g, id); });
  }
  return path([fn = path_](const TrajectoryGraph& g, std::span<const NodeId> p) { return -fn(g, p); });
}

namespace {

// Node ids ordered by decreasing rebalance index.
std::vector<NodeId> backward_order(const TrajectoryGraph& g) {
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.node(a).i > g.node(b).i; });
  return order;
}

}  // namespace

PricingResult price(const TrajectoryGraph& graph, const Payoff& payoff, int traded, Direction direction) {
  if (traded != 1 && traded != 2) throw ValidationError("traded coordinate must be 1 or 2");
  if (payoff.path_dependent() && !graph.is_tree()) {
    throw ValidationError("path-dependent payoffs require a tree-mode graph");
  }
  PricingResult res;
  res.direction = direction;
  res.traded = traded;
  const auto n = graph.node_count();
  res.value.assign(n, ExtendedValue::finite(0.0));
  res.hedge.assign(n, 0.0);
  res.interior.assign(n, false);

  const bool super = direction == Direction::Super;
  for (const NodeId id : backward_order(graph)) {
    const auto kids = graph.children(id);
    if (kids.empty()) {
      res.value[id] = ExtendedValue::finite(payoff(graph, id));
      continue;
    }
    OneStepMarket m;
    m.price = graph.price(id, traded);
    for (const NodeId c : kids) {
      if (res.value[c].is_finite()) m.children.push_back({graph.price(c, traded), res.value[c].value()});
    }
    if (m.children.empty()) {
      res.value[id] = super ? ExtendedValue::minus_infinity() : ExtendedValue::plus_infinity();
      continue;
    }
    const auto sol = super ? one_step_super(m) : one_step_under(m);
    res.value[id] = sol.value;
    res.hedge[id] = sol.hedge;
    const auto [lo, hi] = std::minmax_element(m.children.begin(), m.children.end(),
                                              [](const auto& a, const auto& b) { return a.price < b.price; });
    res.interior[id] = lo->price < m.price && m.price < hi->price;
  }
  return res;
}

ExtendedValue brute_force_price(const TrajectoryGraph& tree, const Payoff& payoff, int traded,
                                Direction direction) {
  if (direction == Direction::Under) {
    return brute_force_price(tree, payoff.negated(), traded, Direction::Super).negated();
  }
  if (!tree.is_tree()) throw ValidationError("brute-force pricing requires a tree");
  const auto n = tree.node_count();

  // Nodes where the traded coordinate cannot straddle zero.
  std::vector<bool> arbitrage(n, false);
  for (NodeId id = 0; id < n; ++id) {
    const auto kids = tree.children(id);
    if (kids.empty()) continue;
    bool neg = false, pos = false, nonzero = false;
    for (const NodeId c : kids) {
      const double d = tree.price(c, traded) - tree.price(id, traded);
      neg |= d < 0.0;
      pos |= d > 0.0;
      nonzero |= d != 0.0;
    }
    arbitrage[id] = nonzero && !(neg && pos);
  }

  struct Path {
    std::vector<std::pair<NodeId, double>> moves;  // (node, traded move there)
    double payoff;
  };
  std::vector<Path> paths;
  for (NodeId leaf = 0; leaf < n; ++leaf) {
    if (!tree.children(leaf).empty()) continue;
    const auto route = tree.path_to(leaf);
    Path p;
    bool null = false;
    for (std::size_t j = 0; j + 1 < route.size(); ++j) {
      const double d = tree.price(route[j + 1], traded) - tree.price(route[j], traded);
      if (arbitrage[route[j]] && d != 0.0) {
        null = true;
        break;
      }
      if (d != 0.0) p.moves.emplace_back(route[j], d);
    }
    if (null) continue;
    p.payoff = payoff(tree, leaf);
    paths.push_back(std::move(p));
  }
  if (paths.empty()) return ExtendedValue::minus_infinity();

  // Dual program over path weights: max sum q F, sum q = 1, and for every
  // hedged node the weighted traded move vanishes.
  std::vector<std::size_t> row_of(n, 0);
  std::size_t rows = 1;
  for (const auto& p : paths) {
    for (const auto& [node, d] : p.moves) {
      if (row_of[node] == 0) row_of[node] = rows++;
    }
  }
  lp::StandardForm f;
  f.a.assign(rows, std::vector<double>(paths.size(), 0.0));
  f.b.assign(rows, 0.0);
  f.b[0] = 1.0;
  f.c.resize(paths.size());
  for (std::size_t j = 0; j < paths.size(); ++j) {
    f.a[0][j] = 1.0;
    for (const auto& [node, d] : paths[j].moves) f.a[row_of[node]][j] += d;
    f.c[j] = paths[j].payoff;
  }
  const auto sol = lp::solve(f);
  if (sol.status == lp::Status::Infeasible) return ExtendedValue::minus_infinity();
  if (sol.status == lp::Status::Unbounded) throw DegenerateError("brute-force program unbounded");

  // The duals are a capital and a hedge per node; check they superhedge.
  double scale = 1.0;
  for (const auto& p : paths) scale = std::max(scale, std::abs(p.payoff));
  for (const auto& p : paths) {
    double v = sol.duals[0];
    for (const auto& [node, d] : p.moves) v += sol.duals[row_of[node]] * d;
    if (v < p.payoff - 1e-7 * scale) throw DegenerateError("brute-force certificate failed");
  }
  return ExtendedValue::finite(sol.objective);
}

PortfolioTrace hedge_trace(const TrajectoryGraph& graph, const PricingResult& result, const Payoff& payoff,
                           std::span<const NodeId> path, double capital) {
  if (path.empty() || path.front() != graph.root()) throw ValidationError("trajectory must start at the root");
  const int a = result.traded;
  const bool super = result.direction == Direction::Super;
  PortfolioTrace tr;
  tr.initial_capital = capital;
  tr.value.push_back(capital);
  for (std::size_t j = 0; j + 1 < path.size(); ++j) {
    const NodeId at = path[j];
    const NodeId to = path[j + 1];
    const auto kids = graph.children(at);
    if (std::find(kids.begin(), kids.end(), to) == kids.end()) {
      throw ValidationError("trajectory leaves the graph at step " + std::to_string(j));
    }
    const double pi = tr.value.back();
    const double s = graph.price(at, a);
    double h = result.hedge[at];
    if (!result.value[at].is_finite()) {
      // Surviving children all move to one side; take the least position that
      // covers each finite child bound from the current value.
      bool any = false;
      for (const NodeId c : kids) {
        if (!result.value[c].is_finite()) continue;
        const double d = graph.price(c, a) - s;
        if (d == 0.0) continue;
        const double need = (result.value[c].value() - pi) / d;
        const bool take_max = (d > 0.0) == super;
        if (!any) {
          h = need;
          any = true;
        } else {
          h = take_max ? std::max(h, need) : std::min(h, need);
        }
      }
      if (!any) h = 0.0;
    }
    const double h0 = pi - h * s;
    tr.hedge.push_back(h);
    tr.numeraire.push_back(h0);
    tr.value.push_back(h0 + h * graph.price(to, a));
  }
  tr.payoff = payoff(graph, path.back());
  tr.profit = tr.value.back() - tr.payoff;
  return tr;
}

void write_pricing_csv(std::ostream& out, const PricingResult& super, const PricingResult& under) {
  if (super.value.size() != under.value.size()) throw ValidationError("pricing results differ in size");
  out << "node_id,value_super,value_under,hedge_super,hedge_under,degenerate_flag\n";
  for (std::size_t id = 0; id < super.value.size(); ++id) {
    const bool degenerate = !super.value[id].is_finite() || !under.value[id].is_finite();
    out << id << ',' << super.value[id].to_string() << ',' << under.value[id].to_string() << ','
        << csv::format(super.hedge[id]) << ',' << csv::format(under.hedge[id]) << ',' << (degenerate ? 1 : 0)
        << '\n';
  }
}

}  // namespace trajhedge
