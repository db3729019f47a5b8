#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

using namespace trajhedge;

std::vector<int> escape_steps(std::span<const double> x1, std::span<const double> x2, const EscapeParams& p) {
  auto fires = [&](std::size_t a, std::size_t t) {
    if (p.model == EscapeModel::A) {
      const bool abs1 = std::fabs(x1[t] - x1[a]) >= p.delta0;
      const bool rel2 = x2[a] != 0.0 && std::fabs(x2[t] - x2[a]) / std::fabs(x2[a]) >= p.delta1;
      return abs1 || rel2;
    }
    const double r1 = x1[a] != 0.0 ? std::fabs(x1[t] - x1[a]) / std::fabs(x1[a]) : 0.0;
    const double r2 = x2[a] != 0.0 ? std::fabs(x2[t] - x2[a]) / std::fabs(x2[a]) : 0.0;
    return r1 >= p.deltaB || r2 >= p.deltaB;
  };
  std::vector<int> out{0};
  std::size_t anchor = 0;
  while (true) {
    std::size_t found = x1.size();
    for (std::size_t t = anchor + 1; t < x1.size(); ++t) {
      if (fires(anchor, t)) {
        found = t;
        break;
      }
    }
    if (found == x1.size()) return out;
    out.push_back(static_cast<int>(found));
    anchor = found;
  }
}

namespace {

std::int64_t orient(const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool on_segment(const GridPoint& p, const GridPoint& a, const GridPoint& b) {
  return orient(a, b, p) == 0 && std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool in_triangle(const GridPoint& p, const GridPoint& a, const GridPoint& b, const GridPoint& c) {
  const auto d1 = orient(a, b, p);
  const auto d2 = orient(b, c, p);
  const auto d3 = orient(c, a, p);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

}  // namespace

bool in_hull(const GridPoint& p, std::span<const GridPoint> pts) {
  const auto n = pts.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (pts[a] == p) return true;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (on_segment(p, pts[a], pts[b])) return true;
      for (std::size_t c = b + 1; c < n; ++c) {
        if (orient(pts[a], pts[b], pts[c]) != 0 && in_triangle(p, pts[a], pts[b], pts[c])) return true;
      }
    }
  }
  return false;
}

std::set<GridPoint> hull_vertices(std::span<const GridPoint> points) {
  const std::set<GridPoint> distinct(points.begin(), points.end());
  std::set<GridPoint> out;
  for (const auto& p : distinct) {
    std::vector<GridPoint> others;
    for (const auto& q : distinct) {
      if (q != p) others.push_back(q);
    }
    if (!in_hull(p, others)) out.insert(p);
  }
  return out;
}

NodeClass classify_by_directions(std::span<const GridPoint> points, int range) {
  bool weak = false;
  for (int hx = -range; hx <= range; ++hx) {
    for (int hy = -range; hy <= range; ++hy) {
      if (hx == 0 && hy == 0) continue;
      bool all_pos = true, all_nonneg = true, some_pos = false;
      for (const auto& p : points) {
        const std::int64_t v = hx * p.x + hy * p.y;
        all_pos &= v > 0;
        all_nonneg &= v >= 0;
        some_pos |= v > 0;
      }
      if (all_pos) return NodeClass::TypeII;
      weak |= all_nonneg && some_pos;
    }
  }
  return weak ? NodeClass::TypeI : NodeClass::ArbitrageFree;
}

ExtendedValue breakpoint_one_step(double s, std::span<const OneStepChild> children) {
  bool neg = false, pos = false;
  double flat = -std::numeric_limits<double>::infinity();
  for (const auto& c : children) {
    const double d = c.price - s;
    neg |= d < 0.0;
    pos |= d > 0.0;
    if (d == 0.0) flat = std::max(flat, c.value);
  }
  if (!(neg && pos)) {
    return std::isinf(flat) ? ExtendedValue::minus_infinity() : ExtendedValue::finite(flat);
  }
  auto objective = [&](double h) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& c : children) m = std::max(m, c.value - h * (c.price - s));
    return m;
  };
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < children.size(); ++a) {
    for (std::size_t b = a + 1; b < children.size(); ++b) {
      const double da = children[a].price - s;
      const double db = children[b].price - s;
      if (da == db) continue;
      best = std::min(best, objective((children[a].value - children[b].value) / (da - db)));
    }
  }
  return ExtendedValue::finite(best);
}

namespace {

ExtendedValue recurse(const TrajectoryGraph& g, const Payoff& payoff, int traded, NodeId id) {
  const auto kids = g.children(id);
  if (kids.empty()) return ExtendedValue::finite(payoff(g, id));
  std::vector<OneStepChild> market;
  for (const NodeId c : kids) {
    const auto v = recurse(g, payoff, traded, c);
    if (v.is_finite()) market.push_back({g.price(c, traded), v.value()});
  }
  if (market.empty()) return ExtendedValue::minus_infinity();
  return breakpoint_one_step(g.price(id, traded), market);
}

}  // namespace

ExtendedValue breakpoint_super(const TrajectoryGraph& tree, const Payoff& payoff, int traded) {
  return recurse(tree, payoff, traded, tree.root());
}

Enumeration enumerate_paths(const Tuple& root, std::span<const EmpiricalIncrement> ne, int n_max) {
  Enumeration e;
  std::set<Tuple> level{root};
  e.nodes.insert(root);
  for (int i = 0; i < n_max; ++i) {
    std::set<Tuple> next;
    for (const auto& n : level) {
      for (const auto& inc : ne) {
        const Tuple c{n.k1 + inc.m1, n.k2 + inc.m2, n.i + 1, n.t + inc.q, n.w + inc.eta};
        next.insert(c);
        e.edges.insert({n, c});
      }
    }
    e.nodes.insert(next.begin(), next.end());
    level = std::move(next);
  }
  return e;
}

Crossings cone_scan(std::span<const double> f1, std::span<const double> f2, double alpha, double beta) {
  const int n = static_cast<int>(f1.size());
  Crossings c;
  c.tau.push_back(0);
  while (true) {
    const int tk = c.tau.back();
    int rho = n;
    for (int t = tk; t < n; ++t) {
      if (f2[tk] / f1[t] <= alpha) {
        rho = t;
        break;
      }
    }
    c.rho.push_back(rho);
    if (rho == n) {
      c.tau.push_back(n);
      break;
    }
    int tau = n;
    for (int t = rho; t < n; ++t) {
      if (f2[t] / f1[rho] >= beta) {
        tau = t;
        break;
      }
    }
    c.tau.push_back(tau);
    if (tau == n) break;
    ++c.count;
  }
  return c;
}

}  // namespace oracle
