#include "trajhedge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <nlohmann/json.hpp>
#include <ostream>
#include <thread>
#include <tuple>

#include "csv.hpp"

namespace trajhedge {

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Histogram histogram(std::vector<double> values, std::size_t min_bins) {
  Histogram h;
  if (values.empty()) return h;
  std::sort(values.begin(), values.end());
  double lo = values.front();
  double hi = values.back();
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
  const double fd = 2.0 * iqr / std::cbrt(static_cast<double>(values.size()));
  constexpr std::size_t kMaxBins = 10000;
  std::size_t bins = min_bins;
  if (fd > 0.0) {
    bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil((hi - lo) / fd)), min_bins, kMaxBins);
  }
  h.bin_width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t b = 0; b <= bins; ++b) h.edges.push_back(lo + h.bin_width * static_cast<double>(b));
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / h.bin_width);
    ++h.counts[std::min(b, bins - 1)];
  }
  return h;
}

PnLReport pnl(const TrajectoryGraph& graph, const PricingResult& pricing, const Payoff& payoff, double capital,
              std::size_t n, std::uint64_t seed, double epsilon, unsigned threads) {
  if (n == 0) throw ValidationError("pnl: sample count must be >= 1");
  if (pricing.degenerate()) throw DegenerateError("pnl: root bound is " + pricing.root_value().to_string());
  const double sign = pricing.direction == Direction::Super ? 1.0 : -1.0;
  PnLReport r;
  r.capital = capital;
  r.samples = n;
  r.epsilon = epsilon;
  r.profits.assign(n, 0.0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(j)));
      const auto path = sample_trajectory(graph, rng);
      const auto tr = hedge_trace(graph, pricing, payoff, path, capital);
      r.profits[j] = sign * tr.profit + epsilon;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, n * t / threads, n * (t + 1) / threads);
    for (auto& th : pool) th.join();
  }
  const auto wins = std::count_if(r.profits.begin(), r.profits.end(), [](double p) { return p > 0.0; });
  r.percent_profitable = 100.0 * static_cast<double>(wins) / static_cast<double>(n);
  r.histogram = histogram(r.profits);
  return r;
}

void write_pnl_json(std::ostream& out, const PnLReport& r) {
  const auto [mn, mx] = std::minmax_element(r.profits.begin(), r.profits.end());
  nlohmann::json j{{"capital", r.capital},
                   {"samples", r.samples},
                   {"percent_profitable", r.percent_profitable},
                   {"epsilon", r.epsilon},
                   {"profit_min", r.profits.empty() ? 0.0 : *mn},
                   {"profit_max", r.profits.empty() ? 0.0 : *mx},
                   {"histogram",
                    {{"bin_width", r.histogram.bin_width}, {"edges", r.histogram.edges}, {"counts", r.histogram.counts}}}};
  out << j.dump(2) << '\n';
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "lower,upper,count\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    out << csv::format(h.edges[b]) << ',' << csv::format(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
  }
}

std::vector<double> SweepRange::values() const {
  if (!(step > 0.0) || stop < start) throw ValidationError("sweep range needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> v;
  for (std::size_t k = 0; k < count; ++k) v.push_back(start + static_cast<double>(k) * step);
  return v;
}

CalibrationSweep calibration_sweep(const DiscountedChart& chart, const TimeGrid& grid,
                                   const DiscretizationParams& disc, EscapeModel model, const SweepRange& first,
                                   const SweepRange& second) {
  const auto ws = windows(chart, grid, disc);
  CalibrationSweep sweep;
  sweep.model = model;
  auto cell = [&](const EscapeParams& p, double d0, double d1) {
    CalibrationCell c{d0, d1, 0, 0};
    bool seen = false;
    for (const auto& w : ws) {
      const int n = escape_times(w, p).count();
      c.n_lower = seen ? std::min(c.n_lower, n) : n;
      c.n_upper = seen ? std::max(c.n_upper, n) : n;
      seen = true;
    }
    sweep.cells.push_back(c);
  };
  for (double d0 : first.values()) {
    if (model == EscapeModel::B) {
      cell(EscapeParams::model_b(d0), d0, 0.0);
    } else {
      for (double d1 : second.values()) cell(EscapeParams::model_a(d0, d1), d0, d1);
    }
  }
  return sweep;
}

void write_sweep_csv(std::ostream& out, const CalibrationSweep& sweep) {
  const bool a = sweep.model == EscapeModel::A;
  out << (a ? "delta0,delta1,n_lower,n_upper\n" : "delta0,n_lower,n_upper\n");
  for (const auto& c : sweep.cells) {
    out << csv::format(c.delta0) << ',';
    if (a) out << csv::format(c.delta1) << ',';
    out << c.n_lower << ',' << c.n_upper << '\n';
  }
}

std::vector<ObservedState> observed_states(const Window& window, const EscapeParams& params) {
  const auto times = escape_times(window, params);
  const auto w = variation_series(window);
  std::vector<ObservedState> out;
  for (std::size_t i = 0; i < times.steps.size(); ++i) {
    const auto u = static_cast<std::size_t>(times.steps[i]);
    out.push_back({window.k1[u], window.k2[u], static_cast<int>(i), times.steps[i], w[u]});
  }
  return out;
}

double state_error(const GraphNode& n, const ObservedState& x, const DiscretizationParams& disc) {
  return static_cast<double>(std::abs(n.k1 - x.k1)) * disc.dhat1 +
         static_cast<double>(std::abs(n.k2 - x.k2)) * disc.dhat2 + std::abs(n.i - x.i) +
         static_cast<double>(std::abs(n.t_steps - x.t_steps) + std::abs(n.w - x.w));
}

namespace {

using TieKey = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

TieKey tie_key(const GraphNode& from, const GraphNode& to) {
  return {std::abs(to.k1 - from.k1), std::abs(to.k2 - from.k2), to.t_steps - from.t_steps, to.w - from.w};
}

GraphNode step(const GraphNode& n, const EmpiricalIncrement& inc) {
  GraphNode c;
  c.k1 = n.k1 + inc.m1;
  c.k2 = n.k2 + inc.m2;
  c.i = n.i + 1;
  c.t_steps = n.t_steps + inc.q;
  c.w = n.w + inc.eta;
  return c;
}

GraphNode window_root(const std::vector<ObservedState>& xs) {
  GraphNode r;
  r.k1 = xs.front().k1;
  r.k2 = xs.front().k2;
  return r;
}

}  // namespace

MatchResult match(const TrajectoryGraph& graph, const Window& window, const EscapeParams& params) {
  if (graph.node_count() == 0) throw ValidationError("match: empty graph");
  const auto xs = observed_states(window, params);
  const auto& disc = graph.disc();
  MatchResult m;
  NodeId at = graph.root();
  m.node_ids.push_back(at);
  m.path.push_back(graph.node(at));
  m.errors.push_back(state_error(graph.node(at), xs[0], disc));
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const auto kids = graph.children(at);
    if (kids.empty()) break;
    const auto& from = graph.node(at);
    NodeId best = kids.front();
    double best_err = state_error(graph.node(best), xs[i], disc);
    for (const NodeId c : kids.subspan(1)) {
      const double e = state_error(graph.node(c), xs[i], disc);
      if (e < best_err || (e == best_err && tie_key(from, graph.node(c)) < tie_key(from, graph.node(best)))) {
        best = c;
        best_err = e;
      }
    }
    at = best;
    m.node_ids.push_back(at);
    m.path.push_back(graph.node(at));
    m.errors.push_back(best_err);
  }
  for (double e : m.errors) m.total_error += e;
  return m;
}

MatchResult match(const EmpiricalSet& ne, const Window& window, const EscapeParams& params,
                  const DiscretizationParams& disc, int n_max) {
  const auto xs = observed_states(window, params);
  const auto steps = n_max > 0 ? std::min<std::size_t>(xs.size() - 1, static_cast<std::size_t>(n_max)) : xs.size() - 1;
  MatchResult m;
  m.path.push_back(window_root(xs));
  m.errors.push_back(0.0);
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto& from = m.path.back();
    GraphNode best = step(from, ne.increments.front());
    double best_err = state_error(best, xs[i], disc);
    for (const auto& inc : ne.increments) {
      const auto c = step(from, inc);
      const double e = state_error(c, xs[i], disc);
      if (e < best_err || (e == best_err && tie_key(from, c) < tie_key(from, best))) {
        best = c;
        best_err = e;
      }
    }
    m.path.push_back(best);
    m.errors.push_back(best_err);
  }
  for (double e : m.errors) m.total_error += e;
  return m;
}

MatchResult match_exhaustive(const EmpiricalSet& ne, const Window& window, const EscapeParams& params,
                             const DiscretizationParams& disc, int n_max) {
  const auto xs = observed_states(window, params);
  const auto steps = n_max > 0 ? std::min<std::size_t>(xs.size() - 1, static_cast<std::size_t>(n_max)) : xs.size() - 1;
  MatchResult best;
  best.total_error = std::numeric_limits<double>::infinity();
  MatchResult cur;
  cur.path.push_back(window_root(xs));
  cur.errors.push_back(0.0);
  std::function<void(double)> dfs = [&](double total) {
    if (total >= best.total_error) return;
    if (cur.path.size() == steps + 1) {
      best = cur;
      best.total_error = total;
      return;
    }
    const auto i = cur.path.size();
    for (const auto& inc : ne.increments) {
      const auto c = step(cur.path.back(), inc);
      const double e = state_error(c, xs[i], disc);
      cur.path.push_back(c);
      cur.errors.push_back(e);
      dfs(total + e);
      cur.path.pop_back();
      cur.errors.pop_back();
    }
  };
  dfs(0.0);
  return best;
}

DubinCheck dubin_check(const TrajectoryGraph& tree, double alpha, double beta, int k) {
  if (k < 0) throw ValidationError("dubin: k must be >= 0");
  const auto indicator = Payoff::path([=](const TrajectoryGraph& g, std::span<const NodeId> path) {
    std::vector<double> f1, f2;
    for (const NodeId id : path) {
      f1.push_back(g.price(id, 1));
      f2.push_back(g.price(id, 2));
    }
    return cone_crossings(f1, f2, alpha, beta).count >= k + 1 ? 1.0 : 0.0;
  });
  const auto res = price(tree, indicator, 2, Direction::Super);
  if (res.degenerate()) throw DegenerateError("dubin: superhedging bound is " + res.root_value().to_string());
  return {res.root_value().value(), std::pow(alpha / beta, k + 1)};
}

}  // namespace trajhedge
