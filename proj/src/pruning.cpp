#include "trajhedge/pruning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "csv.hpp"

namespace trajhedge {

double relative_norm_change(std::int64_t k1, std::int64_t k2, std::int64_t root1,
                            std::int64_t root2, const DiscretizationParams& disc) {
  const double r1 = static_cast<double>(root1) * disc.dhat1;
  const double r2 = static_cast<double>(root2) * disc.dhat2;
  const double norm = std::hypot(r1, r2);
  if (norm == 0.0) return 0.0;
  const double d1 = static_cast<double>(k1 - root1) * disc.dhat1;
  const double d2 = static_cast<double>(k2 - root2) * disc.dhat2;
  return std::hypot(d1, d2) / norm;
}

WindowProfile profile_window(const Window& window, const EscapeParams& params,
                             const DiscretizationParams& disc) {
  const auto times = escape_times(window, params);
  WindowProfile p;
  p.escape_count = times.count();
  p.escape_steps = times.steps;
  p.w_at_step = variation_series(window);
  p.n_at_step.assign(window.k1.size(), 0);
  std::size_t next = 1;
  for (std::size_t rho = 0; rho < p.n_at_step.size(); ++rho) {
    while (next < times.steps.size() && static_cast<std::size_t>(times.steps[next]) <= rho) ++next;
    p.n_at_step[rho] = static_cast<int>(next) - 1;
  }
  for (int u : times.steps) {
    p.x_norm.push_back(relative_norm_change(window.k1[u], window.k2[u], window.k1[0], window.k2[0], disc));
  }
  return p;
}

namespace {

template <class T>
void widen(std::optional<Bounds<T>>& cell, T v) {
  if (cell) {
    cell->widen(v);
  } else {
    cell = Bounds<T>{v, v};
  }
}

template <class T>
std::vector<Bounds<T>> unwrap(const std::vector<std::optional<Bounds<T>>>& cells) {
  std::vector<Bounds<T>> out;
  out.reserve(cells.size());
  for (const auto& c : cells) out.push_back(c.value_or(Bounds<T>{}));
  return out;
}

std::optional<Bounds<std::int64_t>> w_lookup(const std::vector<std::optional<Bounds<std::int64_t>>>& t,
                                             std::int64_t w, std::int64_t w_star) {
  if (w > w_star) return Bounds<std::int64_t>{0, 0};
  for (auto v = std::min<std::int64_t>(w, static_cast<std::int64_t>(t.size()) - 1); v >= 0; --v) {
    if (t[static_cast<std::size_t>(v)]) return t[static_cast<std::size_t>(v)];
  }
  return std::nullopt;
}

}  // namespace

std::optional<Bounds<std::int64_t>> PruningTables::n_at_w(std::int64_t w) const {
  return w_lookup(n_of_w, w, w_star);
}

std::optional<Bounds<std::int64_t>> PruningTables::t_at_w(std::int64_t w) const {
  return w_lookup(t_of_w, w, w_star);
}

PruningTables build_tables(std::span<const WindowProfile> profiles, const DiscretizationParams& disc,
                           int steps_per_window) {
  if (profiles.empty()) throw ValidationError("pruning: at least one window is required");
  const auto rows = static_cast<std::size_t>(steps_per_window) + 1;
  PruningTables t;
  t.disc = disc;
  t.steps_per_window = steps_per_window;
  t.window_count = profiles.size();
  for (const auto& p : profiles) {
    if (p.n_at_step.size() != rows || p.w_at_step.size() != rows) {
      throw ValidationError("pruning: window length does not match steps_per_window");
    }
    t.i_star = std::max(t.i_star, p.escape_count);
    t.w_star = std::max(t.w_star, p.w_at_step.back());
  }

  const auto idx = static_cast<std::size_t>(t.i_star) + 1;
  std::vector<std::optional<Bounds<double>>> x_norm(idx);
  std::vector<std::optional<Bounds<std::int64_t>>> n_of_t(rows), w_of_t(rows), t_of_i(idx), w_of_i(idx);
  t.n_of_w.assign(static_cast<std::size_t>(t.w_star) + 1, std::nullopt);
  t.t_of_w.assign(static_cast<std::size_t>(t.w_star) + 1, std::nullopt);

  for (const auto& p : profiles) {
    for (std::size_t rho = 0; rho < rows; ++rho) {
      const auto w = p.w_at_step[rho];
      widen<std::int64_t>(n_of_t[rho], p.n_at_step[rho]);
      widen<std::int64_t>(w_of_t[rho], w);
      widen<std::int64_t>(t.n_of_w[static_cast<std::size_t>(w)], p.n_at_step[rho]);
      widen<std::int64_t>(t.t_of_w[static_cast<std::size_t>(w)], static_cast<std::int64_t>(rho));
    }
    for (std::size_t i = 0; i < p.escape_steps.size(); ++i) {
      const auto u = static_cast<std::size_t>(p.escape_steps[i]);
      widen(x_norm[i], p.x_norm[i]);
      widen<std::int64_t>(t_of_i[i], p.escape_steps[i]);
      widen<std::int64_t>(w_of_i[i], p.w_at_step[u]);
    }
  }
  t.x_norm = unwrap(x_norm);
  t.n_of_t = unwrap(n_of_t);
  t.w_of_t = unwrap(w_of_t);
  t.t_of_i = unwrap(t_of_i);
  t.w_of_i = unwrap(w_of_i);
  return t;
}

PruningTables build_tables(const DiscountedChart& chart, const TimeGrid& grid,
                           const EscapeParams& params, const DiscretizationParams& disc) {
  const auto ws = windows(chart, grid, disc);
  std::vector<WindowProfile> profiles;
  profiles.reserve(ws.size());
  for (const auto& w : ws) profiles.push_back(profile_window(w, params, disc));
  return build_tables(profiles, disc, grid.steps_per_window);
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::None: return "none";
    case Constraint::Horizon: return "horizon";
    case Constraint::IndexBeyondHistory: return "index beyond history";
    case Constraint::RelativeNorm: return "(1) relative normed change";
    case Constraint::CountAtTime: return "(2) escape count at time";
    case Constraint::CountAtVariation: return "(3) escape count at variation";
    case Constraint::TimeAtCount: return "(4) time at escape count";
    case Constraint::TimeAtVariation: return "(5) time at variation";
    case Constraint::VariationAtCount: return "(6) variation at escape count";
    case Constraint::VariationAtTime: return "(7) variation at time";
  }
  return "unknown";
}

Admissibility admissible(const GraphNode& root, const GraphNode& c, const PruningTables& t) {
  const std::int64_t i = c.i;
  const auto T = c.t_steps;
  const auto W = c.w;
  if (T < 0 || T > t.steps_per_window) return {Constraint::Horizon};
  if (i < 0 || i > t.i_star) return {Constraint::IndexBeyondHistory};
  const auto ui = static_cast<std::size_t>(i);
  const auto uT = static_cast<std::size_t>(T);

  const double x = relative_norm_change(c.k1, c.k2, root.k1, root.k2, t.disc);
  const auto& xb = t.x_norm[ui];
  const double slack = 1e-12 * std::max(1.0, xb.upper);
  if (x < xb.lower - slack || x > xb.upper + slack) return {Constraint::RelativeNorm};
  if (!t.n_of_t[uT].contains(i)) return {Constraint::CountAtTime};
  const auto nw = t.n_at_w(W);
  if (!nw || !nw->contains(i)) return {Constraint::CountAtVariation};
  if (!t.t_of_i[ui].contains(T)) return {Constraint::TimeAtCount};
  const auto tw = t.t_at_w(W);
  if (!tw || !tw->contains(T)) return {Constraint::TimeAtVariation};
  if (!t.w_of_i[ui].contains(W)) return {Constraint::VariationAtCount};
  if (!t.w_of_t[uT].contains(W)) return {Constraint::VariationAtTime};
  return {};
}

void write_table(std::ostream& out, std::span<const Bounds<double>> rows) {
  out << "index,lower,upper\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << csv::format(rows[i].lower) << ',' << csv::format(rows[i].upper) << '\n';
  }
}

void write_table(std::ostream& out, std::span<const Bounds<std::int64_t>> rows) {
  out << "index,lower,upper\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << i << ',' << rows[i].lower << ',' << rows[i].upper << '\n';
  }
}

void write_table(std::ostream& out, std::span<const std::optional<Bounds<std::int64_t>>> rows) {
  out << "index,lower,upper\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i]) out << i << ',' << rows[i]->lower << ',' << rows[i]->upper << '\n';
  }
}

}  // namespace trajhedge
