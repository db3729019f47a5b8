#include "trajhedge/escape.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>

#include "csv.hpp"

namespace trajhedge {

EscapeParams EscapeParams::model_a(double d0, double d1) {
  EscapeParams p;
  p.model = EscapeModel::A;
  p.delta0 = d0;
  p.delta1 = d1;
  return p;
}

EscapeParams EscapeParams::model_b(double d) {
  EscapeParams p;
  p.model = EscapeModel::B;
  p.deltaB = d;
  return p;
}

void EscapeParams::validate() const {
  if (model == EscapeModel::A) {
    if (!(delta0 > 0.0) || !(delta1 > 0.0)) {
      throw ValidationError("escape model A: delta0 and delta1 must be positive");
    }
  } else if (!(deltaB > 0.0)) {
    throw ValidationError("escape model B: deltaB must be positive");
  }
}

namespace {

// Relative move; a zero anchor never triggers.
double relative_move(double from, double to) {
  if (from == 0.0) return 0.0;
  return std::abs(to - from) / std::abs(from);
}

}  // namespace

bool escapes(const Window& window, const EscapeParams& params, int anchor, int step) {
  const double r2 = relative_move(window.x2[anchor], window.x2[step]);
  if (params.model == EscapeModel::A) {
    return reaches(std::abs(window.x1[step] - window.x1[anchor]), params.delta0) ||
           (window.x2[anchor] != 0.0 && reaches(r2, params.delta1));
  }
  const double r1 = relative_move(window.x1[anchor], window.x1[step]);
  return reaches(std::max(r1, r2), params.deltaB);
}

EscapeTimes escape_times(const Window& window, const EscapeParams& params) {
  params.validate();
  EscapeTimes out;
  out.steps.push_back(0);
  int anchor = 0;
  for (int s = 1; s <= window.steps(); ++s) {
    if (escapes(window, params, anchor, s)) {
      out.steps.push_back(s);
      anchor = s;
    }
  }
  return out;
}

std::vector<EmpiricalIncrement> window_increments(const Window& window, const EscapeTimes& times) {
  if (times.count() == 0) return {EmpiricalIncrement::sentinel()};
  const auto w = variation_series(window);
  std::vector<EmpiricalIncrement> out;
  out.reserve(static_cast<std::size_t>(times.count()));
  for (std::size_t i = 0; i + 1 < times.steps.size(); ++i) {
    const int a = times.steps[i];
    const int b = times.steps[i + 1];
    out.push_back({window.k1[b] - window.k1[a], window.k2[b] - window.k2[a], b - a, w[b] - w[a]});
  }
  return out;
}

EmpiricalSet EmpiricalSet::from(std::span<const EmpiricalIncrement> all) {
  EmpiricalSet ne;
  for (const auto& inc : all) ++ne.counts[inc];
  if (ne.counts.empty()) ne.counts[EmpiricalIncrement::sentinel()] = 0;
  ne.increments.reserve(ne.counts.size());
  for (const auto& [inc, n] : ne.counts) ne.increments.push_back(inc);
  return ne;
}

EmpiricalSet build_empirical_set(std::span<const Window> ws, const EscapeParams& params) {
  std::vector<EmpiricalIncrement> all;
  for (const auto& win : ws) {
    const auto inc = window_increments(win, escape_times(win, params));
    all.insert(all.end(), inc.begin(), inc.end());
  }
  return EmpiricalSet::from(all);
}

EmpiricalSet build_empirical_set(const DiscountedChart& chart, const TimeGrid& grid,
                                 const EscapeParams& params, const DiscretizationParams& disc) {
  const auto ws = windows(chart, grid, disc);
  return build_empirical_set(ws, params);
}

std::vector<GridPoint> hull2d(std::span<const GridPoint> points) {
  std::vector<GridPoint> p(points.begin(), points.end());
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() <= 2) return p;

  std::vector<GridPoint> h(2 * p.size());
  std::size_t k = 0;
  for (const auto& pt : p) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pt) <= 0) --k;
    h[k++] = pt;
  }
  for (std::size_t i = p.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

std::vector<GridPoint> hull2d(const EmpiricalSet& ne) {
  std::vector<GridPoint> pts;
  pts.reserve(ne.size());
  for (const auto& inc : ne.increments) pts.push_back({inc.m1, inc.m2});
  return hull2d(pts);
}

void write_empirical_set(std::ostream& out, const EmpiricalSet& ne) {
  out << "m1,m2,one,q,eta,count\n";
  for (const auto& [inc, n] : ne.counts) {
    out << inc.m1 << ',' << inc.m2 << ',' << EmpiricalIncrement::one << ',' << inc.q << ','
        << inc.eta << ',' << n << '\n';
  }
}

EmpiricalSet read_empirical_set(std::istream& in) {
  std::vector<std::string> f;
  std::size_t line_no = 0;
  if (!csv::next_record(in, f, line_no)) throw ValidationError("empirical set: empty input");
  const int cm1 = csv::column(f, "m1"), cm2 = csv::column(f, "m2"), cq = csv::column(f, "q"),
            ce = csv::column(f, "eta"), cc = csv::column(f, "count");
  if (cm1 < 0 || cm2 < 0 || cq < 0 || ce < 0) {
    throw ValidationError("empirical set: header must contain m1,m2,q,eta");
  }
  EmpiricalSet ne;
  while (csv::next_record(in, f, line_no)) {
    const EmpiricalIncrement inc{csv::to_int(f.at(cm1), line_no), csv::to_int(f.at(cm2), line_no),
                                 csv::to_int(f.at(cq), line_no), csv::to_int(f.at(ce), line_no)};
    ne.counts[inc] += cc >= 0 ? static_cast<std::size_t>(csv::to_int(f.at(cc), line_no)) : 1;
  }
  if (ne.counts.empty()) throw ValidationError("empirical set: no increments");
  for (const auto& [inc, n] : ne.counts) ne.increments.push_back(inc);
  return ne;
}

void write_hull(std::ostream& out, std::span<const GridPoint> hull) {
  out << "m1,m2\n";
  for (const auto& p : hull) out << p.x << ',' << p.y << '\n';
}

}  // namespace trajhedge
