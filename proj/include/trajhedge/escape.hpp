#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "trajhedge/market_data.hpp"

namespace trajhedge {

enum class EscapeModel { A, B };

/// Model A: absolute threshold delta0 on x1, relative delta1 on x2.
/// Model B: relative threshold deltaB on both coordinates.
struct EscapeParams {
  EscapeModel model = EscapeModel::B;
  double delta0 = 0.1;
  double delta1 = 0.001;
  double deltaB = 0.011;

  [[nodiscard]] static EscapeParams model_a(double d0, double d1);
  [[nodiscard]] static EscapeParams model_b(double d);
  void validate() const;
};

/// Step offsets of escape times within one window; steps.front() == 0.
struct EscapeTimes {
  std::vector<int> steps;

  [[nodiscard]] int count() const { return static_cast<int>(steps.size()) - 1; }
};

/// True if the sample at `step` escapes from the anchor sample.
[[nodiscard]] bool escapes(const Window& window, const EscapeParams& params, int anchor, int step);

[[nodiscard]] EscapeTimes escape_times(const Window& window, const EscapeParams& params);

/// Transition between consecutive escapes: grid moves, elapsed steps q and
/// segment variation eta. The constant third coordinate is implicit.
struct EmpiricalIncrement {
  std::int64_t m1 = 0;
  std::int64_t m2 = 0;
  std::int64_t q = 0;
  std::int64_t eta = 0;

  static constexpr int one = 1;

  [[nodiscard]] static EmpiricalIncrement sentinel() { return {}; }
  auto operator<=>(const EmpiricalIncrement&) const = default;
};

[[nodiscard]] std::vector<EmpiricalIncrement> window_increments(const Window& window,
                                                                const EscapeTimes& times);

/// Deduplicated increments plus their multiplicities over all windows.
struct EmpiricalSet {
  std::vector<EmpiricalIncrement> increments;  ///< sorted, unique
  std::map<EmpiricalIncrement, std::size_t> counts;

  [[nodiscard]] std::size_t size() const { return increments.size(); }
  [[nodiscard]] static EmpiricalSet from(std::span<const EmpiricalIncrement> all);
};

[[nodiscard]] EmpiricalSet build_empirical_set(std::span<const Window> ws,
                                               const EscapeParams& params);
[[nodiscard]] EmpiricalSet build_empirical_set(const DiscountedChart& chart, const TimeGrid& grid,
                                               const EscapeParams& params,
                                               const DiscretizationParams& disc);

struct GridPoint {
  std::int64_t x = 0;
  std::int64_t y = 0;

  auto operator<=>(const GridPoint&) const = default;
};

/// (b - a) x (c - a); positive for a counter-clockwise turn.
[[nodiscard]] inline std::int64_t cross(const GridPoint& a, const GridPoint& b,
                                        const GridPoint& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

/// Counter-clockwise hull vertices without collinear points, starting at the
/// lexicographically smallest point. Fewer than three vertices means the hull
/// is a point or a segment.
[[nodiscard]] std::vector<GridPoint> hull2d(std::span<const GridPoint> points);
[[nodiscard]] std::vector<GridPoint> hull2d(const EmpiricalSet& ne);

void write_empirical_set(std::ostream& out, const EmpiricalSet& ne);
[[nodiscard]] EmpiricalSet read_empirical_set(std::istream& in);
void write_hull(std::ostream& out, std::span<const GridPoint> hull);

}  // namespace trajhedge
