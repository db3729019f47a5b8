#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "trajhedge/escape.hpp"
#include "trajhedge/node.hpp"

namespace trajhedge {

template <class T>
struct Bounds {
  T lower{};
  T upper{};

  [[nodiscard]] bool contains(T v) const { return lower <= v && v <= upper; }
  void widen(T v) {
    if (v < lower) lower = v;
    if (v > upper) upper = v;
  }
};

/// Everything the tables need from one historical window.
struct WindowProfile {
  int escape_count = 0;                    ///< N at the window end
  std::vector<int> n_at_step;              ///< N(rho), rho = 0..M_T
  std::vector<std::int64_t> w_at_step;     ///< w(rho)
  std::vector<int> escape_steps;           ///< T(i), i = 0..N
  std::vector<double> x_norm;              ///< relative normed change at escape i
};

[[nodiscard]] WindowProfile profile_window(const Window& window, const EscapeParams& params,
                                           const DiscretizationParams& disc);

/// Euclidean distance of (k1, k2) from (root1, root2) in price units, relative
/// to the norm of the root. Zero root norm yields 0.
[[nodiscard]] double relative_norm_change(std::int64_t k1, std::int64_t k2, std::int64_t root1,
                                          std::int64_t root2, const DiscretizationParams& disc);

/// Historical worst-case envelopes. Times are in steps of the grid.
struct PruningTables {
  std::vector<Bounds<double>> x_norm;                         ///< by i, 0..i*
  std::vector<Bounds<std::int64_t>> n_of_t;                   ///< by rho, 0..M_T
  std::vector<Bounds<std::int64_t>> t_of_i;                   ///< by i
  std::vector<Bounds<std::int64_t>> w_of_t;                   ///< by rho
  std::vector<Bounds<std::int64_t>> w_of_i;                   ///< by i
  std::vector<std::optional<Bounds<std::int64_t>>> n_of_w;    ///< by w, 0..w*; empty if unattained
  std::vector<std::optional<Bounds<std::int64_t>>> t_of_w;    ///< by w
  std::int64_t w_star = 0;
  int i_star = 0;
  int steps_per_window = 0;
  std::size_t window_count = 0;
  DiscretizationParams disc;

  /// w-indexed lookup: nearest attained w at or below, {0,0} beyond w*,
  /// nullopt if nothing is attained at or below w.
  [[nodiscard]] std::optional<Bounds<std::int64_t>> n_at_w(std::int64_t w) const;
  [[nodiscard]] std::optional<Bounds<std::int64_t>> t_at_w(std::int64_t w) const;
};

[[nodiscard]] PruningTables build_tables(std::span<const WindowProfile> profiles,
                                         const DiscretizationParams& disc, int steps_per_window);
[[nodiscard]] PruningTables build_tables(const DiscountedChart& chart, const TimeGrid& grid,
                                         const EscapeParams& params,
                                         const DiscretizationParams& disc);

enum class Constraint {
  None,
  Horizon,
  IndexBeyondHistory,
  RelativeNorm,      ///< (1)
  CountAtTime,       ///< (2)
  CountAtVariation,  ///< (3)
  TimeAtCount,       ///< (4)
  TimeAtVariation,   ///< (5)
  VariationAtCount,  ///< (6)
  VariationAtTime,   ///< (7)
};

[[nodiscard]] std::string_view to_string(Constraint c);

struct Admissibility {
  Constraint failed = Constraint::None;

  [[nodiscard]] bool ok() const { return failed == Constraint::None; }
  explicit operator bool() const { return ok(); }
};

/// Checks a candidate node against all seven constraint pairs, in order.
/// `root` anchors the relative normed change.
[[nodiscard]] Admissibility admissible(const GraphNode& root, const GraphNode& candidate,
                                       const PruningTables& tables);

/// Writes one `index,lower,upper` table; unattained w-rows are omitted.
void write_table(std::ostream& out, std::span<const Bounds<double>> rows);
void write_table(std::ostream& out, std::span<const Bounds<std::int64_t>> rows);
void write_table(std::ostream& out, std::span<const std::optional<Bounds<std::int64_t>>> rows);

}  // namespace trajhedge
