#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "trajhedge/cone.hpp"
#include "trajhedge/superhedge.hpp"

namespace trajhedge {

struct Histogram {
  std::vector<double> edges;  ///< bins + 1 edges
  std::vector<std::size_t> counts;
  double bin_width = 0.0;
};

/// Freedman-Diaconis width, at least `min_bins` bins.
[[nodiscard]] Histogram histogram(std::vector<double> values, std::size_t min_bins = 20);

struct PnLReport {
  double capital = 0.0;
  std::size_t samples = 0;
  double percent_profitable = 0.0;
  double epsilon = 0.0;
  std::vector<double> profits;
  Histogram histogram;
};

/// Samples `n` uniform trajectories and trades the stored strategy. Profit is
/// Pi_N - F for a super result and F - Pi_N for an under result, plus
/// `epsilon`; a sample counts as profitable if that is strictly positive.
/// Sample j uses its own stream derived from (seed, j), so results do not
/// depend on `threads`.
[[nodiscard]] PnLReport pnl(const TrajectoryGraph& graph, const PricingResult& pricing,
                            const Payoff& payoff, double capital, std::size_t n,
                            std::uint64_t seed, double epsilon = 1e-6, unsigned threads = 1);

void write_pnl_json(std::ostream& out, const PnLReport& report);
void write_histogram_csv(std::ostream& out, const Histogram& h);

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;

  [[nodiscard]] std::vector<double> values() const;
};

struct CalibrationCell {
  double delta0 = 0.0;  ///< deltaB for model B
  double delta1 = 0.0;  ///< unused for model B
  int n_lower = 0;
  int n_upper = 0;
};

struct CalibrationSweep {
  EscapeModel model = EscapeModel::B;
  std::vector<CalibrationCell> cells;
};

/// Escape-count envelope at the window end for every delta in the range.
/// Model A sweeps the (delta0, delta1) rectangle; `second` is ignored for B.
[[nodiscard]] CalibrationSweep calibration_sweep(const DiscountedChart& chart,
                                                 const TimeGrid& grid,
                                                 const DiscretizationParams& disc,
                                                 EscapeModel model, const SweepRange& first,
                                                 const SweepRange& second = {});

void write_sweep_csv(std::ostream& out, const CalibrationSweep& sweep);

/// Observed escape state (X1, X2, i, T, W) of a window, on the grid.
struct ObservedState {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  int i = 0;
  std::int64_t t_steps = 0;
  std::int64_t w = 0;
};

[[nodiscard]] std::vector<ObservedState> observed_states(const Window& window,
                                                         const EscapeParams& params);

/// One-step L1 error over the 5-tuple, prices in real units.
[[nodiscard]] double state_error(const GraphNode& node, const ObservedState& x,
                                 const DiscretizationParams& disc);

struct MatchResult {
  std::vector<GraphNode> path;   ///< matched states, root first
  std::vector<NodeId> node_ids;  ///< graph ids when matched through a graph
  std::vector<double> errors;    ///< per step, including the root
  double total_error = 0.0;
};

/// Greedy match through an explicit graph.
[[nodiscard]] MatchResult match(const TrajectoryGraph& graph, const Window& window,
                                const EscapeParams& params);

/// Greedy match through the unpruned tree that adds every increment of `ne`
/// at each step, rooted at the window's first sample.
[[nodiscard]] MatchResult match(const EmpiricalSet& ne, const Window& window,
                                const EscapeParams& params, const DiscretizationParams& disc,
                                int n_max);

/// Global best path through the unpruned tree; exponential, for small fixtures.
[[nodiscard]] MatchResult match_exhaustive(const EmpiricalSet& ne, const Window& window,
                                           const EscapeParams& params,
                                           const DiscretizationParams& disc, int n_max);

struct DubinCheck {
  double lhs = 0.0;  ///< superhedging price of the completion indicator
  double rhs = 0.0;  ///< (alpha/beta)^(k+1)
};

/// Prices 1{tau_{k+1} completed} on a tree, trading coordinate 2, with
/// f1 = X1 and f2 = X2.
[[nodiscard]] DubinCheck dubin_check(const TrajectoryGraph& tree, double alpha, double beta,
                                     int k);

}  // namespace trajhedge
