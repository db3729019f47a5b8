#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "trajhedge/graph.hpp"

namespace trajhedge {

/// Real value or one of the two infinities, kept as explicit states.
class ExtendedValue {
 public:
  enum class Kind { Finite, MinusInfinity, PlusInfinity };

  ExtendedValue() = default;
  static ExtendedValue finite(double v) { return ExtendedValue(Kind::Finite, v); }
  static ExtendedValue minus_infinity() { return ExtendedValue(Kind::MinusInfinity, 0.0); }
  static ExtendedValue plus_infinity() { return ExtendedValue(Kind::PlusInfinity, 0.0); }

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] bool is_finite() const { return kind_ == Kind::Finite; }
  /// Requires a finite value.
  [[nodiscard]] double value() const;
  [[nodiscard]] ExtendedValue negated() const;
  [[nodiscard]] std::string to_string() const;
  /// Floating representation for export only.
  [[nodiscard]] double to_double() const;

  bool operator==(const ExtendedValue&) const = default;

 private:
  ExtendedValue(Kind k, double v) : kind_(k), value_(v) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

struct OneStepChild {
  double price = 0.0;  ///< s_j
  double value = 0.0;  ///< y_j
};

struct OneStepMarket {
  double price = 0.0;
  std::vector<OneStepChild> children;
};

struct OneStepSolution {
  ExtendedValue value;
  double hedge = 0.0;
};

/// inf_h max_j [y_j - h (s_j - s)]: least concave majorant at s.
[[nodiscard]] OneStepSolution one_step_super(const OneStepMarket& market);
/// sup_h min_j [y_j - h (s_j - s)]: greatest convex minorant at s.
[[nodiscard]] OneStepSolution one_step_under(const OneStepMarket& market);

enum class Direction { Super, Under };

/// Terminal-node or path payoff.
class Payoff {
 public:
  using NodeFn = std::function<double(const TrajectoryGraph&, NodeId)>;
  using PathFn = std::function<double(const TrajectoryGraph&, std::span<const NodeId>)>;

  /// Real price of coordinate 1 or 2 at the terminal node.
  [[nodiscard]] static Payoff asset(int coordinate);
  [[nodiscard]] static Payoff terminal(NodeFn fn);
  /// Requires a tree; evaluated on the root-to-leaf path.
  [[nodiscard]] static Payoff path(PathFn fn);

  [[nodiscard]] double operator()(const TrajectoryGraph& graph, NodeId leaf) const;
  [[nodiscard]] bool path_dependent() const { return static_cast<bool>(path_); }
  [[nodiscard]] Payoff negated() const;

 private:
  NodeFn node_;
  PathFn path_;
};

/// Backward-recursion bounds and hedges for one direction.
struct PricingResult {
  Direction direction = Direction::Super;
  int traded = 1;                         ///< coordinate held in the portfolio
  std::vector<ExtendedValue> value;       ///< per node
  std::vector<double> hedge;              ///< per node, units of the traded asset
  std::vector<bool> interior;             ///< node price strictly inside its children's range

  [[nodiscard]] const ExtendedValue& root_value() const { return value.front(); }
  [[nodiscard]] bool degenerate() const { return !value.front().is_finite(); }
};

[[nodiscard]] PricingResult price(const TrajectoryGraph& graph, const Payoff& payoff, int traded,
                                  Direction direction);

/// Linear-programming bound over all non-null root-to-leaf paths of a tree.
[[nodiscard]] ExtendedValue brute_force_price(const TrajectoryGraph& tree, const Payoff& payoff,
                                              int traded, Direction direction);

struct PortfolioTrace {
  double initial_capital = 0.0;
  std::vector<double> hedge;      ///< H_i, i = 0..N-1
  std::vector<double> value;      ///< Pi_i, i = 0..N
  std::vector<double> numeraire;  ///< H0_i, i = 0..N-1
  double payoff = 0.0;
  double profit = 0.0;            ///< Pi_N - F
};

/// Follows the stored hedges along `path`. At nodes with an infinite bound
/// the hedge is the smallest position that keeps the running value on the
/// right side of every finite child bound.
[[nodiscard]] PortfolioTrace hedge_trace(const TrajectoryGraph& graph,
                                         const PricingResult& result, const Payoff& payoff,
                                         std::span<const NodeId> path, double capital);

/// `node_id,value_super,value_under,hedge_super,hedge_under,degenerate_flag`
void write_pricing_csv(std::ostream& out, const PricingResult& super,
                       const PricingResult& under);

}  // namespace trajhedge
