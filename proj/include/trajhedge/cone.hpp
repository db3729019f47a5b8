#pragma once

#include <compare>
#include <span>
#include <vector>

namespace trajhedge {

/// Online state of anchored cone-crossing detection for a price pair.
/// Feed samples in path order; the first sample fixes tau_0.
class CrossingState {
 public:
  CrossingState(double alpha, double beta);

  /// Consumes the sample at the next index. Throws if f1 <= 0.
  void advance(double f1, double f2);

  [[nodiscard]] int count() const { return count_; }
  [[nodiscard]] int index() const { return index_; }
  [[nodiscard]] const std::vector<int>& rho() const { return rho_; }
  [[nodiscard]] const std::vector<int>& tau() const { return tau_; }

  /// Equality on everything that determines future evolution.
  [[nodiscard]] bool same_future(const CrossingState& o) const;

 private:
  double alpha_;
  double beta_;
  bool seeking_tau_ = false;
  double anchor_ = 0.0;  ///< f2 at tau_k while seeking rho, f1 at rho_k while seeking tau
  int count_ = 0;
  int index_ = -1;
  std::vector<int> rho_;
  std::vector<int> tau_;
};

/// Crossing times along a finite path. Undefined times carry the sentinel
/// N+1, where N is the last index of the path.
struct ConeCrossing {
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<int> rho;  ///< rho_0..rho_k, last entry may be the sentinel
  std::vector<int> tau;  ///< tau_0..tau_{k+1}, last entry may be the sentinel
  int count = 0;         ///< completed upcrossings k
  double bound = 1.0;    ///< (alpha/beta)^(k+1)
};

[[nodiscard]] ConeCrossing cone_crossings(std::span<const double> f1, std::span<const double> f2,
                                          double alpha, double beta);

}  // namespace trajhedge
