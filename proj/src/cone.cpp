#include "trajhedge/cone.hpp"

#include <cmath>

#include "trajhedge/common.hpp"

namespace trajhedge {

CrossingState::CrossingState(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha >= 0.0) || !(alpha < beta)) {
    throw ValidationError("cone crossings require 0 <= alpha < beta");
  }
}

void CrossingState::advance(double f1, double f2) {
  if (!(f1 > 0.0)) throw ValidationError("cone crossings: non-positive f1");
  ++index_;
  if (index_ == 0) {
    tau_.push_back(0);
    anchor_ = f2;
  }
  // At most two transitions fire per index: alpha < beta rules out a third.
  while (true) {
    if (!seeking_tau_) {
      if (anchor_ / f1 > alpha_) break;
      rho_.push_back(index_);
      anchor_ = f1;
      seeking_tau_ = true;
    } else {
      if (f2 / anchor_ < beta_) break;
      tau_.push_back(index_);
      ++count_;
      anchor_ = f2;
      seeking_tau_ = false;
    }
  }
}

bool CrossingState::same_future(const CrossingState& o) const {
  return seeking_tau_ == o.seeking_tau_ && anchor_ == o.anchor_ && count_ == o.count_;
}

ConeCrossing cone_crossings(std::span<const double> f1, std::span<const double> f2, double alpha,
                            double beta) {
  if (f1.size() != f2.size() || f1.empty()) {
    throw ValidationError("cone crossings: f1 and f2 must be non-empty and of equal length");
  }
  CrossingState s(alpha, beta);
  for (std::size_t j = 0; j < f1.size(); ++j) s.advance(f1[j], f2[j]);

  ConeCrossing out;
  out.alpha = alpha;
  out.beta = beta;
  out.count = s.count();
  out.rho = s.rho();
  out.tau = s.tau();
  const int sentinel = static_cast<int>(f1.size());  // N + 1
  if (out.rho.size() < out.tau.size()) out.rho.push_back(sentinel);
  if (out.tau.size() == out.rho.size()) out.tau.push_back(sentinel);
  out.bound = std::pow(alpha / beta, out.count + 1);
  return out;
}

}  // namespace trajhedge
