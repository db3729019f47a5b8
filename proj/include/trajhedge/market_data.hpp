#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajhedge/common.hpp"

namespace trajhedge {

/// Uniform sampling grid. Times are integer minutes.
struct TimeGrid {
  std::int64_t delta = 3;      ///< smallest time resolution, minutes
  int steps_per_window = 130;  ///< M_T

  void validate() const;
  [[nodiscard]] std::int64_t window_length() const { return delta * steps_per_window; }
};

/// Three quoted price series on a common uniform grid. s0 is the numeraire
/// candidate; all prices are positive.
struct UndiscountedChart {
  std::vector<std::int64_t> timestamps;
  std::vector<double> s0, s1, s2;

  [[nodiscard]] std::size_t size() const { return timestamps.size(); }
  [[nodiscard]] const std::vector<double>& series(int asset) const;
};

/// Two price series expressed in units of the numeraire.
struct DiscountedChart {
  std::vector<std::int64_t> timestamps;
  std::vector<double> x1, x2;
  int numeraire = 0;

  [[nodiscard]] std::size_t size() const { return timestamps.size(); }
};

/// Grid steps for the two discounted coordinates.
struct DiscretizationParams {
  double dhat1 = 0.01;
  double dhat2 = 0.01;

  void validate() const;
};

/// One disjoint window of M_T+1 consecutive samples.
struct Window {
  std::int64_t t0 = 0;
  std::int64_t delta = 3;
  std::vector<double> x1, x2;         ///< real-valued discounted prices
  std::vector<std::int64_t> k1, k2;   ///< grid indices, x ~ k * dhat

  [[nodiscard]] int steps() const { return static_cast<int>(k1.size()) - 1; }
  /// Step offset of grid time `t`; throws if `t` lies outside the window.
  [[nodiscard]] int step_of(std::int64_t t) const;
};

enum class TimestampFormat { Minutes, Iso8601 };

/// Column mapping for chart CSV files.
struct ChartSchema {
  std::string timestamp = "timestamp";
  std::string s0 = "s0";
  std::string s1 = "s1";
  std::string s2 = "s2";
  TimestampFormat format = TimestampFormat::Minutes;
  std::int64_t delta = 3;
};

[[nodiscard]] UndiscountedChart load_chart(const std::filesystem::path& path,
                                           const ChartSchema& schema = {});
[[nodiscard]] UndiscountedChart parse_chart(std::istream& in, const ChartSchema& schema = {});
void write_chart(std::ostream& out, const UndiscountedChart& chart);

/// Minutes since the Unix epoch for `YYYY-MM-DDTHH:MM[:SS][Z]`.
[[nodiscard]] std::int64_t parse_iso8601_minutes(const std::string& text);

/// x^j = s^j / s^numeraire for the two remaining assets, in index order.
[[nodiscard]] DiscountedChart discount(const UndiscountedChart& chart, int numeraire);

/// Disjoint windows aligned on the most recent sample, oldest first.
[[nodiscard]] std::vector<Window> windows(const DiscountedChart& chart, const TimeGrid& grid,
                                          const DiscretizationParams& disc);

/// Accumulated grid variation from t0 up to grid time `t`.
[[nodiscard]] std::int64_t variation(const Window& window, std::int64_t t);

/// w at every step offset 0..M_T.
[[nodiscard]] std::vector<std::int64_t> variation_series(const Window& window);

/// Writes `t,k1,k2,w` rows for every window sample.
void write_windows(std::ostream& out, const std::vector<Window>& ws);

struct GbmParams {
  double mu1 = 0.0, sigma1 = 0.01;
  double mu2 = 0.0, sigma2 = 0.02;
  std::array<double, 3> s_init{1.0, 1.0, 1.0};
  int days = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Each day restarts both assets at `s_init` and runs M_T exact log-normal
/// steps; the numeraire stays constant. Timestamps end at 0.
[[nodiscard]] UndiscountedChart simulate_gbm(const GbmParams& params, const TimeGrid& grid);

}  // namespace trajhedge
