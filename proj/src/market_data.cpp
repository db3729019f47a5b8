#include "trajhedge/market_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <random>

#include "csv.hpp"

namespace trajhedge {

std::int64_t round_half_away(double v) {
  const double f = std::floor(v);
  const double frac = v - f;
  if (std::abs(frac - 0.5) <= 1e-9 * std::max(1.0, std::abs(v))) {
    return static_cast<std::int64_t>(v > 0 ? f + 1.0 : f);
  }
  return std::llround(v);
}

void TimeGrid::validate() const {
  if (delta <= 0) throw ValidationError("time grid: delta must be positive");
  if (steps_per_window < 1) throw ValidationError("time grid: steps_per_window must be >= 1");
}

const std::vector<double>& UndiscountedChart::series(int asset) const {
  switch (asset) {
    case 0: return s0;
    case 1: return s1;
    case 2: return s2;
    default: throw ValidationError("asset index must be 0, 1 or 2");
  }
}

void DiscretizationParams::validate() const {
  if (!(dhat1 > 0.0) || !(dhat2 > 0.0)) {
    throw ValidationError("discretization: dhat1 and dhat2 must be positive");
  }
}

int Window::step_of(std::int64_t t) const {
  const auto off = t - t0;
  if (off < 0 || off % delta != 0 || off / delta > steps()) {
    throw ValidationError("time " + std::to_string(t) + " is not a grid time of the window");
  }
  return static_cast<int>(off / delta);
}

namespace {

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

int digits(const std::string& s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) throw ValidationError("malformed ISO-8601 timestamp '" + s + "'");
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') throw ValidationError("malformed ISO-8601 timestamp '" + s + "'");
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::int64_t parse_iso8601_minutes(const std::string& text) {
  // YYYY-MM-DDTHH:MM[:SS][Z]
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':') {
    throw ValidationError("malformed ISO-8601 timestamp '" + text + "'");
  }
  const int y = digits(text, 0, 4);
  const int mo = digits(text, 5, 2);
  const int d = digits(text, 8, 2);
  const int h = digits(text, 11, 2);
  const int mi = digits(text, 14, 2);
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59) {
    throw ValidationError("out-of-range ISO-8601 timestamp '" + text + "'");
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d)) * 1440 + h * 60 + mi;
}

UndiscountedChart parse_chart(std::istream& in, const ChartSchema& schema) {
  if (schema.delta <= 0) throw ValidationError("chart schema: delta must be positive");
  std::vector<std::string> header;
  std::size_t line_no = 0;
  if (!csv::next_record(in, header, line_no)) throw ValidationError("chart: empty input");
  const int ct = csv::column(header, schema.timestamp);
  const int c0 = csv::column(header, schema.s0);
  const int c1 = csv::column(header, schema.s1);
  const int c2 = csv::column(header, schema.s2);
  for (const auto& [idx, name] : {std::pair{ct, schema.timestamp}, std::pair{c0, schema.s0},
                                  std::pair{c1, schema.s1}, std::pair{c2, schema.s2}}) {
    if (idx < 0) throw ValidationError("chart: missing column '" + name + "'");
  }
  const auto width = static_cast<std::size_t>(std::max({ct, c0, c1, c2})) + 1;

  struct Row {
    std::int64_t t;
    double s0, s1, s2;
  };
  std::vector<Row> rows;
  std::vector<std::string> f;
  while (csv::next_record(in, f, line_no)) {
    const auto row = rows.size() + 1;
    if (f.size() < width) {
      throw ValidationError("chart: row " + std::to_string(row) + " has too few columns");
    }
    Row r{};
    r.t = schema.format == TimestampFormat::Minutes ? csv::to_int(f[ct], line_no)
                                                    : parse_iso8601_minutes(f[ct]);
    r.s0 = csv::to_double(f[c0], line_no);
    r.s1 = csv::to_double(f[c1], line_no);
    r.s2 = csv::to_double(f[c2], line_no);
    if (!(r.s0 > 0.0)) throw ValidationError("chart: non-positive numeraire at row " + std::to_string(row));
    if (!(r.s1 > 0.0) || !(r.s2 > 0.0)) {
      throw ValidationError("chart: non-positive price at row " + std::to_string(row));
    }
    rows.push_back(r);
  }
  if (rows.empty()) throw ValidationError("chart: no data rows");
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.t < b.t; });

  UndiscountedChart chart;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i].t - rows[i - 1].t != schema.delta) {
      throw ValidationError("chart: time-grid gap at row " + std::to_string(i + 1));
    }
    chart.timestamps.push_back(rows[i].t);
    chart.s0.push_back(rows[i].s0);
    chart.s1.push_back(rows[i].s1);
    chart.s2.push_back(rows[i].s2);
  }
  return chart;
}

UndiscountedChart load_chart(const std::filesystem::path& path, const ChartSchema& schema) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chart file '" + path.string() + "'");
  return parse_chart(in, schema);
}

void write_chart(std::ostream& out, const UndiscountedChart& chart) {
  out << "timestamp,s0,s1,s2\n";
  for (std::size_t i = 0; i < chart.size(); ++i) {
    out << chart.timestamps[i] << ',' << csv::format(chart.s0[i]) << ',' << csv::format(chart.s1[i])
        << ',' << csv::format(chart.s2[i]) << '\n';
  }
}

DiscountedChart discount(const UndiscountedChart& chart, int numeraire) {
  if (numeraire < 0 || numeraire > 2) throw ValidationError("numeraire must be 0, 1 or 2");
  const auto& n = chart.series(numeraire);
  const int a = numeraire == 0 ? 1 : 0;
  const int b = numeraire == 2 ? 1 : 2;
  DiscountedChart out;
  out.numeraire = numeraire;
  out.timestamps = chart.timestamps;
  out.x1.reserve(chart.size());
  out.x2.reserve(chart.size());
  for (std::size_t i = 0; i < chart.size(); ++i) {
    if (n[i] == 0.0) throw ValidationError("discount: zero numeraire at row " + std::to_string(i + 1));
    out.x1.push_back(chart.series(a)[i] / n[i]);
    out.x2.push_back(chart.series(b)[i] / n[i]);
  }
  return out;
}

std::vector<Window> windows(const DiscountedChart& chart, const TimeGrid& grid,
                            const DiscretizationParams& disc) {
  grid.validate();
  disc.validate();
  const auto len = static_cast<std::size_t>(grid.steps_per_window) + 1;
  if (chart.size() < len) {
    throw ValidationError("insufficient data: chart has " + std::to_string(chart.size()) +
                          " samples, a window needs " + std::to_string(len));
  }
  const std::size_t count = chart.size() / len;
  const std::size_t first = chart.size() - count * len;
  std::vector<Window> out(count);
  for (std::size_t w = 0; w < count; ++w) {
    const std::size_t begin = first + w * len;
    Window& win = out[w];
    win.t0 = chart.timestamps[begin];
    win.delta = grid.delta;
    win.x1.assign(chart.x1.begin() + begin, chart.x1.begin() + begin + len);
    win.x2.assign(chart.x2.begin() + begin, chart.x2.begin() + begin + len);
    for (std::size_t j = 0; j < len; ++j) {
      win.k1.push_back(to_grid(win.x1[j], disc.dhat1));
      win.k2.push_back(to_grid(win.x2[j], disc.dhat2));
    }
  }
  return out;
}

std::vector<std::int64_t> variation_series(const Window& window) {
  std::vector<std::int64_t> w(window.k1.size(), 0);
  for (std::size_t n = 1; n < w.size(); ++n) {
    w[n] = w[n - 1] + std::abs(window.k1[n] - window.k1[n - 1]) +
           std::abs(window.k2[n] - window.k2[n - 1]);
  }
  return w;
}

std::int64_t variation(const Window& window, std::int64_t t) {
  const int v = window.step_of(t);
  std::int64_t w = 0;
  for (int n = 0; n < v; ++n) {
    w += std::abs(window.k1[n + 1] - window.k1[n]) + std::abs(window.k2[n + 1] - window.k2[n]);
  }
  return w;
}

void write_windows(std::ostream& out, const std::vector<Window>& ws) {
  out << "t,k1,k2,w\n";
  for (const auto& win : ws) {
    const auto w = variation_series(win);
    for (std::size_t j = 0; j < w.size(); ++j) {
      out << win.t0 + static_cast<std::int64_t>(j) * win.delta << ',' << win.k1[j] << ','
          << win.k2[j] << ',' << w[j] << '\n';
    }
  }
}

void GbmParams::validate() const {
  if (sigma1 < 0.0 || sigma2 < 0.0) throw ValidationError("gbm: sigmas must be non-negative");
  if (days < 1) throw ValidationError("gbm: days must be >= 1");
  for (double s : s_init) {
    if (!(s > 0.0)) throw ValidationError("gbm: initial prices must be positive");
  }
}

UndiscountedChart simulate_gbm(const GbmParams& p, const TimeGrid& grid) {
  p.validate();
  grid.validate();
  const auto per_day = static_cast<std::size_t>(grid.steps_per_window) + 1;
  const std::size_t total = per_day * static_cast<std::size_t>(p.days);
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double drift1 = p.mu1 - 0.5 * p.sigma1 * p.sigma1;
  const double drift2 = p.mu2 - 0.5 * p.sigma2 * p.sigma2;

  UndiscountedChart chart;
  chart.timestamps.resize(total);
  chart.s0.assign(total, p.s_init[0]);
  chart.s1.resize(total);
  chart.s2.resize(total);
  for (std::size_t j = 0; j < total; ++j) {
    chart.timestamps[j] = -static_cast<std::int64_t>(total - 1 - j) * grid.delta;
  }
  for (int d = 0; d < p.days; ++d) {
    const std::size_t base = static_cast<std::size_t>(d) * per_day;
    double log1 = std::log(p.s_init[1]);
    double log2 = std::log(p.s_init[2]);
    chart.s1[base] = p.s_init[1];
    chart.s2[base] = p.s_init[2];
    for (std::size_t n = 1; n < per_day; ++n) {
      const double z1 = normal(rng);
      const double z2 = normal(rng);
      log1 += drift1 + p.sigma1 * z1;
      log2 += drift2 + p.sigma2 * z2;
      chart.s1[base + n] = std::exp(log1);
      chart.s2[base + n] = std::exp(log2);
    }
  }
  return chart;
}

}  // namespace trajhedge
