#include "trajhedge/config.hpp"

#include <cstdio>
#include <fstream>

namespace trajhedge {

namespace {

using nlohmann::json;

class Reader {
 public:
  Reader(const json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) fail(path_.empty() ? "<root>" : path_, "must be an object");
  }

  [[noreturn]] static void fail(const std::string& key, const std::string& what) {
    throw ValidationError("config: " + key + " " + what);
  }

  [[nodiscard]] std::string key(const std::string& name) const {
    return path_.empty() ? name : path_ + "." + name;
  }

  [[nodiscard]] bool has(const std::string& name) const { return doc_.contains(name); }

  Reader child(const std::string& name) const {
    static const json empty = json::object();
    return Reader(has(name) ? doc_.at(name) : empty, key(name));
  }

  template <class T>
  T get(const std::string& name, T fallback) const {
    if (!has(name)) return fallback;
    try {
      return doc_.at(name).get<T>();
    } catch (const json::exception&) {
      fail(key(name), "has the wrong type");
    }
  }

  double positive(const std::string& name, double fallback) const {
    const double v = get<double>(name, fallback);
    if (!(v > 0.0)) fail(key(name), "must be positive");
    return v;
  }

  [[nodiscard]] const json& raw() const { return doc_; }

 private:
  const json& doc_;
  std::string path_;
};

int coordinate(const std::string& key, const std::string& v) {
  if (v == "asset1") return 1;
  if (v == "asset2") return 2;
  Reader::fail(key, "must be \"asset1\" or \"asset2\"");
}

SweepRange range(const Reader& r, SweepRange fallback) {
  SweepRange s{r.get<double>("start", fallback.start), r.get<double>("stop", fallback.stop),
               r.get<double>("step", fallback.step)};
  if (!(s.step > 0.0)) Reader::fail(r.key("step"), "must be positive");
  if (s.stop < s.start) Reader::fail(r.key("stop"), "must not be below start");
  return s;
}

json range_json(const SweepRange& s) { return {{"start", s.start}, {"stop", s.stop}, {"step", s.step}}; }

}  // namespace

std::string RunConfig::hash() const {
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : json.dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const nlohmann::json& doc) {
  const Reader root(doc, "");
  RunConfig c;

  const auto input = root.child("input");
  c.chart = input.get<std::string>("chart", "");
  const auto fmt = input.get<std::string>("timestamp_format", "minutes");
  if (fmt == "minutes") {
    c.schema.format = TimestampFormat::Minutes;
  } else if (fmt == "iso8601") {
    c.schema.format = TimestampFormat::Iso8601;
  } else {
    Reader::fail(input.key("timestamp_format"), "must be \"minutes\" or \"iso8601\"");
  }
  const auto cols = input.child("columns");
  c.schema.timestamp = cols.get<std::string>("timestamp", "timestamp");
  c.schema.s0 = cols.get<std::string>("s0", "s0");
  c.schema.s1 = cols.get<std::string>("s1", "s1");
  c.schema.s2 = cols.get<std::string>("s2", "s2");

  c.numeraire = root.get<int>("numeraire", 0);
  if (c.numeraire < 0 || c.numeraire > 2) Reader::fail("numeraire", "must be 0, 1 or 2");

  const auto grid = root.child("grid");
  c.grid.delta = grid.get<std::int64_t>("delta", 3);
  c.grid.steps_per_window = grid.get<int>("steps_per_window", 130);
  if (c.grid.delta <= 0) Reader::fail(grid.key("delta"), "must be positive");
  if (c.grid.steps_per_window < 1) Reader::fail(grid.key("steps_per_window"), "must be >= 1");
  c.schema.delta = c.grid.delta;

  const auto model = root.child("model");
  const auto type = model.get<std::string>("type", "B");
  if (type == "A") {
    c.escape = EscapeParams::model_a(model.positive("delta0", 0.1), model.positive("delta1", 0.001));
  } else if (type == "B") {
    c.escape = EscapeParams::model_b(model.positive("deltaB", 0.011));
  } else {
    Reader::fail(model.key("type"), "must be \"A\" or \"B\"");
  }

  const auto disc = root.child("discretization");
  c.disc.dhat1 = disc.positive("dhat1", 0.01);
  c.disc.dhat2 = disc.positive("dhat2", 0.01);

  const auto build = root.child("build");
  c.build.n_max = build.get<int>("n_max", 3);
  c.build.hull_shrink = build.get<double>("hull_shrink", 0.0);
  c.build.pruning = build.get<bool>("pruning", true);
  c.build.merge = build.get<bool>("merge", true);
  if (c.build.n_max < 0) Reader::fail(build.key("n_max"), "must be >= 0");
  if (!(c.build.hull_shrink >= 0.0 && c.build.hull_shrink < 1.0)) {
    Reader::fail(build.key("hull_shrink"), "must lie in [0, 1)");
  }
  const auto dubin = build.child("dubin");
  c.build.dubin.enabled = dubin.get<bool>("enabled", false);
  c.build.dubin.alpha = dubin.get<double>("alpha", 0.5);
  c.build.dubin.beta = dubin.get<double>("beta", 1.5);
  c.build.dubin.threshold = dubin.get<double>("threshold", 0.1);
  if (!(c.build.dubin.alpha >= 0.0 && c.build.dubin.alpha < c.build.dubin.beta)) {
    Reader::fail(dubin.key("alpha"), "must satisfy 0 <= alpha < beta");
  }

  const auto pricing = root.child("pricing");
  c.target = coordinate(pricing.key("target"), pricing.get<std::string>("target", "asset2"));
  c.trade = coordinate(pricing.key("trade"), pricing.get<std::string>("trade", "asset1"));

  const auto pnl = root.child("pnl");
  c.pnl.samples = pnl.get<std::size_t>("samples", 1000);
  if (c.pnl.samples == 0) Reader::fail(pnl.key("samples"), "must be >= 1");
  c.pnl.seed = pnl.get<std::uint64_t>("seed", 1);
  c.pnl.epsilon = pnl.get<double>("epsilon", 1e-6);
  const auto strategy = pnl.get<std::string>("strategy", "super");
  if (strategy == "super") {
    c.pnl.strategy = Direction::Super;
  } else if (strategy == "under") {
    c.pnl.strategy = Direction::Under;
  } else {
    Reader::fail(pnl.key("strategy"), "must be \"super\" or \"under\"");
  }
  const auto base = pnl.get<std::string>("capital", "upper");
  if (base == "upper") {
    c.pnl.capital.base = CapitalSpec::Base::Upper;
  } else if (base == "lower") {
    c.pnl.capital.base = CapitalSpec::Base::Lower;
  } else if (base == "spot") {
    c.pnl.capital.base = CapitalSpec::Base::Spot;
  } else if (base == "absolute") {
    c.pnl.capital.base = CapitalSpec::Base::Absolute;
  } else {
    Reader::fail(pnl.key("capital"), "must be \"upper\", \"lower\", \"spot\" or \"absolute\"");
  }
  c.pnl.capital.offset = pnl.get<double>("capital_offset", 0.0);

  const auto gbm = root.child("gbm");
  c.gbm.mu1 = gbm.get<double>("mu1", 0.0);
  c.gbm.sigma1 = gbm.get<double>("sigma1", 0.001);
  c.gbm.mu2 = gbm.get<double>("mu2", 0.0);
  c.gbm.sigma2 = gbm.get<double>("sigma2", 0.002);
  c.gbm.s_init = gbm.get<std::array<double, 3>>("s_init", {100.0, 154.55, 333.78});
  c.gbm.days = gbm.get<int>("days", 5);
  c.gbm.seed = gbm.get<std::uint64_t>("seed", 7);
  if (c.gbm.sigma1 < 0.0) Reader::fail(gbm.key("sigma1"), "must be non-negative");
  if (c.gbm.sigma2 < 0.0) Reader::fail(gbm.key("sigma2"), "must be non-negative");
  if (c.gbm.days < 1) Reader::fail(gbm.key("days"), "must be >= 1");
  for (double s : c.gbm.s_init) {
    if (!(s > 0.0)) Reader::fail(gbm.key("s_init"), "must hold three positive prices");
  }

  const auto cal = root.child("calibration");
  c.calibration.first = range(cal.child("first"), c.calibration.first);
  c.calibration.second = range(cal.child("second"), c.calibration.second);

  const auto match = root.child("match");
  c.match.chart = match.get<std::string>("chart", "");
  c.match.window = match.get<int>("window", -1);
  c.match.through_graph = match.get<bool>("through_graph", false);
  c.match.n_max = match.get<int>("n_max", 0);
  if (c.match.n_max < 0) Reader::fail(match.key("n_max"), "must be >= 0");

  c.threads = root.get<unsigned>("threads", 1);
  if (c.threads == 0) Reader::fail("threads", "must be >= 1");
  c.output_dir = root.get<std::string>("output_dir", "out");

  const char* capital_names[] = {"absolute", "upper", "lower", "spot"};
  c.json = {
      {"input",
       {{"chart", c.chart.string()},
        {"timestamp_format", fmt},
        {"columns", {{"timestamp", c.schema.timestamp}, {"s0", c.schema.s0}, {"s1", c.schema.s1}, {"s2", c.schema.s2}}}}},
      {"numeraire", c.numeraire},
      {"grid", {{"delta", c.grid.delta}, {"steps_per_window", c.grid.steps_per_window}}},
      {"model", type == "A" ? json{{"type", "A"}, {"delta0", c.escape.delta0}, {"delta1", c.escape.delta1}}
                            : json{{"type", "B"}, {"deltaB", c.escape.deltaB}}},
      {"discretization", {{"dhat1", c.disc.dhat1}, {"dhat2", c.disc.dhat2}}},
      {"build",
       {{"n_max", c.build.n_max},
        {"hull_shrink", c.build.hull_shrink},
        {"pruning", c.build.pruning},
        {"merge", c.build.merge},
        {"dubin",
         {{"enabled", c.build.dubin.enabled},
          {"alpha", c.build.dubin.alpha},
          {"beta", c.build.dubin.beta},
          {"threshold", c.build.dubin.threshold}}}}},
      {"pricing", {{"target", c.target == 1 ? "asset1" : "asset2"}, {"trade", c.trade == 1 ? "asset1" : "asset2"}}},
      {"pnl",
       {{"samples", c.pnl.samples},
        {"seed", c.pnl.seed},
        {"epsilon", c.pnl.epsilon},
        {"strategy", strategy},
        {"capital", capital_names[static_cast<int>(c.pnl.capital.base)]},
        {"capital_offset", c.pnl.capital.offset}}},
      {"gbm",
       {{"mu1", c.gbm.mu1},
        {"sigma1", c.gbm.sigma1},
        {"mu2", c.gbm.mu2},
        {"sigma2", c.gbm.sigma2},
        {"s_init", c.gbm.s_init},
        {"days", c.gbm.days},
        {"seed", c.gbm.seed}}},
      {"calibration", {{"first", range_json(c.calibration.first)}, {"second", range_json(c.calibration.second)}}},
      {"match",
       {{"chart", c.match.chart.string()},
        {"window", c.match.window},
        {"through_graph", c.match.through_graph},
        {"n_max", c.match.n_max}}},
      {"threads", c.threads},
      {"output_dir", c.output_dir.string()},
  };
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path.string() + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config '" + path.string() + "': " + e.what());
  }
  return parse_config(doc);
}

nlohmann::json config_schema() {
  auto key = [](const char* type, json dflt, const char* doc) {
    return json{{"type", type}, {"default", std::move(dflt)}, {"description", doc}};
  };
  return {
      {"input",
       {{"chart", key("path", "", "price chart CSV with timestamp,s0,s1,s2")},
        {"timestamp_format", key("enum", "minutes", "minutes | iso8601")},
        {"columns", key("object", json{{"timestamp", "timestamp"}, {"s0", "s0"}, {"s1", "s1"}, {"s2", "s2"}},
                        "column names in the chart file")}}},
      {"numeraire", key("integer", 0, "asset index 0, 1 or 2 used as numeraire")},
      {"grid",
       {{"delta", key("integer", 3, "sampling step in minutes")},
        {"steps_per_window", key("integer", 130, "steps per window")}}},
      {"model",
       {{"type", key("enum", "B", "A | B")},
        {"delta0", key("number", 0.1, "model A absolute threshold on asset 1")},
        {"delta1", key("number", 0.001, "model A relative threshold on asset 2")},
        {"deltaB", key("number", 0.011, "model B relative threshold on both assets")}}},
      {"discretization",
       {{"dhat1", key("number", 0.01, "grid step of discounted asset 1")},
        {"dhat2", key("number", 0.01, "grid step of discounted asset 2")}}},
      {"build",
       {{"n_max", key("integer", 3, "maximum rebalance index")},
        {"hull_shrink", key("number", 0.0, "increment scaling epsilon in [0, 1)")},
        {"pruning", key("boolean", true, "apply historical envelopes")},
        {"merge", key("boolean", true, "merge equal states; false builds a tree")},
        {"dubin",
         {{"enabled", key("boolean", false, "terminate paths by cone-crossing count")},
          {"alpha", key("number", 0.5, "lower cone slope")},
          {"beta", key("number", 1.5, "upper cone slope")},
          {"threshold", key("number", 0.1, "terminate when (alpha/beta)^k falls below")}}}}},
      {"pricing",
       {{"target", key("enum", "asset2", "payoff coordinate: asset1 | asset2")},
        {"trade", key("enum", "asset1", "traded coordinate: asset1 | asset2")}}},
      {"pnl",
       {{"samples", key("integer", 1000, "sampled trajectories")},
        {"seed", key("integer", 1, "sampling seed")},
        {"epsilon", key("number", 1e-6, "profit credit")},
        {"strategy", key("enum", "super", "super | under")},
        {"capital", key("enum", "upper", "upper | lower | spot | absolute")},
        {"capital_offset", key("number", 0.0, "added to the capital base")}}},
      {"gbm",
       {{"mu1", key("number", 0.0, "per-step drift of asset 1")},
        {"sigma1", key("number", 0.001, "per-step volatility of asset 1")},
        {"mu2", key("number", 0.0, "per-step drift of asset 2")},
        {"sigma2", key("number", 0.002, "per-step volatility of asset 2")},
        {"s_init", key("array", json::array({100.0, 154.55, 333.78}), "initial s0, s1, s2")},
        {"days", key("integer", 5, "simulated days, one window each")},
        {"seed", key("integer", 7, "simulation seed")}}},
      {"calibration",
       {{"first", key("range", range_json({0.005, 0.05, 0.005}), "deltaB (model B) or delta0 (model A)")},
        {"second", key("range", range_json({0.0005, 0.005, 0.0005}), "delta1 (model A only)")}}},
      {"match",
       {{"chart", key("path", "", "held-out chart; empty uses input.chart")},
        {"window", key("integer", -1, "window index, negative counts from the end")},
        {"through_graph", key("boolean", false, "match through the built graph instead of the N_E tree")},
        {"n_max", key("integer", 0, "maximum matched steps, 0 for all")}}},
      {"threads", key("integer", 1, "worker threads for sampling")},
      {"output_dir", key("path", "out", "artifact directory")},
  };
}

}  // namespace trajhedge
