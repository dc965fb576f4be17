#ifndef SMFRET_CONFIG_HPP
#define SMFRET_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "smfret/error.hpp"
#include "smfret/histogram.hpp"
#include "smfret/io.hpp"
#include "smfret/model.hpp"
#include "smfret/simulate.hpp"

namespace smfret {

enum class ThresholdMode { And, Or, Sum, Alex };

inline std::string to_string(Mode m) { return m == Mode::Fret ? "fret" : "alex"; }

inline std::string to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::And: return "and";
    case ThresholdMode::Or: return "or";
    case ThresholdMode::Sum: return "sum";
    case ThresholdMode::Alex: return "alex";
  }
  return "and";
}

/// Settings for one `analyze` / `analyze-alex` run.
struct RunConfig {
  double auto_donor = 0.0;
  double auto_acceptor = 0.0;
  double t_donor = 0.0;
  double t_acceptor = 0.0;
  std::optional<double> t_sum;
  double cross_DtoA = 0.0;
  double cross_AtoD = 0.0;
  double gamma = 1.0;
  double bin_min = 0.0;
  double bin_max = 1.0;
  double bin_width = 0.02;
  Mode mode = Mode::Fret;
  ThresholdMode threshold_mode = ThresholdMode::And;
  std::size_t grid_donor_bins = 20;
  std::size_t grid_acceptor_bins = 20;
  std::vector<std::filesystem::path> input_files;
  std::filesystem::path output_dir = "output";
  std::optional<std::uint64_t> seed;

  CorrectionParams correction() const {
    return {auto_donor, auto_acceptor, cross_DtoA, cross_AtoD, gamma, t_donor, t_acceptor};
  }

  double sum_threshold() const { return t_sum.value_or(t_donor + t_acceptor); }
};

/// Settings for the `simulate` subcommand.
struct SimConfig {
  SimParams params;
  Mode mode = Mode::Fret;
  double acceptor_brightness = 40.0;
  std::filesystem::path output_dir = "output";
};

namespace detail {

struct KeyValue {
  std::string value;
  std::size_t line = 0;
};

// `key = value` lines; `#` starts a comment. Keys outside `allowed` are rejected.
inline std::map<std::string, KeyValue> read_key_values(const std::filesystem::path& path,
                                                       const std::set<std::string>& allowed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open config " + path.string());
  std::map<std::string, KeyValue> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::MalformedRow, where(path, line_no) + ": expected `key = value`");
    }
    const std::string key(trim(line.substr(0, eq)));
    if (!allowed.contains(key)) {
      throw Error(ErrorKind::UnknownKey, where(path, line_no) + ": unknown key `" + key + "`");
    }
    if (out.contains(key)) {
      throw Error(ErrorKind::ValueOutOfDomain,
                  where(path, line_no) + ": key `" + key + "` given twice");
    }
    out[key] = {std::string(trim(line.substr(eq + 1))), line_no};
  }
  return out;
}

class ConfigReader {
 public:
  ConfigReader(std::filesystem::path path, std::map<std::string, KeyValue> values)
      : path_(std::move(path)), values_(std::move(values)) {}

  bool has(const std::string& key) const { return values_.contains(key); }

  [[noreturn]] void fail(const std::string& key, const std::string& why) const {
    const auto it = values_.find(key);
    const std::string loc = it == values_.end() ? path_.string() : where(path_, it->second.line);
    throw Error(ErrorKind::ValueOutOfDomain, loc + ": `" + key + "` " + why);
  }

  void require(const std::string& key) const {
    if (!has(key)) {
      throw Error(ErrorKind::MissingRequiredKey,
                  path_.string() + ": missing required key `" + key + "`");
    }
  }

  double number(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const auto v = parse_number(it->second.value);
    if (!v || !std::isfinite(*v)) fail(key, "is not a number: `" + it->second.value + "`");
    return *v;
  }

  std::uint64_t integer(const std::string& key, std::uint64_t fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string& s = it->second.value;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail(key, "is not a non-negative integer: `" + s + "`");
    }
    return v;
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second.value;
  }

  Mode mode() const {
    const std::string m = text("mode", "fret");
    if (m == "fret") return Mode::Fret;
    if (m == "alex") return Mode::Alex;
    fail("mode", "must be `fret` or `alex`");
  }

  std::filesystem::path relative(const std::filesystem::path& p) const {
    return p.is_absolute() ? p : path_.parent_path() / p;
  }

 private:
  std::filesystem::path path_;
  std::map<std::string, KeyValue> values_;
};

}  // namespace detail

/// Reads a run configuration. Relative paths are taken relative to the
/// config file. Missing keys default to gamma=1, bins 0..1 step 0.02, zero
/// corrections; t_donor, t_acceptor and input_files are required.
inline RunConfig parse_config(const std::filesystem::path& path) {
  static const std::set<std::string> keys = {
      "auto_donor", "auto_acceptor", "t_donor",         "t_acceptor",         "t_sum",
      "cross_DtoA", "cross_AtoD",    "gamma",           "bin_min",            "bin_max",
      "bin_width",  "mode",          "threshold_mode",  "input_files",        "output_dir",
      "seed",       "grid_donor_bins", "grid_acceptor_bins"};
  const detail::ConfigReader cfg(path, detail::read_key_values(path, keys));
  cfg.require("t_donor");
  cfg.require("t_acceptor");
  cfg.require("input_files");

  RunConfig rc;
  rc.auto_donor = cfg.number("auto_donor", 0.0);
  rc.auto_acceptor = cfg.number("auto_acceptor", 0.0);
  rc.t_donor = cfg.number("t_donor", 0.0);
  rc.t_acceptor = cfg.number("t_acceptor", 0.0);
  if (cfg.has("t_sum")) rc.t_sum = cfg.number("t_sum", 0.0);
  rc.cross_DtoA = cfg.number("cross_DtoA", 0.0);
  rc.cross_AtoD = cfg.number("cross_AtoD", 0.0);
  rc.gamma = cfg.number("gamma", 1.0);
  rc.bin_min = cfg.number("bin_min", 0.0);
  rc.bin_max = cfg.number("bin_max", 1.0);
  rc.bin_width = cfg.number("bin_width", 0.02);
  rc.mode = cfg.mode();
  rc.grid_donor_bins = cfg.integer("grid_donor_bins", 20);
  rc.grid_acceptor_bins = cfg.integer("grid_acceptor_bins", 20);
  if (cfg.has("seed")) rc.seed = cfg.integer("seed", 0);

  const std::string tm = cfg.text("threshold_mode", rc.mode == Mode::Alex ? "alex" : "and");
  if (tm == "and") rc.threshold_mode = ThresholdMode::And;
  else if (tm == "or") rc.threshold_mode = ThresholdMode::Or;
  else if (tm == "sum") rc.threshold_mode = ThresholdMode::Sum;
  else if (tm == "alex") rc.threshold_mode = ThresholdMode::Alex;
  else cfg.fail("threshold_mode", "must be one of and, or, sum, alex");
  if ((rc.mode == Mode::Alex) != (rc.threshold_mode == ThresholdMode::Alex)) {
    cfg.fail("threshold_mode", "`alex` thresholds go with mode = alex and only with it");
  }

  const std::string listed = cfg.text("input_files", "");
  for (auto name : detail::split(listed, ',')) {
    if (!name.empty()) rc.input_files.push_back(cfg.relative(std::string(name)));
  }
  if (rc.input_files.empty()) cfg.fail("input_files", "lists no files");
  rc.output_dir = cfg.relative(cfg.text("output_dir", "output"));

  auto non_negative = [&](const char* key, double v) {
    if (!(v >= 0.0)) cfg.fail(key, "must be >= 0");
  };
  auto fraction = [&](const char* key, double v) {
    if (!(v >= 0.0 && v < 1.0)) cfg.fail(key, "must lie in [0,1)");
  };
  non_negative("auto_donor", rc.auto_donor);
  non_negative("auto_acceptor", rc.auto_acceptor);
  non_negative("t_donor", rc.t_donor);
  non_negative("t_acceptor", rc.t_acceptor);
  if (rc.t_sum) non_negative("t_sum", *rc.t_sum);
  fraction("cross_DtoA", rc.cross_DtoA);
  fraction("cross_AtoD", rc.cross_AtoD);
  if (!(rc.gamma > 0.0)) cfg.fail("gamma", "must be > 0");
  if (rc.grid_donor_bins < 1) cfg.fail("grid_donor_bins", "must be >= 1");
  if (rc.grid_acceptor_bins < 1) cfg.fail("grid_acceptor_bins", "must be >= 1");
  try {
    EfficiencyHistogram::bin_count(rc.bin_min, rc.bin_max, rc.bin_width);
  } catch (const Error& e) {
    cfg.fail("bin_width", std::string("gives invalid binning (") + e.what() + ")");
  }
  return rc;
}

/// Reads a simulation configuration; `seed` and `n_bins` are required.
inline SimConfig parse_sim_config(const std::filesystem::path& path) {
  static const std::set<std::string> keys = {
      "n_bins",     "burst_rate", "burst_intensity_mean", "true_E",
      "background_d", "background_a", "cross_DtoA",        "cross_AtoD",
      "gamma",      "seed",       "mode",                 "acceptor_brightness",
      "donor_only_fraction", "output_dir"};
  const detail::ConfigReader cfg(path, detail::read_key_values(path, keys));
  cfg.require("seed");
  cfg.require("n_bins");

  SimConfig sc;
  SimParams& p = sc.params;
  p.n_bins = cfg.integer("n_bins", p.n_bins);
  p.burst_rate = cfg.number("burst_rate", p.burst_rate);
  p.burst_intensity_mean = cfg.number("burst_intensity_mean", p.burst_intensity_mean);
  p.true_E = cfg.number("true_E", p.true_E);
  p.background_d = cfg.number("background_d", p.background_d);
  p.background_a = cfg.number("background_a", p.background_a);
  p.cross_DtoA = cfg.number("cross_DtoA", p.cross_DtoA);
  p.cross_AtoD = cfg.number("cross_AtoD", p.cross_AtoD);
  p.gamma = cfg.number("gamma", p.gamma);
  p.donor_only_fraction = cfg.number("donor_only_fraction", p.donor_only_fraction);
  p.seed = cfg.integer("seed", 0);
  sc.mode = cfg.mode();
  sc.acceptor_brightness = cfg.number("acceptor_brightness", sc.acceptor_brightness);
  sc.output_dir = cfg.relative(cfg.text("output_dir", "output"));
  try {
    p.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::ValueOutOfDomain, path.string() + ": " + e.what());
  }
  if (!(sc.acceptor_brightness >= 0.0)) cfg.fail("acceptor_brightness", "must be >= 0");
  return sc;
}

}  // namespace smfret

#endif  // SMFRET_CONFIG_HPP
