#ifndef SMFRET_IO_HPP
#define SMFRET_IO_HPP

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smfret/efficiency.hpp"
#include "smfret/error.hpp"
#include "smfret/fit.hpp"
#include "smfret/histogram.hpp"
#include "smfret/model.hpp"

namespace smfret {

enum class Mode { Fret, Alex };

inline std::size_t column_count(Mode mode) { return mode == Mode::Fret ? 2 : 4; }

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string where(const std::filesystem::path& file, std::size_t line) {
  return file.string() + ":" + std::to_string(line);
}

/// Numeric rows of one CSV file, column-major.
struct CsvColumns {
  std::vector<std::vector<double>> columns;
  std::vector<std::string> warnings;
};

// Reads a comma-separated numeric table with `expected` columns. A first row
// containing any non-numeric cell is taken as a header; blank lines are skipped.
// `alternative` is the column count that signals the file belongs to the other
// mode (0 to disable).
inline CsvColumns read_numeric_csv(const std::filesystem::path& file, std::size_t expected,
                                   std::size_t alternative, bool require_non_negative) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileNotFound, "cannot open " + file.string());
  CsvColumns out;
  out.columns.resize(expected);
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view body = trim(line);
    if (body.empty()) continue;
    const auto cells = split(body, ',');
    std::vector<double> values;
    values.reserve(cells.size());
    bool numeric = true;
    for (auto cell : cells) {
      const auto v = parse_number(cell);
      if (!v) {
        numeric = false;
        break;
      }
      values.push_back(*v);
    }
    if (first_row) {
      first_row = false;
      if (!numeric) continue;
    }
    if (cells.size() != expected) {
      const ErrorKind kind =
          cells.size() == alternative ? ErrorKind::MixedMode : ErrorKind::MalformedRow;
      throw Error(kind, where(file, line_no) + ": expected " + std::to_string(expected) +
                            " columns, found " + std::to_string(cells.size()));
    }
    if (!numeric) {
      throw Error(ErrorKind::MalformedRow, where(file, line_no) + ": non-numeric cell");
    }
    for (std::size_t c = 0; c < expected; ++c) {
      const double v = values[c];
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::MalformedRow, where(file, line_no) + ": non-finite value");
      }
      if (require_non_negative && v < 0.0) {
        throw Error(ErrorKind::NegativeCount, where(file, line_no) + ": negative count");
      }
      if (require_non_negative && v != std::floor(v)) {
        out.warnings.push_back(where(file, line_no) + ": non-integer count " +
                               std::string(cells[c]));
      }
      out.columns[c].push_back(v);
    }
  }
  return out;
}

inline std::string format_number(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::WriteFailed, "cannot write " + path.string());
  return out;
}

inline void finish_write(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorKind::WriteFailed, "error while writing " + path.string());
}

}  // namespace detail

using Trace = std::variant<FretTrace, AlexTrace>;

/// Reads and concatenates binned photon-count files in list order.
///
/// FRET files hold `donor,acceptor` rows, ALEX files `d_d,d_a,a_d,a_a` rows.
/// Files are read concurrently; the result only depends on the list order.
/// Non-integer counts are accepted and reported through `warnings`.
inline Trace parse_csv(const std::filesystem::path& directory,
                       std::span<const std::string> files, Mode mode,
                       std::vector<std::string>* warnings = nullptr) {
  if (files.empty()) throw Error(ErrorKind::EmptyInput, "no input files given");
  const std::size_t width = column_count(mode);
  const std::size_t other = mode == Mode::Fret ? 4 : 2;

  std::vector<std::future<detail::CsvColumns>> jobs;
  jobs.reserve(files.size());
  for (const auto& name : files) {
    const std::filesystem::path file = directory / name;
    jobs.push_back(std::async(std::launch::async, [file, width, other] {
      return detail::read_numeric_csv(file, width, other, true);
    }));
  }

  std::vector<std::vector<double>> columns(width);
  std::vector<std::string> lint;
  // Collect every job before rethrowing so no task outlives this call.
  std::vector<detail::CsvColumns> parts;
  std::exception_ptr first_error;
  for (auto& job : jobs) {
    try {
      parts.push_back(job.get());
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
  for (auto& part : parts) {
    for (std::size_t c = 0; c < width; ++c) {
      columns[c].insert(columns[c].end(), part.columns[c].begin(), part.columns[c].end());
    }
    lint.insert(lint.end(), part.warnings.begin(), part.warnings.end());
  }
  if (warnings != nullptr) warnings->insert(warnings->end(), lint.begin(), lint.end());
  if (columns[0].empty()) throw Error(ErrorKind::EmptyTrace, "input files contain no data rows");

  Provenance prov;
  prov.steps.push_back("parse_csv(" + std::to_string(files.size()) + " files, " +
                       std::to_string(columns[0].size()) + " bins)");
  if (mode == Mode::Fret) {
    return FretTrace(std::move(columns[0]), std::move(columns[1]), 1.0, std::move(prov));
  }
  return AlexTrace(std::move(columns[0]), std::move(columns[1]), std::move(columns[2]),
                   std::move(columns[3]), 1.0, std::move(prov));
}

/// Writes a trace in the format parse_csv reads, with a header row.
inline void write_trace_csv(const FretTrace& trace, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  out << "donor,acceptor\n";
  for (std::size_t j = 0; j < trace.size(); ++j) {
    out << detail::format_number(trace.donor()[j], 17) << ','
        << detail::format_number(trace.acceptor()[j], 17) << '\n';
  }
  detail::finish_write(out, path);
}

inline void write_trace_csv(const AlexTrace& trace, const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  out << "d_d,d_a,a_d,a_a\n";
  for (std::size_t j = 0; j < trace.size(); ++j) {
    out << detail::format_number(trace.d_d()[j], 17) << ','
        << detail::format_number(trace.d_a()[j], 17) << ','
        << detail::format_number(trace.a_d()[j], 17) << ','
        << detail::format_number(trace.a_a()[j], 17) << '\n';
  }
  detail::finish_write(out, path);
}

/// `r,E` rows for Förster fitting, header optional.
inline std::vector<DistancePoint> parse_distance_csv(const std::filesystem::path& path) {
  auto table = detail::read_numeric_csv(path, 2, 0, false);
  std::vector<DistancePoint> points;
  points.reserve(table.columns[0].size());
  for (std::size_t i = 0; i < table.columns[0].size(); ++i) {
    points.push_back({table.columns[0][i], table.columns[1][i]});
  }
  return points;
}

/// `bin_center,count,fit` rows; the fit column is empty without a fit.
inline void write_histogram_csv(const EfficiencyHistogram& hist,
                                const std::filesystem::path& path) {
  auto out = detail::open_for_write(path);
  out << "bin_center,count,fit\n";
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double c = hist.bin_center(k);
    out << detail::format_number(c) << ',' << hist.counts()[k] << ',';
    if (hist.fit()) out << detail::format_number((*hist.fit())(c));
    out << '\n';
  }
  detail::finish_write(out, path);
}

/// Writes `burst_index,E,S` per ALEX burst and returns how many bursts were
/// left out because they had no photons.
inline std::size_t write_scatter_csv(const AlexBurstSet& bursts, double gamma,
                                     const std::filesystem::path& path) {
  detail::check_gamma(gamma);
  auto out = detail::open_for_write(path);
  out << "burst_index,E,S\n";
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < bursts.size(); ++i) {
    const AlexBurst& b = bursts[i];
    if (!(b.acceptor_counts + gamma * b.donor_counts > 0.0)) {
      ++skipped;
      continue;
    }
    out << i << ',' << detail::format_number(alex_fret_efficiency(b, gamma)) << ','
        << detail::format_number(stoichiometry(b, gamma)) << '\n';
  }
  detail::finish_write(out, path);
  return skipped;
}

/// Event counts on a d_bins x a_bins grid over (donor, acceptor) counts, one
/// `d_center,a_center,count` row per cell, donor-major. Each axis spans
/// [0, largest observed count] (or [0, 1] when empty); the maximum falls in
/// the last cell.
template <BurstLike B>
void write_frequency_grid(const BurstSet<B>& bursts, std::size_t d_bins, std::size_t a_bins,
                          const std::filesystem::path& path) {
  if (d_bins < 1 || a_bins < 1) {
    throw Error(ErrorKind::InvalidParameter, "grid needs at least one bin per axis");
  }
  double d_max = 0.0;
  double a_max = 0.0;
  for (const B& b : bursts) {
    d_max = std::max(d_max, static_cast<double>(b.donor_counts));
    a_max = std::max(a_max, static_cast<double>(b.acceptor_counts));
  }
  if (d_max <= 0.0) d_max = 1.0;
  if (a_max <= 0.0) a_max = 1.0;
  const double d_w = d_max / static_cast<double>(d_bins);
  const double a_w = a_max / static_cast<double>(a_bins);
  auto cell = [](double v, double w, std::size_t n) {
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(v / w)));
    return std::min(k, n - 1);
  };
  std::vector<std::uint64_t> grid(d_bins * a_bins, 0);
  for (const B& b : bursts) {
    ++grid[cell(b.donor_counts, d_w, d_bins) * a_bins + cell(b.acceptor_counts, a_w, a_bins)];
  }
  auto out = detail::open_for_write(path);
  out << "d_center,a_center,count\n";
  for (std::size_t i = 0; i < d_bins; ++i) {
    for (std::size_t j = 0; j < a_bins; ++j) {
      out << detail::format_number((static_cast<double>(i) + 0.5) * d_w) << ','
          << detail::format_number((static_cast<double>(j) + 0.5) * a_w) << ','
          << grid[i * a_bins + j] << '\n';
    }
  }
  detail::finish_write(out, path);
}

/// Fitted curve sampled on `samples` points spanning the data's separations.
inline void write_forster_curve_csv(const ForsterFit& fit, std::span<const DistancePoint> points,
                                    const std::filesystem::path& path, std::size_t samples = 200) {
  double lo = points.empty() ? fit.r0 : points[0].r;
  double hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.r);
    hi = std::max(hi, p.r);
  }
  lo = std::min(lo, 0.5 * fit.r0);
  hi = std::max(hi, 2.0 * fit.r0);
  auto out = detail::open_for_write(path);
  out << "r,E\n";
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    out << detail::format_number(r) << ',' << detail::format_number(fit(r)) << '\n';
  }
  detail::finish_write(out, path);
}

/// Bar chart of the histogram with the fitted curve (256 samples) overlaid.
inline void render_histogram_svg(const EfficiencyHistogram& hist,
                                 const std::filesystem::path& path) {
  constexpr double width = 640.0;
  constexpr double height = 400.0;
  constexpr double left = 60.0;
  constexpr double right = 20.0;
  constexpr double top = 20.0;
  constexpr double bottom = 50.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;

  double y_max = 1.0;
  for (auto c : hist.counts()) y_max = std::max(y_max, static_cast<double>(c));
  if (hist.fit()) y_max = std::max(y_max, hist.fit()->amplitude);
  y_max *= 1.05;

  const double span = hist.bin_max() - hist.bin_min();
  auto sx = [&](double x) { return left + (x - hist.bin_min()) / span * plot_w; };
  auto sy = [&](double y) { return top + plot_h - y / y_max * plot_h; };
  auto num = [](double v) { return detail::format_number(v, 6); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "<g fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\">\n";
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double x0 = hist.bin_min() + static_cast<double>(k) * hist.bin_width();
    const double count = static_cast<double>(hist.counts()[k]);
    svg << "<rect x=\"" << num(sx(x0)) << "\" y=\"" << num(sy(count)) << "\" width=\""
        << num(hist.bin_width() / span * plot_w) << "\" height=\"" << num(sy(0.0) - sy(count))
        << "\"/>\n";
  }
  svg << "</g>\n";
  if (hist.fit()) {
    svg << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
    for (int i = 0; i < 256; ++i) {
      const double x = hist.bin_min() + span * i / 255.0;
      if (i > 0) svg << ' ';
      svg << num(sx(x)) << ',' << num(sy((*hist.fit())(x)));
    }
    svg << "\"/>\n";
  }
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n"
      << "<line x1=\"" << left << "\" y1=\"" << num(sy(0.0)) << "\" x2=\"" << left + plot_w
      << "\" y2=\"" << num(sy(0.0)) << "\"/>\n"
      << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << num(sy(0.0)) << "\"/>\n"
      << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">\n"
      << "<text x=\"" << num(sx(hist.bin_min())) << "\" y=\"" << num(sy(0.0) + 16) << "\">"
      << num(hist.bin_min()) << "</text>\n"
      << "<text x=\"" << num(sx(hist.bin_max())) << "\" y=\"" << num(sy(0.0) + 16) << "\">"
      << num(hist.bin_max()) << "</text>\n"
      << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << height - 10
      << "\">FRET Efficiency</text>\n"
      << "<text x=\"15\" y=\"" << num(top + plot_h / 2) << "\" transform=\"rotate(-90 15 "
      << num(top + plot_h / 2) << ")\">Events</text>\n"
      << "</g>\n"
      << "</svg>\n";

  auto out = detail::open_for_write(path);
  out << svg.str();
  detail::finish_write(out, path);
}

}  // namespace smfret

#endif  // SMFRET_IO_HPP
