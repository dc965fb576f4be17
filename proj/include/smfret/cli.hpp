#ifndef SMFRET_CLI_HPP
#define SMFRET_CLI_HPP

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "smfret/config.hpp"
#include "smfret/io.hpp"
#include "smfret/pipeline.hpp"
#include "smfret/simulate.hpp"

namespace smfret::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;

/// Stable process exit code per error kind (10 + declaration order).
inline int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

struct Overrides {
  std::optional<std::filesystem::path> output_dir;
  std::optional<std::uint64_t> seed;
};

namespace detail {

using smfret::detail::format_number;

inline void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::WriteFailed, "cannot create " + dir.string() + ": " + ec.message());
}

template <BurstLike B>
void write_summary(const RunConfig& cfg, const AnalysisResult<B>& res,
                   const std::vector<std::string>& lint, const std::filesystem::path& path) {
  std::ostringstream s;
  s << "# smfret analysis summary\n"
    << "mode = " << to_string(cfg.mode) << '\n'
    << "threshold_mode = " << to_string(cfg.threshold_mode) << "\n\n[parameters]\n"
    << "auto_donor = " << format_number(cfg.auto_donor) << '\n'
    << "auto_acceptor = " << format_number(cfg.auto_acceptor) << '\n'
    << "t_donor = " << format_number(cfg.t_donor) << '\n'
    << "t_acceptor = " << format_number(cfg.t_acceptor) << '\n';
  if (cfg.threshold_mode == ThresholdMode::Sum) {
    s << "t_sum = " << format_number(cfg.sum_threshold()) << '\n';
  }
  s << "cross_DtoA = " << format_number(cfg.cross_DtoA) << '\n'
    << "cross_AtoD = " << format_number(cfg.cross_AtoD) << '\n'
    << "gamma = " << format_number(cfg.gamma) << '\n'
    << "bin_min = " << format_number(cfg.bin_min) << '\n'
    << "bin_max = " << format_number(cfg.bin_max) << '\n'
    << "bin_width = " << format_number(cfg.bin_width) << "\n\n[pipeline]\n";
  for (std::size_t i = 0; i < res.steps.size(); ++i) {
    s << "step " << i + 1 << " = " << res.steps[i] << '\n';
  }
  s << "\n[counts]\n"
    << "bins = " << res.n_bins << '\n'
    << "bursts_selected = " << res.bursts.size() << '\n'
    << "bursts_skipped_zero_total = " << res.efficiencies.skipped << '\n'
    << "efficiencies = " << res.efficiencies.values.size() << '\n'
    << "efficiencies_in_range = " << res.histogram.n_in_range() << "\n\n[fit]\n"
    << "status = " << to_string(res.fit_status) << '\n';
  if (const auto& fit = res.fit()) {
    s << "amplitude = " << format_number(fit->amplitude) << '\n'
      << "mean = " << format_number(fit->mean) << '\n'
      << "sigma = " << format_number(fit->sigma) << '\n'
      << "residual_sse = " << format_number(fit->residual_sse) << '\n'
      << "iterations = " << fit->iterations << '\n';
  }
  s << "\n[warnings]\n";
  for (const auto& w : res.warnings) s << w << '\n';
  for (const auto& w : lint) s << w << '\n';

  auto out = smfret::detail::open_for_write(path);
  out << s.str();
  smfret::detail::finish_write(out, path);
}

inline RunConfig load_run_config(const std::filesystem::path& config_path, const Overrides& ov,
                                 Mode expected) {
  RunConfig cfg = parse_config(config_path);
  if (cfg.mode != expected) {
    throw Error(ErrorKind::ValueOutOfDomain,
                config_path.string() + ": mode = " + to_string(cfg.mode) +
                    " does not match this subcommand (needs " + to_string(expected) + ")");
  }
  if (ov.output_dir) cfg.output_dir = *ov.output_dir;
  if (ov.seed) cfg.seed = *ov.seed;
  return cfg;
}

inline std::vector<std::string> file_names(const RunConfig& cfg) {
  std::vector<std::string> names;
  for (const auto& p : cfg.input_files) names.push_back(p.string());
  return names;
}

template <typename Body>
int guarded(std::ostream& err, Body body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

inline void report(std::ostream& out, const char* label, std::size_t bursts, FitStatus status,
                   const std::optional<GaussianFit>& fit, const std::filesystem::path& dir) {
  out << label << ": " << bursts << " bursts, fit " << to_string(status);
  if (fit) out << ", mean " << format_number(fit->mean, 9) << ", sigma " << format_number(fit->sigma, 9);
  out << "\noutputs written to " << dir.string() << '\n';
}

}  // namespace detail

/// `analyze`: two-channel workflow from a config file. Writes histogram.csv,
/// histogram.svg, grid.csv and summary.txt under the output directory.
inline int cmd_analyze(const std::filesystem::path& config_path, const Overrides& ov = {},
                       std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const RunConfig cfg = detail::load_run_config(config_path, ov, Mode::Fret);
    std::vector<std::string> lint;
    const Trace trace = parse_csv("", detail::file_names(cfg), Mode::Fret, &lint);
    const auto res = analyze_fret(std::get<FretTrace>(trace), cfg);
    detail::ensure_dir(cfg.output_dir);
    write_histogram_csv(res.histogram, cfg.output_dir / "histogram.csv");
    render_histogram_svg(res.histogram, cfg.output_dir / "histogram.svg");
    write_frequency_grid(res.bursts, cfg.grid_donor_bins, cfg.grid_acceptor_bins,
                         cfg.output_dir / "grid.csv");
    detail::write_summary(cfg, res, lint, cfg.output_dir / "summary.txt");
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';
    detail::report(out, "analyze", res.bursts.size(), res.fit_status, res.fit(), cfg.output_dir);
    return kExitOk;
  });
}

/// `analyze-alex`: four-channel workflow; also writes scatter.csv (E, S).
inline int cmd_analyze_alex(const std::filesystem::path& config_path, const Overrides& ov = {},
                            std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const RunConfig cfg = detail::load_run_config(config_path, ov, Mode::Alex);
    std::vector<std::string> lint;
    const Trace trace = parse_csv("", detail::file_names(cfg), Mode::Alex, &lint);
    const auto res = analyze_alex(std::get<AlexTrace>(trace), cfg);
    detail::ensure_dir(cfg.output_dir);
    write_histogram_csv(res.histogram, cfg.output_dir / "histogram.csv");
    render_histogram_svg(res.histogram, cfg.output_dir / "histogram.svg");
    write_frequency_grid(res.bursts, cfg.grid_donor_bins, cfg.grid_acceptor_bins,
                         cfg.output_dir / "grid.csv");
    write_scatter_csv(res.bursts, cfg.gamma, cfg.output_dir / "scatter.csv");
    detail::write_summary(cfg, res, lint, cfg.output_dir / "summary.txt");
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';
    detail::report(out, "analyze-alex", res.bursts.size(), res.fit_status, res.fit(),
                   cfg.output_dir);
    return kExitOk;
  });
}

/// `forster`: fits R0 to `r,E` rows, prints it and writes forster_curve.csv.
inline int cmd_forster(const std::filesystem::path& points_csv,
                       const std::filesystem::path& output_dir = ".",
                       std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    const auto points = parse_distance_csv(points_csv);
    const ForsterFit fit = fit_forster_curve(points);
    detail::ensure_dir(output_dir);
    write_forster_curve_csv(fit, points, output_dir / "forster_curve.csv");
    char line[128];
    std::snprintf(line, sizeof line, "R0 = %.6f\nresidual_sse = %.9g\nconverged = %s\n", fit.r0,
                  fit.residual_sse, fit.converged ? "true" : "false");
    out << line;
    return kExitOk;
  });
}

/// `simulate`: writes trace.csv (input format) and truth.csv (per-bin ground
/// truth) under the output directory.
inline int cmd_simulate(const std::filesystem::path& config_path, const Overrides& ov = {},
                        std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return detail::guarded(err, [&] {
    SimConfig sc = parse_sim_config(config_path);
    if (ov.output_dir) sc.output_dir = *ov.output_dir;
    if (ov.seed) sc.params.seed = *ov.seed;
    detail::ensure_dir(sc.output_dir);
    std::vector<BinTruth> truth;
    if (sc.mode == Mode::Fret) {
      auto sim = simulate_fret_trace(sc.params);
      write_trace_csv(sim.trace, sc.output_dir / "trace.csv");
      truth = std::move(sim.truth);
    } else {
      auto sim = simulate_alex_trace(sc.params, sc.acceptor_brightness);
      write_trace_csv(sim.trace, sc.output_dir / "trace.csv");
      truth = std::move(sim.truth);
    }
    const auto truth_path = sc.output_dir / "truth.csv";
    auto f = smfret::detail::open_for_write(truth_path);
    f << "bin,is_burst,species,burst_total,donor_emitted,acceptor_emitted,acceptor_excited\n";
    for (std::size_t j = 0; j < truth.size(); ++j) {
      const BinTruth& t = truth[j];
      const char* species = t.species == Species::Fret        ? "fret"
                            : t.species == Species::DonorOnly ? "donor_only"
                                                              : "none";
      f << j << ',' << (t.is_burst ? 1 : 0) << ',' << species << ',' << t.burst_total << ','
        << t.donor_emitted << ',' << t.acceptor_emitted << ',' << t.acceptor_excited << '\n';
    }
    smfret::detail::finish_write(f, truth_path);
    out << "simulated " << truth.size() << " bins (" << to_string(sc.mode) << ", seed "
        << sc.params.seed << ") into " << sc.output_dir.string() << '\n';
    return kExitOk;
  });
}

}  // namespace smfret::cli

#endif  // SMFRET_CLI_HPP
