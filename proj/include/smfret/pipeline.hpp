#ifndef SMFRET_PIPELINE_HPP
#define SMFRET_PIPELINE_HPP

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "smfret/config.hpp"
#include "smfret/correct.hpp"
#include "smfret/efficiency.hpp"
#include "smfret/fit.hpp"
#include "smfret/histogram.hpp"
#include "smfret/select.hpp"

namespace smfret {

enum class FitStatus { Converged, NotConverged, NotAttempted };

inline std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Converged: return "converged";
    case FitStatus::NotConverged: return "not_converged";
    case FitStatus::NotAttempted: return "not_attempted";
  }
  return "not_attempted";
}

/// Everything one pass of background -> selection -> crosstalk -> histogram
/// -> fit produced, with the steps in the order they ran.
template <BurstLike B>
struct AnalysisResult {
  BurstSet<B> bursts;
  EfficiencyValues efficiencies;
  EfficiencyHistogram histogram;
  FitStatus fit_status = FitStatus::NotAttempted;
  std::size_t n_bins = 0;
  std::vector<std::string> steps;
  std::vector<std::string> warnings;

  const std::optional<GaussianFit>& fit() const { return histogram.fit(); }
};

namespace detail {

template <BurstLike B>
AnalysisResult<B> finish_analysis(BurstSet<B> corrected, std::size_t n_bins,
                                  const RunConfig& cfg) {
  EfficiencyValues eff = burst_efficiencies(corrected, cfg.gamma, ZeroTotalPolicy::Skip);
  EfficiencyHistogram hist = build_histogram(eff.values, cfg.bin_min, cfg.bin_max, cfg.bin_width);

  std::vector<std::string> steps = corrected.provenance().steps;
  steps.push_back("fret_efficiency(gamma=" + format_number(cfg.gamma) + ")");
  steps.push_back("build_histogram(" + format_number(cfg.bin_min) + ", " +
                  format_number(cfg.bin_max) + ", " + format_number(cfg.bin_width) + ")");

  std::vector<std::string> warnings;
  FitStatus status = FitStatus::NotAttempted;
  if (eff.values.empty()) {
    warnings.push_back("no bursts with photons; Gaussian fit not attempted");
  } else {
    try {
      const GaussianFit fit = fit_gaussian(hist);
      hist = hist.with_fit(fit);
      steps.push_back("fit_gaussian");
      status = fit.converged ? FitStatus::Converged : FitStatus::NotConverged;
      if (!fit.converged) {
        warnings.push_back("Gaussian fit did not converge after " +
                           std::to_string(fit.iterations) + " iterations");
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DegenerateData) throw;
      warnings.push_back(std::string("Gaussian fit not attempted: ") + e.what());
    }
  }
  if (eff.skipped > 0) {
    warnings.push_back(std::to_string(eff.skipped) + " bursts skipped with zero total photons");
  }
  return {std::move(corrected), std::move(eff),   std::move(hist),    status,
          n_bins,               std::move(steps), std::move(warnings)};
}

}  // namespace detail

/// Two-channel chain in the canonical order: background, threshold,
/// crosstalk, gamma-weighted efficiency, histogram, Gaussian fit.
inline AnalysisResult<FretBurst> analyze_fret(const FretTrace& trace, const RunConfig& cfg) {
  const FretTrace clean = subtract_background(trace, cfg.auto_donor, cfg.auto_acceptor);
  FretBurstSet selected;
  switch (cfg.threshold_mode) {
    case ThresholdMode::And: selected = threshold_and(clean, cfg.t_donor, cfg.t_acceptor); break;
    case ThresholdMode::Or: selected = threshold_or(clean, cfg.t_donor, cfg.t_acceptor); break;
    case ThresholdMode::Sum: selected = threshold_sum(clean, cfg.sum_threshold()); break;
    case ThresholdMode::Alex:
      throw Error(ErrorKind::ValueOutOfDomain, "alex thresholds need a four-channel trace");
  }
  return detail::finish_analysis(subtract_crosstalk(selected, cfg.cross_DtoA, cfg.cross_AtoD),
                                 trace.size(), cfg);
}

/// ALEX chain: per-detector background, donor/acceptor-excitation selection
/// (t_donor on D_D + A_D, t_acceptor on A_A), crosstalk on the donor-excitation
/// pair, then the same histogram and fit as analyze_fret.
inline AnalysisResult<AlexBurst> analyze_alex(const AlexTrace& trace, const RunConfig& cfg) {
  const AlexTrace clean = subtract_background_alex(
      trace, AlexBackground::per_detector(cfg.auto_donor, cfg.auto_acceptor));
  const AlexBurstSet selected = threshold_alex(clean, cfg.t_donor, cfg.t_acceptor);
  return detail::finish_analysis(subtract_crosstalk(selected, cfg.cross_DtoA, cfg.cross_AtoD),
                                 trace.size(), cfg);
}

}  // namespace smfret

#endif  // SMFRET_PIPELINE_HPP
