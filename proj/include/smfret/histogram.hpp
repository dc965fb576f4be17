#ifndef SMFRET_HISTOGRAM_HPP
#define SMFRET_HISTOGRAM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smfret/error.hpp"

namespace smfret {

/// Result of a single-Gaussian fit a * exp(-(x - mean)^2 / (2 sigma^2)).
struct GaussianFit {
  double amplitude = 0.0;
  double mean = 0.0;
  double sigma = 1.0;
  double residual_sse = 0.0;
  int iterations = 0;
  bool converged = false;

  double operator()(double x) const {
    const double z = (x - mean) / sigma;
    return amplitude * std::exp(-0.5 * z * z);
  }

  friend bool operator==(const GaussianFit&, const GaussianFit&) = default;
};

/// Equal-width histogram of FRET efficiencies over [bin_min, bin_max].
///
/// Bin k covers [bin_min + k w, bin_min + (k+1) w); the last bin is closed on
/// the right so bin_max itself is counted.
class EfficiencyHistogram {
 public:
  EfficiencyHistogram(double bin_min, double bin_max, double bin_width,
                      std::vector<std::uint64_t> counts, std::uint64_t n_total,
                      std::optional<GaussianFit> fit = std::nullopt)
      : bin_min_(bin_min),
        bin_max_(bin_max),
        bin_width_(bin_width),
        counts_(std::move(counts)),
        n_total_(n_total),
        fit_(fit) {
    if (counts_.size() != bin_count(bin_min_, bin_max_, bin_width_)) {
      throw Error(ErrorKind::BadBinning, "counts length does not match binning");
    }
    for (auto c : counts_) n_in_range_ += c;
    if (n_in_range_ > n_total_) {
      throw Error(ErrorKind::InvalidParameter, "more in-range values than total values");
    }
  }

  /// Number of bins for a range, or BadBinning if the width does not divide it.
  static std::size_t bin_count(double bin_min, double bin_max, double bin_width) {
    if (!std::isfinite(bin_min) || !std::isfinite(bin_max) || !(bin_max > bin_min)) {
      throw Error(ErrorKind::BadBinning, "bin_max must exceed bin_min");
    }
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
      throw Error(ErrorKind::BadBinning, "bin_width must be > 0");
    }
    const double span = bin_max - bin_min;
    const double n = std::round(span / bin_width);
    if (n < 1.0 || std::abs(n * bin_width - span) > 1e-9 * span) {
      throw Error(ErrorKind::BadBinning, "bin_width " + std::to_string(bin_width) +
                                             " does not divide range " + std::to_string(span));
    }
    return static_cast<std::size_t>(n);
  }

  double bin_min() const noexcept { return bin_min_; }
  double bin_max() const noexcept { return bin_max_; }
  double bin_width() const noexcept { return bin_width_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t n_in_range() const noexcept { return n_in_range_; }
  std::uint64_t n_total() const noexcept { return n_total_; }
  const std::optional<GaussianFit>& fit() const noexcept { return fit_; }

  double bin_center(std::size_t k) const {
    return bin_min_ + (static_cast<double>(k) + 0.5) * bin_width_;
  }

  EfficiencyHistogram with_fit(const GaussianFit& fit) const {
    EfficiencyHistogram out = *this;
    out.fit_ = fit;
    return out;
  }

  friend bool operator==(const EfficiencyHistogram&, const EfficiencyHistogram&) = default;

 private:
  double bin_min_;
  double bin_max_;
  double bin_width_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_in_range_ = 0;
  std::uint64_t n_total_;
  std::optional<GaussianFit> fit_;
};

/// Bins `values`; out-of-range (and non-finite) values are dropped but still
/// counted in n_total.
inline EfficiencyHistogram build_histogram(std::span<const double> values, double bin_min,
                                           double bin_max, double bin_width) {
  const std::size_t n = EfficiencyHistogram::bin_count(bin_min, bin_max, bin_width);
  std::vector<std::uint64_t> counts(n, 0);
  for (double v : values) {
    if (!(v >= bin_min && v <= bin_max)) continue;
    const double pos = (v - bin_min) / bin_width;
    double k = std::floor(pos);
    // Values sitting on an edge up to rounding belong to the bin that starts there.
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) <= 1e-9 * std::max(1.0, nearest)) k = nearest;
    std::size_t idx = k < 0.0 ? 0 : static_cast<std::size_t>(k);
    if (idx >= n) idx = n - 1;
    ++counts[idx];
  }
  return EfficiencyHistogram(bin_min, bin_max, bin_width, std::move(counts), values.size());
}

}  // namespace smfret

#endif  // SMFRET_HISTOGRAM_HPP
