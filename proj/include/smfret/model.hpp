#ifndef SMFRET_MODEL_HPP
#define SMFRET_MODEL_HPP

#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smfret/error.hpp"

namespace smfret {

/// Correction factors and selection thresholds for one analysis run.
///
/// Backgrounds are mean counts per bin, crosstalk terms are fractions of the
/// opposite channel, gamma weights the donor channel in the efficiency.
struct CorrectionParams {
  double auto_donor = 0.0;
  double auto_acceptor = 0.0;
  double cross_DtoA = 0.0;
  double cross_AtoD = 0.0;
  double gamma = 1.0;
  double t_donor = 0.0;
  double t_acceptor = 0.0;

  void validate() const {
    detail::require_non_negative(auto_donor, "auto_donor");
    detail::require_non_negative(auto_acceptor, "auto_acceptor");
    detail::require_fraction(cross_DtoA, "cross_DtoA");
    detail::require_fraction(cross_AtoD, "cross_AtoD");
    if (!(gamma > 0.0)) {
      throw Error(ErrorKind::InvalidParameter, "gamma must be > 0, got " + std::to_string(gamma));
    }
    detail::require_non_negative(t_donor, "t_donor");
    detail::require_non_negative(t_acceptor, "t_acceptor");
  }

  friend bool operator==(const CorrectionParams&, const CorrectionParams&) = default;
};

/// Which processing steps produced a value, in application order, plus the
/// parameters those steps used.
struct Provenance {
  CorrectionParams params;
  std::vector<std::string> steps;

  Provenance with_step(std::string step) const {
    Provenance next = *this;
    next.steps.push_back(std::move(step));
    return next;
  }

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

namespace detail {

inline void check_channel(std::span<const double> values, std::string_view name) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
      throw Error(ErrorKind::NegativeCount, std::string(name) + " bin " + std::to_string(i) +
                                                " holds invalid count " +
                                                std::to_string(values[i]));
    }
  }
}

inline void check_bin_width(double bin_width_ms) {
  if (!(bin_width_ms > 0.0)) {
    throw Error(ErrorKind::InvalidParameter,
                "bin_width_ms must be > 0, got " + std::to_string(bin_width_ms));
  }
}

}  // namespace detail

/// Two-channel time-binned photon counts (donor and acceptor detector).
class FretTrace {
 public:
  FretTrace(std::vector<double> donor, std::vector<double> acceptor, double bin_width_ms,
            Provenance provenance = {})
      : donor_(std::move(donor)),
        acceptor_(std::move(acceptor)),
        bin_width_ms_(bin_width_ms),
        provenance_(std::move(provenance)) {
    if (donor_.empty() && acceptor_.empty()) {
      throw Error(ErrorKind::EmptyTrace, "trace has no bins");
    }
    if (donor_.size() != acceptor_.size()) {
      throw Error(ErrorKind::LengthMismatch, "donor has " + std::to_string(donor_.size()) +
                                                 " bins, acceptor has " +
                                                 std::to_string(acceptor_.size()));
    }
    detail::check_channel(donor_, "donor");
    detail::check_channel(acceptor_, "acceptor");
    detail::check_bin_width(bin_width_ms_);
  }

  std::size_t size() const noexcept { return donor_.size(); }
  std::span<const double> donor() const noexcept { return donor_; }
  std::span<const double> acceptor() const noexcept { return acceptor_; }
  double bin_width_ms() const noexcept { return bin_width_ms_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  friend bool operator==(const FretTrace&, const FretTrace&) = default;

 private:
  std::vector<double> donor_;
  std::vector<double> acceptor_;
  double bin_width_ms_;
  Provenance provenance_;
};

/// Detector/laser combinations of an ALEX measurement. The first letter is
/// the detection channel, the second the laser that was on.
enum class AlexChannel { DD, DA, AD, AA };

/// Four-channel time-binned photon counts from alternating laser excitation.
class AlexTrace {
 public:
  AlexTrace(std::vector<double> d_d, std::vector<double> d_a, std::vector<double> a_d,
            std::vector<double> a_a, double bin_width_ms, Provenance provenance = {})
      : d_d_(std::move(d_d)),
        d_a_(std::move(d_a)),
        a_d_(std::move(a_d)),
        a_a_(std::move(a_a)),
        bin_width_ms_(bin_width_ms),
        provenance_(std::move(provenance)) {
    if (d_d_.empty() && d_a_.empty() && a_d_.empty() && a_a_.empty()) {
      throw Error(ErrorKind::EmptyTrace, "trace has no bins");
    }
    const std::size_t n = d_d_.size();
    if (d_a_.size() != n || a_d_.size() != n || a_a_.size() != n) {
      throw Error(ErrorKind::LengthMismatch,
                  "channel lengths differ: " + std::to_string(d_d_.size()) + "," +
                      std::to_string(d_a_.size()) + "," + std::to_string(a_d_.size()) + "," +
                      std::to_string(a_a_.size()));
    }
    detail::check_channel(d_d_, "D_D");
    detail::check_channel(d_a_, "D_A");
    detail::check_channel(a_d_, "A_D");
    detail::check_channel(a_a_, "A_A");
    detail::check_bin_width(bin_width_ms_);
  }

  std::size_t size() const noexcept { return d_d_.size(); }
  std::span<const double> d_d() const noexcept { return d_d_; }
  std::span<const double> d_a() const noexcept { return d_a_; }
  std::span<const double> a_d() const noexcept { return a_d_; }
  std::span<const double> a_a() const noexcept { return a_a_; }
  double bin_width_ms() const noexcept { return bin_width_ms_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  std::span<const double> channel(AlexChannel c) const noexcept {
    switch (c) {
      case AlexChannel::DD: return d_d_;
      case AlexChannel::DA: return d_a_;
      case AlexChannel::AD: return a_d_;
      case AlexChannel::AA: return a_a_;
    }
    return d_d_;
  }

  /// The donor-excitation pair (D_D, A_D) as a plain two-channel trace.
  FretTrace donor_excitation() const {
    return FretTrace(d_d_, a_d_, bin_width_ms_, provenance_.with_step("donor_excitation_pair"));
  }

  friend bool operator==(const AlexTrace&, const AlexTrace&) = default;

 private:
  std::vector<double> d_d_;
  std::vector<double> d_a_;
  std::vector<double> a_d_;
  std::vector<double> a_a_;
  double bin_width_ms_;
  Provenance provenance_;
};

/// One selected time bin.
struct FretBurst {
  double donor_counts = 0.0;
  double acceptor_counts = 0.0;
  std::size_t source_bin_index = 0;

  friend bool operator==(const FretBurst&, const FretBurst&) = default;
};

/// One selected ALEX time bin. `donor_counts` and `acceptor_counts` are the
/// donor-excitation channels D_D and A_D.
struct AlexBurst {
  double donor_counts = 0.0;
  double acceptor_counts = 0.0;
  double d_a_counts = 0.0;
  double a_a_counts = 0.0;
  std::size_t source_bin_index = 0;

  friend bool operator==(const AlexBurst&, const AlexBurst&) = default;
};

template <typename B>
concept BurstLike = requires(const B& b) {
  { b.donor_counts } -> std::convertible_to<double>;
  { b.acceptor_counts } -> std::convertible_to<double>;
  { b.source_bin_index } -> std::convertible_to<std::size_t>;
};

/// Ordered selected events plus the record of how they were produced.
template <BurstLike B>
class BurstSet {
 public:
  using value_type = B;

  BurstSet() = default;

  explicit BurstSet(std::vector<B> bursts, Provenance provenance = {})
      : bursts_(std::move(bursts)), provenance_(std::move(provenance)) {
    for (std::size_t i = 1; i < bursts_.size(); ++i) {
      if (bursts_[i].source_bin_index <= bursts_[i - 1].source_bin_index) {
        throw Error(ErrorKind::InvalidParameter,
                    "burst source indices must be strictly increasing (position " +
                        std::to_string(i) + ")");
      }
    }
  }

  std::size_t size() const noexcept { return bursts_.size(); }
  bool empty() const noexcept { return bursts_.empty(); }
  std::span<const B> bursts() const noexcept { return bursts_; }
  const B& operator[](std::size_t i) const { return bursts_[i]; }
  auto begin() const noexcept { return bursts_.begin(); }
  auto end() const noexcept { return bursts_.end(); }
  const Provenance& provenance() const noexcept { return provenance_; }

  friend bool operator==(const BurstSet&, const BurstSet&) = default;

 private:
  std::vector<B> bursts_;
  Provenance provenance_;
};

using FretBurstSet = BurstSet<FretBurst>;
using AlexBurstSet = BurstSet<AlexBurst>;

}  // namespace smfret

#endif  // SMFRET_MODEL_HPP
