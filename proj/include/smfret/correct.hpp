#ifndef SMFRET_CORRECT_HPP
#define SMFRET_CORRECT_HPP

#include <algorithm>
#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "smfret/model.hpp"

namespace smfret {

namespace detail {

inline std::vector<double> minus_clamped(std::span<const double> values, double offset) {
  std::vector<double> out(values.size());
  std::transform(values.begin(), values.end(), out.begin(),
                 [offset](double v) { return std::max(0.0, v - offset); });
  return out;
}

inline std::string format_step(const char* name, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s(%.9g, %.9g)", name, a, b);
  return buf;
}

}  // namespace detail

/// Removes mean autofluorescence from every bin, clamping at zero.
inline FretTrace subtract_background(const FretTrace& trace, double auto_donor,
                                     double auto_acceptor) {
  detail::require_non_negative(auto_donor, "auto_donor");
  detail::require_non_negative(auto_acceptor, "auto_acceptor");
  Provenance prov = trace.provenance().with_step(
      detail::format_step("subtract_background", auto_donor, auto_acceptor));
  prov.params.auto_donor = auto_donor;
  prov.params.auto_acceptor = auto_acceptor;
  return FretTrace(detail::minus_clamped(trace.donor(), auto_donor),
                   detail::minus_clamped(trace.acceptor(), auto_acceptor), trace.bin_width_ms(),
                   std::move(prov));
}

/// Per-channel background for an ALEX trace, ordered D_D, D_A, A_D, A_A.
struct AlexBackground {
  double d_d = 0.0;
  double d_a = 0.0;
  double a_d = 0.0;
  double a_a = 0.0;

  /// Same value on both channels of each detector.
  static AlexBackground per_detector(double donor, double acceptor) {
    return {donor, donor, acceptor, acceptor};
  }
};

inline AlexTrace subtract_background_alex(const AlexTrace& trace, const AlexBackground& bg) {
  detail::require_non_negative(bg.d_d, "auto D_D");
  detail::require_non_negative(bg.d_a, "auto D_A");
  detail::require_non_negative(bg.a_d, "auto A_D");
  detail::require_non_negative(bg.a_a, "auto A_A");
  char buf[200];
  std::snprintf(buf, sizeof buf, "subtract_background_alex(%.9g, %.9g, %.9g, %.9g)", bg.d_d,
                bg.d_a, bg.a_d, bg.a_a);
  Provenance prov = trace.provenance().with_step(buf);
  prov.params.auto_donor = bg.d_d;
  prov.params.auto_acceptor = bg.a_d;
  return AlexTrace(detail::minus_clamped(trace.d_d(), bg.d_d),
                   detail::minus_clamped(trace.d_a(), bg.d_a),
                   detail::minus_clamped(trace.a_d(), bg.a_d),
                   detail::minus_clamped(trace.a_a(), bg.a_a), trace.bin_width_ms(),
                   std::move(prov));
}

/// Removes donor leakage into the acceptor channel and acceptor leakage into
/// the donor channel. Both corrections read the uncorrected pair, so the
/// result does not depend on which one is thought of as applied first. For
/// ALEX bursts this acts on the donor-excitation pair (D_D, A_D) only.
template <BurstLike B>
BurstSet<B> subtract_crosstalk(const BurstSet<B>& bursts, double cross_DtoA, double cross_AtoD) {
  detail::require_fraction(cross_DtoA, "cross_DtoA");
  detail::require_fraction(cross_AtoD, "cross_AtoD");
  std::vector<B> out(bursts.begin(), bursts.end());
  for (B& b : out) {
    const double d = b.donor_counts;
    const double a = b.acceptor_counts;
    b.acceptor_counts = std::max(0.0, a - cross_DtoA * d);
    b.donor_counts = std::max(0.0, d - cross_AtoD * a);
  }
  Provenance prov = bursts.provenance().with_step(
      detail::format_step("subtract_crosstalk", cross_DtoA, cross_AtoD));
  prov.params.cross_DtoA = cross_DtoA;
  prov.params.cross_AtoD = cross_AtoD;
  return BurstSet<B>(std::move(out), std::move(prov));
}

}  // namespace smfret

#endif  // SMFRET_CORRECT_HPP
