#ifndef SMFRET_SELECT_HPP
#define SMFRET_SELECT_HPP

#include <cstdio>
#include <string>
#include <vector>

#include "smfret/correct.hpp"
#include "smfret/model.hpp"

namespace smfret {

// Every selector treats one time bin as one event and uses strict ">" so a
// bin sitting exactly on the threshold is rejected.

namespace detail {

template <typename Pred>
FretBurstSet select_bins(const FretTrace& trace, Pred keep, Provenance prov) {
  std::vector<FretBurst> out;
  const auto d = trace.donor();
  const auto a = trace.acceptor();
  for (std::size_t j = 0; j < trace.size(); ++j) {
    if (keep(d[j], a[j])) out.push_back({d[j], a[j], j});
  }
  return FretBurstSet(std::move(out), std::move(prov));
}

}  // namespace detail

inline FretBurstSet threshold_and(const FretTrace& trace, double t_donor, double t_acceptor) {
  detail::require_non_negative(t_donor, "t_donor");
  detail::require_non_negative(t_acceptor, "t_acceptor");
  Provenance prov =
      trace.provenance().with_step(detail::format_step("threshold_and", t_donor, t_acceptor));
  prov.params.t_donor = t_donor;
  prov.params.t_acceptor = t_acceptor;
  return detail::select_bins(
      trace, [=](double d, double a) { return d > t_donor && a > t_acceptor; }, std::move(prov));
}

inline FretBurstSet threshold_or(const FretTrace& trace, double t_donor, double t_acceptor) {
  detail::require_non_negative(t_donor, "t_donor");
  detail::require_non_negative(t_acceptor, "t_acceptor");
  Provenance prov =
      trace.provenance().with_step(detail::format_step("threshold_or", t_donor, t_acceptor));
  prov.params.t_donor = t_donor;
  prov.params.t_acceptor = t_acceptor;
  return detail::select_bins(
      trace, [=](double d, double a) { return d > t_donor || a > t_acceptor; }, std::move(prov));
}

inline FretBurstSet threshold_sum(const FretTrace& trace, double t_sum) {
  detail::require_non_negative(t_sum, "t_sum");
  char buf[96];
  std::snprintf(buf, sizeof buf, "threshold_sum(%.9g)", t_sum);
  return detail::select_bins(
      trace, [=](double d, double a) { return d + a > t_sum; },
      trace.provenance().with_step(buf));
}

/// Keeps bins whose donor-excitation total D_D + A_D exceeds `t_dex` and whose
/// directly excited acceptor signal A_A exceeds `t_aex`. Donor-only species
/// fail the second test, acceptor-only species the first.
inline AlexBurstSet threshold_alex(const AlexTrace& trace, double t_dex, double t_aex) {
  detail::require_non_negative(t_dex, "t_dex");
  detail::require_non_negative(t_aex, "t_aex");
  std::vector<AlexBurst> out;
  const auto dd = trace.d_d();
  const auto da = trace.d_a();
  const auto ad = trace.a_d();
  const auto aa = trace.a_a();
  for (std::size_t j = 0; j < trace.size(); ++j) {
    if (dd[j] + ad[j] > t_dex && aa[j] > t_aex) {
      out.push_back({dd[j], ad[j], da[j], aa[j], j});
    }
  }
  Provenance prov =
      trace.provenance().with_step(detail::format_step("threshold_alex", t_dex, t_aex));
  prov.params.t_donor = t_dex;
  prov.params.t_acceptor = t_aex;
  return AlexBurstSet(std::move(out), std::move(prov));
}

}  // namespace smfret

#endif  // SMFRET_SELECT_HPP
