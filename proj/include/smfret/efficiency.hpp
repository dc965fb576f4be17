#ifndef SMFRET_EFFICIENCY_HPP
#define SMFRET_EFFICIENCY_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "smfret/model.hpp"

namespace smfret {

namespace detail {

inline void check_counts(double n_a, double n_d) {
  if (!(n_a >= 0.0) || !(n_d >= 0.0)) {
    throw Error(ErrorKind::NegativeCount, "photon counts must be >= 0");
  }
}

inline void check_gamma(double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "gamma must be > 0, got " + std::to_string(gamma));
  }
}

}  // namespace detail

/// n_a / (n_a + gamma * n_d). Throws ZeroTotal for an empty burst.
inline double fret_efficiency(double n_a, double n_d, double gamma) {
  detail::check_counts(n_a, n_d);
  detail::check_gamma(gamma);
  const double total = n_a + gamma * n_d;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroTotal, "burst has no photons");
  return n_a / total;
}

/// Efficiency without detection correction (gamma = 1).
inline double proximity_ratio(double n_a, double n_d) { return fret_efficiency(n_a, n_d, 1.0); }

/// Transfer efficiency of a dye pair at separation `r` with Förster distance `r0`.
inline double forster_efficiency(double r, double r0) {
  if (!(r > 0.0) || !(r0 > 0.0)) {
    throw Error(ErrorKind::NonPositiveDistance, "distances must be > 0");
  }
  const double x = r / r0;
  const double x2 = x * x;
  return 1.0 / (1.0 + x2 * x2 * x2);
}

/// Efficiency from the donor-excitation channels A_D / (A_D + gamma * D_D).
inline double alex_fret_efficiency(const AlexBurst& burst, double gamma) {
  return fret_efficiency(burst.acceptor_counts, burst.donor_counts, gamma);
}

/// (gamma D_D + A_D) / (gamma D_D + A_D + A_A): near 1 for donor-only
/// molecules, near 0 for acceptor-only molecules.
inline double stoichiometry(const AlexBurst& burst, double gamma) {
  detail::check_gamma(gamma);
  if (!(burst.donor_counts >= 0.0 && burst.acceptor_counts >= 0.0 && burst.a_a_counts >= 0.0)) {
    throw Error(ErrorKind::NegativeCount, "photon counts must be >= 0");
  }
  const double dex = gamma * burst.donor_counts + burst.acceptor_counts;
  const double total = dex + burst.a_a_counts;
  if (!(total > 0.0)) throw Error(ErrorKind::ZeroTotal, "burst has no photons");
  return dex / total;
}

enum class ZeroTotalPolicy { Skip, Propagate };

struct EfficiencyValues {
  std::vector<double> values;
  std::vector<std::size_t> source_bins;
  std::size_t skipped = 0;
};

/// Per-burst efficiency with gamma weighting. Empty bursts are skipped and
/// tallied unless the policy asks for the ZeroTotal error to propagate.
template <BurstLike B>
EfficiencyValues burst_efficiencies(const BurstSet<B>& bursts, double gamma,
                                    ZeroTotalPolicy policy = ZeroTotalPolicy::Skip) {
  detail::check_gamma(gamma);
  EfficiencyValues out;
  out.values.reserve(bursts.size());
  out.source_bins.reserve(bursts.size());
  for (const B& b : bursts) {
    if (!(b.acceptor_counts + gamma * b.donor_counts > 0.0)) {
      if (policy == ZeroTotalPolicy::Propagate) {
        throw Error(ErrorKind::ZeroTotal,
                    "burst at bin " + std::to_string(b.source_bin_index) + " has no photons");
      }
      ++out.skipped;
      continue;
    }
    out.values.push_back(fret_efficiency(b.acceptor_counts, b.donor_counts, gamma));
    out.source_bins.push_back(b.source_bin_index);
  }
  return out;
}

}  // namespace smfret

#endif  // SMFRET_EFFICIENCY_HPP
