#ifndef SMFRET_SIMULATE_HPP
#define SMFRET_SIMULATE_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "smfret/error.hpp"
#include "smfret/model.hpp"

namespace smfret {

/// Parameters of the synthetic burst generator.
///
/// Detection model: a burst of N photons (geometric, N >= 1, mean
/// burst_intensity_mean) splits binomially into acceptor and donor emission
/// with acceptor probability true_E. Detected photons are binomially thinned
/// with efficiencies eta_D = min(1, 1/gamma) and eta_A = min(1, gamma), so
/// n_A / (n_A + gamma n_D) estimates true_E for any gamma. Crosstalk then
/// moves Binomial(d, cross_DtoA) detected photons from donor to acceptor and
/// Binomial(a, cross_AtoD) back, both drawn from the pre-mixing counts.
/// Poisson background is added last.
struct SimParams {
  std::size_t n_bins = 1000;
  double burst_rate = 0.05;
  double burst_intensity_mean = 60.0;
  double true_E = 0.75;
  double background_d = 0.0;
  double background_a = 0.0;
  double cross_DtoA = 0.0;
  double cross_AtoD = 0.0;
  double gamma = 1.0;
  /// Fraction of bursts coming from molecules without an active acceptor.
  double donor_only_fraction = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorKind::InvalidParameter, what); };
    if (n_bins == 0) bad("n_bins must be > 0");
    if (!(burst_rate >= 0.0 && burst_rate <= 1.0)) bad("burst_rate must lie in [0,1]");
    if (!(burst_intensity_mean >= 1.0)) bad("burst_intensity_mean must be >= 1");
    if (!(true_E >= 0.0 && true_E <= 1.0)) bad("true_E must lie in [0,1]");
    detail::require_non_negative(background_d, "background_d");
    detail::require_non_negative(background_a, "background_a");
    detail::require_fraction(cross_DtoA, "cross_DtoA");
    detail::require_fraction(cross_AtoD, "cross_AtoD");
    if (!(gamma > 0.0)) bad("gamma must be > 0");
    if (!(donor_only_fraction >= 0.0 && donor_only_fraction <= 1.0)) {
      bad("donor_only_fraction must lie in [0,1]");
    }
  }
};

enum class Species : std::uint8_t { None, Fret, DonorOnly };

/// What the generator put into one bin before detection and background.
struct BinTruth {
  bool is_burst = false;
  Species species = Species::None;
  std::uint64_t burst_total = 0;
  std::uint64_t donor_emitted = 0;
  std::uint64_t acceptor_emitted = 0;
  std::uint64_t acceptor_excited = 0;

  friend bool operator==(const BinTruth&, const BinTruth&) = default;
};

struct SimulatedFret {
  FretTrace trace;
  std::vector<BinTruth> truth;
};

struct SimulatedAlex {
  AlexTrace trace;
  std::vector<BinTruth> truth;
};

namespace detail {

// Draws one donor-excitation burst and returns detected (donor, acceptor)
// counts after crosstalk mixing, filling the ground-truth record.
inline std::pair<std::uint64_t, std::uint64_t> draw_burst(const SimParams& p, std::mt19937_64& rng,
                                                          BinTruth& truth) {
  const bool donor_only = p.donor_only_fraction > 0.0 &&
                          std::bernoulli_distribution(p.donor_only_fraction)(rng);
  const double e = donor_only ? 0.0 : p.true_E;
  std::geometric_distribution<std::uint64_t> size(1.0 / p.burst_intensity_mean);
  const std::uint64_t n = size(rng) + 1;
  const std::uint64_t emitted_a = std::binomial_distribution<std::uint64_t>(n, e)(rng);
  const std::uint64_t emitted_d = n - emitted_a;

  const double eta_d = std::min(1.0, 1.0 / p.gamma);
  const double eta_a = std::min(1.0, p.gamma);
  const std::uint64_t det_d = std::binomial_distribution<std::uint64_t>(emitted_d, eta_d)(rng);
  const std::uint64_t det_a = std::binomial_distribution<std::uint64_t>(emitted_a, eta_a)(rng);

  const std::uint64_t d_to_a = std::binomial_distribution<std::uint64_t>(det_d, p.cross_DtoA)(rng);
  const std::uint64_t a_to_d = std::binomial_distribution<std::uint64_t>(det_a, p.cross_AtoD)(rng);

  truth.is_burst = true;
  truth.species = donor_only ? Species::DonorOnly : Species::Fret;
  truth.burst_total = n;
  truth.donor_emitted = emitted_d;
  truth.acceptor_emitted = emitted_a;
  return {det_d - d_to_a + a_to_d, det_a - a_to_d + d_to_a};
}

inline std::uint64_t draw_poisson(double mean, std::mt19937_64& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(rng);
}

}  // namespace detail

/// Two-channel trace with known burst positions. Same params, same output.
inline SimulatedFret simulate_fret_trace(const SimParams& p) {
  p.validate();
  std::mt19937_64 rng(p.seed);
  std::vector<double> donor(p.n_bins);
  std::vector<double> acceptor(p.n_bins);
  std::vector<BinTruth> truth(p.n_bins);
  std::bernoulli_distribution has_burst(p.burst_rate);
  for (std::size_t j = 0; j < p.n_bins; ++j) {
    std::uint64_t d = 0;
    std::uint64_t a = 0;
    if (has_burst(rng)) std::tie(d, a) = detail::draw_burst(p, rng, truth[j]);
    d += detail::draw_poisson(p.background_d, rng);
    a += detail::draw_poisson(p.background_a, rng);
    donor[j] = static_cast<double>(d);
    acceptor[j] = static_cast<double>(a);
  }
  return {FretTrace(std::move(donor), std::move(acceptor), 1.0), std::move(truth)};
}

/// Four-channel ALEX trace. Donor excitation behaves as in
/// simulate_fret_trace and fills D_D and A_D. Under acceptor excitation a
/// FRET-species burst adds Poisson(acceptor_brightness) photons to A_A;
/// donor-only bursts add none. D_A carries donor-channel background only.
inline SimulatedAlex simulate_alex_trace(const SimParams& p, double acceptor_brightness) {
  p.validate();
  if (!(acceptor_brightness >= 0.0)) {
    throw Error(ErrorKind::InvalidParameter, "acceptor_brightness must be >= 0");
  }
  std::mt19937_64 rng(p.seed);
  std::vector<double> dd(p.n_bins), da(p.n_bins), ad(p.n_bins), aa(p.n_bins);
  std::vector<BinTruth> truth(p.n_bins);
  std::bernoulli_distribution has_burst(p.burst_rate);
  for (std::size_t j = 0; j < p.n_bins; ++j) {
    std::uint64_t d = 0;
    std::uint64_t a = 0;
    std::uint64_t direct = 0;
    if (has_burst(rng)) {
      std::tie(d, a) = detail::draw_burst(p, rng, truth[j]);
      if (truth[j].species == Species::Fret) direct = detail::draw_poisson(acceptor_brightness, rng);
      truth[j].acceptor_excited = direct;
    }
    dd[j] = static_cast<double>(d + detail::draw_poisson(p.background_d, rng));
    ad[j] = static_cast<double>(a + detail::draw_poisson(p.background_a, rng));
    da[j] = static_cast<double>(detail::draw_poisson(p.background_d, rng));
    aa[j] = static_cast<double>(direct + detail::draw_poisson(p.background_a, rng));
  }
  return {AlexTrace(std::move(dd), std::move(da), std::move(ad), std::move(aa), 1.0),
          std::move(truth)};
}

}  // namespace smfret

#endif  // SMFRET_SIMULATE_HPP
