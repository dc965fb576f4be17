#ifndef SMFRET_FIT_HPP
#define SMFRET_FIT_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "smfret/efficiency.hpp"
#include "smfret/error.hpp"
#include "smfret/histogram.hpp"

namespace smfret {

/// Stopping rule shared by the damped least-squares fitters.
struct FitOptions {
  double relative_tolerance = 1e-8;
  int max_iterations = 500;
  double initial_damping = 1e-3;
  double damping_factor = 10.0;
};

/// Gaussian parameters in the order (amplitude, mean, sigma).
using GaussianParams = std::array<double, 3>;

/// Residuals count_k - a exp(-(c_k - mu)^2 / (2 sigma^2)).
inline std::vector<double> gaussian_residuals(std::span<const double> centers,
                                              std::span<const double> counts,
                                              const GaussianParams& p) {
  std::vector<double> r(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double z = (centers[k] - p[1]) / p[2];
    r[k] = counts[k] - p[0] * std::exp(-0.5 * z * z);
  }
  return r;
}

/// Analytic Jacobian of gaussian_residuals, one row per bin.
inline std::vector<GaussianParams> gaussian_residual_jacobian(std::span<const double> centers,
                                                              const GaussianParams& p) {
  std::vector<GaussianParams> jac(centers.size());
  const double a = p[0];
  const double mu = p[1];
  const double s = p[2];
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double dx = centers[k] - mu;
    const double g = std::exp(-0.5 * dx * dx / (s * s));
    jac[k] = {-g, -a * g * dx / (s * s), -a * g * dx * dx / (s * s * s)};
  }
  return jac;
}

namespace detail {

inline double sum_of_squares(std::span<const double> r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

// Solves the small dense system A x = b by Gaussian elimination with partial
// pivoting. Returns false when A is numerically singular.
template <std::size_t N>
bool solve_dense(std::array<std::array<double, N>, N> a, std::array<double, N> b,
                 std::array<double, N>& x) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < N; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (!(std::abs(a[pivot][col]) > std::numeric_limits<double>::min())) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < N; ++row) {
      const double f = a[row][col] / a[col][col];
      for (std::size_t c = col; c < N; ++c) a[row][c] -= f * a[col][c];
      b[row] -= f * b[col];
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return true;
}

// Moment-based starting point: modal bin centre, weighted spread, peak height.
inline GaussianParams gaussian_initial_guess(std::span<const double> centers,
                                             std::span<const double> counts, double bin_width) {
  std::size_t mode = 0;
  double total = 0.0;
  double weighted = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] > counts[mode]) mode = k;
    total += counts[k];
    weighted += counts[k] * centers[k];
  }
  const double mean = weighted / total;
  double var = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    var += counts[k] * (centers[k] - mean) * (centers[k] - mean);
  }
  const double sigma = std::max(std::sqrt(var / total), bin_width);
  return {counts[mode], centers[mode], sigma};
}

}  // namespace detail

namespace detail {

// Starting points at the highest local maxima, widths from the half-maximum
// extent around each peak.
inline std::vector<GaussianParams> gaussian_peak_guesses(std::span<const double> centers,
                                                         std::span<const double> counts,
                                                         double bin_width, std::size_t limit) {
  const std::size_t n = counts.size();
  std::vector<std::size_t> peaks;
  for (std::size_t k = 0; k < n; ++k) {
    const bool left = k == 0 || counts[k] > counts[k - 1];
    const bool right = k + 1 == n || counts[k] >= counts[k + 1];
    if (counts[k] > 0.0 && left && right) peaks.push_back(k);
  }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  if (peaks.size() > limit) peaks.resize(limit);

  std::vector<GaussianParams> guesses;
  for (std::size_t k : peaks) {
    std::size_t lo = k, hi = k;
    while (lo > 0 && counts[lo - 1] > counts[k] / 2) --lo;
    while (hi + 1 < n && counts[hi + 1] > counts[k] / 2) ++hi;
    const double fwhm = static_cast<double>(hi - lo + 1) * bin_width;
    guesses.push_back({counts[k], centers[k], std::max(fwhm / 2.3548, bin_width)});
  }
  return guesses;
}

struct LmRun {
  GaussianParams p{};
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline LmRun gaussian_lm(std::span<const double> centers, std::span<const double> counts,
                         double bin_width, GaussianParams p, const FitOptions& opt) {
  const std::size_t n = centers.size();
  double sse = sum_of_squares(gaussian_residuals(centers, counts, p));
  double lambda = opt.initial_damping;
  bool converged = false;
  int iter = 0;

  while (iter < opt.max_iterations) {
    ++iter;
    const auto r = gaussian_residuals(centers, counts, p);
    const auto jac = gaussian_residual_jacobian(centers, p);
    std::array<std::array<double, 3>, 3> jtj{};
    std::array<double, 3> jtr{};
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < 3; ++i) {
        jtr[i] += jac[k][i] * r[k];
        for (std::size_t j = 0; j < 3; ++j) jtj[i][j] += jac[k][i] * jac[k][j];
      }
    }
    auto damped = jtj;
    std::array<double, 3> rhs{};
    for (std::size_t i = 0; i < 3; ++i) {
      damped[i][i] += lambda * (jtj[i][i] > 0.0 ? jtj[i][i] : 1.0);
      rhs[i] = -jtr[i];
    }
    std::array<double, 3> step{};
    if (!solve_dense(damped, rhs, step)) {
      lambda *= opt.damping_factor;
      continue;
    }

    double rel = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      rel = std::max(rel, std::abs(step[i]) / std::max(std::abs(p[i]), bin_width));
    }

    const GaussianParams trial{p[0] + step[0], p[1] + step[1], p[2] + step[2]};
    const double trial_sse = trial[2] != 0.0
                                 ? sum_of_squares(gaussian_residuals(centers, counts, trial))
                                 : std::numeric_limits<double>::infinity();
    if (std::isfinite(trial_sse) && trial_sse <= sse) {
      p = trial;
      sse = trial_sse;
      lambda = std::max(lambda / opt.damping_factor, 1e-12);
    } else {
      lambda *= opt.damping_factor;
    }
    if (rel < opt.relative_tolerance) {
      converged = true;
      break;
    }
  }
  return {p, sse, iter, converged};
}

}  // namespace detail

/// Fits a * exp(-(x - mu)^2 / (2 sigma^2)) to (centre, count) pairs by
/// Levenberg-Marquardt with an analytic Jacobian and multiplicative damping.
///
/// LM runs from the moment estimate and from the three highest local peaks.
/// The lowest residual among converged runs that stay bounded (|mu - midpoint|
/// and sigma within the binned span) wins. If every run ran away or hit the
/// iteration cap, the best of those is returned with `converged` cleared. Counts may be
/// fractional. Sigma is returned non-negative and floored at bin_width / 10
/// (which also clears `converged`).
inline GaussianFit fit_gaussian(std::span<const double> centers, std::span<const double> counts,
                                double bin_width, const FitOptions& opt = {}) {
  const std::size_t n = centers.size();
  if (counts.size() != n) {
    throw Error(ErrorKind::LengthMismatch, "centers and counts differ in length");
  }
  std::size_t nonzero = 0;
  double total = 0.0;
  for (double c : counts) {
    if (!(c >= 0.0)) throw Error(ErrorKind::NegativeCount, "bin counts must be >= 0");
    if (c > 0.0) ++nonzero;
    total += c;
  }
  if (nonzero < 3) {
    throw Error(ErrorKind::DegenerateData,
                "need at least 3 non-empty bins, have " + std::to_string(nonzero));
  }
  if (total < 10.0) {
    throw Error(ErrorKind::DegenerateData,
                "need at least 10 in-range values, have " + std::to_string(total));
  }

  std::vector<GaussianParams> starts{detail::gaussian_initial_guess(centers, counts, bin_width)};
  for (const auto& g : detail::gaussian_peak_guesses(centers, counts, bin_width, 3)) {
    starts.push_back(g);
  }

  const double span = centers[n - 1] - centers[0] + bin_width;
  const double mid = 0.5 * (centers[0] + centers[n - 1]);
  auto bounded = [&](const detail::LmRun& r) {
    return std::abs(r.p[1] - mid) <= span && std::abs(r.p[2]) <= span;
  };
  // Converged and bounded beats bounded beats anything; then lowest residual.
  auto tier = [&](const detail::LmRun& r) { return bounded(r) ? (r.converged ? 2 : 1) : 0; };
  detail::LmRun best;
  int best_tier = -1;
  for (const auto& start : starts) {
    const detail::LmRun run = detail::gaussian_lm(centers, counts, bin_width, start, opt);
    const int t = tier(run);
    if (t > best_tier || (t == best_tier && run.sse < best.sse)) {
      best = run;
      best_tier = t;
    }
  }

  GaussianFit fit;
  fit.amplitude = best.p[0];
  fit.mean = best.p[1];
  fit.sigma = std::abs(best.p[2]);
  fit.iterations = best.iterations;
  fit.converged = best_tier == 2;
  if (fit.sigma < bin_width / 10.0) {
    fit.sigma = bin_width / 10.0;
    fit.converged = false;
  }
  fit.residual_sse = detail::sum_of_squares(
      gaussian_residuals(centers, counts, {fit.amplitude, fit.mean, fit.sigma}));
  return fit;
}

/// Single-Gaussian fit of a histogram's counts at its bin centres.
inline GaussianFit fit_gaussian(const EfficiencyHistogram& hist, const FitOptions& opt = {}) {
  std::vector<double> centers(hist.size());
  std::vector<double> counts(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) {
    centers[k] = hist.bin_center(k);
    counts[k] = static_cast<double>(hist.counts()[k]);
  }
  return fit_gaussian(centers, counts, hist.bin_width(), opt);
}

/// Förster distance fitted to measured (separation, efficiency) pairs.
struct ForsterFit {
  double r0 = 0.0;
  double residual_sse = 0.0;
  int iterations = 0;
  bool converged = false;

  double operator()(double r) const { return forster_efficiency(r, r0); }
};

struct DistancePoint {
  double r = 0.0;
  double efficiency = 0.0;
};

/// Least-squares Förster distance for efficiency-versus-separation data.
///
/// The search runs over u = ln R0 (R0 updated multiplicatively), so R0 stays
/// positive and the result scales exactly with the separations.
inline ForsterFit fit_forster_curve(std::span<const DistancePoint> points,
                                    FitOptions opt = {1e-12, 500, 1e-3, 10.0}) {
  if (points.empty()) throw Error(ErrorKind::EmptyInput, "no (r, E) points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].r > 0.0) || !std::isfinite(points[i].r)) {
      throw Error(ErrorKind::NonPositiveDistance,
                  "point " + std::to_string(i) + " has non-positive separation");
    }
    if (!(points[i].efficiency > 0.0 && points[i].efficiency < 1.0)) {
      throw Error(ErrorKind::OutOfDomainPoint, "point " + std::to_string(i) +
                                                   " has efficiency outside (0,1): " +
                                                   std::to_string(points[i].efficiency));
    }
  }

  std::size_t nearest = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (std::abs(points[i].efficiency - 0.5) < std::abs(points[nearest].efficiency - 0.5)) {
      nearest = i;
    }
  }
  double r0 = points[nearest].r;
  if (!(points[nearest].efficiency > 0.2 && points[nearest].efficiency < 0.8)) {
    double log_sum = 0.0;
    for (const auto& pt : points) log_sum += std::log(pt.r);
    r0 = std::exp(log_sum / static_cast<double>(points.size()));
  }

  // Residual E_i - 1/(1+x_i), x_i = (r_i/R0)^6; d/du of the residual is -6 x/(1+x)^2.
  auto evaluate = [&](double radius, double* jtj, double* jtr) {
    double sse = 0.0;
    for (const auto& pt : points) {
      const double q = pt.r / radius;
      const double q2 = q * q;
      const double x = q2 * q2 * q2;
      const double model = 1.0 / (1.0 + x);
      const double res = pt.efficiency - model;
      sse += res * res;
      if (jtj != nullptr) {
        const double j = -6.0 * x * model * model;
        *jtj += j * j;
        *jtr += j * res;
      }
    }
    return sse;
  };

  double sse = evaluate(r0, nullptr, nullptr);
  double lambda = opt.initial_damping;
  bool converged = false;
  int iter = 0;
  while (iter < opt.max_iterations) {
    ++iter;
    double jtj = 0.0;
    double jtr = 0.0;
    evaluate(r0, &jtj, &jtr);
    if (jtr == 0.0) {
      converged = true;
      break;
    }
    const double step = -jtr / (jtj + lambda * (jtj > 0.0 ? jtj : 1.0));
    const double trial = r0 * std::exp(step);
    const double trial_sse = evaluate(trial, nullptr, nullptr);
    if (std::isfinite(trial_sse) && trial_sse <= sse) {
      r0 = trial;
      sse = trial_sse;
      lambda = std::max(lambda / opt.damping_factor, 1e-12);
    } else {
      lambda *= opt.damping_factor;
    }
    if (std::abs(step) < opt.relative_tolerance) {
      converged = true;
      break;
    }
  }
  return {r0, sse, iter, converged};
}

}  // namespace smfret

#endif  // SMFRET_FIT_HPP
