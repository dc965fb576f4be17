// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smfret/cli.hpp"
#include "smfret/smfret.hpp"

namespace fs = std::filesystem;
using namespace smfret;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(SMFRET_TEST_TMP) / "acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& body) {
  std::ofstream(p, std::ios::binary) << body;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double summary_number(const fs::path& summary, const std::string& key) {
  std::istringstream in(read_text(summary));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
  }
  return std::nan("");
}

SimParams desk_params(std::uint64_t seed) {
  SimParams p;
  p.n_bins = 50000;
  p.burst_rate = 0.05;
  p.burst_intensity_mean = 60;
  p.true_E = 0.75;
  p.background_d = 0.3;
  p.background_a = 0.2;
  p.cross_DtoA = 0.05;
  p.cross_AtoD = 0.01;
  p.gamma = 1.0;
  p.seed = seed;
  return p;
}

RunConfig desk_config() {
  RunConfig cfg;
  cfg.auto_donor = 0.3;
  cfg.auto_acceptor = 0.2;
  cfg.t_donor = 15;
  cfg.t_acceptor = 15;
  cfg.cross_DtoA = 0.05;
  cfg.cross_AtoD = 0.01;
  cfg.gamma = 1.0;
  cfg.bin_min = 0.0;
  cfg.bin_max = 1.0;
  cfg.bin_width = 0.02;
  return cfg;
}

void criterion_1() {
  const fs::path dir = scratch("recovery");
  write_text(dir / "run.conf",
             "auto_donor = 0.3\nauto_acceptor = 0.2\nt_donor = 15\nt_acceptor = 15\n"
             "cross_DtoA = 0.05\ncross_AtoD = 0.01\ngamma = 1.0\nbin_min = 0\nbin_max = 1\n"
             "bin_width = 0.02\ninput_files = trace.csv\n");
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double worst = 0;
  std::ostringstream sink;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    write_trace_csv(simulate_fret_trace(desk_params(seed)).trace, dir / "trace.csv");
    const fs::path out = dir / ("seed" + std::to_string(seed));
    const int code = cli::cmd_analyze(dir / "run.conf", {out, std::nullopt}, sink, sink);
    const double mu = summary_number(out / "summary.txt", "mean");
    if (code != 0 || !(std::abs(mu - 0.75) <= 0.02)) ok = false;
    if (std::isfinite(mu)) worst = std::max(worst, std::abs(mu - 0.75));
    else worst = INFINITY;
    std::printf("    seed %2llu: exit %d, fitted mean %.6f\n", static_cast<unsigned long long>(seed),
                code, mu);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  verdict(1, ok && secs < 5.0,
          fmt("max |mean - 0.75| = %.4f (tol 0.02) over 10 seeds; runtime %.2f s (limit 5 s)", worst,
              secs));
}

void criterion_2() {
  const std::vector<double> rs{4, 6, 8, 10, 12};
  std::vector<DistancePoint> clean;
  for (double r : rs) clean.push_back({r, forster_efficiency(r, 5.0)});
  const ForsterFit exact = fit_forster_curve(clean);
  const bool noiseless = std::abs(exact.r0 - 5.0) <= 1e-6;

  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::mt19937_64 rng(1000 + trial);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<DistancePoint> pts;
    for (double r : rs) {
      const double e = forster_efficiency(r, 5.0) + noise(rng);
      // The model cannot produce E outside (0, 1); such readings are discarded.
      if (e > 0.0 && e < 1.0) pts.push_back({r, e});
    }
    const ForsterFit fit = fit_forster_curve(pts);
    if (std::abs(fit.r0 - 5.0) <= 0.05 * 5.0) ++within;
  }

  bool decreasing = true;
  double prev = exact(3.0);
  for (int k = 1; k <= 1000; ++k) {
    const double e = exact(3.0 + 10.0 * k / 1000.0);
    if (!(e < prev)) decreasing = false;
    prev = e;
  }
  const bool shape = decreasing && exact(4) > 0.5 && exact(12) < 0.5 && exact.r0 > 4 &&
                     exact.r0 < 12;
  verdict(2, noiseless && within >= 95 && shape,
          fmt("noiseless R0 error %.2e (tol 1e-6); %.0f/100 noisy trials within 5%% (need 95)",
              std::abs(exact.r0 - 5.0), within) +
              (shape ? "; curve strictly decreasing, E(4) > 0.5 > E(12)" : "; curve shape wrong"));
}

void criterion_3() {
  std::vector<double> centers, counts;
  for (int k = 0; k < 50; ++k) {
    const double c = 0.01 + 0.02 * k;
    centers.push_back(c);
    counts.push_back(100.0 * std::exp(-0.5 * std::pow((c - 0.5) / 0.1, 2)));
  }
  const GaussianFit fit = fit_gaussian(centers, counts, 0.02);
  const double rel = std::max({std::abs(fit.amplitude - 100) / 100, std::abs(fit.mean - 0.5) / 0.5,
                               std::abs(fit.sigma - 0.1) / 0.1});

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(5.0, 500.0), mean(0.05, 0.95), sig(0.02, 0.3);
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianParams p{amp(rng), mean(rng), sig(rng)};
    const auto jac = gaussian_residual_jacobian(centers, p);
    for (std::size_t i = 0; i < 3; ++i) {
      GaussianParams up = p, down = p;
      const double h = 1e-6 * std::max(1.0, std::abs(p[i]));
      up[i] += h;
      down[i] -= h;
      const auto ru = gaussian_residuals(centers, counts, up);
      const auto rd = gaussian_residuals(centers, counts, down);
      double scale = 0;
      for (const auto& row : jac) scale = std::max(scale, std::abs(row[i]));
      for (std::size_t k = 0; k < centers.size(); ++k) {
        const double fd = (ru[k] - rd[k]) / (2 * h);
        worst = std::max(worst, std::abs(fd - jac[k][i]) / std::max(std::abs(jac[k][i]), scale));
      }
    }
  }
  verdict(3, rel <= 1e-3 && worst <= 1e-5,
          fmt("max parameter relative error %.2e (tol 1e-3); Jacobian max relative deviation %.2e "
              "(tol 1e-5)",
              rel, worst));
}

void criterion_4() {
  constexpr int kCases = 1000;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto count = [&] { return std::floor(unit(rng) * 200.0); };
  std::vector<std::string> broken;

  for (int i = 0; i < kCases; ++i) {
    const double a = count(), d = count() + 1, g = 0.1 + 5 * unit(rng);
    const double e = fret_efficiency(a, d, g);
    if (!(e >= 0 && e <= 1) || fret_efficiency(a + 1, d, g) < e || fret_efficiency(a, d + 1, g) > e) {
      broken.push_back("efficiency bounds/monotonicity");
      break;
    }
  }
  for (int i = 0; i < kCases; ++i) {
    const double r0 = 0.5 + 20 * unit(rng), r = 0.1 + 30 * unit(rng);
    if (std::abs(forster_efficiency(r0, r0) - 0.5) > 1e-12 ||
        !(forster_efficiency(r * 1.01, r0) < forster_efficiency(r, r0))) {
      broken.push_back("Forster midpoint/decrease");
      break;
    }
  }
  for (int i = 0; i < kCases; ++i) {
    std::vector<double> d(40), a(40);
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] = std::floor(unit(rng) * 40);
      a[k] = std::floor(unit(rng) * 40);
    }
    const FretTrace t(d, a, 1.0);
    const double td = unit(rng) * 30, ta = unit(rng) * 30;
    const auto both = threshold_and(t, td, ta);
    const auto either = threshold_or(t, td, ta);
    const auto sum = threshold_sum(t, td + ta);
    const auto stricter = threshold_and(t, td + 5, ta + 5);
    auto subset = [](const auto& small, const auto& big) {
      std::size_t j = 0;
      for (const auto& b : small) {
        while (j < big.size() && big[j].source_bin_index < b.source_bin_index) ++j;
        if (j == big.size() || big[j].source_bin_index != b.source_bin_index) return false;
      }
      return true;
    };
    if (!subset(both, either) || !subset(both, sum) || !subset(stricter, both)) {
      broken.push_back("threshold monotonicity / AND subset relations");
      break;
    }
  }
  for (int i = 0; i < kCases; ++i) {
    std::vector<double> v(1 + static_cast<std::size_t>(unit(rng) * 300));
    for (double& x : v) x = -0.3 + 1.6 * unit(rng);
    const auto h = build_histogram(v, 0.0, 1.0, 0.02);
    std::size_t in = 0;
    for (double x : v) in += (x >= 0.0 && x <= 1.0);
    std::uint64_t total = 0;
    for (auto c : h.counts()) total += c;
    if (total != in || h.n_in_range() != in || h.n_total() != v.size()) {
      broken.push_back("histogram conservation");
      break;
    }
  }
  for (int i = 0; i < kCases; ++i) {
    std::vector<double> d(30), a(30);
    for (std::size_t k = 0; k < d.size(); ++k) {
      d[k] = std::floor(unit(rng) * 30);
      a[k] = std::floor(unit(rng) * 30);
    }
    const FretTrace t = subtract_background(FretTrace(d, a, 1.0), 5 * unit(rng), 5 * unit(rng));
    const auto bursts = subtract_crosstalk(threshold_or(t, 1, 1), 0.99 * unit(rng), 0.99 * unit(rng));
    bool ok = true;
    for (double x : t.donor()) ok = ok && x >= 0;
    for (double x : t.acceptor()) ok = ok && x >= 0;
    for (const auto& b : bursts) ok = ok && b.donor_counts >= 0 && b.acceptor_counts >= 0;
    const auto raw = threshold_or(t, 1, 1);
    const auto same = subtract_crosstalk(raw, 0.0, 0.0);
    for (std::size_t k = 0; k < raw.size(); ++k) ok = ok && same[k] == raw[k];
    if (!ok) {
      broken.push_back("clamp non-negativity / crosstalk-zero identity");
      break;
    }
  }
  std::string detail = std::to_string(kCases) + " cases each for 6 property families";
  for (const auto& b : broken) detail += "; violated: " + b;
  verdict(4, broken.empty(), detail);
}

void criterion_5() {
  const fs::path dir = scratch("io");
  bool ok = true;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> cnt(0, 500);
  for (int i = 0; i < 50 && ok; ++i) {
    std::vector<double> dd(64), da(64), ad(64), aa(64);
    for (std::size_t k = 0; k < 64; ++k) {
      dd[k] = cnt(rng);
      da[k] = cnt(rng);
      ad[k] = cnt(rng);
      aa[k] = cnt(rng);
    }
    write_trace_csv(FretTrace(dd, ad, 1.0), dir / "f.csv");
    write_trace_csv(AlexTrace(dd, da, ad, aa, 1.0), dir / "a.csv");
    const auto f = std::get<FretTrace>(parse_csv(dir, std::vector<std::string>{"f.csv"}, Mode::Fret));
    const auto a = std::get<AlexTrace>(parse_csv(dir, std::vector<std::string>{"a.csv"}, Mode::Alex));
    ok = std::equal(f.donor().begin(), f.donor().end(), dd.begin()) &&
         std::equal(f.acceptor().begin(), f.acceptor().end(), ad.begin()) &&
         std::equal(a.d_a().begin(), a.d_a().end(), da.begin()) &&
         std::equal(a.a_a().begin(), a.a_a().end(), aa.begin());
  }

  // Every CLI output, twice.
  std::ostringstream sink;
  SimParams p = desk_params(3);
  p.n_bins = 5000;
  write_trace_csv(simulate_fret_trace(p).trace, dir / "trace.csv");
  p.donor_only_fraction = 0.3;
  write_trace_csv(simulate_alex_trace(p, 40).trace, dir / "alex.csv");
  write_text(dir / "fret.conf", "auto_donor = 0.3\nauto_acceptor = 0.2\nt_donor = 15\n"
                                "t_acceptor = 15\ninput_files = trace.csv\n");
  write_text(dir / "alex.conf", "auto_donor = 0.3\nauto_acceptor = 0.2\nt_donor = 30\n"
                                "t_acceptor = 15\nmode = alex\ninput_files = alex.csv\n");
  write_text(dir / "sim.conf", "n_bins = 2000\nseed = 42\nmode = alex\n");
  write_text(dir / "points.csv", "4,0.8\n6,0.25\n8,0.06\n10,0.02\n");
  bool identical = true;
  for (const char* run : {"r1", "r2"}) {
    const cli::Overrides ov{dir / run, std::nullopt};
    identical = identical && cli::cmd_analyze(dir / "fret.conf", {dir / run / "fret", std::nullopt}, sink, sink) == 0 &&
                cli::cmd_analyze_alex(dir / "alex.conf", {dir / run / "alex", std::nullopt}, sink, sink) == 0 &&
                cli::cmd_simulate(dir / "sim.conf", {dir / run / "sim", std::nullopt}, sink, sink) == 0 &&
                cli::cmd_forster(dir / "points.csv", ov.output_dir.value() / "forster", sink, sink) == 0;
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir / "r1")) {
    if (!entry.is_regular_file()) continue;
    const fs::path twin = dir / "r2" / fs::relative(entry.path(), dir / "r1");
    identical = identical && read_text(entry.path()) == read_text(twin);
    ++compared;
  }

  auto rejected = [&](const std::string& file, Mode mode, ErrorKind kind, const std::string& where) {
    try {
      parse_csv(dir, std::vector<std::string>{file}, mode);
    } catch (const Error& e) {
      return e.kind() == kind && std::string(e.what()).find(where) != std::string::npos;
    }
    return false;
  };
  write_text(dir / "two.csv", "donor,acceptor\n1,2\n3,4\n");
  write_text(dir / "four.csv", "1,2,3,4\n5,6,7,8\n");
  const bool mixed = rejected("two.csv", Mode::Alex, ErrorKind::MixedMode, "two.csv:2") &&
                     rejected("four.csv", Mode::Fret, ErrorKind::MixedMode, "four.csv:1");

  verdict(5, ok && identical && compared >= 10 && mixed,
          std::string(ok ? "integer round trip exact" : "round trip mismatch") + "; " +
              std::to_string(compared) + " output files " +
              (identical ? "byte-identical" : "DIFFER") + " across reruns; mode mismatches " +
              (mixed ? "rejected with file:line" : "NOT rejected correctly"));
}

void criterion_6() {
  bool ok = true;
  double worst_alex = 0, least_shift = INFINITY;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimParams p = desk_params(seed);
    p.donor_only_fraction = 0.3;
    const SimulatedAlex sim = simulate_alex_trace(p, 40.0);

    RunConfig alex = desk_config();
    alex.mode = Mode::Alex;
    alex.threshold_mode = ThresholdMode::Alex;
    alex.t_donor = 30;  // donor-excitation sum
    alex.t_acceptor = 15;  // acceptor-excitation channel
    const auto ra = analyze_alex(sim.trace, alex);

    RunConfig plain = desk_config();
    plain.threshold_mode = ThresholdMode::Sum;
    plain.t_sum = 30;
    const auto rp = analyze_fret(sim.trace.donor_excitation(), plain);

    const double mu_alex = ra.fit() ? ra.fit()->mean : std::nan("");
    const double mu_plain = rp.fit() ? rp.fit()->mean : std::nan("");
    const double shift = 0.75 - mu_plain;
    double average = 0;
    for (double e : rp.efficiencies.values) average += e;
    average /= static_cast<double>(rp.efficiencies.values.size());
    std::printf("    seed %2llu: ALEX fit mean %.6f (%zu bursts); plain fit mean %.6f, plain "
                "arithmetic mean %.4f (%zu bursts)\n",
                static_cast<unsigned long long>(seed), mu_alex, ra.bursts.size(), mu_plain, average,
                rp.bursts.size());
    if (!(std::abs(mu_alex - 0.75) <= 0.03) || !(shift >= 0.03)) ok = false;
    worst_alex = std::max(worst_alex, std::isfinite(mu_alex) ? std::abs(mu_alex - 0.75) : INFINITY);
    least_shift = std::min(least_shift, std::isfinite(shift) ? shift : -INFINITY);
  }
  verdict(6, ok,
          fmt("ALEX max |mean - 0.75| = %.4f (tol 0.03); plain analysis smallest low shift %.4f "
              "(need >= 0.03)",
              worst_alex, least_shift));
}

}  // namespace

int main() {
  const std::pair<int, void (*)()> checks[] = {{1, criterion_1}, {2, criterion_2}, {3, criterion_3},
                                               {4, criterion_4}, {5, criterion_5}, {6, criterion_6}};
  for (const auto& [id, run] : checks) {
    try {
      run();
    } catch (const std::exception& e) {
      verdict(id, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of 6 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
