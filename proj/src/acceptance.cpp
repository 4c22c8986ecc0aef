#include "factoria/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "factoria/analysis.hpp"
#include "factoria/sampler.hpp"

namespace factoria {

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool closer_to(double target, double later, double earlier) {
  return std::fabs(later - target) < std::fabs(earlier - target);
}

// Expensive intermediates shared between criteria.
class Workspace {
 public:
  const SpectralConstants& constants(const FactorSetSpec& spec) {
    const auto key = spec.to_string();
    auto it = constants_.find(key);
    if (it == constants_.end()) {
      it = constants_.emplace(key, spectral_constants(spec, PrecisionContext::with_digits(30))).first;
    }
    return it->second;
  }

  const ExactPass& pass(const FactorSetSpec& spec, std::uint64_t N) {
    const auto key = std::make_pair(spec.to_string(), N);
    auto it = passes_.find(key);
    if (it == passes_.end()) {
      it = passes_.emplace(key, exact_pass(spec, N, constants(spec).mu_d(), 4)).first;
    }
    return it->second;
  }

  const DistributionSummary& summary(const FactorSetSpec& spec, std::uint64_t N) {
    const auto key = std::make_pair(spec.to_string(), N);
    auto it = summaries_.find(key);
    if (it == summaries_.end()) {
      it = summaries_.emplace(key, summarize_distribution(pass(spec, N).layers, constants(spec), 4))
               .first;
    }
    return it->second;
  }

 private:
  std::map<std::string, SpectralConstants> constants_;
  std::map<std::pair<std::string, std::uint64_t>, ExactPass> passes_;
  std::map<std::pair<std::string, std::uint64_t>, DistributionSummary> summaries_;
};

struct Verdict {
  bool passed;
  std::string detail;
};

constexpr std::uint64_t kDecades[] = {10'000, 100'000, 1'000'000};

bool matches_reference(const Real& value, const char* reference, int digits) {
  const Real ref(reference);
  return abs(value - ref) <= abs(ref) * pow(Real(10), -digits);
}

Verdict c1_primes_constants(Workspace&) {
  const auto start = std::chrono::steady_clock::now();
  const auto ctx = PrecisionContext::with_digits(30);
  PrecisionGuard guard(ctx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::primes(), ctx);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = matches_reference(c.rho.value, "1.399433328726330318202807214745644", 20) &&
                  matches_reference(c.mu.value, "0.5776486251951380544061351937928", 20) &&
                  matches_reference(c.sigma2.value, "0.484396504513598281280745600849", 20) &&
                  c.certified_digits() >= 20 && secs < 60;
  return {ok, "rho=" + to_decimal(c.rho.value, 22) + " mu=" + to_decimal(c.mu.value, 22) +
                  " sigma2=" + to_decimal(c.sigma2.value, 22) + " certified=" +
                  std::to_string(c.certified_digits()) + fmt(" runtime=%.2fs", secs)};
}

Verdict c2_kalmar_root(Workspace&) {
  const auto ctx = PrecisionContext::with_digits(30);
  PrecisionGuard guard(ctx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::all_integers(), ctx);
  const auto z = zeta(c.rho.value, ctx, 0);
  const Real gap = abs(z.value - 2);
  const bool ok = abs(round(c.rho.value * 10000) - 17286) == 0 && gap < Real("1e-20");
  return {ok, "rho=" + to_decimal(c.rho.value, 20) + " |zeta(rho)-2|=" + to_decimal(gap, 3)};
}

Verdict c3_totient_root(Workspace&) {
  const auto ctx = PrecisionContext::with_digits(30);
  PrecisionGuard guard(ctx.working_digits);
  const auto rho = solve_rho(FactorSetSpec::totient(), ctx);
  const auto p = eval_P(FactorSetSpec::totient(), rho.value, ctx);
  const bool ok = abs(rho.value - Real("2.26386")) <= Real("1e-4") && p.error_radius < Real("1e-8");
  return {ok, "rho=" + to_decimal(rho.value, 12) + " tail bound=" + to_decimal(p.error_radius, 3) +
                  " product over p <= " +
                  std::to_string(totient_euler_bound(rho.value, ctx))};
}

Verdict c4_counting_oracle(Workspace&) {
  const FactorSetSpec specs[] = {FactorSetSpec::all_integers(), FactorSetSpec::primes(),
                                 FactorSetSpec::square_free(), FactorSetSpec::powers_of(2),
                                 FactorSetSpec::totient(), FactorSetSpec::explicit_set({2, 3})};
  std::ostringstream detail;
  bool ok = true;
  for (const auto& spec : specs) {
    const auto counts = count_a(spec, 2000);
    std::uint64_t mismatches = 0;
    for (std::uint64_t n = 1; n <= 2000; ++n) {
      if (counts.a[n] != brute_force_count(spec, n)) ++mismatches;
    }
    for (std::uint64_t N : {1'000ull, 10'000ull, 100'000ull}) {
      if (floor_lattice(spec, N).at(N) != count_a(spec, N).A_N) ++mismatches;
    }
    ok = ok && mismatches == 0;
    detail << spec.to_string() << ":" << mismatches << " ";
  }
  return {ok, "mismatches " + detail.str()};
}

Verdict c5_uniform_law(Workspace&) {
  int checked = 0, good = 0;
  for (std::uint64_t d : {2, 3, 5}) {
    for (std::uint64_t N : {100, 1'000, 10'000}) {
      ++checked;
      good += uniform_case_check(d, N) ? 1 : 0;
    }
  }
  return {good == checked, std::to_string(good) + "/" + std::to_string(checked) + " exact"};
}

Verdict c6_tauberian(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  const auto& c = ws.constants(spec);
  double r[3];
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    r[i] = tauberian_ratio(ws.pass(spec, kDecades[i]).layers.A_N, kDecades[i], c);
    ok = ok && r[i] >= 0.7 && r[i] <= 1.3;
  }
  ok = ok && closer_to(1, r[2], r[0]);
  return {ok, fmt("ratios %.5f", r[0]) + fmt(" %.5f", r[1]) + fmt(" %.5f", r[2])};
}

Verdict c7_mean_variance(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  const auto& c = ws.constants(spec);
  auto ratios = [&](std::uint64_t N) {
    const auto& d = ws.summary(spec, N);
    const double log_n = std::log(static_cast<double>(N));
    return std::make_pair(d.mean / (c.mu_d() * log_n), d.variance / (c.sigma2_d() * log_n));
  };
  const auto [m4, v4] = ratios(10'000);
  const auto [m6, v6] = ratios(1'000'000);
  const bool ok = m6 >= 0.75 && m6 <= 1.25 && v6 >= 0.6 && v6 <= 1.4 && closer_to(1, m6, m4) &&
                  closer_to(1, v6, v4);
  return {ok, fmt("mean ratio %.4f", m4) + fmt(" -> %.4f", m6) + fmt(", variance ratio %.4f", v4) +
                  fmt(" -> %.4f", v6)};
}

Verdict c8_delange_moments(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  const auto& c = ws.constants(spec);
  double k2[3], k1[3], k3[3];
  for (int i = 0; i < 3; ++i) {
    const auto reports = moment_reports(ws.pass(spec, kDecades[i]), c, Centering::MuLogn);
    k1[i] = std::fabs(reports[1].normalized);
    k2[i] = reports[2].ratio;
    k3[i] = std::fabs(reports[3].normalized);
  }
  bool ok = k2[2] >= 0.5 && k2[2] <= 2.0;
  for (int i = 1; i < 3; ++i) {
    ok = ok && closer_to(1, k2[i], k2[i - 1]) && k1[i] < k1[i - 1] && k3[i] < k3[i - 1];
  }
  return {ok, fmt("k=2 ratios %.4f", k2[0]) + fmt(" %.4f", k2[1]) + fmt(" %.4f", k2[2]) +
                  fmt("; |k=1| %.4f", k1[0]) + fmt(" %.4f", k1[1]) + fmt(" %.4f", k1[2]) +
                  fmt("; |k=3| %.4f", k3[0]) + fmt(" %.4f", k3[1]) + fmt(" %.4f", k3[2])};
}

Verdict c9_binomial_identity(Workspace& ws) {
  double worst = 0;
  for (const auto& spec : {FactorSetSpec::all_integers(), FactorSetSpec::primes()}) {
    const auto& pass = ws.pass(spec, 100'000);
    for (int k = 0; k <= 4; ++k) worst = std::max(worst, binomial_identity(pass, k).relative_error);
  }
  return {worst <= 1e-9, fmt("worst relative error %.3e", worst)};
}

Verdict c10_gaussian_targets(Workspace& ws) {
  const bool targets = gaussian_moment(2) == 1 && gaussian_moment(4) == 3 && gaussian_moment(6) == 15;
  const auto spec = FactorSetSpec::all_integers();
  const double m4 = ws.summary(spec, 10'000).standardized_limit[4];
  const double m6 = ws.summary(spec, 1'000'000).standardized_limit[4];
  const bool ok = targets && m6 >= 1.5 && m6 <= 4.5 && closer_to(3, m6, m4);
  return {ok, std::string(targets ? "targets 1,3,15" : "targets wrong") +
                  fmt("; standardized 4th moment %.4f", m4) + fmt(" -> %.4f", m6)};
}

Verdict c11_sampler(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  long double worst = 0;
  bool complete = true;
  for (std::uint64_t N = 1; N <= 30; ++N) {
    Sampler s(spec, N);
    const long double uniform = 1.0L / static_cast<long double>(s.lattice().at(N));
    u128 seen = 0;
    for (std::uint64_t n = 1; n <= N; ++n) {
      for (const auto& f : brute_force_enumerate(spec, n)) {
        ++seen;
        worst = std::max(worst, std::fabs(s.decoding_probability(f.factors) - uniform));
      }
    }
    complete = complete && seen == s.lattice().at(N);
  }
  constexpr std::uint64_t kSeed = 20240917;
  Sampler sampler(spec, 10'000);
  SamplerEngine rng(kSeed);
  std::vector<SampleRecord> samples;
  samples.reserve(100'000);
  for (int i = 0; i < 100'000; ++i) samples.push_back(sampler.sample(rng));
  const auto gof = chi_square_gof(empirical_distribution(samples), ws.summary(spec, 10'000));
  const bool ok = complete && worst <= 1e-12 && gof.p_value > 1e-3;
  return {ok, fmt("max |P - 1/A(N)| %.2e", static_cast<double>(worst)) +
                  fmt("; chi2 %.3f", gof.statistic) + " df " +
                  std::to_string(gof.degrees_of_freedom) + fmt(" p %.4f", gof.p_value) +
                  " seed " + std::to_string(kSeed)};
}

Verdict c12_drift(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  const auto& c = ws.constants(spec);
  double v[3];
  bool ok = true;
  for (int i = 0; i < 3; ++i) {
    v[i] = drift_report(ws.pass(spec, kDecades[i]), c).value;
    ok = ok && v[i] < 2;
  }
  const double limit = 1 / c.rho_d();
  ok = ok && std::fabs(v[2] - limit) <= 0.15 * limit;
  return {ok, fmt("drift %.5f", v[0]) + fmt(" %.5f", v[1]) + fmt(" %.5f", v[2]) +
                  fmt(" vs 1/rho %.5f", limit)};
}

Verdict c13_mgf(Workspace& ws) {
  const auto spec = FactorSetSpec::all_integers();
  const auto ctx = PrecisionContext::with_digits(30);
  PrecisionGuard guard(ctx.working_digits);
  const auto& c = ws.constants(spec);
  const double ratio = mgf_ratio(ws.pass(spec, 10'000).layers, 0.0, spec, c, ctx);
  const auto r0 = shifted_rho(spec, 0.0, ctx);
  const Real gap = abs(r0.value - c.rho.value);
  const bool ok = ratio == 1.0 && gap <= r0.error_radius + c.rho.error_radius;
  return {ok, fmt("mgf ratio at z=0 %.17g", ratio) + " |rho(0)-rho|=" + to_decimal(gap, 3) +
                  " radius " + to_decimal(r0.error_radius + c.rho.error_radius, 3)};
}

Verdict c14_hygiene(Workspace&) {
  const FactorSetSpec specs[] = {FactorSetSpec::all_integers(), FactorSetSpec::primes(),
                                 FactorSetSpec::square_free(), FactorSetSpec::totient(),
                                 FactorSetSpec::explicit_set({2, 3})};
  const auto ctx = PrecisionContext::with_digits(30);
  const auto fine = PrecisionContext::with_digits(50);
  PrecisionGuard guard(fine.working_digits);
  int worst_digits = 1000;
  bool stable = true;
  std::ostringstream detail;
  for (const auto& spec : specs) {
    const auto c = spectral_constants(spec, ctx);
    const Real floor = kappa(spec).domain_floor();
    const Real span = c.rho.value - floor;
    for (double f : {0.5, 1.0, 1.5, 2.0, 3.0}) {
      const Real s = floor + span * f;
      const auto a = eval_P_derivs(spec, s, ctx);
      const auto b = finite_difference_derivs(spec, s, ctx);
      for (int order = 0; order < 3; ++order) {
        const Real diff = abs(a[order].value - b[order].value);
        worst_digits = std::min(worst_digits, certified_digits(a[order].value, diff));
      }
    }
    const auto c2 = spectral_constants(spec, fine);
    const SeriesValue SpectralConstants::*fields[] = {&SpectralConstants::rho,
                                                      &SpectralConstants::mu,
                                                      &SpectralConstants::sigma2};
    for (auto field : fields) {
      const auto& before = c.*field;
      const auto& after = c2.*field;
      if (abs(after.value - before.value) > before.error_radius + after.error_radius) {
        stable = false;
        detail << spec.to_string() << " moved; ";
      }
    }
  }
  return {worst_digits >= 25 && stable,
          "derivative agreement >= " + std::to_string(worst_digits) + " digits; " +
              (stable ? std::string("+20 digits within radii") : detail.str())};
}

struct Criterion {
  int id;
  const char* title;
  bool quick;
  Verdict (*run)(Workspace&);
};

constexpr Criterion kCriteria[] = {
    {1, "constants, primes family", true, c1_primes_constants},
    {2, "Kalmar root", true, c2_kalmar_root},
    {3, "totient root", true, c3_totient_root},
    {4, "counting oracle", true, c4_counting_oracle},
    {5, "degenerate uniform law", true, c5_uniform_law},
    {6, "Tauberian ratio trend", false, c6_tauberian},
    {7, "variance and mean trend", false, c7_mean_variance},
    {8, "even-moment Delange prediction", false, c8_delange_moments},
    {9, "binomial moment identity", false, c9_binomial_identity},
    {10, "Gaussian targets", true, c10_gaussian_targets},
    {11, "sampler exactness", true, c11_sampler},
    {12, "drift", false, c12_drift},
    {13, "MGF consistency", true, c13_mgf},
    {14, "numerical hygiene", true, c14_hygiene},
};

}  // namespace

std::string format_result(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s  %2d  %-32s", r.passed ? "PASS" : "FAIL", r.id,
                r.title.c_str());
  return std::string(head) + "  " + r.detail + fmt("  (%.2f s)", r.seconds);
}

std::vector<CriterionResult> run_acceptance(
    Suite suite, const std::function<void(const CriterionResult&)>& on_result) {
  Workspace ws;
  std::vector<CriterionResult> out;
  for (const auto& c : kCriteria) {
    if (suite == Suite::Quick && !c.quick) continue;
    CriterionResult r;
    r.id = c.id;
    r.title = c.title;
    r.quick = c.quick;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Verdict v = c.run(ws);
      r.passed = v.passed;
      r.detail = v.detail;
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace factoria
