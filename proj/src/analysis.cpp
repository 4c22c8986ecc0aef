#include "factoria/analysis.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "factoria/compensated.hpp"
#include "factoria/error.hpp"

namespace factoria {

namespace {

BigInt to_big(u128 v) {
  BigInt b = static_cast<std::uint64_t>(v >> 64);
  b <<= 64;
  b += static_cast<std::uint64_t>(v);
  return b;
}

long double big_ratio(const BigInt& num, const BigInt& den) {
  return num.convert_to<long double>() / den.convert_to<long double>();
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double DistributionSummary::mass(unsigned m) const {
  if (m >= T.size()) return 0.0;
  return static_cast<double>(static_cast<long double>(T[m]) / static_cast<long double>(A_N));
}

std::vector<double> DistributionSummary::masses() const {
  std::vector<double> out;
  for (unsigned m = 0; m < T.size(); ++m) out.push_back(mass(m));
  return out;
}

bool DistributionSummary::masses_sum_to_one() const {
  BigInt total = 0;
  for (auto t : T) total += to_big(t);
  return total == to_big(A_N);
}

std::string DistributionSummary::mass_rational(unsigned m) const {
  BigInt num = m < T.size() ? to_big(T[m]) : BigInt(0);
  BigInt den = to_big(A_N);
  BigInt g = gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return num.str() + "/" + den.str();
}

namespace {

std::vector<double> standardized_moments(const std::vector<u128>& T, long double a_n, int K,
                                         long double center, long double scale) {
  std::vector<double> out(K + 1, 0.0);
  out[0] = 1.0;
  for (int k = 1; k <= K; ++k) {
    if (!(scale > 0)) {
      out[k] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    long double acc = 0;
    for (unsigned m = 0; m < T.size(); ++m) {
      acc += static_cast<long double>(T[m]) * std::pow((m - center) / scale, k);
    }
    out[k] = static_cast<double>(acc / a_n);
  }
  return out;
}

}  // namespace

DistributionSummary summarize_distribution(const LayeredCounts& counts, int K) {
  if (K < 0) throw DomainError("moment order must be >= 0");
  DistributionSummary d;
  d.N = counts.N;
  d.A_N = counts.A_N;
  d.T = counts.T;

  const BigInt a = to_big(counts.A_N);
  BigInt s1 = 0, s2 = 0;
  for (unsigned m = 0; m < counts.T.size(); ++m) {
    BigInt t = to_big(counts.T[m]);
    s1 += t * m;
    s2 += t * m * m;
  }
  d.mean = static_cast<double>(big_ratio(s1, a));
  d.variance = static_cast<double>(big_ratio(a * s2 - s1 * s1, a * a));
  d.standardized_about_mean =
      standardized_moments(d.T, static_cast<long double>(d.A_N), K, d.mean,
                           std::sqrt(static_cast<long double>(d.variance)));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  d.standardized_limit.assign(K + 1, nan);
  d.standardized_limit[0] = 1.0;
  d.sup_cdf_distance = d.tv_distance = nan;
  return d;
}

DistributionSummary summarize_distribution(const LayeredCounts& counts,
                                           const SpectralConstants& constants, int K) {
  DistributionSummary d = summarize_distribution(counts, K);
  const double log_n = std::log(static_cast<double>(counts.N));
  const double center = constants.mu_d() * log_n;
  const double scale = std::sqrt(constants.sigma2_d() * log_n);
  d.standardized_limit =
      standardized_moments(d.T, static_cast<long double>(d.A_N), K, center, scale);
  if (!(scale > 0)) return d;

  double cdf = 0, sup = 0, l1 = 0;
  for (unsigned m = 0; m < counts.T.size(); ++m) {
    const double phi = normal_cdf((m - center) / scale);
    sup = std::max(sup, std::fabs(cdf - phi));
    cdf += d.mass(m);
    sup = std::max(sup, std::fabs(cdf - phi));
    const double q =
        normal_cdf((m + 0.5 - center) / scale) - normal_cdf((m - 0.5 - center) / scale);
    l1 += std::fabs(d.mass(m) - q);
  }
  const double below = normal_cdf((-0.5 - center) / scale);
  const double above = 1 - normal_cdf((counts.T.size() - 0.5 - center) / scale);
  d.sup_cdf_distance = sup;
  d.tv_distance = 0.5 * (l1 + below + above);
  return d;
}

ExactPass exact_pass(const FactorSetSpec& spec, std::uint64_t N, double mu, int K,
                     const CountLimits& limits) {
  if (K < 0 || K > 8) throw DomainError("moment order K must lie in 0..8");
  ExactPass pass;
  pass.mu = mu;
  pass.K = K;
  std::vector<double> log_n(N + 1, 0.0);
  for (std::uint64_t n = 2; n <= N; ++n) log_n[n] = std::log(static_cast<double>(n));
  const double log_big = std::log(static_cast<double>(N));

  std::vector<CompensatedSum> local(K + 1), global(K + 1), drift(1);
  std::vector<std::vector<CompensatedSum>> mixed(K + 1);
  for (int l = 0; l <= K; ++l) mixed[l].resize(K + 1 - l);
  std::vector<double> pow_x(K + 1), pow_r(K + 1);

  pass.layers = count_layers(
      spec, N,
      [&](unsigned m, std::span<const u128> layer) {
        for (std::uint64_t n = 1; n <= N; ++n) {
          if (layer[n] == 0) continue;
          const double a = static_cast<double>(layer[n]);
          const double x = m - mu * log_n[n];
          const double y = m - mu * log_big;
          const double r = log_big - log_n[n];
          pow_x[0] = pow_r[0] = 1;
          for (int k = 1; k <= K; ++k) {
            pow_x[k] = pow_x[k - 1] * x;
            pow_r[k] = pow_r[k - 1] * r;
          }
          double ty = a;
          for (int k = 0; k <= K; ++k) {
            local[k].add(a * pow_x[k]);
            global[k].add(ty);
            ty *= y;
          }
          for (int l = 0; l <= K; ++l) {
            for (int j = 0; l + j <= K; ++j) mixed[l][j].add(a * pow_x[l] * pow_r[j]);
          }
          drift[0].add(a * r);
        }
      },
      limits);

  for (int k = 0; k <= K; ++k) {
    pass.sums_mu_log_n.push_back(local[k].value());
    pass.sums_mu_log_N.push_back(global[k].value());
  }
  pass.mixed.resize(K + 1);
  for (int l = 0; l <= K; ++l) {
    for (const auto& s : mixed[l]) pass.mixed[l].push_back(s.value());
  }
  pass.log_ratio_sum = drift[0].value();
  return pass;
}

std::vector<MomentReport> moment_reports(const ExactPass& pass, const SpectralConstants& constants,
                                         Centering centering) {
  const auto& sums = centering == Centering::MuLogn ? pass.sums_mu_log_n : pass.sums_mu_log_N;
  const auto N = pass.layers.N;
  const double log_n = std::log(static_cast<double>(N));
  const double a = static_cast<double>(pass.layers.A_N);
  std::vector<MomentReport> out;
  for (int k = 0; k <= pass.K; ++k) {
    MomentReport r;
    r.N = N;
    r.k = k;
    r.centering = centering;
    r.exact_sum = k == 0 ? a : sums[k];
    r.normalized = r.exact_sum / (a * std::pow(log_n, k / 2.0));
    if (k % 2 == 0) {
      r.prediction = delange_prediction(
          {constants.rho_d(), k / 2.0 + 1, pole_coefficient_ck(constants, k), static_cast<double>(N)});
      r.ratio = r.exact_sum / r.prediction;
    } else {
      r.prediction = 0;
      r.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(r);
  }
  return out;
}

MomentReport moment_report(const FactorSetSpec& spec, std::uint64_t N, int k, Centering centering,
                           const SpectralConstants& constants) {
  if (k < 0 || k > 8) throw DomainError("moment order k must lie in 0..8");
  ExactPass pass = exact_pass(spec, N, constants.mu_d(), k);
  return moment_reports(pass, constants, centering).back();
}

double tauberian_ratio(u128 A_N, std::uint64_t N, const SpectralConstants& constants) {
  const double prediction = delange_prediction(
      {constants.rho_d(), 1.0, pole_coefficient_ck(constants, 0), static_cast<double>(N)});
  return static_cast<double>(A_N) / prediction;
}

double tauberian_ratio(const FactorSetSpec& spec, std::uint64_t N,
                       const SpectralConstants& constants) {
  return tauberian_ratio(floor_lattice(spec, N).at(N), N, constants);
}

double exact_mgf(const LayeredCounts& counts, double z) {
  long double acc = 0;
  for (unsigned m = 0; m < counts.T.size(); ++m) {
    acc += static_cast<long double>(counts.T[m]) * std::exp(static_cast<long double>(z) * m);
  }
  return static_cast<double>(acc / static_cast<long double>(counts.A_N));
}

double mgf_ratio(const LayeredCounts& counts, double z, const FactorSetSpec& spec,
                 const SpectralConstants& constants, const PrecisionContext& ctx) {
  const double prediction =
      mgf_prediction(spec, z, static_cast<double>(counts.N), constants, ctx);
  return exact_mgf(counts, z) / prediction;
}

double mgf_ratio(const FactorSetSpec& spec, double z, std::uint64_t N,
                 const SpectralConstants& constants, const PrecisionContext& ctx) {
  return mgf_ratio(count_layers(spec, N), z, spec, constants, ctx);
}

DriftReport drift_report(const FactorSetSpec& spec, std::uint64_t N,
                         const SpectralConstants& constants) {
  const CountArray counts = count_a(spec, N);
  const double log_big = std::log(static_cast<double>(N));
  CompensatedSum acc;
  for (std::uint64_t n = 1; n <= N; ++n) {
    if (counts.a[n] == 0) continue;
    acc.add(static_cast<double>(counts.a[n]) * (log_big - std::log(static_cast<double>(n))));
  }
  return {acc.value() / static_cast<double>(counts.A_N), 1.0 / constants.rho_d()};
}

DriftReport drift_report(const ExactPass& pass, const SpectralConstants& constants) {
  return {pass.log_ratio_sum / static_cast<double>(pass.layers.A_N), 1.0 / constants.rho_d()};
}

bool uniform_case_check(std::uint64_t d, std::uint64_t N) {
  if (d < 2 || N < 1) throw DomainError("uniform case needs d >= 2 and N >= 1");
  const auto spec = FactorSetSpec::explicit_set({d});
  unsigned top = 0;  // floor(log_d N) by exact powers
  for (std::uint64_t p = 1; p <= N / d; p *= d) ++top;
  const LayeredCounts layers = count_layers(spec, N);
  if (layers.T.size() != top + 1u || layers.A_N != top + 1u) return false;
  for (auto t : layers.T) {
    if (t != 1) return false;
  }
  const CountArray counts = count_a(spec, N);
  std::uint64_t next_power = 1;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const bool is_power = n == next_power;
    if (counts.a[n] != (is_power ? 1u : 0u)) return false;
    if (is_power && next_power <= N / d) next_power *= d;
  }
  return true;
}

IdentityCheck binomial_identity(const ExactPass& pass, int k) {
  if (k < 0 || k > pass.K) throw DomainError("identity order exceeds the pass order");
  const double log_big = std::log(static_cast<double>(pass.layers.N));
  CompensatedSum lhs;
  for (unsigned m = 0; m < pass.layers.T.size(); ++m) {
    lhs.add(static_cast<double>(pass.layers.T[m]) * std::pow(m - pass.mu * log_big, k));
  }
  CompensatedSum rhs;
  double binom = 1;
  for (int l = 0; l <= k; ++l) {
    rhs.add(binom * std::pow(-pass.mu, k - l) * pass.mixed[l][k - l]);
    binom = binom * (k - l) / (l + 1);
  }
  IdentityCheck out;
  out.distribution_side = lhs.value();
  out.decomposed = rhs.value();
  const double scale = std::max(std::fabs(out.distribution_side), std::fabs(out.decomposed));
  out.relative_error =
      scale == 0 ? 0 : std::fabs(out.distribution_side - out.decomposed) / scale;
  return out;
}

}  // namespace factoria
