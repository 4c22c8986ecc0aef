#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "factoria/counter.hpp"
#include "factoria/spectral.hpp"

namespace factoria {

// Exact law of Y_N (number of factors of a uniformly random factorization
// of an integer <= N) with its moments and distances to the normal law.
struct DistributionSummary {
  std::uint64_t N = 0;
  u128 A_N = 0;
  std::vector<u128> T;  // mass(m) = T[m] / A_N

  double mean = 0;
  double variance = 0;
  // index k = 1..K (entry 0 is 1)
  std::vector<double> standardized_about_mean;
  // E((Y_N - mu log N) / (sigma sqrt(log N)))^k
  std::vector<double> standardized_limit;
  double sup_cdf_distance = 0;  // after the limit-law standardization
  double tv_distance = 0;       // to the normal law discretized on integers

  double mass(unsigned m) const;
  std::vector<double> masses() const;
  // Sum of T equals A_N in exact integer arithmetic.
  bool masses_sum_to_one() const;
  // "T[m]/A_N" in lowest terms.
  std::string mass_rational(unsigned m) const;
};

DistributionSummary summarize_distribution(const LayeredCounts& counts,
                                           const SpectralConstants& constants, int K);
// Without constants: the limit-law standardization and normal distances are NaN.
DistributionSummary summarize_distribution(const LayeredCounts& counts, int K);

// Standard normal CDF.
double normal_cdf(double x);

// Everything the moment analyses need from one streamed layer pass.
struct ExactPass {
  LayeredCounts layers;
  double mu = 0;
  int K = 0;
  std::vector<double> sums_mu_log_n;  // sum_n b_k(n)
  std::vector<double> sums_mu_log_N;  // sum_n sum_m a_m(n) (m - mu log N)^k
  // mixed[l][j] = sum_n b_l(n) (log(N/n))^j for l + j <= K
  std::vector<std::vector<double>> mixed;
  double log_ratio_sum = 0;  // sum_n a(n) log(N/n)
};

ExactPass exact_pass(const FactorSetSpec& spec, std::uint64_t N, double mu, int K,
                     const CountLimits& limits = {});

struct MomentReport {
  std::uint64_t N = 0;
  int k = 0;
  Centering centering = Centering::MuLogn;
  double exact_sum = 0;
  double prediction = 0;  // 0 for odd k
  double ratio = 0;       // exact/prediction for even k, NaN for odd k
  // exact_sum / (A(N) (log N)^{k/2}), the o(1)-claim diagnostic for odd k
  double normalized = 0;
};

std::vector<MomentReport> moment_reports(const ExactPass& pass, const SpectralConstants& constants,
                                         Centering centering);
MomentReport moment_report(const FactorSetSpec& spec, std::uint64_t N, int k, Centering centering,
                           const SpectralConstants& constants);

// A(N) / (R N^rho).
double tauberian_ratio(u128 A_N, std::uint64_t N, const SpectralConstants& constants);
double tauberian_ratio(const FactorSetSpec& spec, std::uint64_t N,
                       const SpectralConstants& constants);

// E(e^{z Y_N}) from exact layer totals.
double exact_mgf(const LayeredCounts& counts, double z);
double mgf_ratio(const LayeredCounts& counts, double z, const FactorSetSpec& spec,
                 const SpectralConstants& constants, const PrecisionContext& ctx);
double mgf_ratio(const FactorSetSpec& spec, double z, std::uint64_t N,
                 const SpectralConstants& constants, const PrecisionContext& ctx);

struct DriftReport {
  double value = 0;  // E(log N - log nu_N)
  double limit = 0;  // 1/rho
};
DriftReport drift_report(const FactorSetSpec& spec, std::uint64_t N,
                         const SpectralConstants& constants);
DriftReport drift_report(const ExactPass& pass, const SpectralConstants& constants);

// Y_N for the singleton set {d} is exactly uniform on {0, ..., floor(log_d N)}.
bool uniform_case_check(std::uint64_t d, std::uint64_t N);

struct IdentityCheck {
  double distribution_side = 0;  // A(N) E(Y_N - mu log N)^k from the layer totals
  double decomposed = 0;         // binomial decomposition over b_l(n)
  double relative_error = 0;
};
// Binomial decomposition of A(N) E(Y_N - mu log N)^k into the b_l sums.
IdentityCheck binomial_identity(const ExactPass& pass, int k);

}  // namespace factoria
