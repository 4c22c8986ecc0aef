#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include "factoria/analysis.hpp"
#include "factoria/counter.hpp"

namespace factoria {

// Name of the generator recorded in output metadata.
inline constexpr const char* kSamplerEngine = "std::mt19937_64";
using SamplerEngine = std::mt19937_64;

struct SampleRecord {
  std::vector<std::uint64_t> factors;
  std::uint64_t product = 1;

  unsigned m() const { return static_cast<unsigned>(factors.size()); }
};

// Exact uniform sampling over the A(N) weighted factorizations of integers
// <= N by sequential decoding on the floor lattice: at budget v stop with
// probability 1/A(v), otherwise emit q with probability
// w(q) A(floor(v/q)) / (A(v) - 1) and continue with floor(v/q).
class Sampler {
 public:
  Sampler(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits = {});
  Sampler(const FactorSetSpec& spec, FloorLattice lattice, const CountLimits& limits = {});

  SampleRecord sample(SamplerEngine& rng);

  // Probability that decoding emits exactly `factors` and stops.
  long double decoding_probability(std::span<const std::uint64_t> factors) const;

  const FloorLattice& lattice() const { return lattice_; }

 private:
  // Cumulative selection weights for one budget v. Dense families group q
  // into blocks sharing floor(v/q).
  struct Table {
    std::vector<std::uint64_t> first_q;  // block start (dense) or member q
    std::vector<std::uint64_t> last_q;
    std::vector<u128> cumulative;        // inclusive prefix sums
  };
  const Table& table(std::uint64_t v);
  std::uint64_t weight_of(std::uint64_t q) const;

  FactorSetSpec spec_;
  FloorLattice lattice_;
  std::vector<Member> members_;
  bool dense_;
  std::unordered_map<std::uint64_t, Table> tables_;
};

// Uniform integer in [0, bound), bound >= 1, by rejection.
u128 uniform_below(SamplerEngine& rng, u128 bound);

SampleRecord sample_factorization(const FactorSetSpec& spec, std::uint64_t N,
                                  const FloorLattice& lattice, SamplerEngine& rng);

// Histogram of m over the samples; index m.
std::vector<std::uint64_t> empirical_distribution(std::span<const SampleRecord> samples);

struct GoodnessOfFit {
  double statistic = 0;
  int degrees_of_freedom = 0;
  double p_value = 1;
  int bins = 0;  // after pooling
};

// Pearson chi-square of the histogram against exact masses; adjacent bins
// with expected count < 5 are pooled. Throws DomainError for one bin.
GoodnessOfFit chi_square_gof(std::span<const std::uint64_t> histogram,
                             std::span<const double> masses);
GoodnessOfFit chi_square_gof(std::span<const std::uint64_t> histogram,
                             const DistributionSummary& exact);

}  // namespace factoria
