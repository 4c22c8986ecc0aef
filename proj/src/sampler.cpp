#include "factoria/sampler.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>

#include "factoria/error.hpp"

namespace factoria {

u128 uniform_below(SamplerEngine& rng, u128 bound) {
  if (bound == 0) throw DomainError("uniform_below needs a positive bound");
  if (bound == 1) return 0;
  const bool wide = (bound >> 64) != 0;
  // Accept below the largest multiple of bound that fits the draw width.
  if (!wide) {
    const auto b = static_cast<std::uint64_t>(bound);
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % b + 1) % b;
    for (;;) {
      const std::uint64_t x = rng();
      if (x <= limit) return x % b;
    }
  }
  const u128 all = ~u128{0};
  const u128 limit = all - (all % bound + 1) % bound;
  for (;;) {
    const u128 x = (static_cast<u128>(rng()) << 64) | rng();
    if (x <= limit) return x % bound;
  }
}

Sampler::Sampler(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits)
    : Sampler(spec, floor_lattice(spec, N, limits), limits) {}

Sampler::Sampler(const FactorSetSpec& spec, FloorLattice lattice, const CountLimits& limits)
    : spec_(spec), lattice_(std::move(lattice)), dense_(spec.tag() == FamilyTag::AllIntegers) {
  if (lattice_.N() < 1) throw DomainError("sampler needs a lattice with N >= 1");
  if (!dense_) members_ = enumerate(spec_, lattice_.N(), limits.enumerate);
}

std::uint64_t Sampler::weight_of(std::uint64_t q) const {
  if (dense_) return q >= 2 ? 1 : 0;
  auto it = std::lower_bound(members_.begin(), members_.end(), q,
                             [](const Member& m, std::uint64_t x) { return m.q < x; });
  return it != members_.end() && it->q == q ? it->w : 0;
}

const Sampler::Table& Sampler::table(std::uint64_t v) {
  auto it = tables_.find(v);
  if (it != tables_.end()) return it->second;
  Table t;
  u128 acc = 0;
  if (dense_) {
    for (std::uint64_t q = 2; q <= v;) {
      const std::uint64_t child = v / q;
      const std::uint64_t q_end = v / child;
      acc += lattice_.at(child) * (q_end - q + 1);
      t.first_q.push_back(q);
      t.last_q.push_back(q_end);
      t.cumulative.push_back(acc);
      q = q_end + 1;
    }
  } else {
    for (const auto& m : members_) {
      if (m.q > v) break;
      acc += lattice_.at(v / m.q) * m.w;
      t.first_q.push_back(m.q);
      t.last_q.push_back(m.q);
      t.cumulative.push_back(acc);
    }
  }
  if (acc + 1 != lattice_.at(v)) {
    throw ConsistencyError("selection weights at " + std::to_string(v) +
                           " do not sum to A(v) - 1");
  }
  return tables_.emplace(v, std::move(t)).first->second;
}

SampleRecord Sampler::sample(SamplerEngine& rng) {
  SampleRecord out;
  std::uint64_t v = lattice_.N();
  for (;;) {
    const u128 r = uniform_below(rng, lattice_.at(v));
    if (r == 0) break;
    const Table& t = table(v);
    const u128 target = r - 1;
    const auto idx = static_cast<std::size_t>(
        std::upper_bound(t.cumulative.begin(), t.cumulative.end(), target) - t.cumulative.begin());
    const u128 offset = target - (idx == 0 ? u128{0} : t.cumulative[idx - 1]);
    std::uint64_t q = t.first_q[idx];
    if (dense_) {
      // Every q in the block carries weight A(floor(v/q)).
      q += static_cast<std::uint64_t>(offset / lattice_.at(v / q));
    }
    out.factors.push_back(q);
    out.product *= q;
    v /= q;
  }
  return out;
}

long double Sampler::decoding_probability(std::span<const std::uint64_t> factors) const {
  std::uint64_t v = lattice_.N();
  long double p = 1;
  for (auto q : factors) {
    if (q < 2 || q > v) return 0;
    const std::uint64_t w = weight_of(q);
    if (w == 0) return 0;
    p *= static_cast<long double>(w) * static_cast<long double>(lattice_.at(v / q)) /
         static_cast<long double>(lattice_.at(v));
    v /= q;
  }
  return p / static_cast<long double>(lattice_.at(v));
}

SampleRecord sample_factorization(const FactorSetSpec& spec, std::uint64_t N,
                                  const FloorLattice& lattice, SamplerEngine& rng) {
  if (lattice.N() != N) throw DomainError("lattice was built for a different N");
  Sampler s(spec, lattice);
  return s.sample(rng);
}

std::vector<std::uint64_t> empirical_distribution(std::span<const SampleRecord> samples) {
  std::vector<std::uint64_t> hist;
  for (const auto& s : samples) {
    if (s.m() >= hist.size()) hist.resize(s.m() + 1, 0);
    ++hist[s.m()];
  }
  return hist;
}

GoodnessOfFit chi_square_gof(std::span<const std::uint64_t> histogram,
                             std::span<const double> masses) {
  std::uint64_t n = 0;
  for (auto h : histogram) n += h;
  if (n == 0) throw DomainError("goodness of fit needs at least one sample");
  const std::size_t size = std::max(histogram.size(), masses.size());

  std::vector<double> observed, expected;
  double obs = 0, exp = 0;
  for (std::size_t m = 0; m < size; ++m) {
    obs += m < histogram.size() ? static_cast<double>(histogram[m]) : 0.0;
    exp += m < masses.size() ? masses[m] * static_cast<double>(n) : 0.0;
    if (exp >= 5) {
      observed.push_back(obs);
      expected.push_back(exp);
      obs = exp = 0;
    }
  }
  if (obs > 0 || exp > 0) {
    if (expected.empty()) {
      observed.push_back(obs);
      expected.push_back(exp);
    } else {
      observed.back() += obs;
      expected.back() += exp;
    }
  }
  if (expected.size() < 2) throw DomainError("goodness of fit needs at least two pooled bins");

  GoodnessOfFit out;
  out.bins = static_cast<int>(expected.size());
  out.degrees_of_freedom = out.bins - 1;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    out.statistic += d * d / expected[i];
  }
  out.p_value = boost::math::gamma_q(out.degrees_of_freedom / 2.0, out.statistic / 2.0);
  return out;
}

GoodnessOfFit chi_square_gof(std::span<const std::uint64_t> histogram,
                             const DistributionSummary& exact) {
  const auto masses = exact.masses();
  return chi_square_gof(histogram, masses);
}

}  // namespace factoria
