#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "factoria/factorset.hpp"
#include "factoria/int128.hpp"
#include "factoria/spectral.hpp"

namespace factoria {

using BigInt = boost::multiprecision::cpp_int;

enum class IntegerWidth { Bits128, Big };

struct CountLimits {
  // Entries in any per-n array (count arrays, layers, prefix tables).
  std::uint64_t max_array_entries = std::uint64_t{1} << 28;
  EnumerateLimits enumerate;
};

// a(1..N) with a[0] = 0, plus A(N) = sum a(n).
template <class Int>
struct BasicCountArray {
  std::uint64_t N = 0;
  std::vector<Int> a;
  Int A_N = 0;
};
using CountArray = BasicCountArray<u128>;
using BigCountArray = BasicCountArray<BigInt>;

// Forward sieve a(nq) += w(q) a(n). 128-bit counts throw OverflowError
// naming the first n whose count does not fit.
CountArray count_a(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits = {});
BigCountArray count_a_big(const FactorSetSpec& spec, std::uint64_t N,
                          const CountLimits& limits = {});

// T_m(N) for m = 0..M_max and A(N).
struct LayeredCounts {
  std::uint64_t N = 0;
  u128 A_N = 0;
  std::vector<u128> T;

  unsigned max_layer() const { return T.empty() ? 0 : static_cast<unsigned>(T.size() - 1); }
};

// Called once per layer m with a_m(1..N) (index 0 unused). Layers are
// streamed: the span is only valid during the call.
using LayerVisitor = std::function<void(unsigned m, std::span<const u128> layer)>;

LayeredCounts count_layers(const FactorSetSpec& spec, std::uint64_t N,
                           const LayerVisitor& visitor = {}, const CountLimits& limits = {});

// A(v) on the distinct values v = floor(N/k).
class FloorLattice {
 public:
  FloorLattice() = default;
  std::uint64_t N() const { return n_; }
  // v must be of the form floor(N/k), or 0.
  u128 at(std::uint64_t v) const;
  // Distinct lattice values, ascending.
  std::vector<std::uint64_t> values() const;
  std::size_t size() const { return small_.size() - 1 + large_.size() - 1; }

 private:
  friend FloorLattice floor_lattice(const FactorSetSpec&, std::uint64_t, const CountLimits&);
  std::uint64_t n_ = 0;
  std::uint64_t root_ = 0;
  std::vector<u128> small_;  // small_[v], v <= root_
  std::vector<u128> large_;  // large_[k] = A(N/k) for N/k > root_
};

FloorLattice floor_lattice(const FactorSetSpec& spec, std::uint64_t N,
                           const CountLimits& limits = {});

enum class Centering { MuLogN, MuLogn };

struct CenteredSums {
  std::uint64_t N = 0;
  int K = 0;
  Centering center = Centering::MuLogn;
  // sums[k] = sum_{n <= N} sum_m a_m(n) (m - c(n))^k, c(n) = mu log N or mu log n.
  std::vector<double> sums;
};

CenteredSums centered_sums(const FactorSetSpec& spec, std::uint64_t N, int K, Centering center,
                           const SpectralConstants& constants, const CountLimits& limits = {});
CenteredSums centered_sums(const FactorSetSpec& spec, std::uint64_t N, int K, Centering center,
                           double mu, const CountLimits& limits = {});

struct Factorization {
  std::vector<std::uint64_t> factors;
  u128 multiplicity = 1;  // product of w(q) over the factors
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

// Every ordered factorization of n by exhaustive recursion on the first
// factor. Throws ResourceError past `max_output` sequences.
std::vector<Factorization> brute_force_enumerate(const FactorSetSpec& spec, std::uint64_t n,
                                                 std::size_t max_output = 2'000'000);

// Sum of multiplicities, i.e. the weighted count a(n).
u128 brute_force_count(const FactorSetSpec& spec, std::uint64_t n);

// Binary cache: one 16-byte little-endian record per n = 1..N, no header.
void write_count_cache(const std::filesystem::path& path, const CountArray& counts);
CountArray read_count_cache(const std::filesystem::path& path);

}  // namespace factoria
