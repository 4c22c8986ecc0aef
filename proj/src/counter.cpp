#include "factoria/counter.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "factoria/compensated.hpp"
#include "factoria/error.hpp"

namespace factoria {

namespace {

void check_array(std::uint64_t entries, const CountLimits& limits, const char* what) {
  if (entries > limits.max_array_entries) {
    throw ResourceError(std::string(what) + " needs " + std::to_string(entries) +
                        " entries, cap is " + std::to_string(limits.max_array_entries));
  }
}

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

template <class Int>
struct Arith;

template <>
struct Arith<u128> {
  static u128 add(u128 a, u128 b, std::uint64_t n) { return checked_add(a, b, n); }
  static u128 mul(u128 a, std::uint64_t w, std::uint64_t n) { return checked_mul(a, w, n); }
};

template <>
struct Arith<BigInt> {
  static BigInt add(const BigInt& a, const BigInt& b, std::uint64_t) { return a + b; }
  static BigInt mul(const BigInt& a, std::uint64_t w, std::uint64_t) { return a * w; }
};

template <class Int>
BasicCountArray<Int> count_a_impl(const FactorSetSpec& spec, std::uint64_t N,
                                  const CountLimits& limits) {
  if (N < 1) throw DomainError("count requires N >= 1");
  check_array(N + 1, limits, "count array");
  const auto members = enumerate(spec, N, limits.enumerate);
  BasicCountArray<Int> out;
  out.N = N;
  out.a.assign(N + 1, Int(0));
  out.a[1] = 1;
  Int total = 0;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const Int an = out.a[n];
    if (an == 0) continue;
    total = Arith<Int>::add(total, an, n);
    const std::uint64_t reach = N / n;
    for (const auto& m : members) {
      if (m.q > reach) break;
      const std::uint64_t target = n * m.q;
      out.a[target] = Arith<Int>::add(out.a[target], Arith<Int>::mul(an, m.w, target), target);
    }
  }
  out.A_N = total;
  return out;
}

}  // namespace

u128 parse_u128(const std::string& text) {
  if (text.empty()) throw UsageError("expected a non-negative integer, got an empty string");
  u128 v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw UsageError("expected a non-negative integer, got '" + text + "'");
    u128 next;
    if (__builtin_mul_overflow(v, u128{10}, &next) ||
        __builtin_add_overflow(next, static_cast<u128>(c - '0'), &next)) {
      throw UsageError("'" + text + "' does not fit in 128 bits");
    }
    v = next;
  }
  return v;
}

CountArray count_a(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits) {
  return count_a_impl<u128>(spec, N, limits);
}

BigCountArray count_a_big(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits) {
  return count_a_impl<BigInt>(spec, N, limits);
}

LayeredCounts count_layers(const FactorSetSpec& spec, std::uint64_t N,
                           const LayerVisitor& visitor, const CountLimits& limits) {
  if (N < 1) throw DomainError("count requires N >= 1");
  check_array(2 * (N + 1), limits, "layer arrays");
  const auto members = enumerate(spec, N, limits.enumerate);
  LayeredCounts out;
  out.N = N;

  std::vector<u128> prev(N + 1, 0), cur(N + 1, 0);
  prev[1] = 1;
  out.T.push_back(1);
  out.A_N = 1;
  if (visitor) visitor(0, prev);
  const std::uint64_t q_min = members.empty() ? N + 1 : members.front().q;

  for (unsigned m = 1;; ++m) {
    std::fill(cur.begin(), cur.end(), u128{0});
    u128 layer_total = 0;
    for (std::uint64_t r = 1; r <= N / q_min; ++r) {
      const u128 ar = prev[r];
      if (ar == 0) continue;
      const std::uint64_t reach = N / r;
      for (const auto& mem : members) {
        if (mem.q > reach) break;
        const std::uint64_t n = r * mem.q;
        const u128 add = checked_mul(ar, mem.w, n);
        cur[n] = checked_add(cur[n], add, n);
        layer_total = checked_add(layer_total, add, n);
      }
    }
    if (layer_total == 0) break;
    out.T.push_back(layer_total);
    out.A_N = checked_add(out.A_N, layer_total, N);
    if (visitor) visitor(m, cur);
    std::swap(prev, cur);
  }
  return out;
}

u128 FloorLattice::at(std::uint64_t v) const {
  if (v == 0) return 0;
  if (v <= root_) return small_[v];
  const std::uint64_t k = n_ / v;
  if (k == 0 || k >= large_.size() || n_ / k != v) {
    throw DomainError(std::to_string(v) + " is not a floor-lattice value of " + std::to_string(n_));
  }
  return large_[k];
}

std::vector<std::uint64_t> FloorLattice::values() const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t v = 1; v <= root_; ++v) out.push_back(v);
  for (std::uint64_t k = large_.size() - 1; k >= 1; --k) out.push_back(n_ / k);
  return out;
}

FloorLattice floor_lattice(const FactorSetSpec& spec, std::uint64_t N, const CountLimits& limits) {
  if (N < 1) throw DomainError("floor lattice requires N >= 1");
  FloorLattice lat;
  lat.n_ = N;
  lat.root_ = isqrt(N);
  const std::uint64_t kmax = N / (lat.root_ + 1);
  lat.small_.assign(lat.root_ + 1, 0);
  lat.large_.assign(kmax + 1, 0);

  const bool dense = spec.tag() == FamilyTag::AllIntegers;
  std::vector<Member> members;
  if (!dense) members = enumerate(spec, N, limits.enumerate);

  auto compute = [&](std::uint64_t v) -> u128 {
    u128 total = 1;
    if (dense) {
      // Blocks of q sharing t = floor(v/q).
      for (std::uint64_t q = 2; q <= v;) {
        const std::uint64_t t = v / q;
        const std::uint64_t q_end = v / t;
        total = checked_add(total, checked_mul(lat.at(t), q_end - q + 1, v), v);
        q = q_end + 1;
      }
    } else {
      for (const auto& m : members) {
        if (m.q > v) break;
        total = checked_add(total, checked_mul(lat.at(v / m.q), m.w, v), v);
      }
    }
    return total;
  };
  for (std::uint64_t v = 1; v <= lat.root_; ++v) lat.small_[v] = compute(v);
  for (std::uint64_t k = kmax; k >= 1; --k) lat.large_[k] = compute(N / k);
  return lat;
}

CenteredSums centered_sums(const FactorSetSpec& spec, std::uint64_t N, int K, Centering center,
                           double mu, const CountLimits& limits) {
  if (K < 0 || K > 16) throw DomainError("centered sums support 0 <= K <= 16");
  check_array(N + 1, limits, "log table");
  std::vector<double> log_n(N + 1, 0.0);
  for (std::uint64_t n = 2; n <= N; ++n) log_n[n] = std::log(static_cast<double>(n));
  const double fixed_center = mu * std::log(static_cast<double>(N));

  std::vector<CompensatedSum> acc(K + 1);
  count_layers(
      spec, N,
      [&](unsigned m, std::span<const u128> layer) {
        for (std::uint64_t n = 1; n <= N; ++n) {
          if (layer[n] == 0) continue;
          const double a = static_cast<double>(layer[n]);
          const double x = m - (center == Centering::MuLogN ? fixed_center : mu * log_n[n]);
          double term = a;
          for (int k = 0; k <= K; ++k) {
            acc[k].add(term);
            term *= x;
          }
        }
      },
      limits);

  CenteredSums out;
  out.N = N;
  out.K = K;
  out.center = center;
  for (const auto& s : acc) out.sums.push_back(s.value());
  return out;
}

CenteredSums centered_sums(const FactorSetSpec& spec, std::uint64_t N, int K, Centering center,
                           const SpectralConstants& constants, const CountLimits& limits) {
  return centered_sums(spec, N, K, center, constants.mu_d(), limits);
}

namespace {

class BruteForce {
 public:
  BruteForce(const FactorSetSpec& spec, std::size_t max_output)
      : spec_(spec), max_output_(max_output) {}

  std::uint64_t w(std::uint64_t q) {
    auto it = weights_.find(q);
    if (it != weights_.end()) return it->second;
    return weights_[q] = weight(spec_, q);
  }

  void run(std::uint64_t n, std::vector<std::uint64_t>& prefix, u128 mult,
           std::vector<Factorization>& out) {
    if (n == 1) {
      if (out.size() >= max_output_) {
        throw ResourceError("brute-force enumeration exceeds " + std::to_string(max_output_) +
                            " sequences");
      }
      out.push_back({prefix, mult});
      return;
    }
    for (std::uint64_t q = 2; q <= n; ++q) {
      if (n % q != 0) continue;
      const std::uint64_t wq = w(q);
      if (wq == 0) continue;
      prefix.push_back(q);
      run(n / q, prefix, mult * wq, out);
      prefix.pop_back();
    }
  }

 private:
  const FactorSetSpec& spec_;
  std::size_t max_output_;
  std::unordered_map<std::uint64_t, std::uint64_t> weights_;
};

}  // namespace

std::vector<Factorization> brute_force_enumerate(const FactorSetSpec& spec, std::uint64_t n,
                                                 std::size_t max_output) {
  if (n < 1 || n > 10'000) throw DomainError("brute-force enumeration needs 1 <= n <= 10^4");
  BruteForce bf(spec, max_output);
  std::vector<Factorization> out;
  std::vector<std::uint64_t> prefix;
  bf.run(n, prefix, 1, out);
  return out;
}

u128 brute_force_count(const FactorSetSpec& spec, std::uint64_t n) {
  u128 total = 0;
  for (const auto& f : brute_force_enumerate(spec, n)) total += f.multiplicity;
  return total;
}

void write_count_cache(const std::filesystem::path& path, const CountArray& counts) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ResourceError("cannot open " + tmp.string() + " for writing");
    unsigned char rec[16];
    for (std::uint64_t n = 1; n <= counts.N; ++n) {
      u128 v = counts.a[n];
      for (int i = 0; i < 16; ++i) {
        rec[i] = static_cast<unsigned char>(v & 0xff);
        v >>= 8;
      }
      os.write(reinterpret_cast<const char*>(rec), sizeof rec);
    }
    if (!os) throw ResourceError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, path);
}

CountArray read_count_cache(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ResourceError("cannot open " + path.string());
  const auto size = std::filesystem::file_size(path);
  if (size % 16 != 0) throw ResourceError(path.string() + " is not a count cache");
  CountArray out;
  out.N = size / 16;
  out.a.assign(out.N + 1, 0);
  unsigned char rec[16];
  for (std::uint64_t n = 1; n <= out.N; ++n) {
    is.read(reinterpret_cast<char*>(rec), sizeof rec);
    u128 v = 0;
    for (int i = 15; i >= 0; --i) v = (v << 8) | rec[i];
    out.a[n] = v;
    out.A_N = checked_add(out.A_N, v, n);
  }
  return out;
}

}  // namespace factoria
