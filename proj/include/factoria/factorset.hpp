#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace factoria {

// Factor multisets. Each family is its own type; FactorSetSpec holds one.
namespace family {
struct Explicit {
  std::vector<std::uint64_t> members;  // strictly increasing, all >= 2
  friend bool operator==(const Explicit&, const Explicit&) = default;
};
struct AllIntegers {
  friend bool operator==(const AllIntegers&, const AllIntegers&) = default;
};
struct Primes {
  friend bool operator==(const Primes&, const Primes&) = default;
};
struct SquareFree {
  friend bool operator==(const SquareFree&, const SquareFree&) = default;
};
struct PowersOf {
  std::uint64_t base;  // >= 2
  friend bool operator==(const PowersOf&, const PowersOf&) = default;
};
// q weighted by #{m >= 3 : phi(m) = q}.
struct Totient {
  friend bool operator==(const Totient&, const Totient&) = default;
};
struct Weighted {
  std::map<std::uint64_t, std::uint64_t> weights;  // keys >= 2, weights >= 1
  friend bool operator==(const Weighted&, const Weighted&) = default;
};
}  // namespace family

enum class FamilyTag { Explicit, AllIntegers, Primes, SquareFree, PowersOf, Totient, Weighted };

class FactorSetSpec {
 public:
  using Variant = std::variant<family::Explicit, family::AllIntegers, family::Primes,
                               family::SquareFree, family::PowersOf, family::Totient,
                               family::Weighted>;

  // Constructors validate the family invariants and throw DomainError.
  static FactorSetSpec explicit_set(std::vector<std::uint64_t> members);
  static FactorSetSpec all_integers() { return FactorSetSpec(family::AllIntegers{}); }
  static FactorSetSpec primes() { return FactorSetSpec(family::Primes{}); }
  static FactorSetSpec square_free() { return FactorSetSpec(family::SquareFree{}); }
  static FactorSetSpec powers_of(std::uint64_t base);
  static FactorSetSpec totient() { return FactorSetSpec(family::Totient{}); }
  static FactorSetSpec weighted(std::map<std::uint64_t, std::uint64_t> weights);

  // Grammar: all | primes | squarefree | totient | powers:<d> |
  //          explicit:<q1>,<q2>,... | weighted:<q1>=<w1>,...
  // Explicit lists are sorted and de-duplicated. Throws UsageError.
  static FactorSetSpec parse(std::string_view text);
  // Canonical spec string; parse(to_string()) reproduces the spec.
  std::string to_string() const;

  FamilyTag tag() const;
  const Variant& variant() const { return v_; }
  // Finite support (Explicit, Weighted).
  bool is_finite() const;
  std::string family_name() const;

  friend bool operator==(const FactorSetSpec&, const FactorSetSpec&) = default;

 private:
  explicit FactorSetSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct Member {
  std::uint64_t q;
  std::uint64_t w;
  friend bool operator==(const Member&, const Member&) = default;
};

struct EnumerateLimits {
  // Largest sieve array (entries) any enumeration may allocate.
  std::uint64_t max_sieve_entries = std::uint64_t{1} << 28;
};

// w(q) for q >= 2.
std::uint64_t weight(const FactorSetSpec& spec, std::uint64_t q);

// All (q, w(q)) with 2 <= q <= bound and w(q) >= 1, ascending in q.
// Throws ResourceError if a pre-sieve would exceed `limits`.
std::vector<Member> enumerate(const FactorSetSpec& spec, std::uint64_t bound,
                              const EnumerateLimits& limits = {});

// Every m with phi(m) <= q satisfies m <= totient_search_limit(q).
std::uint64_t totient_search_limit(std::uint64_t q);

// Euler phi by trial division.
std::uint64_t euler_phi(std::uint64_t m);

// phi(m) for 0 <= m <= limit (phi(0) stored as 0).
std::vector<std::uint32_t> phi_sieve(std::uint64_t limit);

// Primes <= limit, ascending.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

bool is_prime(std::uint64_t n);
bool is_square_free(std::uint64_t n);

enum class ApplicabilityReason { OK, SingletonSet, PeriodicInPowersOfD, NoRoot };

struct Applicability {
  bool theorem_applies = true;
  ApplicabilityReason reason = ApplicabilityReason::OK;
  std::uint64_t period_base = 0;  // d for PeriodicInPowersOfD

  static Applicability ok() { return {}; }
  static Applicability singleton() { return {false, ApplicabilityReason::SingletonSet, 0}; }
  static Applicability periodic(std::uint64_t d) {
    return {false, ApplicabilityReason::PeriodicInPowersOfD, d};
  }
  static Applicability no_root() { return {false, ApplicabilityReason::NoRoot, 0}; }
  friend bool operator==(const Applicability&, const Applicability&) = default;
};

std::string to_string(const Applicability& a);

// Smallest r with n = r^e for some e >= 1.
std::uint64_t primitive_root_base(std::uint64_t n);

Applicability detect_periodicity(const FactorSetSpec& spec, std::uint64_t probe_bound);

// Abscissa of convergence: a finite value or -infinity.
class Abscissa {
 public:
  static Abscissa minus_infinity() { return Abscissa(); }
  static Abscissa finite(double v) { return Abscissa(v); }
  bool is_finite() const { return finite_.has_value(); }
  double value() const;  // requires is_finite()
  // max(kappa, 0), the left end of the root-search domain.
  double domain_floor() const { return finite_ ? (*finite_ > 0 ? *finite_ : 0.0) : 0.0; }
  std::string to_string() const;
  friend bool operator==(const Abscissa&, const Abscissa&) = default;

 private:
  Abscissa() = default;
  explicit Abscissa(double v) : finite_(v) {}
  std::optional<double> finite_;
};

Abscissa kappa(const FactorSetSpec& spec);

}  // namespace factoria
