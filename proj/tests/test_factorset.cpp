#include <doctest.h>

#include <numeric>

#include "factoria/error.hpp"
#include "factoria/factorset.hpp"

using namespace factoria;

namespace {

std::uint64_t naive_phi(std::uint64_t m) {
  std::uint64_t c = 0;
  for (std::uint64_t k = 1; k <= m; ++k) c += std::gcd(k, m) == 1 ? 1 : 0;
  return c;
}

std::uint64_t naive_totient_weight(std::uint64_t q) {
  std::uint64_t c = 0;
  for (std::uint64_t m = 3; m <= 2 * q * q; ++m) c += naive_phi(m) == q ? 1 : 0;
  return c;
}

bool naive_square_free(std::uint64_t n) {
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % (d * d) == 0) return false;
  }
  return true;
}

bool naive_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::vector<FactorSetSpec> sample_specs() {
  return {FactorSetSpec::all_integers(),      FactorSetSpec::primes(),
          FactorSetSpec::square_free(),       FactorSetSpec::powers_of(3),
          FactorSetSpec::totient(),           FactorSetSpec::explicit_set({2, 3, 10}),
          FactorSetSpec::weighted({{2, 2}, {5, 3}})};
}

}  // namespace

TEST_CASE("weight examples") {
  CHECK(weight(FactorSetSpec::all_integers(), 7) == 1);
  CHECK(weight(FactorSetSpec::primes(), 9) == 0);
  CHECK(weight(FactorSetSpec::totient(), 2) == 3);
  CHECK(weight(FactorSetSpec::powers_of(2), 8) == 1);
  CHECK(weight(FactorSetSpec::powers_of(2), 6) == 0);
  CHECK(weight(FactorSetSpec::weighted({{4, 7}}), 4) == 7);
}

TEST_CASE("totient weights match brute-force phi") {
  for (std::uint64_t q = 2; q <= 40; ++q) {
    CAPTURE(q);
    CHECK(weight(FactorSetSpec::totient(), q) == naive_totient_weight(q));
  }
  for (std::uint64_t m = 1; m <= 500; ++m) CHECK(euler_phi(m) == naive_phi(m));
}

TEST_CASE("enumerate examples") {
  CHECK(enumerate(FactorSetSpec::explicit_set({2, 3}), 10) == std::vector<Member>{{2, 1}, {3, 1}});
  CHECK(enumerate(FactorSetSpec::square_free(), 12) ==
        std::vector<Member>{{2, 1}, {3, 1}, {5, 1}, {6, 1}, {7, 1}, {10, 1}, {11, 1}});
  // phi = 2 for m in {3,4,6}; phi = 4 for m in {5,8,10,12}.
  std::vector<Member> expected;
  for (std::uint64_t q = 2; q <= 4; ++q) {
    if (auto w = naive_totient_weight(q)) expected.push_back({q, w});
  }
  CHECK(enumerate(FactorSetSpec::totient(), 4) == expected);
  CHECK(expected == std::vector<Member>{{2, 3}, {4, 4}});
}

TEST_CASE("enumerate agrees with weight and with naive membership") {
  for (const auto& spec : sample_specs()) {
    CAPTURE(spec.to_string());
    const std::uint64_t N = spec.tag() == FamilyTag::Totient ? 200 : 3000;
    const auto members = enumerate(spec, N);
    std::size_t i = 0;
    for (std::uint64_t q = 2; q <= N; ++q) {
      const auto w = weight(spec, q);
      if (w == 0) continue;
      REQUIRE(i < members.size());
      CHECK(members[i].q == q);
      CHECK(members[i].w == w);
      ++i;
    }
    CHECK(i == members.size());
  }
  for (std::uint64_t q = 2; q <= 3000; ++q) {
    CHECK((weight(FactorSetSpec::square_free(), q) == 1) == naive_square_free(q));
    CHECK((weight(FactorSetSpec::primes(), q) == 1) == naive_prime(q));
  }
}

TEST_CASE("enumerate is prefix-consistent") {
  for (const auto& spec : sample_specs()) {
    CAPTURE(spec.to_string());
    const std::uint64_t N = spec.tag() == FamilyTag::Totient ? 300 : 5000;
    const auto full = enumerate(spec, N);
    for (std::uint64_t M : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{17}, N / 3, N - 1}) {
      const auto part = enumerate(spec, M);
      REQUIRE(part.size() <= full.size());
      CHECK(std::equal(part.begin(), part.end(), full.begin()));
      if (part.size() < full.size()) CHECK(full[part.size()].q > M);
    }
  }
}

TEST_CASE("totient enumeration respects the sieve cap") {
  EnumerateLimits tiny{1000};
  CHECK_THROWS_AS(enumerate(FactorSetSpec::totient(), 10'000, tiny), ResourceError);
}

TEST_CASE("periodicity detection") {
  CHECK(detect_periodicity(FactorSetSpec::explicit_set({2, 4, 8}), 1000) ==
        Applicability::periodic(2));
  CHECK(detect_periodicity(FactorSetSpec::explicit_set({2, 3}), 1000) == Applicability::ok());
  CHECK(detect_periodicity(FactorSetSpec::explicit_set({5}), 1000) == Applicability::singleton());
  CHECK(detect_periodicity(FactorSetSpec::explicit_set({4, 8}), 1000) ==
        Applicability::periodic(2));
  CHECK(detect_periodicity(FactorSetSpec::powers_of(9), 1000) == Applicability::periodic(3));
  for (const auto& spec : {FactorSetSpec::all_integers(), FactorSetSpec::primes(),
                           FactorSetSpec::square_free(), FactorSetSpec::totient()}) {
    CHECK(detect_periodicity(spec, 1000) == Applicability::ok());
  }
  CHECK(detect_periodicity(FactorSetSpec::weighted({{3, 1}, {9, 2}}), 1000) ==
        Applicability::periodic(3));
  CHECK(detect_periodicity(FactorSetSpec::weighted({{3, 1}}), 1000) ==
        Applicability::singleton());
  CHECK(detect_periodicity(FactorSetSpec::weighted({{3, 2}}), 1000) ==
        Applicability::periodic(3));
}

TEST_CASE("powers of d are periodic for every d and depth") {
  for (std::uint64_t d = 2; d <= 10; ++d) {
    std::vector<std::uint64_t> members;
    std::uint64_t p = 1;
    for (int j = 1; j <= 6; ++j) {
      p *= d;
      members.push_back(p);
      if (j == 1) continue;
      CAPTURE(d);
      CAPTURE(j);
      const auto a = detect_periodicity(FactorSetSpec::explicit_set(members), 10'000'000);
      // 4 = 2^2, 8 = 2^3, 9 = 3^2: the smallest common base is reported.
      CHECK(a == Applicability::periodic(primitive_root_base(d)));
    }
  }
  CHECK(primitive_root_base(64) == 2);
  CHECK(primitive_root_base(36) == 6);
  CHECK(primitive_root_base(7) == 7);
}

TEST_CASE("kappa") {
  CHECK_FALSE(kappa(FactorSetSpec::explicit_set({2, 3})).is_finite());
  CHECK(kappa(FactorSetSpec::all_integers()).value() == 1.0);
  CHECK(kappa(FactorSetSpec::primes()).value() == 1.0);
  CHECK(kappa(FactorSetSpec::square_free()).value() == 1.0);
  CHECK(kappa(FactorSetSpec::totient()).value() == 1.0);
  CHECK(kappa(FactorSetSpec::powers_of(2)).value() == 0.0);
  CHECK(kappa(FactorSetSpec::explicit_set({2, 3})).domain_floor() == 0.0);
}

TEST_CASE("partial sums of n^-1 diverge") {
  // Harmonic partial sums pass every fixed level: kappa = 1 for all integers.
  double h = 0;
  std::uint64_t n = 1;
  for (double level : {5.0, 10.0, 15.0}) {
    while (h < level) h += 1.0 / static_cast<double>(n++);
    CHECK(h >= level);
  }
}

TEST_CASE("spec strings round-trip") {
  const std::pair<const char*, const char*> cases[] = {
      {"all", "all"},
      {"primes", "primes"},
      {"squarefree", "squarefree"},
      {"totient", "totient"},
      {"powers:3", "powers:3"},
      {"explicit:3,2", "explicit:2,3"},
      {"explicit:2,2,5", "explicit:2,5"},
      {"weighted:5=1,2=3", "weighted:2=3,5=1"},
  };
  for (auto [in, canonical] : cases) {
    CAPTURE(in);
    const auto spec = FactorSetSpec::parse(in);
    CHECK(spec.to_string() == canonical);
    CHECK(FactorSetSpec::parse(spec.to_string()) == spec);
  }
  for (const auto& spec : sample_specs()) CHECK(FactorSetSpec::parse(spec.to_string()) == spec);
}

TEST_CASE("malformed spec strings are usage errors") {
  for (const char* bad : {"", "powers:1", "powers:", "explicit:", "explicit:1,2", "explicit:a",
                          "weighted:2=0", "weighted:1=3", "weighted:2", "weighted:2=1,2=3",
                          "evens", "all:3"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(FactorSetSpec::parse(bad), UsageError);
  }
  CHECK_THROWS_AS(FactorSetSpec::powers_of(1), DomainError);
  CHECK_THROWS_AS(FactorSetSpec::explicit_set({}), DomainError);
}
