#include <doctest.h>

#include <boost/math/constants/constants.hpp>

#include <cmath>

#include "factoria/dirichlet.hpp"
#include "factoria/error.hpp"

using namespace factoria;

namespace {

const PrecisionContext kCtx = PrecisionContext::with_digits(30);

bool within(const Real& a, const Real& b, const char* tol) { return abs(a - b) <= Real(tol); }

std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit + 1, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

std::vector<FactorSetSpec> families() {
  return {FactorSetSpec::all_integers(), FactorSetSpec::primes(), FactorSetSpec::square_free(),
          FactorSetSpec::powers_of(2), FactorSetSpec::totient(),
          FactorSetSpec::explicit_set({2, 3}), FactorSetSpec::weighted({{2, 2}, {3, 1}, {7, 4}})};
}

// Points right of the domain floor, spread over the interesting range.
std::vector<Real> sample_points(const FactorSetSpec& spec) {
  const double floor = eval_domain_floor(spec);
  const double base = std::isfinite(floor) ? floor : 0.0;
  return {Real(base + 0.3), Real(base + 0.7), Real(base + 1.1), Real(base + 2.0), Real(base + 4.5)};
}

}  // namespace

TEST_CASE("precision context invariants") {
  PrecisionContext ctx;
  CHECK(ctx.working_digits == 60);
  CHECK_NOTHROW(ctx.validate());
  ctx.target_digits = 55;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  ctx.working_digits = 15;
  ctx.target_digits = 5;
  CHECK_THROWS_AS(ctx.validate(), DomainError);
  const auto w = PrecisionContext::with_digits(30);
  CHECK(w.working_digits >= w.target_digits + 10);
}

TEST_CASE("zeta at 2 is pi^2/6") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto z = zeta(Real(2), kCtx, 0);
  const Real pi = boost::math::constants::pi<Real>();
  CHECK(abs(z.value - pi * pi / 6) <= z.error_radius + Real("1e-55"));
  CHECK(z.certified_digits() >= kCtx.target_digits);
  const auto z4 = zeta(Real(4), kCtx, 0);
  CHECK(within(z4.value, pow(pi, 4) / 90, "1e-45"));
}

TEST_CASE("zeta'(2) against the differentiated direct sum") {
  // -sum log n / n^2 to M, tail by integral with two correction terms.
  const std::uint64_t M = 1'000'000;
  long double s = 0;
  for (std::uint64_t n = M; n >= 2; --n) {
    const long double x = n;
    s -= std::log(x) / (x * x);
  }
  const long double lm = std::log(static_cast<long double>(M));
  const long double m = M;
  const long double tail = (lm + 1) / m - lm / (2 * m * m) + (1 - 2 * lm) / (12 * m * m * m);
  const long double oracle = s - tail;
  PrecisionGuard guard(kCtx.working_digits);
  const auto d = zeta(Real(2), kCtx, 1);
  CHECK(std::fabs(d.value.convert_to<long double>() - oracle) < 1e-15L);
  CHECK(d.value < 0);
}

TEST_CASE("zeta'' against differentiated direct sum") {
  const std::uint64_t M = 1'000'000;
  long double s = 0;
  for (std::uint64_t n = M; n >= 2; --n) {
    const long double x = n, l = std::log(x);
    s += l * l / (x * x * x);
  }
  const long double lm = std::log(static_cast<long double>(M));
  const long double m = M;
  // int_M^inf log^2 x / x^3 dx
  const long double tail = (2 * lm * lm + 2 * lm + 1) / (4 * m * m) - lm * lm / (2 * m * m * m);
  PrecisionGuard guard(kCtx.working_digits);
  const auto d = zeta(Real(3), kCtx, 2);
  CHECK(std::fabs(d.value.convert_to<long double>() - (s + tail)) < 1e-15L);
}

TEST_CASE("zeta rejects s <= 1") {
  CHECK_THROWS_AS(zeta(Real(1), kCtx, 0), DomainError);
  CHECK_THROWS_AS(zeta(Real("0.5"), kCtx, 0), DomainError);
}

TEST_CASE("zeta precision error when the cutoff is pinned too low") {
  PrecisionContext ctx = kCtx;
  ctx.em_cutoff = 2;
  CHECK_THROWS_AS(zeta(Real("1.01"), ctx, 0), PrecisionError);
}

TEST_CASE("mobius") {
  CHECK(mobius(1) == 1);
  CHECK(mobius(4) == 0);
  CHECK(mobius(6) == 1);
  CHECK(mobius(30) == -1);
  CHECK(mobius(7) == -1);
  for (std::uint64_t k = 1; k <= 300; ++k) {
    int brute = 1;
    std::uint64_t n = k;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      n /= p;
      if (n % p == 0) brute = 0;
      while (n % p == 0) n /= p;
      brute = -brute;
    }
    if (n > 1) brute = -brute;
    CAPTURE(k);
    CHECK(mobius(k) == brute);
  }
}

TEST_CASE("prime zeta at 2 against a direct prime sum") {
  const std::uint64_t M = 10'000'000;
  long double partial = 0;
  const auto primes = sieve_primes(M);
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    const long double p = *it;
    partial += 1 / (p * p);
  }
  PrecisionGuard guard(kCtx.working_digits);
  const auto v = prime_zeta(Real(2), kCtx, 0);
  const long double value = v.value.convert_to<long double>();
  // 0 < sum_{p > M} p^-2 < sum_{n > M} n^-2 < 1/M
  CHECK(value > partial);
  CHECK(value - partial < 1.0L / M);
}

TEST_CASE("prime zeta asymptotics and the primes root") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto v = prime_zeta(Real(50), kCtx, 0);
  // 2^-50 leads, but 3^-50 is already 1.6e-9 of it.
  const Real two50 = pow(Real(2), -50);
  CHECK(abs(v.value / two50 - 1) < Real("2e-9"));
  Real head = 0;
  for (int p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) head += pow(Real(p), -50);
  CHECK(abs(v.value / head - 1) < Real("1e-25"));
  const auto at_rho = prime_zeta(Real("1.39943332872633031820280"), kCtx, 0);
  CHECK(abs(at_rho.value - 1) < Real("1e-20"));
}

TEST_CASE("prime zeta derivatives against direct prime sums") {
  const auto primes = sieve_primes(2'000'000);
  long double d1 = 0, d2 = 0;
  for (auto it = primes.rbegin(); it != primes.rend(); ++it) {
    const long double p = *it, l = std::log(p), t = std::pow(p, -3.0L);
    d1 -= l * t;
    d2 += l * l * t;
  }
  PrecisionGuard guard(kCtx.working_digits);
  const auto derivs = eval_P_derivs(FactorSetSpec::primes(), Real(3), kCtx);
  // Tails beyond 2e6 are below 1e-11.
  CHECK(std::fabs(derivs.p1.value.convert_to<long double>() - d1) < 1e-11L);
  CHECK(std::fabs(derivs.p2.value.convert_to<long double>() - d2) < 1e-10L);
}

TEST_CASE("eval_P examples") {
  PrecisionGuard guard(kCtx.working_digits);
  CHECK(within(eval_P(FactorSetSpec::explicit_set({2, 3}), Real(1), kCtx).value, Real(5) / 6,
               "1e-50"));
  CHECK(within(eval_P(FactorSetSpec::all_integers(), Real("1.7286472389"), kCtx).value, Real(1),
               "1e-8"));
  CHECK(within(eval_P(FactorSetSpec::totient(), Real("2.26386"), kCtx).value, Real(1), "1e-4"));
  const Real pi = boost::math::constants::pi<Real>();
  CHECK(within(eval_P(FactorSetSpec::square_free(), Real(2), kCtx).value, 15 / (pi * pi) - 1,
               "1e-40"));
  CHECK(within(eval_P(FactorSetSpec::powers_of(3), Real(1), kCtx).value, Real(1) / 2, "1e-50"));
  CHECK(within(eval_P(FactorSetSpec::weighted({{2, 3}, {4, 1}}), Real(2), kCtx).value,
               Real(3) / 4 + Real(1) / 16, "1e-50"));
}

TEST_CASE("totient series against a direct phi sum") {
  // sum_{m >= 3} phi(m)^-s at s = 4, directly to m = 2e5; tail < sum phi(m)^-4 over m > 2e5.
  const std::uint64_t M = 200'000;
  std::vector<std::uint64_t> phi(M + 1);
  for (std::uint64_t i = 0; i <= M; ++i) phi[i] = i;
  for (std::uint64_t p = 2; p <= M; ++p) {
    if (phi[p] != p) continue;
    for (std::uint64_t k = p; k <= M; k += p) phi[k] -= phi[k] / p;
  }
  long double direct = 0;
  for (std::uint64_t m = M; m >= 3; --m) direct += std::pow(static_cast<long double>(phi[m]), -4.0L);
  PrecisionGuard guard(kCtx.working_digits);
  const auto v = eval_P(FactorSetSpec::totient(), Real(4), kCtx);
  CHECK(std::fabs(v.value.convert_to<long double>() - direct) < 1e-12L);
}

TEST_CASE("domain errors at or left of the abscissa") {
  CHECK_THROWS_AS(eval_P(FactorSetSpec::all_integers(), Real(1), kCtx), DomainError);
  CHECK_THROWS_AS(eval_P(FactorSetSpec::primes(), Real("0.9"), kCtx), DomainError);
  CHECK_THROWS_AS(eval_P(FactorSetSpec::powers_of(2), Real(0), kCtx), DomainError);
  CHECK_NOTHROW(eval_P(FactorSetSpec::explicit_set({2}), Real(-3), kCtx));
}

TEST_CASE("monotone decreasing and convex on the domain") {
  PrecisionGuard guard(kCtx.working_digits);
  for (const auto& spec : families()) {
    CAPTURE(spec.to_string());
    const auto points = sample_points(spec);
    Real previous = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const auto d = eval_P_derivs(spec, points[i], kCtx);
      CHECK(d.p1.value < 0);
      CHECK(d.p2.value > 0);
      if (i > 0) CHECK(d.p.value < previous);
      previous = d.p.value;
    }
  }
}

TEST_CASE("analytic derivatives agree with Richardson differences") {
  PrecisionGuard guard(kCtx.working_digits + 20);
  for (const auto& spec : families()) {
    CAPTURE(spec.to_string());
    for (const auto& s : sample_points(spec)) {
      const auto a = eval_P_derivs(spec, s, kCtx);
      const auto b = finite_difference_derivs(spec, s, kCtx);
      for (int order = 0; order < 3; ++order) {
        CAPTURE(order);
        const Real diff = abs(a[order].value - b[order].value);
        CHECK(certified_digits(a[order].value, diff) >= kCtx.target_digits / 2);
      }
    }
  }
}

TEST_CASE("error radii are honest under +20 digits") {
  const auto fine = PrecisionContext::with_digits(kCtx.target_digits + 20);
  PrecisionGuard guard(fine.working_digits);
  for (const auto& spec : families()) {
    CAPTURE(spec.to_string());
    for (const auto& s : sample_points(spec)) {
      const auto a = eval_P_derivs(spec, s, kCtx);
      const auto b = eval_P_derivs(spec, s, fine);
      for (int order = 0; order < 3; ++order) {
        CAPTURE(order);
        CHECK(abs(a[order].value - b[order].value) <= a[order].error_radius);
      }
    }
  }
}

TEST_CASE("totient Euler bound follows the target, up to the cap") {
  auto loose = PrecisionContext::with_digits(20);
  const auto b_loose = totient_euler_bound(Real(3), loose);
  const auto b_tight = totient_euler_bound(Real(3), kCtx);
  CHECK(b_loose <= b_tight);
  CHECK(b_tight <= PrecisionContext::kDefaultEulerProductCap);
  loose.euler_product_bound = 1000;
  CHECK(totient_euler_bound(Real(3), loose) == 1000);
  PrecisionGuard guard(loose.working_digits);
  const auto v = eval_P(FactorSetSpec::totient(), Real(3), loose);
  CHECK(v.error_radius > 0);
}
