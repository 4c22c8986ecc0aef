#include <doctest.h>

#include <cmath>
#include <numbers>

#include "factoria/error.hpp"
#include "factoria/spectral.hpp"

using namespace factoria;

namespace {

const PrecisionContext kCtx = PrecisionContext::with_digits(30);

template <class F>
double bisect(F f, double lo, double hi) {
  // f decreasing with f(lo) > 0 > f(hi).
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double zeta_direct(double s) {
  // Direct sum with an integral tail; ample for bisection to 1e-12.
  double sum = 0;
  const int M = 200000;
  for (int n = M; n >= 1; --n) sum += std::pow(n, -s);
  return sum + std::pow(M, 1 - s) / (s - 1) - 0.5 * std::pow(M, -s);
}

}  // namespace

TEST_CASE("primes constants reproduce the published digits") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::primes(), kCtx);
  CHECK(abs(c.rho.value - Real("1.39943332872633031820280")) < Real("1e-22"));
  CHECK(abs(c.mu.value - Real("0.57764862519513805440613")) < Real("1e-22"));
  CHECK(abs(c.sigma2.value - Real("0.48439650451359828128074")) < Real("1e-22"));
  CHECK(c.certified_digits() >= 20);
  CHECK(c.kappa == Abscissa::finite(1));
}

TEST_CASE("Kalmar root solves zeta(s) = 2") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto rho = solve_rho(FactorSetSpec::all_integers(), kCtx);
  CHECK(std::round(rho.value.convert_to<double>() * 1e4) == 17286);
  CHECK(abs(zeta(rho.value, kCtx, 0).value - 2) < Real("1e-20"));
  const double oracle = bisect([](double s) { return zeta_direct(s) - 2; }, 1.1, 3);
  CHECK(std::fabs(rho.value.convert_to<double>() - oracle) < 1e-9);
}

TEST_CASE("finite sets match a bisection oracle and the direct mu formula") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto spec = FactorSetSpec::explicit_set({2, 3});
  const auto c = spectral_constants(spec, kCtx);
  const double oracle =
      bisect([](double s) { return std::pow(2, -s) + std::pow(3, -s) - 1; }, 0.1, 5);
  CHECK(std::fabs(c.rho_d() - oracle) < 1e-14);
  const Real r = c.rho.value;
  const Real mu = 1 / (pow(Real(2), -r) * log(Real(2)) + pow(Real(3), -r) * log(Real(3)));
  CHECK(abs(c.mu.value - mu) < Real("1e-40"));
  const Real p2 = pow(Real(2), -r) * pow(log(Real(2)), 2) + pow(Real(3), -r) * pow(log(Real(3)), 2);
  CHECK(abs(c.sigma2.value - (mu * mu * mu * p2 - mu)) < Real("1e-40"));
  CHECK(abs(c.R.value - mu / r) < Real("1e-40"));
}

TEST_CASE("constants invariants for every family") {
  PrecisionGuard guard(kCtx.working_digits);
  for (const auto& spec : {FactorSetSpec::all_integers(), FactorSetSpec::primes(),
                           FactorSetSpec::square_free(), FactorSetSpec::totient(),
                           FactorSetSpec::powers_of(2), FactorSetSpec::explicit_set({2, 3, 7}),
                           FactorSetSpec::weighted({{2, 1}, {3, 2}})}) {
    CAPTURE(spec.to_string());
    const auto c = spectral_constants(spec, kCtx);
    CHECK(c.rho.value > c.kappa.domain_floor());
    CHECK(c.mu.value > 0);
    CHECK(c.sigma2.value > 0);
    const auto p = eval_P(spec, c.rho.value, kCtx);
    CHECK(abs(p.value - 1) <= 10 * (c.rho.error_radius * abs(c.P1.value) + p.error_radius) +
                                  Real("1e-55"));
    const Real b1 = p.value + c.mu.value * c.P1.value;
    CHECK(abs(b1) <= 10 * (p.error_radius + c.mu.value * c.P1.error_radius) + Real("1e-50"));
    CHECK(abs(c.B2_at_rho.value - c.sigma2.value / c.mu.value) <= Real("1e-5") * c.B2_at_rho.value);
    CHECK(abs(c.B1prime_at_rho.value - c.sigma2.value / (c.mu.value * c.mu.value)) <=
          Real("1e-5") * c.B1prime_at_rho.value);
  }
}

TEST_CASE("powers of 2 solve P = 1 at s = 1") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto rho = solve_rho(FactorSetSpec::powers_of(2), kCtx);
  CHECK(abs(rho.value - 1) < Real("1e-28"));
}

TEST_CASE("no root for a singleton") {
  CHECK_THROWS_AS(solve_rho(FactorSetSpec::explicit_set({2}), kCtx), NoRootError);
  try {
    solve_rho(FactorSetSpec::explicit_set({2}), kCtx);
  } catch (const NoRootError& e) {
    CHECK(e.supremum() <= 1.0);
  }
  CHECK(check_applicability(FactorSetSpec::explicit_set({3}), kCtx) == Applicability::singleton());
  CHECK(check_applicability(FactorSetSpec::explicit_set({2, 3}), kCtx) == Applicability::ok());
  // Sum of weights 1 at s = 0 for {2:1}; never exceeds 1 on s > 0.
  CHECK(check_applicability(FactorSetSpec::weighted({{2, 1}}), kCtx).theorem_applies == false);
}

TEST_CASE("precision stability across working precisions") {
  std::vector<SpectralConstants> runs;
  for (int digits : {30, 60, 90}) {
    PrecisionContext ctx;
    ctx.working_digits = digits;
    ctx.target_digits = digits - 10;
    PrecisionGuard guard(digits + 10);
    runs.push_back(spectral_constants(FactorSetSpec::primes(), ctx));
  }
  PrecisionGuard guard(100);
  for (std::size_t i = 1; i < runs.size(); ++i) {
    const Real radius = std::min(runs[0].rho.error_radius, runs[i].rho.error_radius);
    CHECK(abs(runs[i].rho.value - runs[0].rho.value) <= runs[0].rho.error_radius + radius);
    CHECK(abs(runs[i].sigma2.value - runs[0].sigma2.value) <=
          runs[0].sigma2.error_radius + runs[i].sigma2.error_radius);
  }
  CHECK(runs[2].certified_digits() > runs[0].certified_digits());
}

TEST_CASE("pole coefficients") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::primes(), kCtx);
  const double mu = c.mu_d(), s2 = c.sigma2_d();
  CHECK(pole_coefficient_ck(c, 0) == doctest::Approx(mu).epsilon(1e-15));
  CHECK(pole_coefficient_ck(c, 2) == doctest::Approx(mu * s2).epsilon(1e-14));
  CHECK(pole_coefficient_ck(c, 4) == doctest::Approx(24 * mu * (s2 / 2) * (s2 / 2)).epsilon(1e-14));
  CHECK_THROWS_AS(pole_coefficient_ck(c, 3), DomainError);
  CHECK_THROWS_AS(pole_coefficient_ck(c, -2), DomainError);
}

TEST_CASE("Delange prediction") {
  CHECK(delange_prediction({1, 1, 1, std::numbers::e}) == doctest::Approx(std::numbers::e));
  PrecisionGuard guard(kCtx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::all_integers(), kCtx);
  const double N = 1e5;
  CHECK(delange_prediction({c.rho_d(), 1, c.mu_d(), N}) ==
        doctest::Approx(c.R_d() * std::pow(N, c.rho_d())).epsilon(1e-13));
  const double k4 = delange_prediction({c.rho_d(), 3, pole_coefficient_ck(c, 4), N});
  CHECK(k4 == doctest::Approx(pole_coefficient_ck(c, 4) / (c.rho_d() * 2) * std::pow(N, c.rho_d()) *
                              std::pow(std::log(N), 2))
                  .epsilon(1e-13));
  CHECK_THROWS_AS(delange_prediction({0, 1, 1, 10}), DomainError);
  CHECK_THROWS_AS(delange_prediction({1, 0, 1, 10}), DomainError);
  CHECK_THROWS_AS(delange_prediction({1, 1, 1, 1}), DomainError);
}

TEST_CASE("gamma function closed forms") {
  CHECK(gamma_function(1) == 1);
  CHECK(gamma_function(5) == 24);
  CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(gamma_function(3.5) ==
        doctest::Approx(15.0 / 8 * std::sqrt(std::numbers::pi)).epsilon(1e-15));
  CHECK(gamma_function(2.3) == doctest::Approx(std::tgamma(2.3)).epsilon(1e-14));
}

TEST_CASE("Gaussian moments") {
  CHECK(gaussian_moment(0) == 1);
  CHECK(gaussian_moment(2) == 1);
  CHECK(gaussian_moment(4) == 3);
  CHECK(gaussian_moment(6) == 15);
  CHECK(gaussian_moment(7) == 0);
  for (int k = 2; k <= 16; k += 2) CHECK(gaussian_moment(k) == (k - 1) * gaussian_moment(k - 2));
}

TEST_CASE("absolute moment prediction") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto c = spectral_constants(FactorSetSpec::primes(), kCtx);
  const double N = 1e6, L = std::log(N), s = std::sqrt(c.sigma2_d());
  CHECK(absolute_moment_prediction(c, 0, N) == doctest::Approx(1).epsilon(1e-15));
  CHECK(absolute_moment_prediction(c, 2, N) == doctest::Approx(c.sigma2_d() * L).epsilon(1e-14));
  CHECK(absolute_moment_prediction(c, 1, N) ==
        doctest::Approx(s * std::sqrt(2 * L / std::numbers::pi)).epsilon(1e-14));
  CHECK(absolute_moment_prediction(c, 4, N) ==
        doctest::Approx(3 * c.sigma2_d() * c.sigma2_d() * L * L).epsilon(1e-13));
}

TEST_CASE("shifted root") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto spec = FactorSetSpec::all_integers();
  const auto c = spectral_constants(spec, kCtx);
  CHECK(abs(shifted_rho(spec, 0, kCtx).value - c.rho.value) <= 2 * c.rho.error_radius);
  // z = log(1/2): P = 2, i.e. zeta(s) = 3.
  const double z_half = std::log(0.5);
  const auto r = shifted_rho(spec, z_half, kCtx);
  const double oracle = bisect([](double s) { return zeta_direct(s) - 3; }, 1.05, 3);
  CHECK(std::fabs(r.value.convert_to<double>() - oracle) < 1e-9);
  CHECK(abs(zeta(r.value, kCtx, 0).value - 1 - exp(-Real(z_half))) < Real("1e-25"));
  // P(rho(z)) = e^{-z} with P decreasing: rho(z) increases with z.
  double previous = 0;
  for (double z : {-1.0, -0.5, 0.0, 0.3, 1.0, 3.0}) {
    const auto v = shifted_rho(spec, z, kCtx);
    CHECK(v.value.convert_to<double>() > previous);
    CHECK(abs(eval_P(spec, v.value, kCtx).value - exp(Real(-z))) < Real("1e-25"));
    previous = v.value.convert_to<double>();
  }
  // A finite set has sup P = |P| on s > 0; e^{-z} >= 2 has no root for {2, 3}.
  CHECK_THROWS_AS(shifted_rho(FactorSetSpec::explicit_set({2, 3}), -std::log(2.5), kCtx),
                  NoRootError);
}

TEST_CASE("MGF prediction is 1 at z = 0") {
  PrecisionGuard guard(kCtx.working_digits);
  const auto spec = FactorSetSpec::primes();
  CHECK(mgf_prediction(spec, 0, 1e4, kCtx) == 1.0);
  const double v = mgf_prediction(spec, 0.1, 1e4, kCtx);
  CHECK(v > 1);
  CHECK(std::isfinite(v));
}
