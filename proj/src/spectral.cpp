#include "factoria/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "factoria/error.hpp"

namespace factoria {

namespace {

constexpr int kMaxBracketSteps = 64;
constexpr int kMaxNewtonSteps = 200;

double to_d(const Real& x) { return x.convert_to<double>(); }

}  // namespace

int SpectralConstants::certified_digits() const {
  return std::min({rho.certified_digits(), mu.certified_digits(), sigma2.certified_digits()});
}

SeriesValue solve_P_equals(const FactorSetSpec& spec, const Real& target,
                           const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.working_digits);
  if (target <= 0) throw NoRootError("P(s) = target needs a positive target", 0.0);
  const double floor = kappa(spec).domain_floor();
  auto excess = [&](const Real& s) { return eval_P(spec, s, ctx).value - target; };

  // Left end: a point with P > target, approaching the floor from the right.
  Real lo;
  Real supremum = 0;
  if (spec.is_finite()) {
    Real at_floor = eval_P(spec, Real(floor), ctx).value;
    if (at_floor <= target) {
      throw NoRootError("P(s) <= " + target.str(12) + " for every s > 0 (sup P = " +
                            at_floor.str(12) + ")",
                        to_d(at_floor));
    }
    lo = floor;
  } else {
    bool found = false;
    for (int j = 0; j < kMaxBracketSteps && !found; ++j) {
      Real s = Real(floor) + pow(Real(2), -j);
      Real p = eval_P(spec, s, ctx).value;
      supremum = std::max(supremum, p);
      if (p > target) {
        lo = s;
        found = true;
      }
    }
    if (!found) {
      throw NoRootError("P(s) stays below " + target.str(12) + " on the domain (sup found " +
                            supremum.str(12) + ")",
                        to_d(supremum));
    }
  }
  // Right end by doubling the distance to the floor.
  Real hi = lo + 1;
  for (int j = 0; excess(hi) >= 0; ++j) {
    if (j > kMaxBracketSteps) throw NoRootError("no right bracket for P(s) = target", 0.0);
    lo = hi;
    hi = Real(floor) + 2 * (hi - Real(floor));
  }
  while (hi - lo >= Real(0.5)) {
    Real mid = (lo + hi) / 2;
    if (excess(mid) > 0) lo = mid; else hi = mid;
  }

  // Safeguarded Newton from the left end: P convex decreasing makes the
  // iterates increase monotonically towards the root.
  const Real step_tol = pow(Real(10), -(ctx.working_digits - 3));
  Real x = lo;
  Real radius = 0;
  for (int it = 0; it < kMaxNewtonSteps; ++it) {
    PDerivs d = eval_P_derivs(spec, x, ctx);
    Real f = d.p.value - target;
    if (f > 0) lo = x; else if (f < 0) hi = x;
    Real step = f / d.p1.value;
    radius = 2 * (d.p.error_radius + abs(f)) / abs(d.p1.value) + step_tol;
    // Converged before the safeguard: a step below the resolution of x
    // would otherwise fall outside (lo, hi) and be replaced by the midpoint.
    if (abs(f) <= d.p.error_radius || abs(step) <= step_tol * (1 + abs(x))) {
      return SeriesValue{x - step, radius};
    }
    Real next = x - step;
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    x = next;
  }
  throw PrecisionError("Newton iteration for P(s) = target did not converge");
}

SeriesValue solve_rho(const FactorSetSpec& spec, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  return solve_P_equals(spec, Real(1), ctx);
}

SpectralConstants spectral_constants(const FactorSetSpec& spec, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  SpectralConstants c;
  c.kappa = kappa(spec);
  c.rho = solve_rho(spec, ctx);
  PDerivs d = eval_P_derivs(spec, c.rho.value, ctx);
  const Real& rho = c.rho.value;
  const Real& r_rho = c.rho.error_radius;
  const Real& p = d.p.value;
  const Real& p1 = d.p1.value;
  const Real& p2 = d.p2.value;

  // Derivative values shift by |P^(k+1)| r_rho when rho moves inside its radius;
  // |P'''| is bounded by a generous multiple of |P''|.
  c.P1 = SeriesValue{p1, d.p1.error_radius + abs(p2) * r_rho};
  c.P2 = SeriesValue{p2, d.p2.error_radius + 10 * abs(p2) * r_rho};

  Real mu = -1 / p1;
  Real r_mu = c.P1.error_radius / (p1 * p1);
  c.mu = SeriesValue{mu, r_mu};

  Real sigma2 = mu * mu * mu * p2 - mu;
  Real r_sigma2 = abs(3 * mu * mu * p2 - 1) * r_mu + abs(mu * mu * mu) * c.P2.error_radius;
  c.sigma2 = SeriesValue{sigma2, r_sigma2};

  c.R = SeriesValue{Real(mu / rho), Real(r_mu / rho + mu * r_rho / (rho * rho))};

  Real b2 = p + 2 * mu * p1 + mu * mu * p2;
  c.B2_at_rho = SeriesValue{b2, Real(d.p.error_radius + 2 * r_mu * abs(p1) +
                                     2 * mu * c.P1.error_radius + mu * mu * c.P2.error_radius +
                                     2 * mu * abs(p2) * r_mu)};
  Real b1p = p1 + mu * p2;
  c.B1prime_at_rho = SeriesValue{
      b1p, Real(c.P1.error_radius + mu * c.P2.error_radius + abs(p2) * r_mu)};

  // B1(rho) = P(rho) + mu P'(rho) vanishes identically at the root.
  Real b1 = p + mu * p1;
  Real tol = std::max(Real(pow(Real(10), -(ctx.target_digits - 5))),
                      Real(10 * (d.p.error_radius + abs(p1) * r_rho))) *
             mu;
  if (abs(b1) > tol) {
    throw ConsistencyError("B1(rho) = " + b1.str(6) + " exceeds tolerance " + tol.str(3));
  }
  if (!(mu > 0) || !(sigma2 > 0)) {
    throw ConsistencyError("mu and sigma^2 must be positive");
  }
  return c;
}

Applicability check_applicability(const FactorSetSpec& spec, const PrecisionContext& ctx,
                                  std::uint64_t probe_bound) {
  Applicability a = detect_periodicity(spec, probe_bound);
  if (!a.theorem_applies) return a;
  try {
    solve_rho(spec, ctx);
  } catch (const NoRootError&) {
    return Applicability::no_root();
  }
  return a;
}

double pole_coefficient_ck(const SpectralConstants& constants, int k) {
  if (k < 0 || k % 2 != 0) throw DomainError("pole coefficient c_k needs even k >= 0");
  double factorial = 1;
  for (int i = 2; i <= k; ++i) factorial *= i;
  return constants.mu_d() * std::pow(constants.sigma2_d() / 2, k / 2) * factorial;
}

double gamma_function(double x) {
  double twice = 2 * x;
  if (x > 0 && twice == std::floor(twice) && x <= 170) {
    if (x == std::floor(x)) {
      double f = 1;
      for (int i = 2; i < static_cast<int>(x); ++i) f *= i;
      return f;
    }
    // Gamma(n + 1/2) = sqrt(pi) prod_{i=1}^{n} (i - 1/2)
    double f = std::sqrt(std::numbers::pi);
    for (double t = 0.5; t < x; t += 1) f *= t;
    return f;
  }
  return std::tgamma(x);
}

double delange_prediction(const DelangeQuery& q) {
  if (!(q.varrho > 0) || !(q.beta > 0) || !(q.N >= 2)) {
    throw DomainError("Delange prediction needs varrho > 0, beta > 0, N >= 2");
  }
  const double log_n = std::log(q.N);
  return q.G_at_varrho / (q.varrho * gamma_function(q.beta)) *
         std::exp(q.varrho * log_n + (q.beta - 1) * std::log(log_n));
}

double gaussian_moment(int k) {
  if (k < 0) throw DomainError("moment order must be >= 0");
  if (k % 2 == 1) return 0.0;
  double v = 1;
  for (int i = k - 1; i > 1; i -= 2) v *= i;
  return v;
}

double absolute_moment_prediction(const SpectralConstants& constants, double beta, double N) {
  if (!(beta >= 0) || !(N >= 2)) throw DomainError("absolute moment needs beta >= 0, N >= 2");
  const double sigma = std::sqrt(constants.sigma2_d());
  return std::pow(sigma, beta) * std::pow(2.0, beta / 2) / std::sqrt(std::numbers::pi) *
         gamma_function((beta + 1) / 2) * std::pow(std::log(N), beta / 2);
}

SeriesValue shifted_rho(const FactorSetSpec& spec, double z, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  return solve_P_equals(spec, Real(exp(Real(-z))), ctx);
}

double mgf_prediction(const FactorSetSpec& spec, double z, double N,
                      const SpectralConstants& constants, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  SeriesValue rz = shifted_rho(spec, z, ctx);
  PDerivs dz = eval_P_derivs(spec, rz.value, ctx);
  Real ratio = constants.rho.value * constants.P1.value /
               (rz.value * exp(Real(z)) * dz.p1.value);
  Real power = exp((rz.value - constants.rho.value) * log(Real(N)));
  return Real(ratio * power).convert_to<double>();
}

double mgf_prediction(const FactorSetSpec& spec, double z, double N, const PrecisionContext& ctx) {
  return mgf_prediction(spec, z, N, spectral_constants(spec, ctx), ctx);
}

}  // namespace factoria
