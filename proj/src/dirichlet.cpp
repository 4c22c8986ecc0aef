#include "factoria/dirichlet.hpp"

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include "factoria/error.hpp"

namespace factoria {

namespace mp = boost::multiprecision;

namespace {

// Euler-Maclaurin correction terms use B_2 .. B_80.
constexpr int kBernoulliPairs = 40;

// B_{2j} / (2j)! for j = 0..kBernoulliPairs (entry 0 unused), exact.
const std::vector<mp::mpq_rational>& bernoulli_over_factorial() {
  static const std::vector<mp::mpq_rational> table = [] {
    const int top = 2 * kBernoulliPairs;
    std::vector<mp::mpq_rational> b(top + 1);
    b[0] = 1;
    for (int m = 1; m <= top; ++m) {
      mp::mpq_rational sum = 0;
      mp::mpz_int binom = 1;  // C(m+1, k)
      for (int k = 0; k < m; ++k) {
        sum += mp::mpq_rational(binom) * b[k];
        binom = binom * (m + 1 - k) / (k + 1);
      }
      b[m] = -sum / (m + 1);
    }
    std::vector<mp::mpq_rational> out(kBernoulliPairs + 1);
    mp::mpz_int fact = 1;
    for (int j = 1; j <= kBernoulliPairs; ++j) {
      fact *= (2 * j - 1) * (2 * j);
      out[j] = b[2 * j] / mp::mpq_rational(fact);
    }
    return out;
  }();
  return table;
}

const std::vector<double>& bernoulli_log10_magnitude() {
  static const std::vector<double> table = [] {
    const auto& c = bernoulli_over_factorial();
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t j = 1; j < c.size(); ++j) {
      out[j] = std::log10(std::fabs(c[j].convert_to<double>()));
    }
    return out;
  }();
  return table;
}

struct EmPlan {
  std::uint64_t n;  // direct terms 1..n-1
  int j;            // correction terms 1..j
};

// log10 of |T_j| for the Euler-Maclaurin correction term j at real x.
double em_term_log10(double x, double n, int j) {
  double v = bernoulli_log10_magnitude()[j];
  for (int i = 0; i <= 2 * j - 2; ++i) v += std::log10(x + i);
  return v - (x + 2 * j - 1) * std::log10(n);
}

std::optional<int> em_terms_for(double x, std::uint64_t n, double log10_eps) {
  for (int j = 0; j < kBernoulliPairs; ++j) {
    if (em_term_log10(x, static_cast<double>(n), j + 1) < log10_eps) return j;
  }
  return std::nullopt;
}

EmPlan plan_euler_maclaurin(double x, const PrecisionContext& ctx) {
  const double log10_eps = -(ctx.working_digits + 2.0);
  if (ctx.em_cutoff) {
    std::uint64_t n = std::max<std::uint64_t>(*ctx.em_cutoff, 2);
    if (auto j = em_terms_for(x, n, log10_eps)) return {n, *j};
    // Best effort: the smallest available term decides certification.
    int best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kBernoulliPairs; ++j) {
      double v = em_term_log10(x, static_cast<double>(n), j + 1);
      if (v < best_v) {
        best_v = v;
        best = j;
      }
    }
    return {n, best};
  }
  std::uint64_t n = 4;
  while (n < 10'000'000) {
    if (auto j = em_terms_for(x, n, log10_eps)) return {n, *j};
    n = n + n / 4 + 1;
  }
  throw PrecisionError("Euler-Maclaurin plan failed at x = " + std::to_string(x));
}

Real eps_of(const PrecisionContext& ctx) {
  return pow(Real(10), -(ctx.working_digits - 1));
}

Real magnitude(const Jet<Real>& j) { return 1 + abs(j.v) + abs(j.d1) + abs(j.d2); }

Real radius_total(const JetValue& x) { return x.radius[0] + x.radius[1] + x.radius[2]; }

void check_target(const JetValue& r, const PrecisionContext& ctx, const char* what) {
  Real limit = pow(Real(10), -ctx.target_digits) * magnitude(r.jet);
  for (int i = 0; i < 3; ++i) {
    if (r.radius[i] > limit) {
      throw PrecisionError(std::string(what) + ": cannot certify " +
                           std::to_string(ctx.target_digits) + " digits");
    }
  }
}

SeriesValue component(const JetValue& j, int order) {
  return SeriesValue{Real(j.jet[order]), Real(j.radius[order])};
}

void require_order(int order) {
  if (order < 0 || order > 2) throw DomainError("derivative order must be 0, 1 or 2");
}

JetValue finite_sum_jet(const std::vector<Member>& members, const Real& s,
                        const PrecisionContext& ctx) {
  JetValue out{};
  for (const auto& m : members) {
    Real ln = log(Real(m.q));
    Real e = exp(-s * ln) * m.w;
    out.jet += Jet<Real>{e, Real(-ln * e), Real(ln * ln * e)};
  }
  Real rnd = eps_of(ctx) * (members.size() + 1) * magnitude(out.jet);
  for (auto& r : out.radius) r = rnd;
  return out;
}

JetValue powers_jet(std::uint64_t d, const Real& s, const PrecisionContext& ctx) {
  Real ln = log(Real(d));
  Real e = exp(-s * ln);
  Jet<Real> x{e, Real(-ln * e), Real(ln * ln * e)};
  Jet<Real> one = Jet<Real>::constant(Real(1));
  JetValue out{};
  out.jet = x / (one - x);
  Real rnd = 8 * eps_of(ctx) * magnitude(out.jet);
  for (auto& r : out.radius) r = rnd;
  return out;
}

JetValue totient_jet(const Real& s, const PrecisionContext& ctx) {
  const std::uint64_t bound = totient_euler_bound(s, ctx);
  JetValue z = zeta_jet(s, 1, ctx);
  Jet<Real> log_product{};
  const auto primes = primes_up_to(bound);
  for (auto p : primes) {
    Real lp = log(Real(p));
    Real ep = exp(-s * lp);
    Jet<Real> u{1 - ep, Real(lp * ep), Real(-lp * lp * ep)};
    if (p > 2) {
      Real lq = log(Real(p - 1));
      Real eq = exp(-s * lq);
      u += Jet<Real>{eq, Real(-lq * eq), Real(lq * lq * eq)};
    } else {
      u += Jet<Real>::constant(Real(1));
    }
    log_product += log(u);
  }
  JetValue out{};
  Jet<Real> product = exp(log_product);
  out.jet = z.jet * product - Jet<Real>::constant(Real(2));

  // sum_{p > bound} log(1 - p^-s + (p-1)^-s) <= s sum_{n >= bound} n^{-s-1}
  //                                          <= bound^-s (1 + s/bound)
  // Each s-derivative of the tail costs at most a factor 2(log bound + 2).
  Real b(bound);
  Real t0 = pow(b, -s) * (1 + s / b);
  Real lb = 2 * (log(b) + 2);
  Real t1 = lb * t0;
  Real t2 = lb * lb * t0;
  Jet<Real> g = z.jet * product;
  Real g0 = abs(g.v), g1 = abs(g.d1), g2 = abs(g.d2);
  Real rnd = eps_of(ctx) * (2 * primes.size() + 8) * magnitude(g);
  Real zeta_err = 4 * radius_total(z) * magnitude(product);
  out.radius[0] = 2 * g0 * t0 + rnd + zeta_err;
  out.radius[1] = 2 * g1 * t0 + 2 * g0 * t1 + rnd + zeta_err;
  out.radius[2] = 2 * g2 * t0 + 4 * g1 * t1 +
                  4 * g0 * (t2 + t1 * t1 + t1 * abs(log_product.d1)) + rnd + zeta_err;
  return out;
}

}  // namespace

void PrecisionContext::validate() const {
  if (target_digits + 10 < 20 || working_digits < target_digits + 10) {
    throw DomainError("precision context requires working_digits >= target_digits + 10 >= 20");
  }
}

PrecisionContext PrecisionContext::with_digits(int target_digits) {
  PrecisionContext ctx;
  ctx.target_digits = target_digits;
  ctx.working_digits = std::max(target_digits + 10, 2 * target_digits);
  return ctx;
}

JetValue zeta_jet(const Real& s, int scale, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.working_digits);
  Real x = s * scale;
  if (x <= 1) throw DomainError("zeta requires s > 1");
  const EmPlan plan = plan_euler_maclaurin(x.convert_to<double>(), ctx);
  const Real k(scale);

  Jet<Real> sum{};
  sum.v = 1;
  for (std::uint64_t n = 2; n < plan.n; ++n) {
    Real ln = log(Real(n));
    Real e = exp(-x * ln);
    Real kl = k * ln;
    sum += Jet<Real>{e, Real(-kl * e), Real(kl * kl * e)};
  }
  const Real big_n(plan.n);
  const Real ln_n = log(big_n);
  const Real kln = k * ln_n;
  const Real e_n = exp(-x * ln_n);
  const Jet<Real> power{e_n, Real(-kln * e_n), Real(kln * kln * e_n)};  // N^-x
  const Jet<Real> x_jet{x, k, Real(0)};

  sum += (power * big_n) / (x_jet - Jet<Real>::constant(Real(1)));
  sum += power * Real(0.5);

  const auto& coeffs = bernoulli_over_factorial();
  Jet<Real> rising = x_jet;  // x (x+1) ... (x+2j-2)
  Real inv_n2 = 1 / (big_n * big_n);
  Real n_pow = 1 / big_n;  // N^-(2j-1)
  Jet<Real> next_term{};
  for (int j = 1; j <= plan.j + 1 && j <= kBernoulliPairs; ++j) {
    Jet<Real> term = power * rising * Real(Real(coeffs[j]) * n_pow);
    if (j <= plan.j) sum += term; else next_term = term;
    rising = rising * (x_jet + Jet<Real>::constant(Real(2 * j - 1)));
    rising = rising * (x_jet + Jet<Real>::constant(Real(2 * j)));
    n_pow *= inv_n2;
  }

  JetValue out{};
  out.jet = sum;
  const Real rnd = eps_of(ctx) * (plan.n + 2 * plan.j + 4) * magnitude(sum);
  const Real growth = k * (ln_n + 1);
  Real g = 1;
  for (int i = 0; i < 3; ++i) {
    out.radius[i] = 4 * (abs(next_term[i]) + abs(next_term.v) * g) + rnd;
    g *= growth;
  }
  return out;
}

SeriesValue zeta(const Real& s, const PrecisionContext& ctx, int order) {
  require_order(order);
  PrecisionGuard guard(ctx.working_digits);
  JetValue z = zeta_jet(s, 1, ctx);
  check_target(z, ctx, "zeta");
  return component(z, order);
}

int mobius(std::uint64_t k) {
  if (k < 1) throw DomainError("mobius requires k >= 1");
  int sign = 1;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    if (k % p == 0) {
      k /= p;
      if (k % p == 0) return 0;
      sign = -sign;
    }
  }
  if (k > 1) sign = -sign;
  return sign;
}

JetValue prime_zeta_jet(const Real& s, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.working_digits);
  if (s <= 1) throw DomainError("prime zeta requires s > 1");
  const double sd = s.convert_to<double>();
  // Tail of sum_{k > K} mu(k)/k log zeta(ks), all orders:
  // <= 128 (K+1)^2 2^{-(K+1)s}.
  auto tail_log10 = [&](std::uint64_t terms) {
    double next = static_cast<double>(terms + 1);
    return std::log10(128.0 * next * next) - next * sd * std::log10(2.0);
  };
  std::uint64_t terms = 1;
  if (ctx.mobius_terms) {
    terms = *ctx.mobius_terms;
  } else {
    while (tail_log10(terms) > -(ctx.working_digits + 2.0)) ++terms;
  }

  JetValue out{};
  Real radius = 0;
  for (std::uint64_t k = 1; k <= terms; ++k) {
    int mu = mobius(k);
    if (mu == 0) continue;
    JetValue z = zeta_jet(s, static_cast<int>(k), ctx);
    out.jet += log(z.jet) * Real(Real(mu) / k);
    radius += 4 * radius_total(z) * magnitude(z.jet);
  }
  Real next(terms + 1);
  Real tail = 128 * next * next * pow(Real(2), -next * s);
  for (auto& r : out.radius) r = radius + tail;
  return out;
}

SeriesValue prime_zeta(const Real& s, const PrecisionContext& ctx, int order) {
  require_order(order);
  PrecisionGuard guard(ctx.working_digits);
  JetValue p = prime_zeta_jet(s, ctx);
  check_target(p, ctx, "prime zeta");
  return component(p, order);
}

std::uint64_t totient_euler_bound(const Real& s, const PrecisionContext& ctx) {
  if (ctx.euler_product_bound) return *ctx.euler_product_bound;
  // Smallest power of two with bound^-s < 10^-(target+2), capped.
  const double sd = s.convert_to<double>();
  const double needed = std::pow(10.0, (ctx.target_digits + 2.0) / sd);
  std::uint64_t bound = 16;
  while (static_cast<double>(bound) < needed && bound < PrecisionContext::kDefaultEulerProductCap) {
    bound *= 2;
  }
  return std::min(bound, PrecisionContext::kDefaultEulerProductCap);
}

double eval_domain_floor(const FactorSetSpec& spec) {
  if (spec.is_finite()) return -std::numeric_limits<double>::infinity();
  if (spec.tag() == FamilyTag::PowersOf) return 0.0;
  return 1.0;
}

namespace {

JetValue eval_P_jet(const FactorSetSpec& spec, const Real& s, const PrecisionContext& ctx) {
  ctx.validate();
  PrecisionGuard guard(ctx.working_digits);
  if (!(s > eval_domain_floor(spec))) {
    throw DomainError("P(s) of family " + spec.family_name() + " undefined at s = " +
                      s.str(12) + " (s must exceed " + kappa(spec).to_string() + ")");
  }
  switch (spec.tag()) {
    case FamilyTag::Explicit:
    case FamilyTag::Weighted:
      return finite_sum_jet(enumerate(spec, std::numeric_limits<std::uint64_t>::max()), s, ctx);
    case FamilyTag::PowersOf:
      return powers_jet(std::get<family::PowersOf>(spec.variant()).base, s, ctx);
    case FamilyTag::AllIntegers: {
      JetValue z = zeta_jet(s, 1, ctx);
      z.jet -= Jet<Real>::constant(Real(1));
      return z;
    }
    case FamilyTag::Primes:
      return prime_zeta_jet(s, ctx);
    case FamilyTag::SquareFree: {
      JetValue num = zeta_jet(s, 1, ctx);
      JetValue den = zeta_jet(s, 2, ctx);
      JetValue out{};
      out.jet = num.jet / den.jet - Jet<Real>::constant(Real(1));
      Real r = 4 * (radius_total(num) + magnitude(out.jet) * radius_total(den)) * magnitude(out.jet);
      for (auto& x : out.radius) x = r;
      return out;
    }
    case FamilyTag::Totient:
      return totient_jet(s, ctx);
  }
  throw DomainError("unknown family");
}

}  // namespace

SeriesValue eval_P(const FactorSetSpec& spec, const Real& s, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  return component(eval_P_jet(spec, s, ctx), 0);
}

PDerivs eval_P_derivs(const FactorSetSpec& spec, const Real& s, const PrecisionContext& ctx) {
  PrecisionGuard guard(ctx.working_digits);
  JetValue j = eval_P_jet(spec, s, ctx);
  return PDerivs{component(j, 0), component(j, 1), component(j, 2)};
}

PDerivs finite_difference_derivs(const FactorSetSpec& spec, const Real& s,
                                 const PrecisionContext& ctx) {
  PrecisionContext fine = ctx;
  fine.working_digits = ctx.working_digits + 20;
  PrecisionGuard guard(fine.working_digits);
  if (spec.tag() == FamilyTag::Totient) fine.euler_product_bound = totient_euler_bound(s, ctx);
  if (spec.tag() == FamilyTag::Primes && !fine.mobius_terms) {
    // Same truncation at every stencil point.
    double sd = s.convert_to<double>() - 1e-3;
    std::uint64_t terms = 1;
    while (std::log10(128.0 * (terms + 1) * (terms + 1)) - (terms + 1) * sd * std::log10(2.0) >
           -(fine.working_digits + 2.0)) {
      ++terms;
    }
    fine.mobius_terms = terms;
  }
  const Real h = pow(Real(10), -(fine.working_digits / 4));
  auto f = [&](const Real& x) { return eval_P(spec, x, fine).value; };
  const Real f0 = f(s);

  auto first = [&](const Real& step) { return (f(s + step) - f(s - step)) / (2 * step); };
  auto second = [&](const Real& step) {
    return (f(s + step) - 2 * f0 + f(s - step)) / (step * step);
  };
  Real half = h / 2;
  Real d1 = (4 * first(half) - first(h)) / 3;
  Real d2 = (4 * second(half) - second(h)) / 3;

  // Richardson leaves O(h^4); rounding contributes eps/h^2.
  Real eps = pow(Real(10), -(fine.working_digits - 1));
  Real h4 = h * h * h * h;
  Real scale = 1 + abs(f0) + abs(d1) + abs(d2);
  PDerivs out{SeriesValue{f0, eps * scale},
              SeriesValue{d1, (h4 + eps / h) * 100 * scale},
              SeriesValue{d2, (h4 + eps / (h * h)) * 100 * scale}};
  return out;
}

}  // namespace factoria
