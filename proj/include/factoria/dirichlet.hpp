#pragma once

#include <cstdint>
#include <optional>

#include "factoria/factorset.hpp"
#include "factoria/real.hpp"

namespace factoria {

// Precision knobs for every analytic evaluation. Unset caps are chosen
// adaptively from the target.
struct PrecisionContext {
  int working_digits = 60;
  int target_digits = 50;
  std::optional<std::uint64_t> em_cutoff;            // Euler-Maclaurin: terms summed directly
  std::optional<std::uint64_t> euler_product_bound;  // totient product over p <= bound
  std::optional<std::uint64_t> mobius_terms;         // prime zeta: k <= mobius_terms

  // Largest Euler product bound the adaptive rule may pick.
  static constexpr std::uint64_t kDefaultEulerProductCap = 100'000;

  // Throws DomainError unless working_digits >= target_digits + 10 >= 20.
  void validate() const;
  static PrecisionContext with_digits(int target_digits);
};

struct SeriesValue {
  Real value;
  Real error_radius;

  int certified_digits() const { return factoria::certified_digits(value, error_radius); }
};

struct PDerivs {
  SeriesValue p;
  SeriesValue p1;
  SeriesValue p2;

  const SeriesValue& operator[](int order) const { return order == 0 ? p : (order == 1 ? p1 : p2); }
};

// Jet-valued evaluation with per-order error radii. Internal currency of
// the module, exposed for callers that need all orders at once.
struct JetValue {
  Jet<Real> jet;
  Real radius[3];
};

// Riemann zeta on the real axis s > 1 by Euler-Maclaurin summation.
SeriesValue zeta(const Real& s, const PrecisionContext& ctx, int order);

// zeta(scale * t) and its first two t-derivatives, at t = s / scale.
JetValue zeta_jet(const Real& s, int scale, const PrecisionContext& ctx);

int mobius(std::uint64_t k);

// sum_p p^-s from the Moebius-log-zeta identity.
SeriesValue prime_zeta(const Real& s, const PrecisionContext& ctx, int order);
JetValue prime_zeta_jet(const Real& s, const PrecisionContext& ctx);

// Euler product bound the totient evaluation uses at s.
std::uint64_t totient_euler_bound(const Real& s, const PrecisionContext& ctx);

SeriesValue eval_P(const FactorSetSpec& spec, const Real& s, const PrecisionContext& ctx);
PDerivs eval_P_derivs(const FactorSetSpec& spec, const Real& s, const PrecisionContext& ctx);

// Richardson-extrapolated central differences of eval_P. Validation oracle
// for the analytic derivatives; production code never calls it. Truncation
// caps are pinned at s so all stencil points evaluate the same function.
PDerivs finite_difference_derivs(const FactorSetSpec& spec, const Real& s,
                                 const PrecisionContext& ctx);

// Smallest s accepted by eval_P for this family.
double eval_domain_floor(const FactorSetSpec& spec);

}  // namespace factoria
