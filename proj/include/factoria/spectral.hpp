#pragma once

#include "factoria/dirichlet.hpp"
#include "factoria/factorset.hpp"

namespace factoria {

// Constants of the limit theorem for one factor set, each with an error
// radius. mu = -1/P'(rho), sigma2 = mu^3 P''(rho) - mu, R = mu/rho.
struct SpectralConstants {
  Abscissa kappa = Abscissa::minus_infinity();
  SeriesValue rho;
  SeriesValue P1;
  SeriesValue P2;
  SeriesValue mu;
  SeriesValue sigma2;
  SeriesValue R;
  SeriesValue B2_at_rho;       // P + 2 mu P' + mu^2 P'' = sigma2/mu
  SeriesValue B1prime_at_rho;  // P' + mu P'' = sigma2/mu^2

  int certified_digits() const;

  double rho_d() const { return rho.value.convert_to<double>(); }
  double mu_d() const { return mu.value.convert_to<double>(); }
  double sigma2_d() const { return sigma2.value.convert_to<double>(); }
  double R_d() const { return R.value.convert_to<double>(); }
};

// Unique real s > max(kappa, 0) with P(s) = target. Throws NoRootError.
SeriesValue solve_P_equals(const FactorSetSpec& spec, const Real& target,
                           const PrecisionContext& ctx);

SeriesValue solve_rho(const FactorSetSpec& spec, const PrecisionContext& ctx);

// Throws NoRootError, or ConsistencyError when B1(rho) fails to vanish.
SpectralConstants spectral_constants(const FactorSetSpec& spec, const PrecisionContext& ctx);

// Periodicity verdict, extended with NoRoot when P(s) = 1 is unsolvable.
Applicability check_applicability(const FactorSetSpec& spec, const PrecisionContext& ctx,
                                  std::uint64_t probe_bound = 1'000'000);

// mu (sigma2/2)^{k/2} k!, even k >= 0.
double pole_coefficient_ck(const SpectralConstants& constants, int k);

struct DelangeQuery {
  double varrho;        // pole location, > 0
  double beta;          // pole order, > 0
  double G_at_varrho;   // leading numerator
  double N;             // >= 2
};

// G(varrho) / (varrho Gamma(beta)) N^varrho (log N)^(beta - 1).
double delange_prediction(const DelangeQuery& q);

// Gamma with exact closed forms at integers and half-integers.
double gamma_function(double x);

// k!/((k/2)! 2^{k/2}) for even k, 0 for odd k.
double gaussian_moment(int k);

// sigma^beta 2^{beta/2} pi^{-1/2} Gamma((beta+1)/2) (log N)^{beta/2}.
double absolute_moment_prediction(const SpectralConstants& constants, double beta, double N);

// rho(z): P(rho(z)) = e^{-z}. Throws NoRootError outside the z-domain.
SeriesValue shifted_rho(const FactorSetSpec& spec, double z, const PrecisionContext& ctx);

// rho P'(rho) / (rho(z) e^z P'(rho(z))) N^{rho(z) - rho}.
double mgf_prediction(const FactorSetSpec& spec, double z, double N,
                      const SpectralConstants& constants, const PrecisionContext& ctx);
double mgf_prediction(const FactorSetSpec& spec, double z, double N, const PrecisionContext& ctx);

}  // namespace factoria
