#include "factoria/factorset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "factoria/error.hpp"

namespace factoria {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("malformed " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_power_of(std::uint64_t n, std::uint64_t d) {
  if (n < d) return false;
  while (n % d == 0) n /= d;
  return n == 1;
}

void check_sieve(std::uint64_t entries, const EnumerateLimits& limits, std::string_view what) {
  if (entries > limits.max_sieve_entries) {
    throw ResourceError(std::string(what) + " sieve needs " + std::to_string(entries) +
                        " entries, cap is " + std::to_string(limits.max_sieve_entries));
  }
}

}  // namespace

FactorSetSpec FactorSetSpec::explicit_set(std::vector<std::uint64_t> members) {
  if (members.empty()) throw DomainError("explicit factor set must be nonempty");
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 2) throw DomainError("explicit factor set entries must be >= 2");
    if (i > 0 && members[i] <= members[i - 1]) {
      throw DomainError("explicit factor set must be strictly increasing");
    }
  }
  return FactorSetSpec(family::Explicit{std::move(members)});
}

FactorSetSpec FactorSetSpec::powers_of(std::uint64_t base) {
  if (base < 2) throw DomainError("powers base must be >= 2");
  return FactorSetSpec(family::PowersOf{base});
}

FactorSetSpec FactorSetSpec::weighted(std::map<std::uint64_t, std::uint64_t> weights) {
  if (weights.empty()) throw DomainError("weighted factor set must be nonempty");
  for (auto [q, w] : weights) {
    if (q < 2) throw DomainError("weighted keys must be >= 2");
    if (w < 1) throw DomainError("weights must be >= 1");
  }
  return FactorSetSpec(family::Weighted{std::move(weights)});
}

FactorSetSpec FactorSetSpec::parse(std::string_view text) {
  if (text == "all") return all_integers();
  if (text == "primes") return primes();
  if (text == "squarefree") return square_free();
  if (text == "totient") return totient();
  auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("unknown factor set '" + std::string(text) + "'");
  }
  std::string_view head = text.substr(0, colon);
  std::string_view body = text.substr(colon + 1);
  try {
    if (head == "powers") return powers_of(parse_uint(body, "powers base"));
    if (head == "explicit") {
      std::vector<std::uint64_t> members;
      for (auto part : split(body, ',')) members.push_back(parse_uint(part, "explicit member"));
      std::sort(members.begin(), members.end());
      members.erase(std::unique(members.begin(), members.end()), members.end());
      return explicit_set(std::move(members));
    }
    if (head == "weighted") {
      std::map<std::uint64_t, std::uint64_t> weights;
      for (auto part : split(body, ',')) {
        auto eq = part.find('=');
        if (eq == std::string_view::npos) {
          throw UsageError("weighted entry '" + std::string(part) + "' lacks '='");
        }
        auto q = parse_uint(part.substr(0, eq), "weighted key");
        auto w = parse_uint(part.substr(eq + 1), "weight");
        if (!weights.emplace(q, w).second) {
          throw UsageError("duplicate weighted key " + std::to_string(q));
        }
      }
      return weighted(std::move(weights));
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  throw UsageError("unknown factor set '" + std::string(text) + "'");
}

std::string FactorSetSpec::to_string() const {
  return std::visit(
      overloaded{
          [](const family::Explicit& e) {
            std::string s = "explicit:";
            for (std::size_t i = 0; i < e.members.size(); ++i) {
              if (i) s += ',';
              s += std::to_string(e.members[i]);
            }
            return s;
          },
          [](const family::AllIntegers&) { return std::string("all"); },
          [](const family::Primes&) { return std::string("primes"); },
          [](const family::SquareFree&) { return std::string("squarefree"); },
          [](const family::PowersOf& p) { return "powers:" + std::to_string(p.base); },
          [](const family::Totient&) { return std::string("totient"); },
          [](const family::Weighted& w) {
            std::string s = "weighted:";
            bool first = true;
            for (auto [q, wt] : w.weights) {
              if (!first) s += ',';
              first = false;
              s += std::to_string(q) + "=" + std::to_string(wt);
            }
            return s;
          },
      },
      v_);
}

FamilyTag FactorSetSpec::tag() const { return static_cast<FamilyTag>(v_.index()); }

bool FactorSetSpec::is_finite() const {
  return tag() == FamilyTag::Explicit || tag() == FamilyTag::Weighted;
}

std::string FactorSetSpec::family_name() const {
  switch (tag()) {
    case FamilyTag::Explicit: return "explicit";
    case FamilyTag::AllIntegers: return "all";
    case FamilyTag::Primes: return "primes";
    case FamilyTag::SquareFree: return "squarefree";
    case FamilyTag::PowersOf: return "powers";
    case FamilyTag::Totient: return "totient";
    case FamilyTag::Weighted: return "weighted";
  }
  return "?";
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

bool is_square_free(std::uint64_t n) {
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % (p * p) == 0) return false;
  }
  return true;
}

std::uint64_t euler_phi(std::uint64_t m) {
  std::uint64_t result = m;
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      result -= result / p;
    }
  }
  if (m > 1) result -= result / m;
  return result;
}

std::vector<std::uint32_t> phi_sieve(std::uint64_t limit) {
  std::vector<std::uint32_t> phi(limit + 1);
  std::iota(phi.begin(), phi.end(), std::uint32_t{0});
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (phi[p] != p) continue;  // composite: already reduced by a smaller prime
    for (std::uint64_t k = p; k <= limit; k += p) phi[k] -= phi[k] / p;
  }
  return phi;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (std::uint64_t k = p * p; k <= limit; k += p) composite[k] = true;
  }
  return out;
}

std::uint64_t totient_search_limit(std::uint64_t q) {
  // phi(m) >= sqrt(m/2) gives m <= 2q^2.
  const std::uint64_t quadratic = 2 * q * q;
  // For m >= 40, m/phi(m) < e^gamma loglog m + 3/loglog m and the resulting
  // lower bound m/f(m) is increasing in m.
  const double euler_gamma = 0.57721566490153286;
  auto lower = [&](double m) {
    double ll = std::log(std::log(m));
    return m / (std::exp(euler_gamma) * ll + 3.0 / ll);
  };
  double target = static_cast<double>(q) * (1 + 1e-9) + 1;
  double hi = 40;
  while (lower(hi) < target) hi *= 2;
  double lo = hi / 2 < 40 ? 40 : hi / 2;
  while (hi - lo > 1) {
    double mid = std::floor((lo + hi) / 2);
    if (lower(mid) < target) lo = mid; else hi = mid;
  }
  auto analytic = static_cast<std::uint64_t>(hi) + 1;
  return std::min(quadratic, std::max<std::uint64_t>(analytic, 40));
}

std::uint64_t weight(const FactorSetSpec& spec, std::uint64_t q) {
  if (q < 2) throw DomainError("weight requires q >= 2");
  return std::visit(
      overloaded{
          [&](const family::Explicit& e) -> std::uint64_t {
            return std::binary_search(e.members.begin(), e.members.end(), q) ? 1 : 0;
          },
          [&](const family::AllIntegers&) -> std::uint64_t { return 1; },
          [&](const family::Primes&) -> std::uint64_t { return is_prime(q) ? 1 : 0; },
          [&](const family::SquareFree&) -> std::uint64_t { return is_square_free(q) ? 1 : 0; },
          [&](const family::PowersOf& p) -> std::uint64_t { return is_power_of(q, p.base) ? 1 : 0; },
          [&](const family::Totient&) -> std::uint64_t {
            if (q % 2 == 1) return 0;  // phi(m) is even for m >= 3
            std::uint64_t count = 0;
            const std::uint64_t limit = totient_search_limit(q);
            for (std::uint64_t m = 3; m <= limit; ++m) {
              if (euler_phi(m) == q) ++count;
            }
            return count;
          },
          [&](const family::Weighted& w) -> std::uint64_t {
            auto it = w.weights.find(q);
            return it == w.weights.end() ? 0 : it->second;
          },
      },
      spec.variant());
}

std::vector<Member> enumerate(const FactorSetSpec& spec, std::uint64_t bound,
                              const EnumerateLimits& limits) {
  if (bound < 1) throw DomainError("enumerate requires bound >= 1");
  std::vector<Member> out;
  std::visit(
      overloaded{
          [&](const family::Explicit& e) {
            for (auto q : e.members) {
              if (q > bound) break;
              out.push_back({q, 1});
            }
          },
          [&](const family::AllIntegers&) {
            out.reserve(bound);
            for (std::uint64_t q = 2; q <= bound; ++q) out.push_back({q, 1});
          },
          [&](const family::Primes&) {
            check_sieve(bound, limits, "prime");
            for (auto p : primes_up_to(bound)) out.push_back({p, 1});
          },
          [&](const family::SquareFree&) {
            check_sieve(bound, limits, "squarefree");
            std::vector<bool> squareful(bound + 1, false);
            for (std::uint64_t p = 2; p * p <= bound; ++p) {
              for (std::uint64_t k = p * p; k <= bound; k += p * p) squareful[k] = true;
            }
            for (std::uint64_t q = 2; q <= bound; ++q) {
              if (!squareful[q]) out.push_back({q, 1});
            }
          },
          [&](const family::PowersOf& p) {
            for (std::uint64_t q = p.base; q <= bound; q *= p.base) {
              out.push_back({q, 1});
              if (q > bound / p.base) break;
            }
          },
          [&](const family::Totient&) {
            if (bound < 2) return;
            const std::uint64_t limit = totient_search_limit(bound);
            check_sieve(limit, limits, "totient");
            auto phi = phi_sieve(limit);
            std::vector<std::uint64_t> counts(bound + 1, 0);
            for (std::uint64_t m = 3; m <= limit; ++m) {
              if (phi[m] <= bound) ++counts[phi[m]];
            }
            for (std::uint64_t q = 2; q <= bound; ++q) {
              if (counts[q]) out.push_back({q, counts[q]});
            }
          },
          [&](const family::Weighted& w) {
            for (auto [q, wt] : w.weights) {
              if (q > bound) break;
              out.push_back({q, wt});
            }
          },
      },
      spec.variant());
  return out;
}

std::uint64_t primitive_root_base(std::uint64_t n) {
  for (unsigned e = 63; e >= 2; --e) {
    auto r = std::llround(std::pow(static_cast<double>(n), 1.0 / e));
    for (long long c = r - 1; c <= r + 1; ++c) {
      if (c < 2) continue;
      std::uint64_t p = 1;
      bool overflow = false;
      for (unsigned k = 0; k < e && !overflow; ++k) {
        overflow = __builtin_mul_overflow(p, static_cast<std::uint64_t>(c), &p);
      }
      if (!overflow && p == n) return primitive_root_base(static_cast<std::uint64_t>(c));
    }
  }
  return n;
}

Applicability detect_periodicity(const FactorSetSpec& spec, std::uint64_t probe_bound) {
  if (probe_bound < 2) throw DomainError("probe bound must be >= 2");
  switch (spec.tag()) {
    case FamilyTag::AllIntegers:
    case FamilyTag::Primes:
    case FamilyTag::SquareFree:
    case FamilyTag::Totient:
      return Applicability::ok();
    case FamilyTag::PowersOf:
      return Applicability::periodic(
          primitive_root_base(std::get<family::PowersOf>(spec.variant()).base));
    case FamilyTag::Explicit:
    case FamilyTag::Weighted:
      break;
  }
  auto members = enumerate(spec, probe_bound);
  if (members.empty()) return Applicability::ok();
  if (members.size() == 1 && members[0].w == 1) {
    bool singleton_family =
        spec.tag() == FamilyTag::Explicit
            ? std::get<family::Explicit>(spec.variant()).members.size() == 1
            : std::get<family::Weighted>(spec.variant()).weights.size() == 1;
    if (singleton_family) return Applicability::singleton();
  }
  const std::uint64_t root = primitive_root_base(members.front().q);
  for (const auto& m : members) {
    if (primitive_root_base(m.q) != root) return Applicability::ok();
  }
  return Applicability::periodic(root);
}

std::string to_string(const Applicability& a) {
  switch (a.reason) {
    case ApplicabilityReason::OK: return "OK";
    case ApplicabilityReason::SingletonSet: return "SingletonSet";
    case ApplicabilityReason::PeriodicInPowersOfD:
      return "PeriodicInPowersOfD(" + std::to_string(a.period_base) + ")";
    case ApplicabilityReason::NoRoot: return "NoRoot";
  }
  return "?";
}

double Abscissa::value() const {
  if (!finite_) throw DomainError("abscissa is -infinity");
  return *finite_;
}

std::string Abscissa::to_string() const {
  if (!finite_) return "-inf";
  std::ostringstream os;
  os << *finite_;
  return os.str();
}

Abscissa kappa(const FactorSetSpec& spec) {
  switch (spec.tag()) {
    case FamilyTag::Explicit:
    case FamilyTag::Weighted:
      return Abscissa::minus_infinity();
    case FamilyTag::PowersOf:
      return Abscissa::finite(0.0);
    default:
      return Abscissa::finite(1.0);
  }
}

}  // namespace factoria
