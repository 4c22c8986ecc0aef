#include "factoria/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "factoria/analysis.hpp"
#include "factoria/error.hpp"
#include "factoria/sampler.hpp"

namespace factoria::cli {

using nlohmann::json;

namespace {

std::uint64_t parse_bound(const std::string& token) {
  // Plain integers, or the shorthands <m>e<k> and 10^<k>.
  u128 mantissa, exponent = 0;
  if (token.rfind("10^", 0) == 0) {
    mantissa = 1;
    exponent = parse_u128(token.substr(3));
  } else if (auto e = token.find_first_of("eE"); e != std::string::npos) {
    mantissa = parse_u128(token.substr(0, e));
    exponent = parse_u128(token.substr(e + 1));
  } else {
    mantissa = parse_u128(token);
  }
  u128 v = mantissa;
  for (u128 i = 0; i < exponent && v != 0; ++i) {
    if (v > (~std::uint64_t{0}) / 10) throw UsageError("bound '" + token + "' is too large");
    v *= 10;
  }
  if (v < 1 || v > ~std::uint64_t{0}) throw UsageError("bound '" + token + "' must be >= 1");
  return static_cast<std::uint64_t>(v);
}

json json_count(u128 v) {
  if (v <= ~std::uint64_t{0}) return static_cast<std::uint64_t>(v);
  return to_string(v);
}

json json_real(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string csv_double(double v) {
  if (std::isnan(v)) return "nan";
  // Shortest text that reads back to the same double.
  char buf[40];
  const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
  return std::string(buf, end);
}

std::string centering_name(Centering c) {
  return c == Centering::MuLogn ? "mu_log_n" : "mu_log_N";
}

// Runs f(i) for i in [0, n) on up to thread_budget() threads.
template <class F>
void parallel_for(std::size_t n, F f) {
  const unsigned threads = std::min<std::size_t>(thread_budget(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

class Runner {
 public:
  Runner(const RunConfig& config, std::ostream& out, std::ostream& err)
      : c_(config), out_(out), err_(err), start_(std::chrono::steady_clock::now()) {
    if (!c_.set_text.empty()) spec_ = FactorSetSpec::parse(c_.set_text);
  }

  int run() {
    const std::string& cmd = c_.command;
    if (cmd == "constants") return constants();
    if (cmd == "count") return count();
    if (cmd == "dist") return dist();
    if (cmd == "moments") return moments();
    if (cmd == "sample") return sample();
    if (cmd == "mgf") return mgf();
    if (cmd == "verify") return verify();
    throw UsageError("unknown command '" + cmd + "'");
  }

 private:
  Format format(Format natural) const { return c_.format.value_or(natural); }

  json meta() const {
    const auto ctx = c_.precision();
    json m;
    m["version"] = kVersion;
    m["command"] = c_.command;
    m["seed"] = c_.seed;
    m["precision"] = {{"target_digits", ctx.target_digits},
                      {"working_digits", ctx.working_digits}};
    m["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return m;
  }

  void emit(const std::string& payload) {
    if (c_.output.empty()) {
      out_ << payload;
      out_.flush();
    } else {
      write_atomically(c_.output, payload);
    }
  }

  void emit_json(json body) {
    body["meta"] = meta();
    emit(body.dump(2) + "\n");
  }

  const SpectralConstants& constants_for_spec() {
    if (!constants_) constants_ = spectral_constants(*spec_, c_.precision());
    return *constants_;
  }

  std::uint64_t single_N() const {
    if (c_.Ns.size() != 1) throw UsageError(c_.command + " takes a single --max value");
    return c_.Ns.front();
  }

  int constants() {
    if (c_.plot) throw UsageError("constants has no plot output");
    const auto ctx = c_.precision();
    const auto applicability = check_applicability(*spec_, ctx);
    const auto& k = constants_for_spec();
    const int digits = std::max(1, std::min(k.certified_digits(), ctx.target_digits));
    auto real = [&](const SeriesValue& v) { return to_decimal(v.value, digits); };
    json j;
    j["family"] = spec_->to_string();
    j["kappa"] = k.kappa.is_finite() ? json(k.kappa.value()) : json("-inf");
    j["rho"] = real(k.rho);
    j["mu"] = real(k.mu);
    j["sigma2"] = real(k.sigma2);
    j["R"] = real(k.R);
    j["P1"] = real(k.P1);
    j["P2"] = real(k.P2);
    j["certified_digits"] = k.certified_digits();
    j["error_radius"] = {{"rho", to_decimal(k.rho.error_radius, 3)},
                         {"mu", to_decimal(k.mu.error_radius, 3)},
                         {"sigma2", to_decimal(k.sigma2.error_radius, 3)},
                         {"R", to_decimal(k.R.error_radius, 3)}};
    j["applicability"] = to_string(applicability);
    if (format(Format::Json) == Format::Json) {
      emit_json(j);
    } else {
      std::ostringstream os;
      os << "key,value\n";
      for (const char* key : {"family", "kappa", "rho", "mu", "sigma2", "R", "certified_digits"}) {
        const auto& v = j[key];
        os << key << "," << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
      emit(os.str());
    }
    return 0;
  }

  CountArray cached_counts(std::uint64_t N) {
    if (!c_.cache.empty() && std::filesystem::exists(c_.cache)) {
      CountArray cached = read_count_cache(c_.cache);
      if (cached.N >= N) {
        cached.a.resize(N + 1);
        cached.N = N;
        cached.A_N = 0;
        for (std::uint64_t n = 1; n <= N; ++n) cached.A_N = checked_add(cached.A_N, cached.a[n], n);
        return cached;
      }
    }
    CountArray counts = count_a(*spec_, N);
    if (!c_.cache.empty()) write_count_cache(c_.cache, counts);
    return counts;
  }

  int count() {
    if (c_.plot) {
      const auto& k = constants_for_spec();
      PlotSeries s{"A(N)/(R N^rho)", {}};
      for (auto N : c_.Ns) {
        s.points.push_back({std::log10(static_cast<double>(N)),
                            tauberian_ratio(floor_lattice(*spec_, N).at(N), N, k)});
      }
      emit(emit_plot_data({s}));
      return 0;
    }
    if (format(Format::Csv) == Format::Csv) {
      const auto N = single_N();
      std::ostringstream os;
      os << "n,a_n\n";
      if (c_.width == IntegerWidth::Big) {
        const auto counts = count_a_big(*spec_, N);
        for (std::uint64_t n = 1; n <= N; ++n) os << n << "," << counts.a[n] << "\n";
      } else {
        const auto counts = cached_counts(N);
        for (std::uint64_t n = 1; n <= N; ++n) os << n << "," << to_string(counts.a[n]) << "\n";
      }
      emit(os.str());
      return 0;
    }
    json results = json::array();
    for (auto N : c_.Ns) {
      json r;
      r["N"] = N;
      if (c_.width == IntegerWidth::Big) {
        r["A_N"] = count_a_big(*spec_, N).A_N.str();
      } else {
        const auto layers = count_layers(*spec_, N);
        r["A_N"] = json_count(layers.A_N);
        json t = json::array();
        for (auto v : layers.T) t.push_back(json_count(v));
        r["T"] = t;
      }
      results.push_back(r);
    }
    if (results.size() == 1) {
      emit_json(results.front());
    } else {
      emit_json({{"family", spec_->to_string()}, {"results", results}});
    }
    return 0;
  }

  int dist() {
    const auto N = single_N();
    const auto layers = count_layers(*spec_, N);
    // Degenerate sets have an exact law but no limit constants.
    const SpectralConstants* k = nullptr;
    try {
      k = &constants_for_spec();
    } catch (const NoRootError&) {
    }
    const auto d = k ? summarize_distribution(layers, *k, c_.K) : summarize_distribution(layers, c_.K);
    if (c_.plot) {
      PlotSeries exact{"exact", {}}, normal{"normal", {}};
      for (unsigned m = 0; m < d.T.size(); ++m) {
        exact.points.push_back({static_cast<double>(m), d.mass(m)});
      }
      if (k) {
        const double log_n = std::log(static_cast<double>(N));
        const double center = k->mu_d() * log_n, scale = std::sqrt(k->sigma2_d() * log_n);
        for (unsigned m = 0; m < d.T.size(); ++m) {
          normal.points.push_back({static_cast<double>(m),
                                   normal_cdf((m + 0.5 - center) / scale) -
                                       normal_cdf((m - 0.5 - center) / scale)});
        }
      }
      emit(emit_plot_data({exact, normal}));
      return 0;
    }
    if (format(Format::Csv) == Format::Csv) {
      std::ostringstream os;
      os << "m,mass\n";
      for (unsigned m = 0; m < d.T.size(); ++m) os << m << "," << csv_double(d.mass(m)) << "\n";
      emit(os.str());
      return 0;
    }
    json masses = json::array();
    for (unsigned m = 0; m < d.T.size(); ++m) {
      masses.push_back({{"m", m}, {"T", json_count(d.T[m])}, {"mass", d.mass(m)},
                        {"rational", d.mass_rational(m)}});
    }
    json moments_mean = json::array(), moments_limit = json::array();
    for (int i = 0; i <= c_.K; ++i) {
      moments_mean.push_back(json_real(d.standardized_about_mean[i]));
      moments_limit.push_back(json_real(d.standardized_limit[i]));
    }
    emit_json({{"family", spec_->to_string()},
               {"N", N},
               {"A_N", json_count(d.A_N)},
               {"masses", masses},
               {"masses_sum_to_one", d.masses_sum_to_one()},
               {"mean", d.mean},
               {"variance", d.variance},
               {"standardized_about_mean", moments_mean},
               {"standardized_limit", moments_limit},
               {"sup_cdf_distance", json_real(d.sup_cdf_distance)},
               {"tv_distance", json_real(d.tv_distance)}});
    return 0;
  }

  int moments() {
    const auto& k = constants_for_spec();
    const double mu = k.mu_d();
    std::vector<ExactPass> passes(c_.Ns.size());
    parallel_for(c_.Ns.size(), [&](std::size_t i) {
      passes[i] = exact_pass(*spec_, c_.Ns[i], mu, c_.K);
    });
    std::vector<MomentReport> reports;
    for (const auto& pass : passes) {
      for (auto centering : {Centering::MuLogn, Centering::MuLogN}) {
        for (const auto& r : moment_reports(pass, k, centering)) reports.push_back(r);
      }
    }
    if (c_.plot) {
      std::vector<PlotSeries> series;
      for (const auto& r : reports) {
        if (r.k == 0) continue;
        const std::string name = "k=" + std::to_string(r.k) + " " + centering_name(r.centering) +
                                 (r.k % 2 == 0 ? " ratio" : " normalized");
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const PlotSeries& s) { return s.name == name; });
        if (it == series.end()) it = series.insert(series.end(), PlotSeries{name, {}});
        it->points.push_back({std::log(static_cast<double>(r.N)),
                              r.k % 2 == 0 ? r.ratio : r.normalized});
      }
      emit(emit_plot_data(series));
      return 0;
    }
    if (format(Format::Csv) == Format::Csv) {
      std::ostringstream os;
      os << "family,N,k,centering,exact,prediction,ratio\n";
      for (const auto& r : reports) {
        os << spec_->to_string() << "," << r.N << "," << r.k << "," << centering_name(r.centering)
           << "," << csv_double(r.exact_sum) << "," << csv_double(r.prediction) << ","
           << csv_double(r.ratio) << "\n";
      }
      emit(os.str());
      return 0;
    }
    json rows = json::array();
    for (const auto& r : reports) {
      rows.push_back({{"N", r.N},
                      {"k", r.k},
                      {"centering", centering_name(r.centering)},
                      {"exact", r.exact_sum},
                      {"prediction", r.prediction},
                      {"ratio", json_real(r.ratio)},
                      {"normalized", r.normalized}});
    }
    emit_json({{"family", spec_->to_string()}, {"reports", rows}});
    return 0;
  }

  int sample() {
    const auto N = single_N();
    if (c_.gof && c_.count < 1000) throw UsageError("--gof needs --count >= 1000");
    Sampler sampler(*spec_, N);
    SamplerEngine rng(c_.seed);
    std::vector<SampleRecord> samples;
    samples.reserve(c_.count);
    for (std::uint64_t i = 0; i < c_.count; ++i) samples.push_back(sampler.sample(rng));
    const auto histogram = empirical_distribution(samples);

    json gof;
    std::optional<DistributionSummary> exact;
    if (c_.gof || c_.plot) {
      const auto layers = count_layers(*spec_, N);
      DistributionSummary d;
      d.N = N;
      d.A_N = layers.A_N;
      d.T = layers.T;
      exact = d;
    }
    if (c_.gof) {
      const auto g = chi_square_gof(histogram, *exact);
      gof = {{"statistic", g.statistic},
             {"degrees_of_freedom", g.degrees_of_freedom},
             {"p_value", g.p_value},
             {"bins", g.bins},
             {"samples", c_.count},
             {"seed", c_.seed}};
    }
    if (c_.plot) {
      PlotSeries sampled{"sampled", {}}, law{"exact", {}};
      for (unsigned m = 0; m < std::max<std::size_t>(histogram.size(), exact->T.size()); ++m) {
        const double h = m < histogram.size() ? static_cast<double>(histogram[m]) : 0.0;
        sampled.points.push_back({static_cast<double>(m), h / static_cast<double>(c_.count)});
        law.points.push_back({static_cast<double>(m), exact->mass(m)});
      }
      emit(emit_plot_data({sampled, law}));
      return 0;
    }
    auto joined = [](const SampleRecord& s) {
      std::string f;
      for (std::size_t i = 0; i < s.factors.size(); ++i) {
        if (i) f += "·";
        f += std::to_string(s.factors[i]);
      }
      return f;
    };
    if (format(Format::Csv) == Format::Csv) {
      std::ostringstream os;
      os << "# seed=" << c_.seed << " engine=" << kSamplerEngine << " N=" << N
         << " family=" << spec_->to_string() << "\n";
      os << "m,product,factors\n";
      for (const auto& s : samples) os << s.m() << "," << s.product << "," << joined(s) << "\n";
      if (c_.gof) os << "# gof " << gof.dump() << "\n";
      emit(os.str());
      return 0;
    }
    json rows = json::array();
    for (const auto& s : samples) {
      rows.push_back({{"m", s.m()}, {"product", s.product}, {"factors", s.factors}});
    }
    json body{{"family", spec_->to_string()},
              {"N", N},
              {"engine", kSamplerEngine},
              {"samples", rows},
              {"histogram", histogram}};
    if (c_.gof) body["gof"] = gof;
    emit_json(body);
    return 0;
  }

  int mgf() {
    const auto& k = constants_for_spec();
    const auto ctx = c_.precision();
    const std::vector<double> zs = c_.z.empty() ? std::vector<double>{0.0, 0.1, 0.2} : c_.z;
    std::vector<LayeredCounts> layers(c_.Ns.size());
    parallel_for(c_.Ns.size(), [&](std::size_t i) { layers[i] = count_layers(*spec_, c_.Ns[i]); });

    struct Row {
      std::uint64_t N;
      double z, exact, prediction, ratio;
    };
    std::vector<Row> rows;
    for (double z : zs) {
      for (const auto& l : layers) {
        const double exact = exact_mgf(l, z);
        const double prediction = mgf_prediction(*spec_, z, static_cast<double>(l.N), k, ctx);
        rows.push_back({l.N, z, exact, prediction, exact / prediction});
      }
    }
    if (c_.plot) {
      std::vector<PlotSeries> series;
      for (double z : zs) {
        PlotSeries s{"z=" + csv_double(z), {}};
        for (const auto& r : rows) {
          if (r.z == z) s.points.push_back({std::log(static_cast<double>(r.N)), r.ratio});
        }
        series.push_back(s);
      }
      emit(emit_plot_data(series));
      return 0;
    }
    if (format(Format::Csv) == Format::Csv) {
      std::ostringstream os;
      os << "family,N,z,exact,prediction,ratio\n";
      for (const auto& r : rows) {
        os << spec_->to_string() << "," << r.N << "," << csv_double(r.z) << ","
           << csv_double(r.exact) << "," << csv_double(r.prediction) << "," << csv_double(r.ratio)
           << "\n";
      }
      emit(os.str());
      return 0;
    }
    json out = json::array();
    for (const auto& r : rows) {
      out.push_back({{"N", r.N}, {"z", r.z}, {"exact", r.exact}, {"prediction", r.prediction},
                     {"ratio", r.ratio}});
    }
    emit_json({{"family", spec_->to_string()}, {"rows", out}});
    return 0;
  }

  int verify() {
    if (c_.plot) throw UsageError("verify has no plot output");
    const bool as_json = format(Format::Csv) == Format::Json;
    std::ostream& live = c_.output.empty() && !as_json ? out_ : err_;
    const auto results = run_acceptance(c_.suite, [&](const CriterionResult& r) {
      live << format_result(r) << std::endl;
    });
    bool all = true;
    json rows = json::array();
    std::ostringstream table;
    for (const auto& r : results) {
      all = all && r.passed;
      rows.push_back({{"id", r.id}, {"title", r.title}, {"quick", r.quick}, {"passed", r.passed},
                      {"detail", r.detail}, {"seconds", r.seconds}});
      table << format_result(r) << "\n";
    }
    if (as_json) {
      emit_json({{"suite", c_.suite == Suite::Quick ? "quick" : "full"},
                 {"passed", all},
                 {"results", rows}});
    } else if (!c_.output.empty()) {
      emit(table.str());
    }
    return all ? 0 : 1;
  }

  const RunConfig& c_;
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point start_;
  std::optional<FactorSetSpec> spec_;
  std::optional<SpectralConstants> constants_;
};

}  // namespace

PrecisionContext RunConfig::precision() const {
  PrecisionContext ctx = PrecisionContext::with_digits(digits);
  ctx.euler_product_bound = euler_product_bound;
  ctx.em_cutoff = em_cutoff;
  ctx.validate();
  return ctx;
}

unsigned thread_budget() {
  unsigned cap = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FACTORIA_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) cap = std::min<unsigned>(cap, static_cast<unsigned>(v));
  }
  return cap;
}

std::string emit_plot_data(const std::vector<PlotSeries>& series) {
  std::ostringstream os;
  os << "x,y,series\n";
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      os << csv_double(p.x) << "," << csv_double(p.y) << "," << s.name << "\n";
    }
  }
  return os.str();
}

void write_atomically(const std::string& path, const std::string& contents) {
  std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ResourceError("cannot open " + tmp.string() + " for writing");
    os << contents;
    if (!os.flush()) throw ResourceError("write to " + tmp.string() + " failed");
  }
  std::filesystem::rename(tmp, target);
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Ordered factorizations: exact counts, sampling and limit-law constants",
               "factoria"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::vector<std::string> max_tokens;
  std::string format_text, width_text = "128", suite_text = "quick";

  auto add_set = [&](CLI::App* sub) {
    sub->add_option("--set", c.set_text,
                    "all | primes | squarefree | totient | powers:<d> | explicit:<q>,... | "
                    "weighted:<q>=<w>,...")
        ->required();
  };
  auto add_max = [&](CLI::App* sub, bool list) {
    sub->add_option("--max,-N", max_tokens, list ? "bound N or comma list (1e5 accepted)" : "bound N")
        ->delimiter(',')
        ->required();
  };
  auto add_precision = [&](CLI::App* sub) {
    sub->add_option("--digits", c.digits, "target decimal digits (>= 20)");
    sub->add_option("--euler-product-bound", c.euler_product_bound, "totient product prime bound");
    sub->add_option("--em-cutoff", c.em_cutoff, "Euler-Maclaurin direct-sum cutoff");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", format_text, "csv | json");
    sub->add_option("--output,-o", c.output, "write here (atomically) instead of stdout");
  };

  auto* constants = app.add_subcommand("constants", "rho, mu, sigma2, R with certified digits");
  add_set(constants);
  add_precision(constants);
  add_output(constants);

  auto* count = app.add_subcommand("count", "exact a(n) table or A(N), T_m(N) summary");
  add_set(count);
  add_max(count, true);
  add_output(count);
  count->add_option("--int-width", width_text, "128 | big");
  count->add_option("--cache", c.cache, "binary per-n count cache file");
  count->add_flag("--plot", c.plot, "x,y,series CSV of A(N)/(R N^rho)");
  add_precision(count);

  auto* dist = app.add_subcommand("dist", "exact law of the number of factors");
  add_set(dist);
  add_max(dist, false);
  add_precision(dist);
  add_output(dist);
  dist->add_option("-K", c.K, "highest standardized moment (<= 8)");
  dist->add_flag("--plot", c.plot, "x,y,series CSV of exact and normal masses");

  auto* moments = app.add_subcommand("moments", "centered moment sums against predictions");
  add_set(moments);
  add_max(moments, true);
  add_precision(moments);
  add_output(moments);
  moments->add_option("-K", c.K, "highest moment order (<= 8)");
  moments->add_flag("--plot", c.plot, "x,y,series CSV of ratios against log N");

  auto* sample = app.add_subcommand("sample", "exact uniform random factorizations");
  add_set(sample);
  add_max(sample, false);
  add_output(sample);
  sample->add_option("--count", c.count, "number of samples");
  sample->add_option("--seed", c.seed, "generator seed");
  sample->add_flag("--gof", c.gof, "append a chi-square report against the exact law");
  sample->add_flag("--plot", c.plot, "x,y,series CSV of sampled and exact masses");

  auto* mgf = app.add_subcommand("mgf", "exact E exp(z Y_N) against the shifted-root prediction");
  add_set(mgf);
  add_max(mgf, true);
  add_precision(mgf);
  add_output(mgf);
  mgf->add_option("--z", c.z, "z values (comma list)")->delimiter(',');
  mgf->add_flag("--plot", c.plot, "x,y,series CSV of ratios against log N");

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_option("--suite", suite_text, "quick | full");
  add_output(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  c.command = app.get_subcommands().front()->get_name();
  for (const auto& t : max_tokens) c.Ns.push_back(parse_bound(t));
  if (!c.set_text.empty()) c.set_text = FactorSetSpec::parse(c.set_text).to_string();

  if (format_text == "csv") {
    c.format = Format::Csv;
  } else if (format_text == "json") {
    c.format = Format::Json;
  } else if (!format_text.empty()) {
    throw UsageError("--format must be csv or json");
  }
  if (width_text == "128") {
    c.width = IntegerWidth::Bits128;
  } else if (width_text == "big") {
    c.width = IntegerWidth::Big;
  } else {
    throw UsageError("--int-width must be 128 or big");
  }
  if (suite_text == "quick") {
    c.suite = Suite::Quick;
  } else if (suite_text == "full") {
    c.suite = Suite::Full;
  } else {
    throw UsageError("--suite must be quick or full");
  }
  if (c.digits < 20) throw UsageError("--digits must be >= 20");
  if (c.K < 0 || c.K > 8) throw UsageError("-K must lie in 0..8");
  if (c.euler_product_bound && *c.euler_product_bound < 2) {
    throw UsageError("--euler-product-bound must be >= 2");
  }
  if (c.em_cutoff && *c.em_cutoff < 1) throw UsageError("--em-cutoff must be >= 1");
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return Runner(config, out, err).run();
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_args(argc, argv, out);
    if (!config) return 0;
    return run(*config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const OverflowError& e) {
    err << "overflow: " << e.what() << " (use --int-width big)\n";
    return 3;
  } catch (const NoRootError& e) {
    err << "no root: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const std::bad_alloc&) {
    err << "resource error: out of memory\n";
    return 3;
  }
}

}  // namespace factoria::cli
