/* Copyright 2026 The fblimits Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "fblimits/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"

#include "fblimits/binning.hpp"
#include "fblimits/bounds.hpp"
#include "fblimits/dispersion.hpp"
#include "fblimits/error.hpp"
#include "fblimits/optcode.hpp"
#include "fblimits/source_io.hpp"

namespace fbl {

namespace {

using json = nlohmann::json;
using Cell = std::variant<double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cell_text(const Cell& c) {
  struct {
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
  } visit;
  return std::visit(visit, c);
}

json cell_json(const Cell& c) {
  if (auto d = std::get_if<double>(&c)) {
    return std::isfinite(*d) ? json(*d) : json(nullptr);
  }
  if (auto i = std::get_if<std::int64_t>(&c)) return *i;
  if (auto b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    json arr = json::array();
    for (const auto& row : t.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < row.size(); ++i) obj[t.header[i]] = cell_json(row[i]);
      arr.push_back(obj);
    }
    os << arr.dump(1) << "\n";
    return;
  }
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    os << (i ? "," : "") << t.header[i];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
    os << "\n";
  }
}

json config_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["source"] = c.source;
  j["n_list"] = c.n_list;
  j["n_min"] = c.n_min;
  j["n_max"] = c.n_max;
  j["n_step"] = c.n_step;
  j["eps"] = c.eps;
  j["seed"] = c.seed;
  j["format"] = c.format;
  j["monte_carlo"] = c.monte_carlo;
  j["samples"] = c.samples;
  j["trials"] = c.trials;
  j["bins"] = c.bins;
  j["markov_A"] = c.markov_A ? json(*c.markov_A) : json(nullptr);
  j["points"] = c.points;
  j["max_type_classes"] = c.budget.max_type_classes;
  j["max_enumeration"] = c.budget.max_enumeration;
  j["max_trials"] = c.max_trials;
  return j;
}

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

std::vector<int> resolve_n(const RunConfig& c, int lo, int hi, int step) {
  if (!c.n_list.empty()) return c.n_list;
  if (c.n_min > 0) {
    lo = c.n_min;
    hi = c.n_max > 0 ? c.n_max : c.n_min;
    step = c.n_step;
  }
  if (lo < 1 || hi < lo || step < 1) throw ValidationError("bad blocklength range");
  std::vector<int> out;
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

std::vector<double> resolve_eps(const RunConfig& c) {
  return c.eps.empty() ? std::vector<double>{0.1} : c.eps;
}

std::string eps_tag(double e) { return format_double(e); }

SourceSpec source_or(const RunConfig& c, const char* fallback) {
  return load_source(c.source.empty() ? std::string(fallback) : c.source);
}

Table cmd_spectrum(const RunConfig& c) {
  auto src = load_source(c.source);
  auto ns = resolve_n(c, 1, 1, 1);
  if (ns.size() != 1) throw ValidationError("spectrum takes a single n");
  const int n = ns.front();
  InformationSpectrum spec = [&] {
    if (c.monte_carlo) {
      if (!src.is_markov()) {
        throw ValidationError("Monte-Carlo spectra are available for markov sources");
      }
      if (c.samples > c.max_trials) throw BudgetError("samples exceed max_trials");
      return markov_spectrum_mc(*src.markov, n, c.samples, c.seed, c.threads);
    }
    return src.spectrum(n, c.budget);
  }();
  Table t;
  t.header = {"info_value_bits", "prob", "count"};
  for (const auto& m : spec.masses()) {
    t.rows.push_back({m.info, m.prob, to_decimal(m.count)});
  }
  t.extra["n"] = n;
  t.extra["exact"] = spec.is_exact();
  t.extra["sample_size"] = spec.sample_size();
  return t;
}

Table cmd_limits(const RunConfig& c) {
  auto src = load_source(c.source);
  auto ns = resolve_n(c, 1, 1, 1);
  auto eps = resolve_eps(c);
  Table t;
  t.header = {"n", "k", "epsilon_star_prob", "prefix_epsilon_prob"};
  for (double e : eps) {
    t.header.push_back("R_star_eps_" + eps_tag(e) + "_bits_per_symbol");
    t.header.push_back("R_prefix_eps_" + eps_tag(e) + "_bits_per_symbol");
  }
  t.header.push_back("Rbar_bits_per_symbol");
  for (int n : ns) {
    auto spec = src.spectrum(n, c.budget);
    std::vector<double> rs, rp;
    for (double e : eps) {
      rs.push_back(R_star(spec, e));
      rp.push_back(prefix_R(spec, e));
    }
    double rbar = Rbar(spec);
    std::uint64_t kmax = ceil_log2(spec.total_count()) + 1;
    for (std::uint64_t k = 0; k <= kmax; ++k) {
      std::vector<Cell> row{std::int64_t(n), std::int64_t(k), epsilon_star(spec, k),
                            prefix_epsilon(spec, k)};
      for (std::size_t i = 0; i < eps.size(); ++i) {
        row.push_back(rs[i]);
        row.push_back(rp[i]);
      }
      row.push_back(rbar);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

Table bounds_table(const SourceSpec& src, const RunConfig& c,
                   const std::vector<int>& ns, const std::vector<double>& eps) {
  auto params = src.gaussian(c.markov_A);
  Table t;
  t.header = {"n",
              "eps_prob",
              "exact_R_star_bits_per_symbol",
              "approx_bits_per_symbol",
              "achievability_bits_per_symbol",
              "achievability_valid",
              "converse_bits_per_symbol",
              "converse_valid",
              "upper_quantile_bits_per_symbol",
              "strassen_bits_per_symbol"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int n : ns) {
    std::optional<InformationSpectrum> spec;
    try {
      spec = src.spectrum(n, c.budget);
    } catch (const BudgetError&) {
      if (src.is_markov() && c.monte_carlo) {
        spec = markov_spectrum_mc(*src.markov, n, c.samples, c.seed, c.threads);
      } else if (!src.is_markov()) {
        throw;
      }
    }
    for (double e : eps) {
      double exact = spec && spec->is_exact() ? R_star(*spec, e) : nan;
      double upper = spec ? R_upper_quantile(*spec, e).value : nan;
      BoundReport ach, conv;
      if (src.is_markov()) {
        ach = markov_achievability(params, n, e);
        conv = markov_converse(params, n, e);
      } else {
        ach = achievability_iid(params, n, e);
        conv = converse_iid(params, n, e);
      }
      t.rows.push_back({std::int64_t(n), e, exact, approx_Rstar(params, n, e), ach.value,
                        ach.valid, conv.value, conv.valid, upper,
                        strassen_expansion(params, n, e).value});
    }
  }
  t.extra["H_bits"] = params.H;
  t.extra["sigma2_bits2"] = params.sigma2;
  t.extra["mu3_bits3"] = params.mu3;
  if (params.A_markov) t.extra["A_markov"] = *params.A_markov;
  return t;
}

Table cmd_bounds(const RunConfig& c) {
  auto src = load_source(c.source);
  return bounds_table(src, c, resolve_n(c, 10, 200, 1), resolve_eps(c));
}

Table cmd_binning(const RunConfig& c) {
  auto src = load_source(c.source);
  if (!src.is_memoryless()) throw ValidationError("binning needs a memoryless source");
  auto ns = resolve_n(c, 1, 1, 1);
  if (ns.size() != 1) throw ValidationError("binning takes a single n");
  const int n = ns.front();
  if (c.trials > c.max_trials) throw BudgetError("trials exceed max_trials");
  auto spec = src.spectrum(n, c.budget);
  // The block source as a single symbol, for the simulator.
  std::optional<FiniteDistribution> block;
  const auto& d = *src.memoryless;
  if (std::pow(double(d.size()), n) <= double(c.budget.max_enumeration)) {
    std::vector<double> probs{1.0};
    for (int t = 0; t < n; ++t) {
      std::vector<double> next;
      next.reserve(probs.size() * d.size());
      for (double p : probs) {
        for (double q : d.probs()) next.push_back(p * q);
      }
      probs.swap(next);
    }
    double total = 0.0;
    for (double p : probs) total += p;
    for (double& p : probs) p /= total;
    block = FiniteDistribution(std::move(probs));
  }
  auto bins = c.bins.empty() ? std::vector<std::uint64_t>{1, 2, 4, 8, 16} : c.bins;
  Table t;
  t.header = {"N", "exact_error_prob", "mc_estimate_prob", "mc_stderr_prob"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < bins.size(); ++i) {
    double exact = binning_error_exact(spec, bins[i]);
    double est = nan, se = nan;
    if (block && c.trials > 0) {
      auto mc = binning_error_mc(*block, bins[i], c.trials, c.seed + i, c.threads);
      est = mc.estimate;
      se = mc.std_error;
    }
    t.rows.push_back({std::int64_t(bins[i]), exact, est, se});
  }
  return t;
}

Table cmd_dispersion(const RunConfig& c) {
  auto src = load_source(c.source);
  auto ns = resolve_n(c, 10, 100, 10);
  auto params = src.gaussian();
  auto trace = dispersion_estimate(
      [&](int n) { return src.spectrum(n, c.budget); }, ns, params.sigma2);
  Table t;
  t.header = {"n",           "var_len_over_n_bits2", "var_info_over_n_bits2",
              "gap2_bits2",  "sigma2_ref_bits2",     "variance_chain_ok"};
  for (const auto& p : trace.points) {
    t.rows.push_back({std::int64_t(p.n), p.var_len / p.n, p.var_info / p.n, p.gap2,
                      trace.sigma2_ref, p.variance_chain_ok});
  }
  if (trace.stopped_at) {
    t.extra["stopped_at_n"] = *trace.stopped_at;
    t.extra["stop_reason"] = trace.stop_reason;
  }
  return t;
}

Table cmd_figure1(const RunConfig& c) {
  auto src = source_or(c, R"({"type":"binomial","trials":10000,"param":0.5})");
  auto spec = src.spectrum(1, c.budget);
  auto len = codelength_distribution(spec);
  Table t;
  t.header = {"variable", "x_bits", "cdf_prob"};
  double acc = 0.0;
  for (std::size_t j = 0; j < len.probs_by_length.size(); ++j) {
    acc += len.probs_by_length[j];
    t.rows.push_back({std::string("length"), double(j), std::min(acc, 1.0)});
  }
  for (std::size_t i = 0; i < spec.size(); ++i) {
    t.rows.push_back({std::string("information"), spec.mass(i).info,
                      std::min(spec.head_prob(i + 1), 1.0)});
  }
  t.extra["H_bits"] = spec.mean();
  t.extra["mean_length_bits"] = len.mean;
  return t;
}

Table cmd_figure23(const RunConfig& c, int lo, int hi) {
  auto src = source_or(c, R"({"type":"memoryless","probs":[0.89,0.11]})");
  return bounds_table(src, c, resolve_n(c, lo, hi, 1), resolve_eps(c));
}

Table cmd_figure4(const RunConfig& c) {
  Table t;
  t.header = {"family", "param", "H_bits", "D_over_H2"};
  for (const auto& r : normalized_dispersion_curves(c.points)) {
    t.rows.push_back({r.family, r.param, r.H, r.D_over_H2});
  }
  return t;
}

int exit_code_for(const Error& e) {
  if (dynamic_cast<const BudgetError*>(&e)) return kExitBudget;
  if (dynamic_cast<const NumericError*>(&e)) return kExitNumeric;
  return kExitConfig;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& msg,
                  int code) {
  json j{{"error", kind}, {"message", msg}, {"exit_code", code}};
  err << j.dump() << "\n";
}

std::uint64_t env_or(const char* name, std::uint64_t fallback) {
  const char* v = std::getenv(name);
  if (!v || !*v) return fallback;
  char* end = nullptr;
  unsigned long long x = std::strtoull(v, &end, 10);
  if (end == v || *end != '\0') return fallback;
  return x;
}

}  // namespace

RunConfig default_config() {
  RunConfig c;
  c.budget.max_type_classes = env_or("FBLIMITS_MAX_TYPE_CLASSES", c.budget.max_type_classes);
  c.budget.max_enumeration = env_or("FBLIMITS_MAX_ENUMERATION", c.budget.max_enumeration);
  c.max_trials = env_or("FBLIMITS_MAX_TRIALS", c.max_trials);
  return c;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (config.format != "csv" && config.format != "json") {
      throw ValidationError("format must be csv or json");
    }
    Table t;
    const auto& s = config.subcommand;
    if (s == "spectrum") {
      t = cmd_spectrum(config);
    } else if (s == "limits") {
      t = cmd_limits(config);
    } else if (s == "bounds") {
      t = cmd_bounds(config);
    } else if (s == "binning") {
      t = cmd_binning(config);
    } else if (s == "dispersion") {
      t = cmd_dispersion(config);
    } else if (s == "figure1") {
      t = cmd_figure1(config);
    } else if (s == "figure2") {
      t = cmd_figure23(config, 200, 2000);
    } else if (s == "figure3") {
      t = cmd_figure23(config, 10, 200);
    } else if (s == "figure4") {
      t = cmd_figure4(config);
    } else {
      throw ValidationError("unknown subcommand \"" + s + "\"");
    }

    if (config.output == "-") {
      write_table(t, config.format, out);
      return kExitOk;
    }
    {
      std::ofstream f(config.output, std::ios::binary);
      if (!f) throw ValidationError("cannot write " + config.output);
      write_table(t, config.format, f);
    }
    json cfg = config_json(config);
    json meta;
    meta["tool"] = "fblimits";
    meta["version"] = kVersion;
    meta["subcommand"] = config.subcommand;
    meta["seed"] = config.seed;
    meta["config"] = cfg;
    meta["config_hash"] = fnv1a_hex(cfg.dump());
    meta["columns"] = t.header;
    meta["results"] = t.extra;
    std::ofstream m(config.output + ".meta.json", std::ios::binary);
    if (!m) throw ValidationError("cannot write metadata for " + config.output);
    m << meta.dump(2) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    int code = exit_code_for(e);
    report_error(err, e.kind(), e.what(), code);
    return code;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, "validation", e.what(), kExitConfig);
    return kExitConfig;
  }
}

int cli_main(int argc, char** argv) {
  RunConfig c = default_config();
  CLI::App app{"Finite-blocklength limits of lossless compression"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto common = [&](CLI::App* sub, bool needs_source) {
    auto* opt = sub->add_option("-s,--source", c.source, "source JSON file or inline JSON");
    if (needs_source) opt->required();
    sub->add_option("-n,--n", c.n_list, "blocklengths");
    sub->add_option("--n-min", c.n_min, "first blocklength of a range");
    sub->add_option("--n-max", c.n_max, "last blocklength of a range");
    sub->add_option("--n-step", c.n_step, "range step");
    sub->add_option("-e,--eps", c.eps, "excess-length probabilities");
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("-o,--output", c.output, "output file ('-' for stdout)");
    sub->add_option("--format", c.format, "csv or json");
    sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
    sub->add_option("--max-type-classes", c.budget.max_type_classes, "type-class budget");
    sub->add_option("--max-enumeration", c.budget.max_enumeration, "enumeration budget");
    sub->add_option("--max-trials", c.max_trials, "Monte-Carlo budget");
  };
  auto* spectrum = app.add_subcommand("spectrum", "information spectrum masses");
  common(spectrum, true);
  spectrum->add_flag("--mc", c.monte_carlo, "sample a markov source instead of enumerating");
  spectrum->add_option("--samples", c.samples, "Monte-Carlo sample paths");
  common(app.add_subcommand("limits", "epsilon*, R*, Rbar and prefix variants"), true);
  auto* bounds = app.add_subcommand("bounds", "bounds and approximations for R*");
  common(bounds, true);
  bounds->add_option("--markov-A", c.markov_A, "Berry-Esseen constant for markov bounds");
  bounds->add_flag("--mc", c.monte_carlo, "sample when enumeration is over budget");
  bounds->add_option("--samples", c.samples, "Monte-Carlo sample paths");
  auto* binning = app.add_subcommand("binning", "random binning error");
  common(binning, true);
  binning->add_option("--bins", c.bins, "bin counts N");
  binning->add_option("--trials", c.trials, "Monte-Carlo trials per N");
  common(app.add_subcommand("dispersion", "codelength variance traces"), true);
  common(app.add_subcommand("figure1", "CDFs of length and information, binomial source"),
         false);
  common(app.add_subcommand("figure2", "R* and approximations, n in [200, 2000]"), false);
  common(app.add_subcommand("figure3", "R* and approximations, n in [10, 200]"), false);
  auto* fig4 = app.add_subcommand("figure4", "normalized dispersion curves");
  common(fig4, false);
  fig4->add_option("--points", c.points, "points per family");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    report_error(std::cerr, "config", e.what(), kExitConfig);
    return kExitConfig;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return run(c, std::cout, std::cerr);
}

}  // namespace fbl
