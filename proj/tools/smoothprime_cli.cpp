// Command-line front end: evaluate P(n), scan ranges, reproduce the sample
// value tables, and emit resonance maps, in pretty/CSV/JSON form.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smoothprime/oracle.hpp"
#include "smoothprime/parallel.hpp"
#include "smoothprime/primality.hpp"
#include "smoothprime/resonance.hpp"

using nlohmann::json;
namespace sp = smoothprime;

namespace {

struct RunConfig {
  std::string variant = "summed-triple";
  double delta = 0.05;
  double eps = 1e-5;
  int p = 8;
  double c = 1.0;
  double sigma = 0.05;
  std::string kernel = "sine";
  std::string bump = "sine-squared";
  std::string bell = "gaussian";
  std::string method = "simpson";
  int grid = 32;
  long long samples = 10000;
  std::uint64_t seed = 42;
  double tol = 1e-6;
  double threshold = 0.985;
  std::string schedule_delta = "fixed";
  std::string schedule_eps = "fixed";
  std::string format = "pretty";
  unsigned jobs = 1;
};

// Keys set explicitly by a flag or a config file line; fields not in this
// set keep their defaults and may be re-defaulted per command (resonance).
using ProvidedKeys = std::set<std::string>;

sp::SmoothParams make_params(const RunConfig& cfg) {
  sp::SmoothParams params;
  params.delta = cfg.delta;
  const auto kf = sp::parse_kernel_family(cfg.kernel);
  if (!kf) throw sp::argument_error("unknown kernel '" + cfg.kernel + "'");
  params.kernel = *kf;
  params.kernel_params.epsilon = cfg.eps;
  params.kernel_params.p = cfg.p;
  params.kernel_params.c = cfg.c;
  const auto bf = sp::parse_bump_family(cfg.bump);
  if (!bf) throw sp::argument_error("unknown bump '" + cfg.bump + "'");
  params.bump.family = *bf;
  const auto bl = sp::parse_bell_family(cfg.bell);
  if (!bl) throw sp::argument_error("unknown bell '" + cfg.bell + "'");
  params.bell.family = *bl;
  params.bell.sigma = cfg.sigma;
  return params;
}

sp::IntegrationSpec make_integration(const RunConfig& cfg) {
  sp::IntegrationSpec spec;
  const auto m = sp::parse_integration_method(cfg.method);
  if (!m) throw sp::argument_error("unknown method '" + cfg.method + "'");
  spec.method = *m;
  spec.q = cfg.grid;
  spec.samples = cfg.samples;
  spec.seed = cfg.seed;
  spec.abs_tol = cfg.tol;
  spec.jobs = cfg.jobs;
  return spec;
}

sp::ParamSchedule make_schedule(const RunConfig& cfg) {
  sp::ParamSchedule sched;
  sched.fixed_delta = cfg.delta;
  sched.fixed_epsilon = cfg.eps;
  if (cfg.schedule_delta == "fixed") {
    sched.delta_rule = sp::ParamSchedule::DeltaRule::kFixed;
  } else if (cfg.schedule_delta == "inverse-square") {
    sched.delta_rule = sp::ParamSchedule::DeltaRule::kInverseSquare;
  } else if (cfg.schedule_delta == "inverse-log") {
    sched.delta_rule = sp::ParamSchedule::DeltaRule::kInverseLog;
  } else {
    throw sp::argument_error("unknown delta schedule '" + cfg.schedule_delta +
                             "' (fixed, inverse-square, inverse-log)");
  }
  std::string es = cfg.schedule_eps;
  if (const auto colon = es.find(':'); colon != std::string::npos) {
    const std::string arg = es.substr(colon + 1);
    es = es.substr(0, colon);
    try {
      sched.power_c = std::stod(arg);
    } catch (const std::exception&) {
      throw sp::argument_error("invalid exponent in '--schedule-eps " +
                               cfg.schedule_eps + "'");
    }
  }
  if (es == "fixed") {
    sched.epsilon_rule = sp::ParamSchedule::EpsilonRule::kFixed;
  } else if (es == "power") {
    sched.epsilon_rule = sp::ParamSchedule::EpsilonRule::kPower;
  } else {
    throw sp::argument_error("unknown epsilon schedule '" + cfg.schedule_eps +
                             "' (fixed, power, power:<c>)");
  }
  return sched;
}

sp::Variant make_variant(const RunConfig& cfg) {
  const auto v = sp::parse_variant(cfg.variant);
  if (!v) {
    throw sp::argument_error(
        "unknown variant '" + cfg.variant +
        "' (triple-single, summed-triple, reduced-1d, smoothed-integral, "
        "smoothed-1d)");
  }
  return *v;
}

void validate_config(const RunConfig& cfg) {
  if (!(cfg.delta > 0.0)) throw sp::argument_error("delta must be > 0");
  if (!(cfg.delta < 1.0)) throw sp::argument_error("delta must be < 1");
  if (!(cfg.eps > 0.0)) throw sp::argument_error("eps must be > 0");
  if (cfg.p < 1) throw sp::argument_error("p must be >= 1");
  if (!(cfg.c > 0.0)) throw sp::argument_error("c must be > 0");
  if (!(cfg.sigma > 0.0)) throw sp::argument_error("sigma must be > 0");
  if (cfg.grid < 1) throw sp::argument_error("grid must be >= 1");
  if (cfg.samples < 1) throw sp::argument_error("samples must be >= 1");
  if (!(cfg.tol > 0.0)) throw sp::argument_error("tol must be > 0");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw sp::argument_error("threshold must lie in (0, 1)");
  }
  if (cfg.jobs < 1) throw sp::argument_error("jobs must be >= 1");
  if (cfg.format != "pretty" && cfg.format != "csv" && cfg.format != "json") {
    throw sp::argument_error("format must be one of pretty, csv, json");
  }
  make_variant(cfg);
  make_params(cfg);
  make_integration(cfg);
  make_schedule(cfg);
}

// ---------------------------------------------------------------------------
// Config file: line-oriented `key = value`, '#' comments, flag-style keys.

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void apply_config_value(RunConfig& cfg, const std::string& key,
                        const std::string& value, int line) {
  const auto bad_value = [&]() -> sp::argument_error {
    return sp::argument_error("config error at line " + std::to_string(line) +
                              ": malformed value for key '" + key + "'");
  };
  const auto as_double = [&](double* out) {
    try {
      std::size_t pos = 0;
      *out = std::stod(value, &pos);
      if (pos != value.size()) throw bad_value();
    } catch (const sp::argument_error&) {
      throw;
    } catch (const std::exception&) {
      throw bad_value();
    }
  };
  const auto as_ll = [&](long long* out) {
    try {
      std::size_t pos = 0;
      *out = std::stoll(value, &pos);
      if (pos != value.size()) throw bad_value();
    } catch (const sp::argument_error&) {
      throw;
    } catch (const std::exception&) {
      throw bad_value();
    }
  };
  if (key == "variant") cfg.variant = value;
  else if (key == "delta") as_double(&cfg.delta);
  else if (key == "eps") as_double(&cfg.eps);
  else if (key == "p") { long long v; as_ll(&v); cfg.p = static_cast<int>(v); }
  else if (key == "c") as_double(&cfg.c);
  else if (key == "sigma") as_double(&cfg.sigma);
  else if (key == "kernel") cfg.kernel = value;
  else if (key == "bump") cfg.bump = value;
  else if (key == "bell") cfg.bell = value;
  else if (key == "method") cfg.method = value;
  else if (key == "grid") { long long v; as_ll(&v); cfg.grid = static_cast<int>(v); }
  else if (key == "samples") as_ll(&cfg.samples);
  else if (key == "seed") {
    try {
      std::size_t pos = 0;
      cfg.seed = std::stoull(value, &pos);
      if (pos != value.size()) throw bad_value();
    } catch (const sp::argument_error&) {
      throw;
    } catch (const std::exception&) {
      throw bad_value();
    }
  }
  else if (key == "tol") as_double(&cfg.tol);
  else if (key == "threshold") as_double(&cfg.threshold);
  else if (key == "schedule-delta") cfg.schedule_delta = value;
  else if (key == "schedule-eps") cfg.schedule_eps = value;
  else if (key == "format") cfg.format = value;
  else if (key == "jobs") { long long v; as_ll(&v); cfg.jobs = static_cast<unsigned>(v); }
  else {
    throw sp::argument_error("config error at line " + std::to_string(line) +
                             ": unknown key '" + key + "'");
  }
}

// Applies file entries for keys not already provided on the command line.
void load_config_file(const std::string& path, RunConfig& cfg,
                      ProvidedKeys& provided) {
  std::ifstream in(path);
  if (!in) {
    throw sp::argument_error("cannot open config file '" + path + "'");
  }
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw sp::argument_error("config error at line " +
                               std::to_string(line_no) +
                               ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw sp::argument_error("config error at line " +
                               std::to_string(line_no) + ": empty key");
    }
    if (provided.count(key)) continue;  // explicit flags win
    apply_config_value(cfg, key, value, line_no);
    provided.insert(key);
  }
}

// ---------------------------------------------------------------------------
// Output helpers.

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_ms(double ms) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", ms);
  return buf;
}

json params_json(const RunConfig& cfg) {
  return json{{"variant", cfg.variant},
              {"delta", cfg.delta},
              {"eps", cfg.eps},
              {"p", cfg.p},
              {"c", cfg.c},
              {"sigma", cfg.sigma},
              {"kernel", cfg.kernel},
              {"bump", cfg.bump},
              {"bell", cfg.bell},
              {"method", cfg.method},
              {"grid", cfg.grid},
              {"samples", cfg.samples},
              {"seed", cfg.seed},
              {"tol", cfg.tol},
              {"threshold", cfg.threshold},
              {"schedule_delta", cfg.schedule_delta},
              {"schedule_eps", cfg.schedule_eps}};
}

double elapsed_ms_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// Commands.

int run_eval(double n, const RunConfig& cfg) {
  const sp::Variant variant = make_variant(cfg);
  const sp::SmoothParams base = make_params(cfg);
  const sp::IntegrationSpec integ = make_integration(cfg);
  const sp::SmoothParams params =
      sp::resolve_schedule(make_schedule(cfg), base, n);

  const auto start = std::chrono::steady_clock::now();
  const sp::EvalResult r = sp::evaluate_variant(n, variant, params, integ);
  const double ms = elapsed_ms_since(start);

  if (cfg.format == "json") {
    json out{{"n", r.n},
             {"variant", sp::variant_name(r.variant)},
             {"value", r.value},
             {"error_estimate", r.error_estimate},
             {"evaluations", r.evaluations},
             {"elapsed_ms", ms},
             {"params", params_json(cfg)}};
    std::cout << out.dump() << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "n,variant,value,error_estimate,evaluations,elapsed_ms\n"
              << fmt6(r.n) << ',' << sp::variant_name(r.variant) << ','
              << fmt6(r.value) << ',' << fmt6(r.error_estimate) << ','
              << r.evaluations << ',' << fmt_ms(ms) << "\n";
  } else {
    std::cout << "n              " << fmt6(r.n) << "\n"
              << "variant        " << sp::variant_name(r.variant) << "\n"
              << "value          " << fmt6(r.value) << "\n"
              << "error_estimate " << fmt6(r.error_estimate) << "\n"
              << "evaluations    " << r.evaluations << "\n"
              << "elapsed_ms     " << fmt_ms(ms) << "\n";
  }
  return 0;
}

struct ScanRow {
  long long n = 0;
  double value = 0.0;
  bool likely_prime = false;
  bool is_prime = false;
  double elapsed_ms = 0.0;
};

int run_scan(long long start_n, long long end_n, const RunConfig& cfg) {
  if (start_n < 2 || start_n > end_n) {
    throw sp::argument_error("scan range must satisfy 2 <= start <= end");
  }
  const sp::Variant variant = make_variant(cfg);
  const sp::SmoothParams base = make_params(cfg);
  const sp::IntegrationSpec integ = make_integration(cfg);
  const sp::ParamSchedule sched = make_schedule(cfg);

  const std::size_t count = static_cast<std::size_t>(end_n - start_n + 1);
  std::vector<ScanRow> rows(count);
  // Rows are independent; buffered by index so parallel output order equals
  // serial order.
  sp::parallel_for(count, cfg.jobs, [&](std::size_t i) {
    const long long n = start_n + static_cast<long long>(i);
    const auto t0 = std::chrono::steady_clock::now();
    const sp::SmoothParams params =
        sp::resolve_schedule(sched, base, static_cast<double>(n));
    const sp::Classification c =
        sp::classify(static_cast<double>(n), variant, params, integ,
                     cfg.threshold);
    rows[i] = {n, c.eval.value, c.likely_prime,
               sp::primality_fact(n).is_prime, elapsed_ms_since(t0)};
  });

  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"n", r.n},
                         {"value", r.value},
                         {"likely_prime", r.likely_prime},
                         {"is_prime", r.is_prime},
                         {"elapsed_ms", r.elapsed_ms}});
    }
    std::cout << json{{"params", params_json(cfg)}, {"rows", arr}}.dump()
              << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "n,value,likely_prime,is_prime,elapsed_ms\n";
    for (const auto& r : rows) {
      std::cout << r.n << ',' << fmt6(r.value) << ','
                << (r.likely_prime ? "true" : "false") << ','
                << (r.is_prime ? "true" : "false") << ','
                << fmt_ms(r.elapsed_ms) << "\n";
    }
  } else {
    std::printf("%6s %12s %13s %9s %12s\n", "n", "value", "likely_prime",
                "is_prime", "elapsed_ms");
    for (const auto& r : rows) {
      std::printf("%6lld %12s %13s %9s %12s\n", r.n, fmt6(r.value).c_str(),
                  r.likely_prime ? "true" : "false",
                  r.is_prime ? "true" : "false",
                  fmt_ms(r.elapsed_ms).c_str());
    }
  }
  return 0;
}

int run_table(const RunConfig& cfg) {
  const sp::SmoothParams base = make_params(cfg);
  const sp::IntegrationSpec integ = make_integration(cfg);
  const sp::ParamSchedule sched = make_schedule(cfg);

  struct TableRow {
    long long n;
    bool is_prime;
    double triple;
    double reduced;
  };
  std::vector<TableRow> rows(12);
  sp::parallel_for(rows.size(), cfg.jobs, [&](std::size_t i) {
    const long long n = static_cast<long long>(i) + 2;
    const sp::SmoothParams params =
        sp::resolve_schedule(sched, base, static_cast<double>(n));
    rows[i] = {n, sp::primality_fact(n).is_prime,
               sp::p_summed_triple(n, params, integ).value,
               sp::p_reduced_1d(n, params, integ).value};
  });

  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back(json{{"n", r.n},
                         {"class", r.is_prime ? "prime" : "composite"},
                         {"triple", r.triple},
                         {"reduced", r.reduced}});
    }
    std::cout << json{{"params", params_json(cfg)}, {"rows", arr}}.dump()
              << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "n,class,triple,reduced\n";
    for (const auto& r : rows) {
      std::cout << r.n << ',' << (r.is_prime ? "prime" : "composite") << ','
                << fmt6(r.triple) << ',' << fmt6(r.reduced) << "\n";
    }
  } else {
    std::printf("%4s %-10s %10s %10s\n", "n", "class", "triple", "reduced");
    for (const auto& r : rows) {
      std::printf("%4lld %-10s %10s %10s\n", r.n,
                  r.is_prime ? "prime" : "composite", fmt6(r.triple).c_str(),
                  fmt6(r.reduced).c_str());
    }
  }
  return 0;
}

int run_resonance(double n, const RunConfig& cfg, double rel_threshold) {
  if (!(n >= 4.0)) {
    throw sp::argument_error("resonance analysis requires n >= 4");
  }
  const sp::SmoothParams params = make_params(cfg);
  sp::MomentSpec spec;
  spec.truncation_order = 4;
  spec.k_min = 2;
  spec.k_max = static_cast<int>(std::floor(n / 2.0)) + 1;
  sp::IntegrationSpec integ_t = make_integration(cfg);
  integ_t.q = std::min(integ_t.q, 64);  // t-resolution; moments are smooth in t

  const sp::ResonanceMap map = sp::resonance_map(n, params, spec, integ_t);
  const auto signal = sp::detect_composite(map, rel_threshold);

  std::string summary;
  if (signal) {
    summary = "composite signal at k=" + std::to_string(signal->k) +
              ", divisor hint " + std::to_string(signal->divisor_hint);
  } else {
    summary = "no resonance detected";
  }

  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& e : map.entries) {
      arr.push_back(json{{"k", e.k},
                         {"a_k", e.amplitude},
                         {"baseline", e.baseline},
                         {"relative_drop", e.relative_drop},
                         {"excluded", e.excluded}});
    }
    json summary_json{{"composite_signal", static_cast<bool>(signal)}};
    if (signal) {
      summary_json["k"] = signal->k;
      summary_json["divisor_hint"] = signal->divisor_hint;
    }
    std::cout << json{{"params", params_json(cfg)},
                      {"n", n},
                      {"rows", arr},
                      {"summary", summary_json}}
                     .dump()
              << "\n";
  } else if (cfg.format == "csv") {
    std::cout << "k,a_k,baseline,relative_drop,excluded\n";
    for (const auto& e : map.entries) {
      std::cout << e.k << ',' << fmt6(e.amplitude) << ',' << fmt6(e.baseline)
                << ',' << fmt6(e.relative_drop) << ','
                << (e.excluded ? "true" : "false") << "\n";
    }
    std::cout << "# " << summary << "\n";
  } else {
    std::printf("%4s %14s %14s %14s %9s\n", "k", "a_k", "baseline",
                "relative_drop", "excluded");
    for (const auto& e : map.entries) {
      std::printf("%4d %14s %14s %14s %9s\n", e.k, fmt6(e.amplitude).c_str(),
                  fmt6(e.baseline).c_str(), fmt6(e.relative_drop).c_str(),
                  e.excluded ? "true" : "false");
    }
    std::cout << summary << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "smoothprime: smooth primality filter P(n), resonance analysis, and "
      "sample tables"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  std::string config_path;

  app.add_option("--variant", cfg.variant,
                 "P variant: triple-single, summed-triple, reduced-1d, "
                 "smoothed-integral, smoothed-1d")
      ->capture_default_str();
  app.add_option("--delta", cfg.delta, "perturbation amplitude in (0,1)")
      ->capture_default_str();
  app.add_option("--eps", cfg.eps, "kernel sharpness epsilon > 0")
      ->capture_default_str();
  app.add_option("--p", cfg.p, "kernel suppression exponent >= 1")
      ->capture_default_str();
  app.add_option("--sigma", cfg.sigma, "bell localization width > 0")
      ->capture_default_str();
  app.add_option("--kernel", cfg.kernel,
                 "kernel family: sine, modified-gaussian, "
                 "singular-exponential, inverse-polynomial")
      ->capture_default_str();
  app.add_option("--bump", cfg.bump,
                 "bump family: sine-squared, quartic, compact-exponential")
      ->capture_default_str();
  app.add_option("--bell", cfg.bell,
                 "bell family: gaussian, compact-bump, sine-squared-bell")
      ->capture_default_str();
  app.add_option("--method", cfg.method,
                 "integration method: midpoint, trapezoid, simpson, "
                 "monte-carlo, adaptive")
      ->capture_default_str();
  app.add_option("--grid", cfg.grid, "grid intervals per axis")
      ->capture_default_str();
  app.add_option("--samples", cfg.samples, "monte-carlo sample count")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "monte-carlo seed")
      ->capture_default_str();
  app.add_option("--tol", cfg.tol, "adaptive absolute tolerance")
      ->capture_default_str();
  app.add_option("--threshold", cfg.threshold,
                 "classification threshold tau for eval/scan; relative-drop "
                 "threshold for resonance (default 0.5 there)")
      ->capture_default_str();
  app.add_option("--schedule-delta", cfg.schedule_delta,
                 "delta rule: fixed, inverse-square, inverse-log")
      ->capture_default_str();
  app.add_option("--schedule-eps", cfg.schedule_eps,
                 "epsilon rule: fixed, power, power:<c>")
      ->capture_default_str();
  app.add_option("--format", cfg.format, "output format: pretty, csv, json")
      ->capture_default_str();
  app.add_option("--jobs", cfg.jobs, "worker threads for scans and sampling")
      ->capture_default_str();
  app.add_option("--config", config_path,
                 "config file of 'key = value' lines; flags override it; "
                 "SMOOTHPRIME_CONFIG names a default path");

  double eval_n = 0.0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate P(n) once");
  eval_cmd->add_option("n", eval_n, "input n")->required();

  long long scan_start = 0, scan_end = 0;
  CLI::App* scan_cmd =
      app.add_subcommand("scan", "evaluate and classify a range of integers");
  scan_cmd->add_option("start", scan_start, "first n")->required();
  scan_cmd->add_option("end", scan_end, "last n")->required();

  CLI::App* table_cmd = app.add_subcommand(
      "table", "sample-value table for n = 2..13 (triple and reduced)");

  double resonance_n = 0.0;
  CLI::App* resonance_cmd = app.add_subcommand(
      "resonance",
      "resonance map A_k(n) with composite detection; defaults to the "
      "moment-expansion configuration (sine p=1 eps=400 delta=0.05 "
      "sigma=0.05) unless overridden");
  resonance_cmd->add_option("n", resonance_n, "input n (>= 4)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    ProvidedKeys provided;
    for (const char* key :
         {"variant", "delta", "eps", "p", "sigma", "kernel", "bump", "bell",
          "method", "grid", "samples", "seed", "tol", "threshold",
          "schedule-delta", "schedule-eps", "format", "jobs"}) {
      if (app.count(std::string("--") + key) > 0) provided.insert(key);
    }

    if (config_path.empty()) {
      if (const char* env = std::getenv("SMOOTHPRIME_CONFIG")) {
        config_path = env;
      }
    }
    if (!config_path.empty()) load_config_file(config_path, cfg, provided);

    const bool resonance = resonance_cmd->parsed();
    double rel_threshold = 0.5;
    if (resonance) {
      // The sharp screening defaults degenerate under the order-4 moment
      // truncation, so this command re-defaults any analysis field the user
      // did not set to the moment-expansion configuration.
      const sp::SmoothParams soft = sp::resonance_moment_params();
      if (!provided.count("kernel")) cfg.kernel = "sine";
      if (!provided.count("eps")) cfg.eps = soft.kernel_params.epsilon;
      if (!provided.count("p")) cfg.p = soft.kernel_params.p;
      if (!provided.count("delta")) cfg.delta = soft.delta;
      if (!provided.count("sigma")) cfg.sigma = soft.bell.sigma;
      if (provided.count("threshold")) rel_threshold = cfg.threshold;
      if (!(rel_threshold > 0.0 && rel_threshold < 1.0)) {
        throw sp::argument_error("threshold must lie in (0, 1)");
      }
    }

    validate_config(cfg);

    if (eval_cmd->parsed()) return run_eval(eval_n, cfg);
    if (scan_cmd->parsed()) return run_scan(scan_start, scan_end, cfg);
    if (table_cmd->parsed()) return run_table(cfg);
    if (resonance) return run_resonance(resonance_n, cfg, rel_threshold);
    throw sp::argument_error("no command given");
  } catch (const sp::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const sp::argument_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
