#include "logdet/experiment.hpp"

#include "logdet/detcore.hpp"
#include "logdet/errors.hpp"
#include "logdet/gaussmodel.hpp"
#include "logdet/girko.hpp"
#include "logdet/parallel.hpp"
#include "logdet/resolvent.hpp"
#include "logdet/rng.hpp"
#include "logdet/version.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

namespace logdet::experiment {
namespace {

using nlohmann::json;

struct TrialOutput {
  TrialStatus status = TrialStatus::kOk;
  std::vector<std::optional<double>> values;
};

bool excluded(TrialStatus s) { return s == TrialStatus::kSingular || s == TrialStatus::kDegenerate; }

template <typename PerTrial>
ExperimentResult run_trials(const ExperimentConfig& config, std::vector<std::string> columns,
                            PerTrial&& per_trial) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();
  ExperimentResult result;
  result.config = config;
  result.columns = std::move(columns);
  result.version = kVersion;
  result.trials.resize(static_cast<std::size_t>(config.trials));

  parallel_for(config.trials, config.threads, [&](std::int64_t t) {
    TrialRecord& rec = result.trials[static_cast<std::size_t>(t)];
    rec.index = t;
    rec.seed = trial_seed(config.master_seed, t);
    TrialOutput out = per_trial(rec.seed);
    out.values.resize(result.columns.size());
    rec.status = out.status;
    rec.values = std::move(out.values);
  });

  for (std::size_t c = 0; c < result.columns.size(); ++c) {
    std::vector<double> present;
    for (const auto& rec : result.trials) {
      if (!excluded(rec.status) && rec.values[c]) present.push_back(*rec.values[c]);
    }
    if (present.size() >= 2) result.aggregates[result.columns[c]] = moment_report(present);
  }
  const Index singular = result.count(TrialStatus::kSingular);
  const Index degenerate = result.count(TrialStatus::kDegenerate);
  result.scalars["excluded_singular"] = static_cast<double>(singular);
  result.scalars["excluded_degenerate"] = static_cast<double>(degenerate);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const double fraction =
      static_cast<double>(singular + degenerate) / static_cast<double>(config.trials);
  if (fraction > kMaxSingularFraction) {
    throw DegenerateEnsemble(std::to_string(singular + degenerate) + " of " +
                             std::to_string(config.trials) +
                             " draws were singular or degenerate (limit 1%)");
  }
  return result;
}

std::optional<double> maybe_log_abs_det(const SquareMatrix& a) {
  try {
    return log_abs_det(a);
  } catch (const SingularMatrix&) {
    return std::nullopt;
  }
}

Index parse_index(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return static_cast<Index>(v);
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects an integer, got '" + value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw UsageError("'" + key + "' expects a number, got '" + value + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json report_json(const StatReport& r) {
  return json{{"sample_size", r.sample_size},
              {"mean", r.mean},
              {"variance", r.variance},
              {"skewness", r.skewness},
              {"excess_kurtosis", r.excess_kurtosis},
              {"ks_to_standard_normal", r.ks_to_standard_normal},
              {"se_mean", r.se_mean},
              {"se_variance", r.se_variance},
              {"se_skewness", r.se_skewness},
              {"se_excess_kurtosis", r.se_excess_kurtosis},
              {"degenerate", r.degenerate}};
}

json config_json(const ExperimentConfig& c) {
  json j{{"experiment", to_string(c.kind)},
         {"n", c.n},
         {"trials", c.trials},
         {"dist", to_string(c.dist)},
         {"replace_dist", to_string(c.replace_dist)},
         {"seed", c.master_seed},
         {"a", c.a},
         {"epsilon", c.epsilon},
         {"L", c.singular_exponent},
         {"threads", c.threads},
         {"format", to_string(c.format)},
         {"out", c.out}};
  j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
  j["s1"] = c.s1 ? json(*c.s1) : json(nullptr);
  j["p"] = c.p ? json(*c.p) : json(nullptr);
  return j;
}

}  // namespace

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::kLogLaw: return "loglaw";
    case Kind::kGaussianExact: return "gaussian-exact";
    case Kind::kDecompose: return "decompose";
    case Kind::kResolvent: return "resolvent";
    case Kind::kReplace: return "replace";
    case Kind::kPerturb: return "perturb";
    case Kind::kTail: return "tail";
  }
  return "unknown";
}

Kind parse_kind(const std::string& name) {
  for (Kind k : {Kind::kLogLaw, Kind::kGaussianExact, Kind::kDecompose, Kind::kResolvent,
                 Kind::kReplace, Kind::kPerturb, Kind::kTail}) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown experiment '" + name + "'");
}

std::string to_string(Format format) { return format == Format::kCsv ? "csv" : "json"; }

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::kCsv;
  if (name == "json") return Format::kJson;
  throw UsageError("unknown format '" + name + "' (csv or json)");
}

std::string to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::kOk: return "ok";
    case TrialStatus::kSingular: return "singular";
    case TrialStatus::kDegenerate: return "degenerate";
    case TrialStatus::kRemainderUndefined: return "remainder_undefined";
    case TrialStatus::kNearSingular: return "near_singular";
  }
  return "unknown";
}

Index ExperimentConfig::resolved_s1() const { return s1 ? *s1 : default_s1(n, a); }
double ExperimentConfig::resolved_alpha() const { return alpha ? *alpha : default_alpha(n); }
Index ExperimentConfig::resolved_p() const {
  return p ? *p : std::max<Index>(1, static_cast<Index>(std::lround(0.9 * static_cast<double>(n))));
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* env = std::getenv("LOGDET_THREADS"); env != nullptr && *env != '\0') {
    const Index t = parse_index("LOGDET_THREADS", env);
    if (t < 1) throw UsageError("LOGDET_THREADS must be >= 1");
    c.threads = static_cast<int>(t);
  }
  return c;
}

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  try {
    if (key == "experiment") c.kind = parse_kind(value);
    else if (key == "n") c.n = parse_index(key, value);
    else if (key == "trials") c.trials = parse_index(key, value);
    else if (key == "dist") c.dist = parse_distribution(value);
    else if (key == "replace_dist" || key == "replace-dist") c.replace_dist = parse_distribution(value);
    else if (key == "seed") {
      try {
        std::size_t used = 0;
        c.master_seed = std::stoull(value, &used, 0);
        if (used != value.size()) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw UsageError("'seed' expects an unsigned 64-bit integer, got '" + value + "'");
      }
    } else if (key == "a") c.a = parse_double(key, value);
    else if (key == "alpha") c.alpha = parse_double(key, value);
    else if (key == "epsilon") c.epsilon = parse_double(key, value);
    else if (key == "s1") c.s1 = parse_index(key, value);
    else if (key == "p") c.p = parse_index(key, value);
    else if (key == "L") c.singular_exponent = parse_double(key, value);
    else if (key == "threads") c.threads = static_cast<int>(parse_index(key, value));
    else if (key == "out") c.out = value;
    else if (key == "format") c.format = parse_format(value);
    else throw UsageError("unknown setting '" + key + "'");
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

void validate(const ExperimentConfig& c) {
  if (c.trials < 1) throw UsageError("trials must be >= 1");
  if (c.threads < 1) throw UsageError("threads must be >= 1");
  if (!(c.a > 0.0)) throw UsageError("a must be > 0");
  const bool needs_two = c.kind != Kind::kResolvent;
  if (c.n < (needs_two ? 2 : 1)) {
    throw UsageError("n must be >= " + std::string(needs_two ? "2" : "1") + " for " +
                     to_string(c.kind));
  }
  switch (c.kind) {
    case Kind::kDecompose: {
      const Index s1 = c.resolved_s1();
      if (s1 < 1 || s1 > c.n - 1) throw UsageError("s1 must lie in [1, n-1] for decompose");
      break;
    }
    case Kind::kReplace:
    case Kind::kTail: {
      const Index s1 = c.resolved_s1();
      if (s1 < 0 || s1 > c.n) throw UsageError("s1 must lie in [0, n]");
      break;
    }
    case Kind::kResolvent: {
      const Index p = c.resolved_p();
      if (p < 1 || p > c.n) throw UsageError("p must lie in [1, n]");
      if (!(c.resolved_alpha() > 0.0)) throw UsageError("alpha must be > 0");
      break;
    }
    case Kind::kPerturb:
      if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) throw UsageError("epsilon must lie in [0, 1)");
      break;
    default:
      break;
  }
}

std::uint64_t trial_seed(std::uint64_t master_seed, Index trial) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(trial));
}

std::vector<double> ExperimentResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidArgument("no column '" + name + "'");
  const auto c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& rec : trials) {
    if (!excluded(rec.status) && rec.values[c]) out.push_back(*rec.values[c]);
  }
  return out;
}

Index ExperimentResult::count(TrialStatus status) const {
  return static_cast<Index>(std::count_if(trials.begin(), trials.end(),
                                          [&](const TrialRecord& r) { return r.status == status; }));
}

ExperimentResult run_loglaw(const ExperimentConfig& c) {
  return run_trials(c, {"log_abs_det", "statistic"}, [&](std::uint64_t seed) {
    const SquareMatrix a = sample_matrix({c.n, c.dist, seed});
    TrialOutput out;
    const auto l = maybe_log_abs_det(a);
    if (!l) {
      out.status = TrialStatus::kSingular;
      return out;
    }
    out.values = {*l, normalize_log_abs_det(*l, c.n)};
    return out;
  });
}

ExperimentResult run_gaussian_exact(const ExperimentConfig& c) {
  const LogDetMoments exact = exact_log_det_moments(c.n);
  auto result = run_trials(c, {"log_abs_det", "exact_standardized", "statistic"},
                           [&](std::uint64_t seed) {
                             const double l = chi_square_product_log_det(c.n, seed).log_det_abs;
                             TrialOutput out;
                             out.values = {l, (l - exact.mean) / std::sqrt(exact.variance),
                                           normalize_log_abs_det(l, c.n)};
                             return out;
                           });
  result.scalars["exact_mean"] = exact.mean;
  result.scalars["exact_variance"] = exact.variance;
  return result;
}

ExperimentResult run_decompose(const ExperimentConfig& c) {
  const Index s1 = c.resolved_s1();
  auto result = run_trials(
      c,
      {"s_x", "s_x2_centered", "s_r", "s_tail", "statistic", "sum_x2", "lower_tail_events",
       "flagged_steps"},
      [&](std::uint64_t seed) {
        const SquareMatrix a = sample_matrix({c.n, c.dist, seed});
        TrialOutput out;
        DecompositionTerms terms;
        try {
          terms = full_decomposition(a, s1);
        } catch (const DegenerateRows&) {
          out.status = TrialStatus::kDegenerate;
          return out;
        }
        const PartialSums ps = partial_sums(terms);
        double sum_x2 = 0.0;
        Index events = 0;
        for (double x : terms.x) {
          sum_x2 += x * x;
          if (lower_tail_indicator(x, c.n, c.a)) ++events;
        }
        double log_sq = 0.0;
        for (double g2 : terms.gamma_sq) log_sq += std::log(g2);
        if (terms.flagged_steps > 0) out.status = TrialStatus::kRemainderUndefined;
        out.values = {ps.s_x,
                      ps.s_x2_centered,
                      ps.s_r,
                      ps.s_tail,
                      normalize_log_abs_det(0.5 * log_sq, c.n),
                      sum_x2,
                      static_cast<double>(events),
                      static_cast<double>(terms.flagged_steps)};
        return out;
      });
  const auto events = result.column("lower_tail_events");
  const double steps = static_cast<double>(events.size()) * static_cast<double>(c.n - s1);
  result.scalars["s1"] = static_cast<double>(s1);
  result.scalars["two_log_n"] = 2.0 * std::log(static_cast<double>(c.n));
  result.scalars["lower_tail_frequency"] = steps > 0 ? compensated_sum(events) / steps : 0.0;
  result.scalars["remainder_undefined_trials"] =
      static_cast<double>(result.count(TrialStatus::kRemainderUndefined));
  return result;
}

ExperimentResult run_resolvent(const ExperimentConfig& c) {
  const Index p = c.resolved_p();
  const double alpha = c.resolved_alpha();
  auto result = run_trials(c, {"trace"}, [&](std::uint64_t seed) {
    TrialOutput out;
    out.values = {resolvent_trace(sample_prefix({c.n, c.dist, seed}, p), alpha)};
    return out;
  });
  const double y = static_cast<double>(p) / static_cast<double>(c.n);
  result.scalars["p"] = static_cast<double>(p);
  result.scalars["y"] = y;
  result.scalars["alpha"] = alpha;
  result.scalars["closed_form"] = s_closed_form(y, alpha);
  return result;
}

ExperimentResult run_replace(const ExperimentConfig& c) {
  const Index s1 = c.resolved_s1();
  auto result = run_trials(c, {"base_statistic", "replaced_statistic"}, [&](std::uint64_t seed) {
    const SquareMatrix a = sample_matrix({c.n, c.dist, seed});
    const SquareMatrix b =
        replace_tail_rows(a, s1, c.replace_dist, derive_seed(seed, StreamTag::kReplacement));
    TrialOutput out;
    const auto la = maybe_log_abs_det(a);
    const auto lb = maybe_log_abs_det(b);
    if (!la || !lb) {
      out.status = TrialStatus::kSingular;
      return out;
    }
    out.values = {normalize_log_abs_det(*la, c.n), normalize_log_abs_det(*lb, c.n)};
    return out;
  });
  const auto base = result.column("base_statistic");
  const auto replaced = result.column("replaced_statistic");
  result.scalars["s1"] = static_cast<double>(s1);
  if (!base.empty()) {
    result.scalars["ks_two_sample"] = two_sample_ks(base, replaced);
    result.scalars["ks_critical_1pct"] = ks_critical_value(base.size(), replaced.size(), 0.01);
  }
  return result;
}

ExperimentResult run_perturb(const ExperimentConfig& c) {
  const double shrink = std::sqrt(1.0 - c.epsilon * c.epsilon);
  const double near_singular = std::pow(static_cast<double>(c.n), -c.singular_exponent);
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  auto result = run_trials(
      c,
      {"delta_log_det", "weyl_max_excess", "weyl_violations", "smallest_singular_value",
       "theta_op_norm"},
      [&](std::uint64_t seed) {
        const SquareMatrix a = sample_matrix({c.n, c.dist, seed});
        const std::uint64_t noise_seed = derive_seed(seed, StreamTag::kPerturbation);
        const SquareMatrix perturbed = smooth_perturb(a, c.epsilon, noise_seed);
        const double theta_norm = operator_norm(uniform_noise(c.n, noise_seed));
        const auto sa = singular_values(a);
        const auto sp = singular_values(perturbed);
        // Rounding allowance of the two SVDs.
        const double slack = 64.0 * static_cast<double>(c.n) * kEps * std::max(sa.front(), sp.front());
        double max_excess = -std::numeric_limits<double>::infinity();
        Index violations = 0;
        for (std::size_t i = 0; i < sa.size(); ++i) {
          const double excess = std::abs(sp[i] - shrink * sa[i]) - c.epsilon * theta_norm;
          max_excess = std::max(max_excess, excess);
          if (excess > slack) ++violations;
        }
        TrialOutput out;
        const auto la = maybe_log_abs_det(a);
        const auto lp = maybe_log_abs_det(perturbed);
        std::optional<double> delta;
        if (la && lp) delta = std::abs(*la - *lp);
        if (!la) out.status = TrialStatus::kSingular;
        else if (sa.back() <= near_singular) out.status = TrialStatus::kNearSingular;
        out.values = {delta, max_excess, static_cast<double>(violations), sa.back(), theta_norm};
        return out;
      });
  double max_delta = 0.0;
  double violations = 0.0;
  for (const auto& rec : result.trials) {
    if (rec.values[2]) violations += *rec.values[2];
    if (rec.status == TrialStatus::kOk && rec.values[0]) max_delta = std::max(max_delta, *rec.values[0]);
  }
  result.scalars["max_delta_log_det"] = max_delta;
  result.scalars["weyl_violations"] = violations;
  result.scalars["near_singular_trials"] =
      static_cast<double>(result.count(TrialStatus::kNearSingular));
  return result;
}

ExperimentResult run_tail(const ExperimentConfig& c) {
  const Index s1 = c.resolved_s1();
  auto result = run_trials(c, {"tail_statistic"}, [&](std::uint64_t seed) {
    TrialOutput out;
    out.values = {tail_sum_statistic(c.n, s1, seed)};
    return out;
  });
  const auto values = result.column("tail_statistic");
  const auto above = std::count_if(values.begin(), values.end(),
                                   [](double v) { return std::abs(v) > 0.5; });
  result.scalars["s1"] = static_cast<double>(s1);
  result.scalars["exact_mean"] = tail_sum_mean(c.n, s1);
  result.scalars["fraction_abs_above_half"] =
      values.empty() ? 0.0 : static_cast<double>(above) / static_cast<double>(values.size());
  return result;
}

ExperimentResult run(const ExperimentConfig& config) {
  switch (config.kind) {
    case Kind::kLogLaw: return run_loglaw(config);
    case Kind::kGaussianExact: return run_gaussian_exact(config);
    case Kind::kDecompose: return run_decompose(config);
    case Kind::kResolvent: return run_resolvent(config);
    case Kind::kReplace: return run_replace(config);
    case Kind::kPerturb: return run_perturb(config);
    case Kind::kTail: return run_tail(config);
  }
  throw UsageError("unknown experiment");
}

void write_csv(const ExperimentResult& result, std::ostream& out) {
  out << "trial_index,seed,status";
  for (const auto& c : result.columns) out << ',' << c;
  out << '\n';
  for (const auto& rec : result.trials) {
    out << rec.index << ',' << rec.seed << ',' << to_string(rec.status);
    for (const auto& v : rec.values) {
      out << ',';
      if (v) out << format_double(*v);
    }
    out << '\n';
  }
}

void write_json(const ExperimentResult& result, std::ostream& out) {
  json trials = json::array();
  for (const auto& rec : result.trials) {
    json values = json::object();
    for (std::size_t c = 0; c < result.columns.size(); ++c) {
      values[result.columns[c]] = rec.values[c] ? json(*rec.values[c]) : json(nullptr);
    }
    trials.push_back({{"index", rec.index},
                      {"seed", rec.seed},
                      {"status", to_string(rec.status)},
                      {"values", std::move(values)}});
  }
  json aggregates = json::object();
  for (const auto& [name, report] : result.aggregates) aggregates[name] = report_json(report);
  json doc{{"config", config_json(result.config)},
           {"trials", std::move(trials)},
           {"aggregates", std::move(aggregates)},
           {"scalars", result.scalars},
           {"timing", {{"wall_seconds", result.wall_seconds}}},
           {"version", result.version}};
  out << doc.dump(2) << '\n';
}

void emit(const ExperimentResult& result, Format format, const std::string& path) {
  const auto write = [&](std::ostream& os) {
    if (format == Format::kCsv) write_csv(result, os);
    else write_json(result, os);
  };
  if (path.empty() || path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  write(file);
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

ExperimentConfig config_from_json_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("invalid JSON: ") + e.what());
  }
  const json& j = doc.contains("config") ? doc.at("config") : doc;
  ExperimentConfig c;
  try {
    c.kind = parse_kind(j.at("experiment").get<std::string>());
    c.n = j.at("n").get<Index>();
    c.trials = j.at("trials").get<Index>();
    c.dist = parse_distribution(j.at("dist").get<std::string>());
    c.replace_dist = parse_distribution(j.at("replace_dist").get<std::string>());
    c.master_seed = j.at("seed").get<std::uint64_t>();
    c.a = j.at("a").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.singular_exponent = j.at("L").get<double>();
    c.threads = j.at("threads").get<int>();
    c.format = parse_format(j.at("format").get<std::string>());
    c.out = j.at("out").get<std::string>();
    if (!j.at("alpha").is_null()) c.alpha = j.at("alpha").get<double>();
    if (!j.at("s1").is_null()) c.s1 = j.at("s1").get<Index>();
    if (!j.at("p").is_null()) c.p = j.at("p").get<Index>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("incomplete config echo: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  return c;
}

}  // namespace logdet::experiment
