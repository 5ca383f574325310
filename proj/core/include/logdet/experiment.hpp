#pragma once

#include "logdet/ensemble.hpp"
#include "logdet/matrix.hpp"
#include "logdet/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace logdet::experiment {

/// Bad configuration (unknown key, out-of-range value, missing file).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Kind { kLogLaw, kGaussianExact, kDecompose, kResolvent, kReplace, kPerturb, kTail };
enum class Format { kCsv, kJson };

std::string to_string(Kind kind);
Kind parse_kind(const std::string& name);
std::string to_string(Format format);
Format parse_format(const std::string& name);

struct ExperimentConfig {
  Kind kind = Kind::kLogLaw;
  Index n = 128;
  Index trials = 2000;
  EntryDistribution dist = StandardGaussian{};
  EntryDistribution replace_dist = StandardGaussian{};  // replace
  std::uint64_t master_seed = 1;
  double a = 1.0;                 // s1 = floor(log(n)^(3a))
  std::optional<double> alpha;    // resolvent; default n^(-1/6)
  double epsilon = 0x1p-40;       // perturb
  std::optional<Index> s1;        // replace, tail, decompose; default from a
  std::optional<Index> p;         // resolvent prefix rows; default round(0.9 n)
  double singular_exponent = 2.0; // perturb: flag draws with s_n(A) <= n^(-L)
  int threads = 1;
  std::string out;                // empty or "-" means stdout
  Format format = Format::kJson;

  Index resolved_s1() const;
  double resolved_alpha() const;
  Index resolved_p() const;
};

/// Defaults, with `threads` taken from LOGDET_THREADS when set.
ExperimentConfig default_config();

/// Sets one field from its flat key (n, trials, dist, replace_dist, seed, a,
/// alpha, epsilon, s1, p, L, threads, out, format, experiment).
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Applies every `key = value` line of a config file. '#' starts a comment.
void load_config_file(ExperimentConfig& config, const std::string& path);

/// Throws UsageError for out-of-range fields.
void validate(const ExperimentConfig& config);

/// Per-trial seed: a pure function of (master_seed, trial index).
std::uint64_t trial_seed(std::uint64_t master_seed, Index trial);

enum class TrialStatus { kOk, kSingular, kDegenerate, kRemainderUndefined, kNearSingular };
std::string to_string(TrialStatus status);

struct TrialRecord {
  Index index = 0;
  std::uint64_t seed = 0;
  TrialStatus status = TrialStatus::kOk;
  std::vector<std::optional<double>> values;  // one per result column
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::string> columns;
  std::vector<TrialRecord> trials;  // sorted by index
  std::map<std::string, StatReport> aggregates;  // per column, over present values
  std::map<std::string, double> scalars;
  double wall_seconds = 0.0;
  std::string version;

  /// Present values of one column in trial order.
  std::vector<double> column(const std::string& name) const;
  Index count(TrialStatus status) const;
};

ExperimentResult run(const ExperimentConfig& config);

ExperimentResult run_loglaw(const ExperimentConfig& config);
ExperimentResult run_gaussian_exact(const ExperimentConfig& config);
ExperimentResult run_decompose(const ExperimentConfig& config);
ExperimentResult run_resolvent(const ExperimentConfig& config);
ExperimentResult run_replace(const ExperimentConfig& config);
ExperimentResult run_perturb(const ExperimentConfig& config);
ExperimentResult run_tail(const ExperimentConfig& config);

/// Fraction of excluded (singular/degenerate) trials above which a run fails.
inline constexpr double kMaxSingularFraction = 0.01;

void write_csv(const ExperimentResult& result, std::ostream& out);
void write_json(const ExperimentResult& result, std::ostream& out);

/// Writes to `path` ("" or "-" for stdout). Throws IoError with the path on failure.
void emit(const ExperimentResult& result, Format format, const std::string& path);

/// Inverse of the config echo in write_json.
ExperimentConfig config_from_json_text(const std::string& json_text);

}  // namespace logdet::experiment
