// logdet: Monte Carlo campaigns for log|det| of random matrices.

#include "logdet/errors.hpp"
#include "logdet/experiment.hpp"
#include "logdet/version.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace ex = logdet::experiment;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitIo = 4;

struct Flag {
  const char* key;
  const char* name;
  const char* help;
};

constexpr Flag kFlags[] = {
    {"n", "--n", "matrix size"},
    {"trials", "--trials", "number of Monte Carlo trials"},
    {"dist", "--dist", "entry law: gaussian | rademacher | uniform | twopoint:<p> | exponential"},
    {"replace_dist", "--replace-dist", "law of the replaced rows (replace)"},
    {"seed", "--seed", "master seed"},
    {"a", "--a", "cut exponent: s1 = floor(log(n)^(3a))"},
    {"alpha", "--alpha", "resolvent shift (default n^(-1/6))"},
    {"epsilon", "--epsilon", "perturbation size in [0, 1) (perturb)"},
    {"s1", "--s1", "explicit tail length, overrides --a"},
    {"p", "--p", "rows in the resolvent prefix (default round(0.9 n))"},
    {"L", "--L", "perturb: flag draws with s_n(A) <= n^(-L)"},
    {"threads", "--threads", "worker threads (default LOGDET_THREADS or all cores)"},
    {"out", "--out", "output path, '-' for stdout"},
    {"format", "--format", "csv | json"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo experiments on the log-determinant of random matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(logdet::kVersion));

  struct Bound {
    CLI::App* sub;
    std::string config_path;
    std::vector<std::pair<std::string, CLI::Option*>> options;
    std::vector<std::string> values;
  };
  const std::vector<std::pair<ex::Kind, const char*>> commands = {
      {ex::Kind::kLogLaw, "normalized log|det| samples and their distance to N(0,1)"},
      {ex::Kind::kGaussianExact, "chi-square product model for Gaussian matrices"},
      {ex::Kind::kDecompose, "martingale terms X, X^2, R and the tail per draw"},
      {ex::Kind::kResolvent, "normalized resolvent trace against its closed form"},
      {ex::Kind::kReplace, "swap the last s1 rows to another law and compare"},
      {ex::Kind::kPerturb, "smoothing perturbation: Weyl check and log|det| shift"},
      {ex::Kind::kTail, "sum over the last s1 chi-square factors"},
  };
  std::vector<Bound> bound(commands.size());
  for (std::size_t c = 0; c < commands.size(); ++c) {
    Bound& b = bound[c];
    b.sub = app.add_subcommand(ex::to_string(commands[c].first), commands[c].second);
    b.sub->add_option("--config", b.config_path, "flat key = value file; flags override it")
        ->check(CLI::ExistingFile);
    b.values.resize(std::size(kFlags));
    for (std::size_t f = 0; f < std::size(kFlags); ++f) {
      b.options.emplace_back(kFlags[f].key,
                             b.sub->add_option(kFlags[f].name, b.values[f], kFlags[f].help));
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    for (std::size_t c = 0; c < commands.size(); ++c) {
      Bound& b = bound[c];
      if (!b.sub->parsed()) continue;
      ex::ExperimentConfig config = ex::default_config();
      config.kind = commands[c].first;
      if (!b.config_path.empty()) {
        ex::load_config_file(config, b.config_path);
        config.kind = commands[c].first;
      }
      for (std::size_t f = 0; f < b.options.size(); ++f) {
        if (b.options[f].second->count() > 0) ex::apply_setting(config, b.options[f].first, b.values[f]);
      }
      ex::validate(config);
      const ex::ExperimentResult result = ex::run(config);
      ex::emit(result, config.format, config.out);
      if (!config.out.empty() && config.out != "-") {
        std::cerr << ex::to_string(config.kind) << ": " << result.trials.size() << " trials in "
                  << result.wall_seconds << " s -> " << config.out << '\n';
      }
    }
  } catch (const ex::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const logdet::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const logdet::DegenerateEnsemble& e) {
    std::cerr << "degenerate ensemble: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const logdet::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
