// Command-line front end. Talks to the library only through saff.h.
#include <cstdint>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "saff/saff.h"

namespace {

struct ConfigDeleter {
  void operator()(saff_config* c) const { saff_config_free(c); }
};
struct TuplesDeleter {
  void operator()(saff_tuples* t) const { saff_tuples_free(t); }
};
struct ResponsesDeleter {
  void operator()(saff_responses* r) const { saff_responses_free(r); }
};

using ConfigPtr = std::unique_ptr<saff_config, ConfigDeleter>;
using TuplesPtr = std::unique_ptr<saff_tuples, TuplesDeleter>;
using ResponsesPtr = std::unique_ptr<saff_responses, ResponsesDeleter>;

// Thrown to unwind with a library status; main turns it into the exit code.
struct Failure {
  saff_status status;
};

void check(saff_status status) {
  if (status != SAFF_OK) throw Failure{status};
}

struct Options {
  std::string tuples;
  std::string responses;
  std::string attribute;
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::size_t instances = 100;
  double tolerance = 1e-5;
};

ConfigPtr load_config(const Options& opt) {
  saff_config* raw = nullptr;
  check(opt.config.empty() ? saff_config_create(&raw) : saff_config_load(opt.config.c_str(), &raw));
  ConfigPtr config(raw);
  if (opt.seed) check(saff_config_set_seed(config.get(), *opt.seed));
  if (!opt.attribute.empty()) check(saff_config_set_attribute(config.get(), opt.attribute.c_str()));
  return config;
}

TuplesPtr load_tuples(const Options& opt) {
  saff_tuples* raw = nullptr;
  check(saff_tuples_load(opt.tuples.c_str(), &raw));
  return TuplesPtr(raw);
}

void print_warning(const char* message, void*) { std::fprintf(stderr, "saff: warning: %s\n", message); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn social preferences over group-fairness notions from Likert feedback"};
  app.set_version_flag("--version", std::string(saff_version()));
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", opt.config, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", opt.seed, "Override the configured seed");
  };

  auto* audit = app.add_subcommand("audit", "Fairness profiles of the tuples per attribute");
  audit->add_option("--tuples", opt.tuples, "Tuple CSV")->required();
  audit->add_option("--attribute", opt.attribute, "age, gender, race or all");
  add_common(audit);

  auto* learn = app.add_subcommand("learn", "Learn the social preference weight");
  learn->add_option("--tuples", opt.tuples, "Tuple CSV")->required();
  learn->add_option("--responses", opt.responses, "Response CSV")->required();
  learn->add_option("--attribute", opt.attribute, "age, gender, race or all");
  add_common(learn);

  auto* simulate = app.add_subcommand("simulate", "Synthetic data and convergence curves");
  simulate->add_option("--attribute", opt.attribute, "age, gender, race or all");
  add_common(simulate);

  auto* gradcheck = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradient");
  gradcheck->add_option("--instances", opt.instances, "Random instances")->capture_default_str();
  gradcheck->add_option("--tolerance", opt.tolerance, "Maximum relative error")
      ->capture_default_str();
  gradcheck->add_option("--seed", opt.seed, "Random seed");

  CLI11_PARSE(app, argc, argv);
  saff_set_warning_handler(print_warning, nullptr);

  try {
    if (audit->parsed()) {
      auto config = load_config(opt);
      auto tuples = load_tuples(opt);
      check(saff_run_audit(tuples.get(), config.get(), opt.out.c_str()));
      std::printf("audited %zu tuples -> %s\n", saff_tuples_count(tuples.get()), opt.out.c_str());
    } else if (learn->parsed()) {
      auto config = load_config(opt);
      auto tuples = load_tuples(opt);
      saff_responses* raw = nullptr;
      check(saff_responses_load(opt.responses.c_str(), tuples.get(), &raw));
      ResponsesPtr responses(raw);
      check(saff_run_learn(tuples.get(), responses.get(), nullptr, config.get(), opt.out.c_str()));
      std::printf("learned from %zu participants (%zu dropped) -> %s\n",
                  saff_responses_participants(responses.get()),
                  saff_responses_dropped(responses.get()), opt.out.c_str());
    } else if (simulate->parsed()) {
      auto config = load_config(opt);
      check(saff_run_simulate(config.get(), opt.out.c_str()));
      std::printf("simulation written -> %s\n", opt.out.c_str());
    } else if (gradcheck->parsed()) {
      double max_err = 0.0, mean_err = 0.0;
      check(saff_run_gradcheck(opt.instances, opt.seed.value_or(0), &max_err, &mean_err));
      std::printf("{\"instances\": %zu, \"max_relative_error\": %.6e, \"mean_relative_error\": %.6e}\n",
                  opt.instances, max_err, mean_err);
      if (!(max_err < opt.tolerance)) {
        std::fprintf(stderr, "saff: error[numeric]: max relative error %.3e exceeds %.3e\n",
                     max_err, opt.tolerance);
        return SAFF_ERR_NUMERIC;
      }
    }
  } catch (const Failure& f) {
    std::fprintf(stderr, "saff: error[%s]: %s\n", saff_status_name(f.status), saff_last_error());
    return static_cast<int>(f.status);
  }
  return 0;
}
