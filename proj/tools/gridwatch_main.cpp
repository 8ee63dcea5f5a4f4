// Command-line front end. Subcommands map one-to-one onto the pipeline stage
// functions; this file only handles flag parsing, config assembly, and exit
// codes.
//
// Config resolution order: built-in defaults, then --config files in the
// order given, then --set pairs in the order given, then per-key flags.
// Per-key flags exist for every registered key, so `--train.rounds 3` and
// `--set train.rounds=3` are equivalent.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridwatch/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 bad configuration, 3 violated precondition
// (missing/incompatible/existing artifacts), 4 numeric or domain failure,
// 1 anything else.
constexpr int kExitOk = 0;
constexpr int kExitOther = 1;
constexpr int kExitConfig = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumeric = 4;

struct StageArgs {
  std::vector<std::string> config_files;
  std::vector<std::string> sets;
  // Parallel to config_registry(); holds values from per-key flags.
  std::vector<std::string> key_values;
};

void add_config_flags(CLI::App* cmd, StageArgs& args) {
  cmd->add_option("--config", args.config_files, "config file (key value per line)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", args.sets, "override a single key, as key=value");
  const auto& reg = gridwatch::config_registry();
  args.key_values.assign(reg.size(), std::string());
  for (std::size_t i = 0; i < reg.size(); ++i)
    cmd->add_option("--" + std::string(reg[i].key), args.key_values[i], reg[i].help)
        ->group("Config keys");
}

gridwatch::RunConfig resolve_config(const StageArgs& args, const CLI::App* cmd) {
  gridwatch::RunConfig cfg = gridwatch::RunConfig::defaults();
  for (const std::string& file : args.config_files)
    cfg.apply_text(gridwatch::read_text_file(file), file);
  for (const std::string& kv : args.sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos)
      throw gridwatch::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  const auto& reg = gridwatch::config_registry();
  for (std::size_t i = 0; i < reg.size(); ++i)
    if (cmd->count("--" + std::string(reg[i].key)) > 0) cfg.set(reg[i].key, args.key_values[i]);
  return cfg;
}

void print_report(const gridwatch::MetricsReport& rep) {
  std::fputs(gridwatch::format_report_table(rep).c_str(), stdout);
}

int dispatch(const std::string& stage, const gridwatch::RunConfig& cfg) {
  using namespace gridwatch;
  if (stage == "generate") {
    GenerateOutput out = run_generate(cfg);
    std::printf("dataset written to %s\n", out.dir.c_str());
    std::printf("attack coverage on wireless timelines: %.4f\n", out.coverage);
    for (const std::string& w : out.warnings) std::printf("warning: %s\n", w.c_str());
  } else if (stage == "train") {
    TrainOutput out = run_train(cfg);
    std::printf("checkpoint written to %s\n", out.dir.c_str());
    std::printf("%d clients, best round %d, validation accuracy %.4f\n", out.n_clients,
                out.result.best_round, out.result.best_val_accuracy);
  } else if (stage == "evaluate") {
    EvaluateOutput out = run_evaluate(cfg);
    print_report(out.report);
    std::printf("report written to %s\n", out.dir.c_str());
  } else if (stage == "sweep") {
    SweepOutput out = run_sweep(cfg);
    std::printf("%zu grid points written to %s\n", out.rows.size(),
                (out.dir / "sweep.csv").c_str());
  } else if (stage == "ablate") {
    AblateOutput out = run_ablate(cfg);
    std::fputs(ablation_csv(out.rows).c_str(), stdout);
    std::printf("ablation artifacts under %s\n", out.dir.c_str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gridwatch: synthetic smart-grid telemetry, federated training, evaluation"};
  app.require_subcommand(1);

  StageArgs args[5];
  const char* stages[5] = {"generate", "train", "evaluate", "sweep", "ablate"};
  const char* blurbs[5] = {
      "simulate telemetry and write a dataset directory",
      "train a detector on a generated dataset",
      "score a checkpoint on one split of its dataset",
      "re-score cached predictions over the decision-rule grid",
      "retrain with each input family removed and tabulate the gap",
  };
  CLI::App* cmds[5];
  for (int i = 0; i < 5; ++i) {
    cmds[i] = app.add_subcommand(stages[i], blurbs[i]);
    add_config_flags(cmds[i], args[i]);
  }

  std::string report_path;
  CLI::App* report_cmd = app.add_subcommand("report", "render a stored metrics report");
  report_cmd->add_option("path", report_path, "report file or evaluate output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (report_cmd->parsed()) {
      std::fputs(gridwatch::run_report(report_path).c_str(), stdout);
      return kExitOk;
    }
    for (int i = 0; i < 5; ++i)
      if (cmds[i]->parsed()) return dispatch(stages[i], resolve_config(args[i], cmds[i]));
    return kExitConfig;
  } catch (const gridwatch::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const gridwatch::PreconditionError& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return kExitPrecondition;
  } catch (const gridwatch::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const gridwatch::ShapeError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const gridwatch::DomainError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitOther;
  }
}
