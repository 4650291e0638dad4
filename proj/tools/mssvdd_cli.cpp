// Experiment driver over the shared-library C interface.
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mssvdd.h"

namespace {

int exit_code(msvd_status s) {
  switch (s) {
    case MSVD_OK: return 0;
    case MSVD_ERR_CONFIG: return 2;
    case MSVD_ERR_DATA: return 3;
    default: return 1;
  }
}

int finish(msvd_status s, const char* action) {
  if (s != MSVD_OK) std::fprintf(stderr, "mssvdd %s failed: %s\n", action, msvd_last_error());
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mssvdd - multimodal subspace one-class classification toolkit"};
  app.require_subcommand(1);

  std::string config_path, model_path, data_path, runs_dir;
  std::string format = "md";

  CLI::App* train = app.add_subcommand("train", "run the full experimental protocol from a config file");
  train->add_option("--config", config_path, "TOML configuration file")->required();

  CLI::App* grid = app.add_subcommand("grid", "run hyperparameter grid search only");
  grid->add_option("--config", config_path, "TOML configuration file")->required();

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a saved model against a data file");
  evaluate->add_option("--model", model_path, "model container (.msvd)")->required();
  evaluate->add_option("--data", data_path, "data file of the kind the model was trained on")->required();

  CLI::App* report = app.add_subcommand("report", "render tables from stored run results");
  report->add_option("--runs", runs_dir, "directory holding rows.csv files")->required();
  report->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));

  // bad invocations count as configuration errors (exit 2); --help stays 0
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (train->parsed()) return finish(msvd_run_train(config_path.c_str()), "train");
  if (grid->parsed()) return finish(msvd_run_grid(config_path.c_str()), "grid");

  if (report->parsed()) {
    const msvd_status s = msvd_run_report(runs_dir.c_str(), format.c_str());
    if (s == MSVD_OK) std::printf("wrote %s/report.%s\n", runs_dir.c_str(), format.c_str());
    return finish(s, "report");
  }

  // evaluate
  msvd_model* model = nullptr;
  msvd_status s = msvd_model_load(model_path.c_str(), &model);
  if (s != MSVD_OK) return finish(s, "evaluate (load model)");

  double metrics[6];
  long counts[4];
  s = msvd_model_evaluate(model, data_path.c_str(), metrics, counts);
  if (s == MSVD_OK) {
    int decision = 0;
    msvd_model_decision(model, &decision);
    std::printf("items: %ld positive / %ld negative (DS%d)\n", counts[0] + counts[3],
                counts[1] + counts[2], decision);
    std::printf("counts: tp=%ld fp=%ld tn=%ld fn=%ld\n", counts[0], counts[1], counts[2], counts[3]);
    std::printf("accu=%.4f tpr=%.4f tnr=%.4f pre=%.4f f1=%.4f gmean=%.4f\n", metrics[0], metrics[1],
                metrics[2], metrics[3], metrics[4], metrics[5]);
  }
  msvd_model_free(model);
  return finish(s, "evaluate");
}
