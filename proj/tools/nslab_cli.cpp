// nslab command-line front end. Exit codes: 0 all verdicts pass, 1 verdict
// failure, 2 runtime or configuration error.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "nslab/nslab.h"

namespace {

int run_task(nslab_task task, const std::string& config, const std::string& output_dir, bool quiet) {
  nslab_experiment* exp = nullptr;
  if (nslab_experiment_load_file(config.c_str(), &exp) != NSLAB_OK) {
    std::fprintf(stderr, "error: %s\n", nslab_last_error());
    return 2;
  }
  if (!output_dir.empty() && nslab_experiment_set_output_dir(exp, output_dir.c_str()) != NSLAB_OK) {
    std::fprintf(stderr, "error: %s\n", nslab_last_error());
    nslab_experiment_free(exp);
    return 2;
  }
  nslab_report* rep = nullptr;
  const nslab_status st = nslab_experiment_run(exp, task, &rep);
  nslab_experiment_free(exp);
  if (st != NSLAB_OK) {
    std::fprintf(stderr, "error (%s): %s\n", nslab_status_string(st), nslab_last_error());
    return 2;
  }
  int passed = 0;
  nslab_report_passed(rep, &passed);
  if (!quiet) {
    std::printf("%s\n", nslab_report_summary(rep));
    for (int i = 0; i < nslab_report_file_count(rep); ++i) std::printf("wrote %s\n", nslab_report_file(rep, i));
  }
  std::printf("%s\n", passed ? "PASS" : "FAIL");
  nslab_report_free(rep);
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized compressible Navier-Stokes verification lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(nslab_version()));

  struct Sub {
    const char* name;
    const char* help;
    nslab_task task;
  };
  const Sub subs[] = {
      {"simulate", "Run the solver and the energy monitor", NSLAB_TASK_SIMULATE},
      {"verify", "Weak-strong run or dissipative-verdict suite (config verify_mode)", NSLAB_TASK_VERIFY},
      {"sweep", "Regularization sweep with remainder decay and a priori bounds", NSLAB_TASK_SWEEP},
      {"calibrate", "Estimate the embedding, Korn and Gronwall constants", NSLAB_TASK_CALIBRATE},
      {"mollify-test", "Mollifier convergence and Young inequality checks", NSLAB_TASK_MOLLIFY_TEST},
  };

  std::string config;
  std::string output_dir;
  bool quiet = false;
  nslab_task chosen = NSLAB_TASK_SIMULATE;
  for (const auto& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("config", config, "Experiment configuration (JSON)")->required();
    sub->add_option("-o,--output-dir", output_dir, "Override the configured output directory");
    sub->add_flag("-q,--quiet", quiet, "Print only the verdict line");
    const nslab_task task = s.task;
    sub->callback([&chosen, task] { chosen = task; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return run_task(chosen, config, output_dir, quiet);
}
