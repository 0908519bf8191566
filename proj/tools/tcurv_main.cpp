#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tcurv/errors.hpp"
#include "tcurv/experiments.hpp"
#include "tcurv/io.hpp"

namespace {

struct Opts {
  std::string config;
  std::string out;
  uint64_t seed = 0;
  int instances = 0, subdiv = 0, rows = 0, cols = 0, samples = 0;
  int t_steps = 0, directions = 0, jobs = 0;
  double t_max = 0.0, tol_rel = 0.0;
};

void add_options(CLI::App* sub, Opts& o) {
  sub->add_option("--config", o.config,
                  "INI config file with a [global] section and per-experiment sections");
  sub->add_option("--seed", o.seed, "master seed; instance k draws an independent stream");
  sub->add_option("--out", o.out, "output root, results land in <out>/<experiment>/");
  sub->add_option("--jobs", o.jobs, "worker thread cap, 0 = all hardware threads")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--instances", o.instances, "seeded instance count")
      ->check(CLI::PositiveNumber);
  sub->add_option("--subdiv", o.subdiv, "icosphere refinement of seeded meshes")
      ->check(CLI::PositiveNumber);
  sub->add_option("--rows", o.rows, "grid patch rows")->check(CLI::PositiveNumber);
  sub->add_option("--cols", o.cols, "grid patch columns")->check(CLI::PositiveNumber);
  sub->add_option("--samples", o.samples, "curve sample count")->check(CLI::PositiveNumber);
  sub->add_option("--t-steps", o.t_steps, "steps of the normal flow")
      ->check(CLI::PositiveNumber);
  sub->add_option("--directions", o.directions, "normal-map sampling directions")
      ->check(CLI::PositiveNumber);
  sub->add_option("--t-max", o.t_max, "largest normal flow distance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tol-rel", o.tol_rel, "relative tolerance of fitted quantities")
      ->check(CLI::PositiveNumber);
}

void apply_overrides(const CLI::App* sub, const Opts& o, tcurv::ExperimentConfig& cfg) {
  if (sub->count("--seed")) cfg.seed = o.seed;
  if (sub->count("--out")) cfg.out = o.out;
  if (sub->count("--jobs")) cfg.jobs = o.jobs;
  if (sub->count("--instances")) cfg.instances = o.instances;
  if (sub->count("--subdiv")) cfg.subdiv = o.subdiv;
  if (sub->count("--rows")) cfg.rows = o.rows;
  if (sub->count("--cols")) cfg.cols = o.cols;
  if (sub->count("--samples")) cfg.samples = o.samples;
  if (sub->count("--t-steps")) cfg.t_steps = o.t_steps;
  if (sub->count("--directions")) cfg.directions = o.directions;
  if (sub->count("--t-max")) cfg.t_max = o.t_max;
  if (sub->count("--tol-rel")) cfg.tol_rel = o.tol_rel;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical verification suite for the curvature of curves and surfaces "
               "in constant-curvature and product model spaces"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list", list, "print the experiment manifest and exit");

  std::vector<std::string> names = tcurv::experiment_names();
  names.push_back("all");
  std::map<std::string, Opts> opts;
  for (const std::string& name : names) {
    const std::string desc =
        name == "all" ? "every experiment in manifest order" : tcurv::experiment_summary(name);
    add_options(app.add_subcommand(name, desc), opts[name]);
  }

  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const std::string& name : tcurv::experiment_names())
      std::printf("%-20s %s\n", name.c_str(), tcurv::experiment_summary(name).c_str());
    return 0;
  }

  const auto subs = app.get_subcommands();
  if (subs.empty()) {
    std::cout << app.help();
    return 0;
  }

  const CLI::App* sub = subs.front();
  const std::string name = sub->get_name();
  const Opts& o = opts[name];
  try {
    std::map<std::string, std::map<std::string, std::string>> sections;
    if (!o.config.empty()) sections = tcurv::parse_config_text(tcurv::read_text_file(o.config));

    if (name == "all") {
      // Resolve each experiment against its own config section.
      int rc = 0;
      for (const std::string& exp : tcurv::experiment_names()) {
        tcurv::ExperimentConfig cfg = tcurv::config_from_sections(sections, exp);
        apply_overrides(sub, o, cfg);
        cfg.name = exp;
        rc = std::max(rc, tcurv::run_experiment(cfg));
      }
      return rc;
    }

    tcurv::ExperimentConfig cfg = tcurv::config_from_sections(sections, name);
    apply_overrides(sub, o, cfg);
    cfg.name = name;
    return tcurv::run_experiment(cfg);
  } catch (const tcurv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
