// Command-line front end: rydswap <gate|scan|noise|calibrate|tables|trajectory> [options]
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rydswap/report.hpp"

namespace {

struct Options {
  std::string config;
  std::string preset;
  std::vector<std::string> overrides;
  std::string out;
  long long seed = -1;
  int jobs = 0;
  bool dump_trajectory = false;
  std::string fixtures;
};

void add_common(CLI::App* sub, Options& o) {
  auto* cfg = sub->add_option("--config", o.config, "YAML scenario file")->check(CLI::ExistingFile);
  sub->add_option("--preset", o.preset, "bundled preset name")->excludes(cfg);
  sub->add_option("--set", o.overrides, "override, e.g. params.omega2_mhz=200 (repeatable)");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--seed", o.seed, "RNG seed")->check(CLI::NonNegativeNumber);
  sub->add_option("--jobs", o.jobs, "worker threads (default: logical cores)")->check(CLI::NonNegativeNumber);
  sub->add_flag("--dump-trajectory", o.dump_trajectory, "also write trajectory.csv (gate)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-level simulator of Rydberg SWAP and controlled-SWAP gates"};
  app.require_subcommand(0, 1);
  bool list = false;
  app.add_flag("--list-presets", list, "print bundled presets and exit");
  Options o;
  std::vector<CLI::App*> subs;
  for (const char* name : {"gate", "scan", "noise", "calibrate", "tables", "trajectory"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, o);
    subs.push_back(sub);
  }
  subs[0]->description("run one gate and write amplitude, phase and loss matrices");
  subs[1]->description("parameter or distance scan");
  subs[2]->description("Monte Carlo Doppler and intensity noise");
  subs[3]->description("calibrate the exchange time");
  subs[4]->description("reproduce the tables against bundled fixtures");
  subs[4]->add_option("--fixtures", o.fixtures, "fixture directory");
  subs[5]->description("population trajectory of one input");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const auto& p : rydswap::list_presets()) std::cout << p << "\n";
    return 0;
  }
  CLI::App* chosen = nullptr;
  for (CLI::App* s : subs) {
    if (s->parsed()) chosen = s;
  }
  if (chosen == nullptr) {
    std::cerr << app.help();
    return 2;
  }
  try {
    std::vector<std::string> overrides = o.overrides;
    overrides.push_back("scenario=" + chosen->get_name());
    if (o.seed >= 0) overrides.push_back("seed=" + std::to_string(o.seed));
    if (!o.fixtures.empty()) overrides.push_back("fixtures_dir=" + o.fixtures);
    rydswap::ScenarioConfig cfg;
    if (!o.config.empty()) {
      cfg = rydswap::load_config(o.config, overrides);
    } else if (!o.preset.empty()) {
      cfg = rydswap::load_config(rydswap::preset_path(o.preset), overrides);
    } else if (chosen->get_name() == "tables") {
      cfg = rydswap::parse_config("", "<tables>", overrides);
    } else {
      std::cerr << "error: --config or --preset is required\n";
      return 2;
    }
    rydswap::RunContext ctx;
    ctx.out_dir = o.out;
    ctx.jobs = o.jobs;
    ctx.dump_trajectory = o.dump_trajectory;
    const rydswap::ScenarioOutcome res = rydswap::run_scenario(cfg, ctx);
    for (const auto& [k, v] : res.summary) std::cout << k << ": " << v << "\n";
    for (const auto& f : res.files) std::cout << "wrote " << f << "\n";
    return res.passed ? 0 : 1;
  } catch (const rydswap::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
