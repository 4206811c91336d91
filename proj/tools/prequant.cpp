// Command-line front end for the scenario registry.
//
//   prequant run <scenario> [--config FILE] [--out DIR] [--seed N]
//                            [--set section.key=value ...]
//   prequant list
//   prequant verify-all [--out DIR] [--seed N]
//
// Output directory resolution: --out beats run.out_dir from the config file,
// which beats the PREQUANT_OUT environment variable, which beats "out".
//
// Exit codes: 0 all checks pass, 1 at least one check failed,
// 2 configuration error (unknown scenario, bad config/flags, unwritable
// output), 3 internal numerical failure (flow escape, singularity, ...).
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "prequant/prequant.hpp"

namespace {

void print_report(const prequant::Report& rep) {
  std::printf("=== %-20s %s  (%.0f ms)\n", rep.scenario.c_str(), rep.pass() ? "PASS" : "FAIL",
              rep.duration_ms);
  for (const auto& c : rep.checks)
    std::printf("    %-42s %11.4e vs %11.4e  %-4s %s\n", c.name.c_str(), c.measured, c.tolerance,
                c.pass ? "ok" : "FAIL", c.note.c_str());
}

std::string default_out_root() {
  if (const char* env = std::getenv("PREQUANT_OUT")) return env;
  return "out";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prequantum geometry scenario runner"};
  app.require_subcommand(1);

  std::string scenario, config_file, out_dir, va_out;
  std::uint64_t seed = 0;
  std::vector<std::string> overrides;

  CLI::App* run = app.add_subcommand("run", "run one scenario and write its report");
  run->add_option("scenario", scenario, "registered scenario name")->required();
  run->add_option("--config", config_file, "flat section.key = value config file");
  run->add_option("--out", out_dir, "output directory (beats config and PREQUANT_OUT)");
  run->add_option("--seed", seed, "seed for randomized sweeps");
  run->add_option("--set", overrides, "override one config entry, e.g. params.epsilon=0.1");

  CLI::App* list = app.add_subcommand("list", "print the registered scenario names");

  CLI::App* verify = app.add_subcommand("verify-all", "run every scenario with defaults");
  verify->add_option("--out", va_out, "output root, one subdirectory per scenario");
  std::uint64_t va_seed = 1;
  verify->add_option("--seed", va_seed, "seed for randomized sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // --help exits clean, anything else is a config error
  }

  try {
    if (list->parsed()) {
      for (const auto& name : prequant::scenario_names()) std::printf("%s\n", name.c_str());
      return 0;
    }

    if (run->parsed()) {
      prequant::ScenarioConfig cfg;
      if (!config_file.empty()) cfg = prequant::parse_config_file(config_file);
      cfg.scenario = scenario;
      if (run->count("--seed")) cfg.seed = seed;
      if (!out_dir.empty())
        cfg.out_dir = out_dir;
      else if (cfg.out_dir == "out")
        cfg.out_dir = default_out_root();
      for (const auto& kv : overrides) prequant::apply_override(cfg, kv);

      const prequant::Report rep = prequant::run_scenario(cfg);
      print_report(rep);
      std::printf("report: %s/%s.report.json\n", cfg.out_dir.c_str(), rep.scenario.c_str());
      return rep.pass() ? 0 : 1;
    }

    // verify-all
    const std::string root = va_out.empty() ? default_out_root() : va_out;
    const auto reports = prequant::verify_all(root, va_seed);
    bool all = true;
    for (const auto& rep : reports) {
      print_report(rep);
      all = all && rep.pass();
    }
    std::printf("%s (%zu scenarios, reports under %s/)\n", all ? "PASS" : "FAIL", reports.size(),
                root.c_str());
    return all ? 0 : 1;
  } catch (const prequant::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const prequant::NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal failure: %s\n", e.what());
    return 3;
  }
}
