// Command-line front end. Links only the public C API.
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "orcadrl.h"

namespace {

struct ConfigDeleter {
  void operator()(orcadrl_config* c) const { orcadrl_config_destroy(c); }
};

int set_or_die(orcadrl_config* cfg, const char* key, const std::string& val) {
  const orcadrl_status st = orcadrl_config_set(cfg, key, val.c_str());
  if (st != ORCADRL_OK) {
    std::fprintf(stderr, "error: %s\n", orcadrl_last_message());
  }
  return st;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized multi-agent navigation toolkit"};
  app.require_subcommand(1);

  std::string mode = "pure-orca", checkpoint, out, scenario_path, suite = "lp2";
  int scenario = 1, variant = 2, episodes = 50, workers = 1,
      instances = 1000;
  std::uint64_t seed = 1;
  std::vector<std::string> sets;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario, "Built-in scenario id (1-4)");
    sub->add_option("--scenario-file", scenario_path, "Scenario JSON file");
    sub->add_option("--mode", mode, "orca-drl | pure-drl | pure-orca");
    sub->add_option("--variant", variant, "Training rollout variant (1|2)");
    sub->add_option("--seed", seed, "Random seed");
    sub->add_option("--episodes", episodes, "Episode count / budget");
    sub->add_option("--checkpoint", checkpoint, "Checkpoint path");
    sub->add_option("--out", out, "Output directory (default $ORCADRL_OUT)");
    sub->add_option("--workers", workers, "Parallel episode workers");
    sub->add_option("--set", sets, "Override key=value (rewards.*, train.*)");
  };

  CLI::App* c_train = app.add_subcommand("train", "Train a policy");
  CLI::App* c_eval = app.add_subcommand("eval", "Evaluate over episodes");
  CLI::App* c_run = app.add_subcommand("run", "Run one episode");
  CLI::App* c_oracle = app.add_subcommand("oracle", "Run a brute-force oracle suite");
  for (CLI::App* sub : {c_train, c_eval, c_run, c_oracle}) add_common(sub);
  c_oracle->add_option("--suite", suite, "lp2 | vo | grad");
  c_oracle->add_option("--instances", instances, "Suite instance count");

  CLI11_PARSE(app, argc, argv);

  std::unique_ptr<orcadrl_config, ConfigDeleter> cfg(orcadrl_config_create());
  if (!cfg) {
    std::fprintf(stderr, "error: out of memory\n");
    return ORCADRL_ERROR;
  }

  if (set_or_die(cfg.get(), "scenario", std::to_string(scenario)) ||
      set_or_die(cfg.get(), "mode", mode) ||
      set_or_die(cfg.get(), "variant", std::to_string(variant)) ||
      set_or_die(cfg.get(), "seed", std::to_string(seed)) ||
      set_or_die(cfg.get(), "episodes", std::to_string(episodes)) ||
      set_or_die(cfg.get(), "workers", std::to_string(workers)) ||
      set_or_die(cfg.get(), "suite", suite) ||
      set_or_die(cfg.get(), "instances", std::to_string(instances))) {
    return ORCADRL_BAD_CONFIG;
  }
  if (!scenario_path.empty() &&
      set_or_die(cfg.get(), "scenario_path", scenario_path)) {
    return ORCADRL_BAD_CONFIG;
  }
  if (!checkpoint.empty() &&
      set_or_die(cfg.get(), "checkpoint", checkpoint)) {
    return ORCADRL_BAD_CONFIG;
  }
  if (!out.empty() && set_or_die(cfg.get(), "out", out)) {
    return ORCADRL_BAD_CONFIG;
  }
  for (const std::string& s : sets) {
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got %s\n",
                   s.c_str());
      return ORCADRL_BAD_CONFIG;
    }
    const orcadrl_status st = orcadrl_config_set(
        cfg.get(), s.substr(0, eq).c_str(), s.substr(eq + 1).c_str());
    if (st != ORCADRL_OK) {
      std::fprintf(stderr, "error: %s\n", orcadrl_last_message());
      return st;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const orcadrl_status st = orcadrl_execute(cfg.get(), command.c_str());
  const char* msg = orcadrl_last_message();
  if (msg[0] != '\0') {
    std::fprintf(st == ORCADRL_OK ? stdout : stderr, "%s\n", msg);
  }
  return st;
}
