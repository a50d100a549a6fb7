#include "orcadrl/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "orcadrl/checkpoint.hpp"
#include "orcadrl/metrics.hpp"
#include "orcadrl/oracles.hpp"
#include "orcadrl/svg.hpp"
#include "orcadrl/trainer.hpp"

namespace orcadrl {

namespace {

namespace fs = std::filesystem;

std::string canonical_config(const RunConfig& c) {
  std::ostringstream os;
  os << "command=" << c.command << ";scenario=" << c.scenario
     << ";scenario_path=" << c.scenario_path << ";mode=" << c.mode
     << ";variant=" << c.variant << ";seed=" << c.seed
     << ";episodes=" << c.episodes << ";workers=" << c.workers
     << ";checkpoint=" << c.checkpoint << ";suite=" << c.suite
     << ";instances=" << c.instances;
  for (const auto& [k, v] : c.overrides) os << ";" << k << "=" << v;
  return os.str();
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("not a number: " + s);
  return v;
}

/// Applies --set overrides onto the world/reward and training configs.
/// Unknown keys are a config error.
void apply_overrides(const std::map<std::string, std::string>& kv,
                     WorldConfig* wc, TrainConfig* tc) {
  for (const auto& [key, val] : kv) {
    const double d = to_double(val);
    if (key == "rewards.b_mf") wc->rewards.b_mf = d;
    else if (key == "rewards.c_dir") wc->rewards.c_dir = d;
    else if (key == "rewards.d_col_s") wc->rewards.d_col_s = d;
    else if (key == "rewards.e_col_d") wc->rewards.e_col_d = d;
    else if (key == "rewards.g_tim") wc->rewards.g_tim = d;
    else if (key == "rewards.m_goal") wc->rewards.m_goal = d;
    else if (key == "rewards.n_norm") wc->rewards.n_norm = d;
    else if (key == "rewards.q_goal") wc->rewards.q_goal = d;
    else if (key == "world.tau") wc->tau = d;
    else if (key == "world.tau_obst") wc->tau_obst = d;
    else if (key == "world.neighbor_range") wc->neighbor_range = d;
    else if (key == "train.gamma") tc->gamma = d;
    else if (key == "train.gae_lambda") tc->gae_lambda = d;
    else if (key == "train.clip") tc->clip = d;
    else if (key == "train.lr") tc->lr = d;
    else if (key == "train.alpha") tc->alpha = d;
    else if (key == "train.beta") tc->beta = d;
    else if (key == "train.delta") tc->delta = d;
    else if (key == "train.horizon") tc->horizon = int(d);
    else if (key == "train.epochs") tc->epochs = int(d);
    else if (key == "train.minibatch") tc->minibatch = int(d);
    else throw std::invalid_argument("unknown --set key: " + key);
  }
}

Scenario load_scenario(const RunConfig& c) {
  if (!c.scenario_path.empty()) {
    std::ifstream f(c.scenario_path);
    if (!f) throw std::invalid_argument("cannot read " + c.scenario_path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return scenario_from_json(ss.str());
  }
  return build_scenario(c.scenario);
}

fs::path output_dir(const RunConfig& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("ORCADRL_OUT")) return env;
  return "out";
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << content;
}

int cmd_train(const RunConfig& c, const fs::path& dir,
              const std::string& tag) {
  WorldConfig wc;
  TrainConfig tc;
  apply_overrides(c.overrides, &wc, &tc);
  tc.variant = c.variant;
  tc.seed = c.seed;
  tc.episodes = c.episodes;
  const Scenario sc = load_scenario(c);

  const TrainResult res = train(sc, wc, tc);
  write_file(dir / ("train-" + tag + ".ckpt"),
             checkpoint_to_text(res.bundle));
  write_file(dir / ("train-" + tag + "-curve.csv"), res.curve_csv());
  write_file(dir / ("train-" + tag + "-curves.svg"), curves_svg(res.curve));
  return res.diverged ? kStatusDiverged : kStatusOk;
}

int cmd_eval(const RunConfig& c, const fs::path& dir, const std::string& tag,
             std::string* message) {
  WorldConfig wc;
  TrainConfig tc;
  apply_overrides(c.overrides, &wc, &tc);
  wc.mode = mode_from_name(c.mode);
  const Scenario sc = load_scenario(c);

  PolicyBundle bundle;
  BundleDriver driver(&bundle, false);
  PolicyDriver* policy = nullptr;
  if (wc.mode != ControlMode::kPureOrca) {
    if (c.checkpoint.empty()) {
      if (message) *message = "mode " + c.mode + " requires --checkpoint";
      return kStatusConfig;
    }
    bundle = load_checkpoint(c.checkpoint);
    policy = &driver;
  }

  const EvalResult res =
      evaluate(sc, wc, c.episodes, c.seed, policy, c.workers);
  write_file(dir / ("eval-" + tag + ".csv"), res.report.to_csv());
  write_file(dir / ("eval-" + tag + ".txt"), res.report.to_text());
  return kStatusOk;
}

int cmd_run(const RunConfig& c, const fs::path& dir, const std::string& tag,
            std::string* message) {
  WorldConfig wc;
  TrainConfig tc;
  apply_overrides(c.overrides, &wc, &tc);
  wc.mode = mode_from_name(c.mode);
  const Scenario sc = load_scenario(c);

  PolicyBundle bundle;
  BundleDriver driver(&bundle, false);
  PolicyDriver* policy = nullptr;
  if (wc.mode != ControlMode::kPureOrca) {
    if (c.checkpoint.empty()) {
      if (message) *message = "mode " + c.mode + " requires --checkpoint";
      return kStatusConfig;
    }
    bundle = load_checkpoint(c.checkpoint);
    policy = &driver;
  }

  const EpisodeResult ep = run_episode(sc, wc, c.seed, policy);
  write_file(dir / ("run-" + tag + ".csv"), ep.to_csv());
  write_file(dir / ("run-" + tag + ".svg"), trajectory_svg(sc, ep));
  return kStatusOk;
}

int cmd_oracle(const RunConfig& c, const fs::path& dir,
               const std::string& tag, std::string* message) {
  oracles::SuiteReport rep;
  if (c.suite == "lp2" || c.suite == "lp") {
    rep = oracles::run_lp_suite(c.instances, c.seed);
  } else if (c.suite == "vo") {
    rep = oracles::run_vo_suite(c.instances, c.seed);
  } else if (c.suite == "grad") {
    rep = oracles::run_grad_suite(c.instances, c.seed);
  } else {
    if (message) *message = "unknown oracle suite: " + c.suite;
    return kStatusConfig;
  }
  std::ostringstream os;
  os << "suite " << c.suite << "\ninstances " << rep.instances
     << "\nfailures " << rep.failures << "\nworst_deviation "
     << rep.worst_deviation << "\nresult "
     << (rep.passed() ? "pass" : "fail") << "\n"
     << rep.detail << "\n";
  write_file(dir / ("oracle-" + tag + ".txt"), os.str());
  if (message) *message = rep.detail;
  return rep.passed() ? kStatusOk : kStatusOracle;
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
  // FNV-1a, 64-bit.
  std::uint64_t h = 1469598103934665603ull;
  for (const char ch : canonical_config(cfg)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf, 8);  // 8 hex chars are plenty for artifact names
}

int run_command(const RunConfig& cfg, std::string* message) {
  try {
    const fs::path dir = output_dir(cfg);
    fs::create_directories(dir);
    const std::string tag = config_hash(cfg);
    if (cfg.command == "train") return cmd_train(cfg, dir, tag);
    if (cfg.command == "eval") return cmd_eval(cfg, dir, tag, message);
    if (cfg.command == "run") return cmd_run(cfg, dir, tag, message);
    if (cfg.command == "oracle") return cmd_oracle(cfg, dir, tag, message);
    if (message) *message = "unknown command: " + cfg.command;
    return kStatusConfig;
  } catch (const std::invalid_argument& e) {
    if (message) *message = e.what();
    return kStatusConfig;
  } catch (const std::exception& e) {
    if (message) *message = e.what();
    return kStatusError;
  }
}

}  // namespace orcadrl
