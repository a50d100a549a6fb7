#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace orcadrl {

/// Exit/status codes shared by the library API and the CLI.
enum StatusCode : int {
  kStatusOk = 0,
  kStatusError = 1,
  kStatusConfig = 2,
  kStatusOracle = 3,
  kStatusDiverged = 4,
};

struct RunConfig {
  std::string command;        ///< train | eval | run | oracle
  int scenario = 1;           ///< built-in id, ignored when scenario_path set
  std::string scenario_path;  ///< optional JSON scenario file
  std::string mode = "pure-orca";
  int variant = 2;            ///< training rollout variant
  std::uint64_t seed = 1;
  int episodes = 50;
  int workers = 1;
  std::string checkpoint;     ///< required for the learned modes
  std::string out;            ///< output dir; default $ORCADRL_OUT or ./out
  std::string suite = "lp2";  ///< oracle suite: lp2 | vo | grad
  int instances = 1000;
  std::map<std::string, std::string> overrides;  ///< --set key=value
};

/// FNV-1a hash of the canonical config serialization; output files carry it
/// as a content-addressed suffix.
std::string config_hash(const RunConfig& cfg);

/// Executes one command, writing all artifacts under the output directory.
/// Returns a StatusCode; on failure `message` (optional) holds the reason.
int run_command(const RunConfig& cfg, std::string* message = nullptr);

}  // namespace orcadrl
