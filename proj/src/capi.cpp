#include "orcadrl.h"

#include <charconv>
#include <new>
#include <string>

#include "orcadrl/commands.hpp"

struct orcadrl_config {
  orcadrl::RunConfig cfg;
};

namespace {

thread_local std::string t_last_message;

bool parse_int(const std::string& s, long long* out) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, *out);
  return res.ec == std::errc{} && res.ptr == end;
}

}  // namespace

extern "C" {

const char* orcadrl_version(void) { return "1.0.0"; }

orcadrl_config* orcadrl_config_create(void) {
  return new (std::nothrow) orcadrl_config{};
}

void orcadrl_config_destroy(orcadrl_config* cfg) { delete cfg; }

orcadrl_status orcadrl_config_set(orcadrl_config* cfg, const char* key,
                                  const char* value) {
  t_last_message.clear();
  if (cfg == nullptr || key == nullptr || value == nullptr) {
    t_last_message = "null argument";
    return ORCADRL_BAD_CONFIG;
  }
  const std::string k = key;
  const std::string v = value;
  orcadrl::RunConfig& c = cfg->cfg;
  long long n = 0;
  if (k == "scenario") {
    if (!parse_int(v, &n) || n < 1 || n > 4) {
      t_last_message = "scenario must be 1..4";
      return ORCADRL_BAD_CONFIG;
    }
    c.scenario = int(n);
  } else if (k == "scenario_path") {
    c.scenario_path = v;
  } else if (k == "mode") {
    if (v != "orca-drl" && v != "pure-drl" && v != "pure-orca") {
      t_last_message = "mode must be orca-drl, pure-drl, or pure-orca";
      return ORCADRL_BAD_CONFIG;
    }
    c.mode = v;
  } else if (k == "variant") {
    if (!parse_int(v, &n) || (n != 1 && n != 2)) {
      t_last_message = "variant must be 1 or 2";
      return ORCADRL_BAD_CONFIG;
    }
    c.variant = int(n);
  } else if (k == "seed") {
    if (!parse_int(v, &n) || n < 0) {
      t_last_message = "seed must be a nonnegative integer";
      return ORCADRL_BAD_CONFIG;
    }
    c.seed = std::uint64_t(n);
  } else if (k == "episodes") {
    if (!parse_int(v, &n) || n < 1) {
      t_last_message = "episodes must be >= 1";
      return ORCADRL_BAD_CONFIG;
    }
    c.episodes = int(n);
  } else if (k == "workers") {
    if (!parse_int(v, &n) || n < 1) {
      t_last_message = "workers must be >= 1";
      return ORCADRL_BAD_CONFIG;
    }
    c.workers = int(n);
  } else if (k == "checkpoint") {
    c.checkpoint = v;
  } else if (k == "out") {
    c.out = v;
  } else if (k == "suite") {
    c.suite = v;
  } else if (k == "instances") {
    if (!parse_int(v, &n) || n < 1) {
      t_last_message = "instances must be >= 1";
      return ORCADRL_BAD_CONFIG;
    }
    c.instances = int(n);
  } else if (k.find('.') != std::string::npos) {
    c.overrides[k] = v;  // validated when the command runs
  } else {
    t_last_message = "unknown config key: " + k;
    return ORCADRL_BAD_CONFIG;
  }
  return ORCADRL_OK;
}

orcadrl_status orcadrl_execute(const orcadrl_config* cfg,
                               const char* command) {
  t_last_message.clear();
  if (cfg == nullptr || command == nullptr) {
    t_last_message = "null argument";
    return ORCADRL_BAD_CONFIG;
  }
  orcadrl::RunConfig c = cfg->cfg;
  c.command = command;
  std::string msg;
  const int status = orcadrl::run_command(c, &msg);
  t_last_message = msg;
  return static_cast<orcadrl_status>(status);
}

const char* orcadrl_last_message(void) { return t_last_message.c_str(); }

}  // extern "C"
