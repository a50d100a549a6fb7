#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "orcadrl.h"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(bool(f));
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path find_one(const fs::path& dir, const std::string& prefix,
                  const std::string& ext) {
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind(prefix, 0) == 0 && e.path().extension() == ext) {
      return e.path();
    }
  }
  FAIL("no artifact ", prefix, "*", ext, " in ", dir.string());
  return {};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config handle validates keys and values") {
  orcadrl_config* cfg = orcadrl_config_create();
  REQUIRE(cfg != nullptr);
  CHECK(orcadrl_config_set(cfg, "scenario", "3") == ORCADRL_OK);
  CHECK(orcadrl_config_set(cfg, "scenario", "9") == ORCADRL_BAD_CONFIG);
  CHECK(orcadrl_config_set(cfg, "mode", "pure-orca") == ORCADRL_OK);
  CHECK(orcadrl_config_set(cfg, "mode", "warp-drive") == ORCADRL_BAD_CONFIG);
  CHECK(std::string(orcadrl_last_message()).find("mode") !=
        std::string::npos);
  CHECK(orcadrl_config_set(cfg, "episodes", "0") == ORCADRL_BAD_CONFIG);
  CHECK(orcadrl_config_set(cfg, "episodes", "12") == ORCADRL_OK);
  CHECK(orcadrl_config_set(cfg, "bogus", "1") == ORCADRL_BAD_CONFIG);
  CHECK(orcadrl_config_set(cfg, "rewards.m_goal", "40") == ORCADRL_OK);
  CHECK(orcadrl_config_set(nullptr, "seed", "1") == ORCADRL_BAD_CONFIG);
  orcadrl_config_destroy(cfg);
}

TEST_CASE("execute reports config errors") {
  orcadrl_config* cfg = orcadrl_config_create();
  REQUIRE(cfg != nullptr);
  CHECK(orcadrl_execute(cfg, "flounder") == ORCADRL_BAD_CONFIG);
  // Learned mode without a checkpoint is a startup fault.
  TempDir tmp("orcadrl-capi-cfg");
  orcadrl_config_set(cfg, "out", tmp.path.c_str());
  orcadrl_config_set(cfg, "mode", "orca-drl");
  CHECK(orcadrl_execute(cfg, "eval") == ORCADRL_BAD_CONFIG);
  CHECK(std::string(orcadrl_last_message()).find("checkpoint") !=
        std::string::npos);
  // Bad override keys surface at execution time.
  orcadrl_config_set(cfg, "mode", "pure-orca");
  orcadrl_config_set(cfg, "nope.nope", "1");
  CHECK(orcadrl_execute(cfg, "run") == ORCADRL_BAD_CONFIG);
  orcadrl_config_destroy(cfg);
}

TEST_CASE("run command emits a deterministic episode log and SVG") {
  TempDir tmp_a("orcadrl-capi-runa");
  TempDir tmp_b("orcadrl-capi-runb");
  for (const fs::path& dir : {tmp_a.path, tmp_b.path}) {
    orcadrl_config* cfg = orcadrl_config_create();
    REQUIRE(cfg != nullptr);
    CHECK(orcadrl_config_set(cfg, "scenario", "2") == ORCADRL_OK);
    CHECK(orcadrl_config_set(cfg, "mode", "pure-orca") == ORCADRL_OK);
    CHECK(orcadrl_config_set(cfg, "seed", "17") == ORCADRL_OK);
    CHECK(orcadrl_config_set(cfg, "out", dir.c_str()) == ORCADRL_OK);
    CHECK(orcadrl_execute(cfg, "run") == ORCADRL_OK);
    orcadrl_config_destroy(cfg);
  }
  const std::string csv_a = slurp(find_one(tmp_a.path, "run-", ".csv"));
  const std::string csv_b = slurp(find_one(tmp_b.path, "run-", ".csv"));
  CHECK(csv_a == csv_b);
  CHECK(csv_a.rfind("tick,agent,px,py,psi,v,w,case,r_ex,r_c,outcome\n", 0) ==
        0);
  const std::string svg = slurp(find_one(tmp_a.path, "run-", ".svg"));
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("oracle command writes a pass report and returns OK") {
  TempDir tmp("orcadrl-capi-oracle");
  orcadrl_config* cfg = orcadrl_config_create();
  REQUIRE(cfg != nullptr);
  CHECK(orcadrl_config_set(cfg, "suite", "vo") == ORCADRL_OK);
  CHECK(orcadrl_config_set(cfg, "instances", "200") == ORCADRL_OK);
  CHECK(orcadrl_config_set(cfg, "out", tmp.path.c_str()) == ORCADRL_OK);
  CHECK(orcadrl_execute(cfg, "oracle") == ORCADRL_OK);
  const std::string rep = slurp(find_one(tmp.path, "oracle-", ".txt"));
  CHECK(rep.find("result pass") != std::string::npos);
  orcadrl_config_destroy(cfg);
}

TEST_CASE("version string") {
  CHECK(std::string(orcadrl_version()) == "1.0.0");
}
