#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "horops/config.hpp"

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  std::string cmd = std::string(HOROPS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  REQUIRE(rc != -1);
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t line_count(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_tmp") / name) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("orbit command writes the advertised csv") {
  TempDir dir("orbit_cyclic");
  CHECK(run_cli("orbit --config cyclic --out " + dir.str()) == 0);
  std::string csv = slurp(dir.path / "orbit.csv");
  // header plus one row per element: identity and both powers to length 128
  CHECK(line_count(csv) == 1 + 257);
  CHECK(csv.rfind("word,word_length,kappa_1,kappa_2,kappa_3,theta_margin,phi_length\n",
                  0) == 0);
  std::string reg = slurp(dir.path / "regularity.json");
  CHECK(reg.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("orbit command reproduces byte for byte") {
  TempDir d1("det_1"), d2("det_2");
  CHECK(run_cli("orbit --config schottky_sl2 --out " + d1.str()) == 0);
  CHECK(run_cli("orbit --config schottky_sl2 --out " + d2.str()) == 0);
  std::string a = slurp(d1.path / "orbit.csv");
  CHECK(a == slurp(d2.path / "orbit.csv"));
  CHECK(slurp(d1.path / "regularity.json") == slurp(d2.path / "regularity.json"));
  // free group of rank two, all reduced words distinct
  CHECK(line_count(a) == 1 + 118097);
}

TEST_CASE("config errors exit with code two and write nothing") {
  TempDir dir("bad_config");
  fs::create_directories("cli_tmp");
  {
    std::ofstream bad("cli_tmp/broken.json");
    bad << "{ \"group\": [unterminated";
  }
  CHECK(run_cli("orbit --config cli_tmp/broken.json --out " + dir.str()) == 2);
  CHECK(!fs::exists(dir.path));
  CHECK(run_cli("orbit --config no_such_builtin --out " + dir.str()) == 2);
  CHECK(!fs::exists(dir.path));
  CHECK(run_cli("verify --config cyclic --suite bogus --out " + dir.str()) == 2);
  CHECK(!fs::exists(dir.path));
  fs::remove("cli_tmp/broken.json");
}

TEST_CASE("cap overflow exits with code three") {
  using namespace horops;
  TempDir dir("capped");
  fs::create_directories("cli_tmp");
  ExperimentConfig cfg = builtin_config("cyclic");
  cfg.ball.cap = 3;
  {
    std::ofstream out("cli_tmp/capped.json");
    out << config_to_json(cfg);
  }
  CHECK(run_cli("orbit --config cli_tmp/capped.json --out " + dir.str()) == 3);
  CHECK(!fs::exists(dir.path));
  fs::remove("cli_tmp/capped.json");
}

TEST_CASE("builtin and file configs produce identical output") {
  using namespace horops;
  TempDir d1("by_name"), d2("by_file");
  fs::create_directories("cli_tmp");
  {
    std::ofstream out("cli_tmp/cyclic_copy.json");
    out << config_to_json(builtin_config("cyclic"));
  }
  CHECK(run_cli("exponent --config cyclic --out " + d1.str()) == 0);
  CHECK(run_cli("exponent --config cli_tmp/cyclic_copy.json --out " + d2.str()) == 0);
  CHECK(slurp(d1.path / "exponent.json") == slurp(d2.path / "exponent.json"));
  fs::remove("cli_tmp/cyclic_copy.json");
}

TEST_CASE("verify suite reports land on disk with a passing verdict") {
  TempDir dir("verify_embed");
  CHECK(run_cli("verify --config cyclic --suite embedding --out " + dir.str()) == 0);
  std::string j = slurp(dir.path / "verify_embedding.json");
  CHECK(j.find("\"pass\": true") != std::string::npos);
}

TEST_CASE("missing arguments are rejected") {
  CHECK(run_cli("orbit") == 2);          // --config is required
  CHECK(run_cli("no-such-command") == 2);
}
