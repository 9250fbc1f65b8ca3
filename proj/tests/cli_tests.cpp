// Behavior tests of the command-line harness: exit codes, error payloads,
// config round trips, and determinism of result payloads.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "heiscut/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("HEISCUT_CLI");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  std::string cmd = cli_path() + " " + args + " > /dev/null 2> /dev/null";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("heiscut_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json load_result(const fs::path& dir) {
  return json::parse(heiscut::io::read_file((dir / "result.json").string()));
}

std::string strip_timestamp(const std::string& text) {
  std::istringstream is(text);
  std::ostringstream os;
  std::string line;
  while (std::getline(is, line))
    if (line.find("\"timestamp\"") == std::string::npos) os << line << "\n";
  return os.str();
}

}  // namespace

TEST_CASE("moving-char reports the isometry error") {
  auto dir = fresh_dir("mc");
  CHECK(run("moving-char --n 100 --out " + dir.string()) == 0);
  json r = load_result(dir);
  CHECK(r.at("results").at("max_error").get<double>() < 1e-12);
  CHECK(r.at("library_version").get<std::string>() == "0.1.0");
  CHECK(r.contains("config_hash"));
}

TEST_CASE("distortion on the builtin path graph") {
  auto dir = fresh_dir("dist");
  CHECK(run("distortion --graph path4 --exact --out " + dir.string()) == 0);
  json r = load_result(dir);
  CHECK(r.at("results").at("distortion").get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.at("results").at("status") == "ExactCertified");
  CHECK(fs::exists(dir / "witness.json"));
}

TEST_CASE("pipeline: cayley-ball output feeds distortion") {
  auto dir = fresh_dir("wk");
  CHECK(run("cayley-ball --k 2 --out " + dir.string()) == 0);
  json ball = load_result(dir);
  auto dir2 = fresh_dir("wk_dist");
  CHECK(run("distortion --space " + (dir / "space.json").string() +
            " --colgen --out " + dir2.string()) == 0);
  json r = load_result(dir2);
  CHECK(r.at("results").at("input_hash").get<std::uint64_t>() ==
        ball.at("results").at("space_hash").get<std::uint64_t>());
  CHECK(r.at("results").at("distortion").get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("exit codes") {
  auto dir = fresh_dir("err");
  // unknown config field -> schema violation
  auto cfg = dir / "bad.json";
  heiscut::io::write_file(cfg.string(),
                          R"({"command":"moving-char","bogus":1})");
  CHECK(run("--config " + cfg.string()) == 2);

  // unknown param
  heiscut::io::write_file(cfg.string(),
                          R"({"command":"moving-char","params":{"zzz":3}})");
  CHECK(run("--config " + cfg.string()) == 2);

  // missing input file
  heiscut::io::write_file(
      cfg.string(),
      R"({"command":"slice","inputs":{"map":"/nonexistent.csv"}})");
  CHECK(run("--config " + cfg.string()) == 3);

  // over-cap sizes
  CHECK(run("cayley-ball --k 9 --out " + dir.string()) == 4);

  // ball reaching out of the box -> numerical error payload
  CHECK(run("alpha --fn generic --x [0.95,0,0] --r 0.4 --resolution [24,24,32] "
            "--out " +
            dir.string()) == 5);

  // missing config file
  CHECK(run("--config /does/not/exist.json") == 3);
}

TEST_CASE("config files round trip through the flag path") {
  auto dir1 = fresh_dir("cfg1");
  CHECK(run("moving-char --n 64 --out " + dir1.string()) == 0);
  json echoed = load_result(dir1).at("config");
  // echoed config re-runs to an identical payload
  auto dir2 = fresh_dir("cfg2");
  echoed["output_dir"] = dir2.string();
  auto cfg = dir2 / "cfg.json";
  fs::create_directories(dir2);
  heiscut::io::write_file(cfg.string(), echoed.dump());
  CHECK(run("--config " + cfg.string()) == 0);
  json a = load_result(dir1);
  json b = load_result(dir2);
  CHECK(a.at("results") == b.at("results"));
}

TEST_CASE("reruns are byte-identical modulo the timestamp") {
  for (std::string args :
       {std::string("moving-char --n 50"),
        std::string("distortion --graph cycle5 --exact"),
        std::string("slice"),  // filled below
        std::string("collapse --fn c --levels 48 --resolution [32,32,64] "
                    "--x [0.1,0,0.1] --t-list [0.2,0.1]")}) {
    auto dira = fresh_dir("det_a");
    auto dirb = fresh_dir("det_b");
    if (args == "slice") {
      heiscut::L1Map f = heiscut::L1Map::zeros(5, 2);
      for (std::size_t i = 0; i < 10; ++i) f.values[i] = double((i * 7) % 5);
      auto map = dira / "map.csv";
      heiscut::io::write_file(map.string(), heiscut::io::l1map_to_csv(f));
      args = "slice --input " + map.string();
    }
    REQUIRE(run(args + " --seed 3 --out " + dira.string()) == 0);
    REQUIRE(run(args + " --seed 3 --out " + dirb.string()) == 0);
    std::string ra = heiscut::io::read_file((dira / "result.json").string());
    std::string rb = heiscut::io::read_file((dirb / "result.json").string());
    // configs differ in output_dir; compare results and plot payloads
    json ja = json::parse(ra), jb = json::parse(rb);
    CHECK(ja.at("results") == jb.at("results"));
    CHECK(heiscut::io::read_file((dira / "plot.csv").string()) ==
          heiscut::io::read_file((dirb / "plot.csv").string()));
    // and a rerun into the same directory is byte-identical mod timestamp
    REQUIRE(run(args + " --seed 3 --out " + dira.string()) == 0);
    std::string rc = heiscut::io::read_file((dira / "result.json").string());
    CHECK(strip_timestamp(rc) == strip_timestamp(ra));
  }
}
