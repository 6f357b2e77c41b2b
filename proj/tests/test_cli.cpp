#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int code = -1;
  std::string output;  // stdout and stderr combined
};

fs::path work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "rectipoly_cli_tests";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the CLI under test (path from RECTIPOLY_BIN, set by the test fixture
// in CMake) through the shell, capturing exit code and combined output.
RunResult run_cli(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("RECTIPOLY_BIN");
  REQUIRE(bin != nullptr);
  static int counter = 0;
  const fs::path capture = work_dir() / ("capture_" + std::to_string(counter++) + ".txt");
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" + bin + "\" " +
                          args + " > \"" + capture.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult result;
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = read_file(capture);
  fs::remove(capture);
  return result;
}

bool contains(const std::string& text, const std::string& needle) {
  return text.find(needle) != std::string::npos;
}

// |a - b| <= 1e-9 for numbers, exact equality elsewhere, recursing through
// objects and arrays with identical shape.
void check_json_close(const json& got, const json& want,
                      const std::string& path) {
  CAPTURE(path);
  if (want.is_number() && got.is_number()) {
    CHECK(std::abs(got.get<double>() - want.get<double>()) <= 1e-9);
  } else if (want.is_object()) {
    REQUIRE(got.is_object());
    CHECK(got.size() == want.size());
    for (const auto& [key, value] : want.items()) {
      const std::string child = path + "/" + key;
      REQUIRE_MESSAGE(got.contains(key), child);
      check_json_close(got.at(key), value, child);
    }
  } else if (want.is_array()) {
    REQUIRE(got.is_array());
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
      check_json_close(got[i], want[i], path + "[" + std::to_string(i) + "]");
  } else {
    CHECK(got == want);
  }
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("version and missing subcommand") {
  const RunResult version = run_cli("--version");
  CHECK(version.code == 0);
  CHECK(contains(version.output, "rectipoly 0.1.0"));

  CHECK(run_cli("").code == 2);
}

TEST_CASE("build and analyze round trip") {
  const fs::path obj = work_dir() / "cube.obj";
  const RunResult build = run_cli("build cube --out \"" + obj.string() + "\"");
  CHECK(build.code == 0);
  CHECK(contains(build.output, "wrote"));
  CHECK(contains(build.output, "V=8 E=12 F=6"));

  const RunResult analyze = run_cli("analyze \"" + obj.string() + "\"");
  CHECK(analyze.code == 0);
  CHECK(contains(analyze.output, "genus=0 (closed)"));
  CHECK(contains(analyze.output, "faces: all rectangles; 1x1 x6"));
  CHECK(contains(analyze.output, "dihedrals: 90deg x12"));
  CHECK(contains(analyze.output, "certificate: Pass (0 red edges)"));
  CHECK(contains(analyze.output, "audit: Consistent"));

  const fs::path frame_obj = work_dir() / "frame.obj";
  const RunResult frame = run_cli("build frame-torus --outer 5 --hole 1 --height 2 --out \"" +
                                  frame_obj.string() + "\"");
  CHECK(frame.code == 0);
  CHECK(contains(frame.output, "V=24 E=44 F=20"));
  fs::remove(obj);
  fs::remove(frame_obj);
}

TEST_CASE("analyze reports the octopus obstruction") {
  const fs::path obj = work_dir() / "octopus.obj";
  CHECK(run_cli("build octopus --L 3 --out \"" + obj.string() + "\"").code ==
        0);
  const RunResult analyze = run_cli("analyze \"" + obj.string() + "\"");
  CHECK(analyze.code == 0);
  CHECK(contains(analyze.output, "genus=7 (closed)"));
  CHECK(contains(analyze.output, "certificate: Fail (84 red edges)"));
  CHECK(contains(analyze.output,
                 "30 nodes, 84 arcs, average degree 28/5, min facial walk 4, "
                 "Euler bound holds (slack 0)"));
  CHECK(contains(analyze.output, "audit: NoConstraint (genus 7, min red degree 5)"));
  fs::remove(obj);
}

TEST_CASE("build failures map to argument and sampling exit codes") {
  const std::string out = " --out \"" + (work_dir() / "unused.obj").string() + "\"";
  CHECK(run_cli("build dodeca" + out).code == 2);
  CHECK(run_cli("build frame-torus --outer 4 --hole 1" + out).code == 2);
  CHECK(run_cli("build octopus --L 0.5" + out).code == 2);
  CHECK(run_cli("build star:rggg --seed 1" + out).code == 3);
}

TEST_CASE("analyze failures") {
  CHECK(run_cli("analyze \"" + (work_dir() / "missing.obj").string() + "\"")
            .code == 2);

  // A star gadget is an open surface: loading it for analysis must fail
  // the closed-manifold validation.
  const fs::path star = work_dir() / "star.obj";
  CHECK(run_cli("build star:ggg --seed 1 --out \"" + star.string() + "\"")
            .code == 0);
  CHECK(run_cli("analyze \"" + star.string() + "\"").code == 4);
  fs::remove(star);
}

TEST_CASE("unfold subcommand") {
  const fs::path obj = work_dir() / "cube_unfold.obj";
  REQUIRE(run_cli("build cube --out \"" + obj.string() + "\"").code == 0);

  const RunResult bfs = run_cli("unfold \"" + obj.string() + "\"");
  CHECK(bfs.code == 0);
  CHECK(contains(bfs.output, "strategy: bfs  root: 0"));
  CHECK(contains(bfs.output,
                 "faces: 6  folds: 5  cuts: 7  cut cycle rank: 0"));
  CHECK(contains(bfs.output, "overlap: Simple"));

  const RunResult steepest =
      run_cli("unfold \"" + obj.string() + "\" --strategy steepest --root 3");
  CHECK(steepest.code == 0);
  CHECK(contains(steepest.output, "strategy: steepest  root: 3"));

  const fs::path svg = work_dir() / "net.svg";
  const RunResult with_svg = run_cli("unfold \"" + obj.string() +
                                     "\" --svg \"" + svg.string() + "\"");
  CHECK(with_svg.code == 0);
  CHECK(contains(with_svg.output, "wrote"));
  const std::string svg_text = read_file(svg);
  CHECK(contains(svg_text, "<svg"));
  CHECK(contains(svg_text, "<polygon"));

  CHECK(run_cli("unfold \"" + obj.string() + "\" --strategy bogus").code == 2);
  CHECK(run_cli("unfold \"" + obj.string() + "\" --root 99").code == 2);
  fs::remove(obj);
  fs::remove(svg);
}

TEST_CASE("lemma-sweep subcommand") {
  const RunResult sweep =
      run_cli("lemma-sweep --samples 40 --degrees 3..6 --seed 1");
  CHECK(sweep.code == 0);
  CHECK(contains(sweep.output, "samples: 40  degrees: 3..6  seed: 1"));
  CHECK(contains(sweep.output, "red-count histogram:"));
  CHECK(contains(sweep.output, "lemma violations: 0"));
  CHECK(contains(sweep.output, "detail failures: 0"));

  CHECK(run_cli("lemma-sweep --samples 5 --degrees 9..3").code == 2);
  CHECK(run_cli("lemma-sweep --samples 5 --degrees abc").code == 2);
}

TEST_CASE("tolerance wiring: flag beats environment, garbage rejected") {
  const fs::path obj = work_dir() / "octopus_tol.obj";
  REQUIRE(run_cli("build octopus --L 3 --out \"" + obj.string() + "\"").code ==
          0);

  CHECK(run_cli("analyze \"" + obj.string() + "\"",
                "RECTIPOLY_TOL=garbage").code == 2);

  // A huge tolerance reaches the validation pipeline (it starts treating
  // rectangle corners as coincident), proving the variable is honored.
  CHECK(run_cli("analyze \"" + obj.string() + "\"", "RECTIPOLY_TOL=0.8")
            .code == 4);

  // An explicit --tol wins over the environment.
  const fs::path report = work_dir() / "tol_report.json";
  const RunResult flag =
      run_cli("--tol 1e-9 analyze \"" + obj.string() + "\" --json \"" +
                  report.string() + "\"",
              "RECTIPOLY_TOL=0.8");
  CHECK(flag.code == 0);
  const json parsed = json::parse(read_file(report));
  CHECK(parsed.at("certificate").at("pass") == false);
  CHECK(parsed.at("certificate").at("red_edge_count") == 84);
  fs::remove(obj);
  fs::remove(report);
}

TEST_CASE("json report matches the golden octopus report") {
  const fs::path obj = work_dir() / "octopus_golden.obj";
  const fs::path report = work_dir() / "octopus_report.json";
  REQUIRE(run_cli("build octopus --L 3 --out \"" + obj.string() + "\"").code ==
          0);
  REQUIRE(run_cli("analyze \"" + obj.string() + "\" --json \"" +
                  report.string() + "\"")
              .code == 0);

  const json got = json::parse(read_file(report));
  const json want = json::parse(
      read_file(fs::path(RECTIPOLY_TEST_DATA_DIR) / "octopus_report.json"));
  check_json_close(got, want, "");

  // Spot checks so a systematically empty report cannot slip through.
  CHECK(got.at("schema_version") == 1);
  CHECK(got.at("topology").at("genus") == 7);
  CHECK(got.at("red_graph").at("components").size() == 1);
  fs::remove(obj);
  fs::remove(report);
}

}  // TEST_SUITE("cli")
