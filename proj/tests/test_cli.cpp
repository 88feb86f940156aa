#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path work = fs::path(ACTMOD_TEST_WORK_DIR) / "cli";

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + ACTMOD_CLI_PATH + "\" " + args + " > \"" +
                          (work / "stdout.txt").string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(work);
    fs::create_directories(work);
  }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "successful run writes the artifacts") {
  const auto out = work / "a";
  REQUIRE(run("beam-step -q --seed 4 --out \"" + out.string() + "\"") == 0);
  for (const char* f : {"config.ini", "metrics.csv", "events.csv", "pd-2mm/run.csv",
                        "pd-2mm/meta.json", "pid-3mm/run.csv"}) {
    CHECK_MESSAGE(fs::exists(out / f), f);
  }
  CHECK(slurp(out / "config.ini").find("seed = 4") != std::string::npos);
  CHECK(slurp(out / "pd-2mm/meta.json").find("\"seed\": 4") != std::string::npos);
}

TEST_CASE_FIXTURE(Workdir, "rerun from the echoed config is byte-identical") {
  const auto a = work / "a";
  const auto b = work / "b";
  REQUIRE(run("disturbance -q --seed 8 --set sim.current_sense_sigma=0.07 --out \"" +
              a.string() + "\"") == 0);
  REQUIRE(run("disturbance -q --config \"" + (a / "config.ini").string() + "\" --out \"" +
              b.string() + "\"") == 0);
  CHECK(slurp(a / "pd/run.csv") == slurp(b / "pd/run.csv"));
  CHECK(slurp(a / "events.csv") == slurp(b / "events.csv"));
  CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
  CHECK(slurp(a / "config.ini") == slurp(b / "config.ini"));
}

TEST_CASE_FIXTURE(Workdir, "bad input exits with 1") {
  CHECK(run("nonsense") == 1);
  CHECK(run("step --set plant.nokey=1 --out \"" + (work / "x").string() + "\"") == 1);
  CHECK(run("step --config \"" + (work / "missing.ini").string() + "\"") == 1);
  CHECK(run("step --seed -3") == 1);
  {
    std::ofstream f(work / "bad.ini");
    f << "[plant]\nkt = -1\n";
  }
  CHECK(run("step --config \"" + (work / "bad.ini").string() + "\" --out \"" +
            (work / "x").string() + "\"") == 1);
}

TEST_CASE_FIXTURE(Workdir, "run failures exit with 2") {
  // Gain ceiling below the ultimate gain: the sweep never oscillates.
  CHECK(run("tune -q --set scenario.kp_ceiling=0.06 --out \"" + (work / "t").string() + "\"") ==
        2);
  CHECK(slurp(work / "stdout.txt").find("oscillat") != std::string::npos);
  // Output path occupied by a regular file.
  std::ofstream(work / "file") << "x";
  CHECK(run("step -q --out \"" + (work / "file").string() + "\"") == 2);
}

TEST_CASE_FIXTURE(Workdir, "print config and version") {
  CHECK(run("staircase --print-config") == 0);
  CHECK(slurp(work / "stdout.txt").find("[scenario]") != std::string::npos);
  CHECK(run("--version") == 0);
  CHECK(slurp(work / "stdout.txt").find("0.3.0") != std::string::npos);
}
