#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pulseinterp/cli.hpp"
#include "pulseinterp/landscape_io.hpp"
#include "scratch_dir.hpp"

using namespace pulseinterp;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pulseinterp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

// The calibrated chamber landscape of the documented example, built once.
const ScratchDir& workspace() {
  static ScratchDir dir("cli");
  static const bool ready = [] {
    const Run r = run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/4", "--rounds",
                       "10", "--lambda", "1e-2", "--seed", "42", "--out", dir.file("chamber.land.json")});
    return r.code == 0;
  }();
  REQUIRE(ready);
  return dir;
}

}  // namespace

TEST_CASE("calibrate writes a landscape and prints one row per round") {
  const auto& dir = workspace();
  const Landscape land = load_landscape(dir.file("chamber.land.json"));
  CHECK(land.references.size() == 14);
  CHECK(land.log.size() == 11);

  const Run again = run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/4", "--rounds",
                         "10", "--lambda", "1e-2", "--seed", "42", "--out", dir.file("again.json")});
  REQUIRE(again.code == 0);
  CHECK(slurp(dir.file("again.json")) == slurp(dir.file("chamber.land.json")));
  const auto table = lines(again.out);
  REQUIRE(table.size() == 13);
  CHECK(table[0].find("round") != std::string::npos);
  CHECK(table[1].find("    0") == 0);
  CHECK(table[11].find("   10") == 0);
}

TEST_CASE("calibrate single-qubit") {
  ScratchDir dir("cli-sq");
  const Run r = run({"calibrate", "--family", "single-qubit", "--granularity", "1/4", "--rounds", "3",
                     "--seed", "42", "--out", dir.file("sq.json")});
  REQUIRE(r.code == 0);
  const Landscape land = load_landscape(dir.file("sq.json"));
  CHECK(land.references.size() == 125);
  CHECK(land.ansatz.n_controls == 2);
}

TEST_CASE("evaluate writes the per-point CSV and a summary") {
  const auto& dir = workspace();
  const Run r = run({"evaluate", "--landscape", dir.file("chamber.land.json"), "--granularity", "1/24",
                     "--csv", dir.file("pts.csv")});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir.file("pts.csv")));
  REQUIRE(rows.size() == 820);
  CHECK(rows[0] == "tx,ty,tz,infidelity,simplex");
  CHECK(rows[1].rfind("0,0,0,", 0) == 0);
  const json summary = json::parse(r.out);
  for (const char* key : {"mean", "std", "max", "count", "cumulative_iterations"}) CHECK(summary.contains(key));
  CHECK(summary["count"] == 819);
  CHECK(summary["max"].get<double>() >= summary["mean"].get<double>());
  CHECK(summary["cumulative_iterations"] == 14 * 50 * 11);

  const Run to_file = run({"evaluate", "--landscape", dir.file("chamber.land.json"), "--granularity",
                           "1/8", "--summary", dir.file("summary.json")});
  REQUIRE(to_file.code == 0);
  CHECK(to_file.out.empty());
  CHECK(json::parse(slurp(dir.file("summary.json")))["count"] == 55);
}

TEST_CASE("uncalibrated chamber sits in the before-calibration regime") {
  ScratchDir dir("cli-r0");
  REQUIRE(run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/4", "--rounds", "0",
               "--seed", "42", "--out", dir.file("r0.json")})
              .code == 0);
  const Run r = run({"evaluate", "--landscape", dir.file("r0.json"), "--granularity", "1/24"});
  REQUIRE(r.code == 0);
  const double mean = json::parse(r.out)["mean"].get<double>();
  CAPTURE(mean);
  // Within an order of magnitude of 1.3e-2.
  CHECK(mean >= 1.3e-3);
  CHECK(mean <= 1.3e-1);
}

TEST_CASE("interpolate") {
  const auto& dir = workspace();
  const Landscape land = load_landscape(dir.file("chamber.land.json"));
  const Run at_a = run({"interpolate", "--landscape", dir.file("chamber.land.json"), "--point", "0.5,0,0"});
  REQUIRE(at_a.code == 0);
  const json pulse = json::parse(at_a.out);
  const auto alpha = pulse["alpha"].get<std::vector<double>>();
  const auto& ref = land.references[4];
  REQUIRE(ref.point == ParamPoint(0.5, 0, 0));
  CHECK(alpha == std::vector<double>(ref.alpha.data(), ref.alpha.data() + ref.alpha.size()));
  CHECK(pulse["ansatz"]["n_segments"] == 20);
  CHECK(pulse["infidelity"].get<double>() == ref.infidelity);

  const Run mid = run({"interpolate", "--landscape", dir.file("chamber.land.json"), "--point",
                       "0.5,0.125,0.125", "--out", dir.file("mid.json")});
  REQUIRE(mid.code == 0);
  const double inf = json::parse(slurp(dir.file("mid.json")))["infidelity"].get<double>();
  CAPTURE(inf);
  CHECK(inf < 1e-3);

  const Run outside = run({"interpolate", "--landscape", dir.file("chamber.land.json"), "--point", "0.8,0.5,0.1"});
  CHECK(outside.code == kExitDomain);
  CHECK(outside.err.find("t_y <= min(t_x, 1 - t_x)") != std::string::npos);
  CHECK(run({"interpolate", "--landscape", dir.file("chamber.land.json"), "--point", "0.5,0"}).code ==
        kExitBadArgs);
  CHECK(run({"interpolate", "--landscape", dir.file("chamber.land.json"), "--point", "a,b,c"}).code ==
        kExitBadArgs);
}

TEST_CASE("sweep") {
  ScratchDir dir("cli-sweep");
  const Run r = run({"sweep", "--family", "weyl-chamber", "--granularities", "1/2,1/4", "--rounds", "2",
                     "--test-granularity", "1/8", "--max-iter", "10", "--seed", "1", "--out",
                     dir.file("sweep.csv")});
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(dir.file("sweep.csv")));
  REQUIRE(rows.size() == 1 + 2 * 3);
  CHECK(rows[0] == "granularity,round,cumulative_iterations,mean_infidelity,std_infidelity,max_infidelity");
  CHECK(rows[1].rfind("1/2,0,", 0) == 0);
  CHECK(rows[6].rfind("1/4,2,", 0) == 0);
}

TEST_CASE("exit codes") {
  const auto& dir = workspace();
  CHECK(run({}).code == kExitBadArgs);
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({"frobnicate"}).code == kExitBadArgs);
  CHECK(run({"calibrate", "--family", "weyl-chamber"}).code == kExitBadArgs);

  const Run family = run({"calibrate", "--family", "weyl", "--granularity", "1/4", "--out", dir.file("x.json")});
  CHECK(family.code == kExitBadArgs);
  CHECK(family.err.find("unknown gate family") != std::string::npos);
  const Run gran = run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/0", "--out", dir.file("x.json")});
  CHECK(gran.code == kExitBadArgs);
  CHECK(gran.err.find("granularity") != std::string::npos);
  CHECK(run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/4", "--rounds", "-1", "--out",
             dir.file("x.json")})
            .code == kExitBadArgs);

  const Run unwritable = run({"calibrate", "--family", "weyl-chamber", "--granularity", "1/4", "--out",
                              dir.file("missing-dir/x.json")});
  CHECK(unwritable.code == kExitIo);
  CHECK(unwritable.err.find("cannot write") != std::string::npos);

  CHECK(run({"evaluate", "--landscape", dir.file("nope.json"), "--granularity", "1/4"}).code == kExitIo);
  {
    std::ofstream(dir.file("corrupt.json")) << "{\"version\": ";
    std::ofstream(dir.file("old.json")) << "{\"version\": \"pulseinterp.landscape.v0\"}";
  }
  CHECK(run({"evaluate", "--landscape", dir.file("corrupt.json"), "--granularity", "1/4"}).code == kExitIo);
  const Run old = run({"evaluate", "--landscape", dir.file("old.json"), "--granularity", "1/4"});
  CHECK(old.code == kExitIo);
  CHECK(old.err.find("version") != std::string::npos);
}
