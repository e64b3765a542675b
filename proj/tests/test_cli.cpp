#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "shiftdim/cli.hpp"
#include "shiftdim/io.hpp"
#include "shiftdim/verify.hpp"

using namespace shiftdim;

namespace {

const std::string fixtures = SHIFTDIM_FIXTURES;

struct Run {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return fixtures + "/" + name; }

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("shiftdim-test-" + name);
}

Json without_wall_time(Json j) {
  j.erase("wall_time_s");
  return j;
}

}  // namespace

TEST_CASE("verify-theorem on the full shift passes") {
  const Run r = run({"verify-theorem", "--sft", fixture("fullshift2.sft"), "--measure", fixture("bern.measure"), "--alpha",
                     "2", "--tolerance", "0.1"});
  REQUIRE(r.code == cli::kExitOk);
  const Json j = r.json();
  CHECK(j["schema"] == kReportSchema);
  CHECK(j["verdict"] == "PASS");
  CHECK(j["theorem"]["rhs"].get<double>() == doctest::Approx(2.0));
  CHECK(j["mmdim"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["mhdim"]["upper"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["mhdim"]["lower"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(j["rdim"]["lower"]["value"].get<double>() - 2.0) < 0.05);
  CHECK(std::abs(j["rdim"]["upper"]["value"].get<double>() - 2.0) < 0.05);
  CHECK(j["wall_time_s"].is_number());
}

TEST_CASE("verify-theorem on the other certified families") {
  const Run golden = run({"verify-theorem", "--sft", fixture("golden1d.sft"), "--alpha", "2"});
  CHECK(golden.code == cli::kExitOk);
  CHECK(golden.json()["verdict"] == "PASS");
  CHECK(golden.json()["theorem"]["rhs"].get<double>() == doctest::Approx(0.6942419136306169).epsilon(1e-12));
  const Run td = run({"verify-theorem", "--sft", fixture("threedot.sft")});
  CHECK(td.code == cli::kExitOk);
  CHECK(td.json()["verdict"] == "PASS");
  CHECK(td.json()["theorem"]["rhs"].get<double>() == 0.0);
}

TEST_CASE("verification failure exits 2 and never 0") {
  const Run r = run({"verify-theorem", "--sft", fixture("fullshift2.sft"), "--measure", fixture("bern.measure"), "--alpha",
                     "2", "--tolerance", "1e-4"});
  CHECK(r.code == cli::kExitVerificationFailed);
  CHECK(r.json()["verdict"] == "FAIL");
}

TEST_CASE("uncertified systems give bounds only, or an error under --strict") {
  const Run loose = run({"verify-theorem", "--sft", fixture("hardsquare.sft")});
  CHECK(loose.code == cli::kExitOk);
  CHECK(loose.json()["verdict"] == "BOUNDS-ONLY");
  const Run strict = run({"verify-theorem", "--sft", fixture("hardsquare.sft"), "--strict"});
  CHECK(strict.code == cli::kExitError);
  CHECK(strict.err.rfind("error: ", 0) == 0);
}

TEST_CASE("errors exit 1 with a one-line message") {
  const std::vector<std::vector<std::string>> bad{
      {"count", "--sft", fixture("missing.sft"), "--rect", "0,1,0,1"},
      {"count", "--sft", fixture("goldenrow.sft"), "--rect", "0,1,0"},
      {"count", "--sft", fixture("goldenrow.sft"), "--rect", "0,1,0,1", "--bogus"},
      {"mmdim", "--sft", fixture("goldenrow.sft"), "--action", "0,0"},
      {"mmdim", "--sft", fixture("goldenrow.sft"), "--alpha", "1"},
      {"mmdim", "--sft", fixture("goldenrow.sft"), "--M-schedule", "2,3"},
      {"mhdim", "--sft", fixture("goldenrow.sft"), "--measure", fixture("bern.measure")},
      {"count", "--sft", fixture("hardsquare.sft"), "--rect", "0,99,0,99"},
      {"covering", "--sft", fixture("goldenrow.sft"), "--eps", "0"},
      {"nonsense"},
      {}};
  for (const auto& args : bad) {
    const Run r = run(args);
    CAPTURE(r.err);
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
    CHECK(r.out.empty());
  }
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("subcommand examples") {
  const Run entropy = run({"entropy", "--sft", fixture("goldenrow.sft"), "--mode", "transfer"});
  REQUIRE(entropy.code == 0);
  CHECK(std::abs(entropy.json()["h_top"].get<double>() - 0.69424) < 1e-5);

  const Run box = run({"entropy", "--sft", fixture("threedot.sft"), "--mode", "box", "--Nmax", "4"});
  REQUIRE(box.code == 0);

  const Run lambda = run({"lambda-density", "--a", "1", "--b", "1", "--M", "64", "--N", "4096"});
  REQUIRE(lambda.code == 0);
  CHECK(std::abs(lambda.json()["density"].get<double>() - 4.0) / 4.0 < 0.03);

  const Run count = run({"count", "--sft", fixture("threedot.sft"), "--rect", "0,3,0,3"});
  REQUIRE(count.code == 0);
  CHECK(count.json()["count"]["decimal"] == "128");
  const Run words = run({"count", "--sft", fixture("golden1d.sft"), "--length", "10"});
  CHECK(words.json()["count"]["decimal"] == "144");

  const Run cover = run({"covering", "--sft", fixture("fullshift2.sft"), "--eps", "0.5", "--N", "1"});
  REQUIRE(cover.code == 0);
  CHECK(cover.json()["covering_number"]["decimal"] == "512");

  const Run demo = run({"cover-demo", "--rects", fixture("demo.rects")});
  REQUIRE(demo.code == 0);
  CHECK(demo.json()["selected"].size() == 2);
  CHECK(demo.json()["triple_cover"] == true);

  const Run tame = run({"tame-check", "--sft", fixture("fullshift2.sft"), "--delta", "1", "--Mmax", "12"});
  REQUIRE(tame.code == 0);
  CHECK(tame.json()["nonincreasing_from"] == 3);

  const Run rdim = run({"rdim", "--measure", fixture("golden-parry.measure"), "--eps", "0.001"});
  REQUIRE(rdim.code == 0);

  const Run mh = run({"mhdim", "--sft", fixture("golden1d.sft"), "--measure", fixture("golden-parry.measure")});
  REQUIRE(mh.code == 0);
  CHECK(std::abs(mh.json()["upper"]["value"].get<double>() - 0.69424) < 0.02);
}

TEST_CASE("reports are deterministic apart from wall time and ignore the worker count") {
  const std::vector<std::string> args{"mmdim", "--sft", fixture("goldenrow.sft"), "--M-schedule", "2..5"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(without_wall_time(a.json()).dump(2) == without_wall_time(b.json()).dump(2));
  setenv("SHIFTDIM_WORKERS", "3", 1);
  const Run c = run({"count", "--sft", fixture("hardsquare.sft"), "--rect", "0,5,0,6"});
  setenv("SHIFTDIM_WORKERS", "1", 1);
  const Run d = run({"count", "--sft", fixture("hardsquare.sft"), "--rect", "0,5,0,6"});
  unsetenv("SHIFTDIM_WORKERS");
  CHECK(without_wall_time(c.json()).dump() == without_wall_time(d.json()).dump());
}

TEST_CASE("--out and --csv write files") {
  const auto json_path = temp_path("report.json"), csv_path = temp_path("table.csv");
  std::filesystem::remove(json_path);
  std::filesystem::remove(csv_path);
  const Run r = run({"mmdim", "--sft", fixture("fullshift2.sft"), "--out", json_path.string(), "--csv", csv_path.string()});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(read_text_file(json_path)) == r.json());
  const std::string csv = read_text_file(csv_path);
  CHECK(csv.rfind("M,N1,N2,log2_count_N1,log2_count_N2,rate\n", 0) == 0);
  CHECK(csv.find("\n2,16,32,54,102,3\n") != std::string::npos);
  CHECK(csv.find("mmdim,2,32,3\n") != std::string::npos);
  std::filesystem::remove(json_path);
  std::filesystem::remove(csv_path);
}
