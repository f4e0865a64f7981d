#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "asymkit/cli.hpp"
#include "asymkit/problem.hpp"

using namespace asymkit;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  const int c = run_cli(args, o, e);
  return {c, o.str(), e.str()};
}

std::string problem(const std::string& name) {
  return std::string(ASYMKIT_PROBLEM_DIR) + "/" + name + ".json";
}

std::string temp_path(const std::string& name) {
  return (fs::temp_directory_path() / ("asymkit_test_" + name)).string();
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out.find(version_string()) != std::string::npos);
  CHECK(run({}).code == 2);
  CHECK(run({"rate"}).code == 2);  // no --problem
  CHECK(run({"frobnicate", "--problem", problem("u1_coherence_bit")}).code == 2);
  const Run bad_sub = run({"rate", "nonsense", "--problem", problem("u1_coherence_bit")});
  CHECK(bad_sub.code == 2);
  CHECK(bad_sub.err.find("unknown rate subcommand") != std::string::npos);
  CHECK(run({"measure", "qgt", "--problem", problem("u1_coherence_bit"), "--q", "1.5"}).code == 2);
  CHECK(run({"measure", "qgt", "--problem", "/nonexistent/p.json"}).code == 2);
}

TEST_CASE("problem parse errors carry location") {
  const std::string p = temp_path("broken.json");
  {
    std::ofstream f(p);
    f << "{\n  \"rep_in\": {\"generators\": [[[1, 0]]]},\n  oops\n}\n";
  }
  const Run r = run({"measure", "--problem", p});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 3") != std::string::npos);
  {
    std::ofstream f(p);
    f << R"({"rep_in": {"generators": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]]}, "state_in": {"type": "pure", "vector": [[1, 0]]}})";
  }
  const Run r2 = run({"measure", "--problem", p});
  CHECK(r2.code == 2);
  CHECK(r2.err.find("state_in") != std::string::npos);
  {
    std::ofstream f(p);
    f << R"({"rep_in": {"generators": {"builtin": "pauli"}}, "typo_field": 1})";
  }
  const Run r3 = run({"measure", "--problem", p});
  CHECK(r3.code == 2);
  CHECK(r3.err.find("typo_field") != std::string::npos);
  fs::remove(p);
}

TEST_CASE("rate reports") {
  const Run u1 = run({"rate", "--problem", problem("u1_coherence_bit")});
  REQUIRE(u1.code == 0);
  const json j = json::parse(u1.out);
  CHECK(j["tool"] == "asymkit");
  CHECK(j["command"] == "rate");
  CHECK(j["subcommand"] == "rate");
  CHECK(j["results"]["sym_verdict"] == "holds");
  CHECK(j["results"]["rate"].get<double>() == doctest::Approx(0.64).epsilon(1e-10));
  CHECK(j["config"].contains("problem"));

  const json fin = json::parse(run({"rate", "--problem", problem("finite_group_lifted")}).out);
  CHECK(fin["results"]["rate"] == "inf");
  const json pz = json::parse(run({"rate", "--problem", problem("pauli_zero_vs_plus")}).out);
  CHECK(pz["results"]["rate"].get<double>() == 0.0);
  CHECK(pz["results"]["sym_verdict"] == "violated");
}

TEST_CASE("measure sq agrees with the pure-state identity") {
  const Run r = run({"measure", "sq", "--problem", problem("su2_highest_weight"), "--q", "0.3",
                     "--theta", "0.1,0.2,-0.3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["results"]["input"]["pure_state_identity_residual"].get<double>() < 1e-10);
  CHECK(j["results"]["output"]["pure_state_identity_residual"].get<double>() < 1e-10);
  CHECK(run({"measure", "qgt", "--problem", problem("su2_highest_weight"), "--theta", "0.1"}).code == 2);
  CHECK(run({"measure", "qgt", "--problem", problem("u1_coherence_bit"), "--component", "3"}).code == 2);
}

TEST_CASE("channel exit codes") {
  const Run ok = run({"channel", "build", "--problem", problem("variance_decreasing")});
  REQUIRE(ok.code == 0);
  const json j = json::parse(ok.out);
  CHECK(j["results"]["certificates"]["completeness_error"].get<double>() <= 1e-12);
  CHECK(j["results"]["deficit_slope"]["exponent"].get<double>() >= 2.9);
  const Run self = run({"channel", "--problem", problem("self_conversion")});
  CHECK(self.code == 0);
  const Run bad = run({"channel", "build", "--problem", problem("variance_increasing")});
  CHECK(bad.code == 3);
  CHECK(bad.err.find("negative eigenvalue") != std::string::npos);
}

TEST_CASE("simulate scan csv and the cap") {
  const Run csv = run({"simulate", "scan", "--problem", problem("variance_decreasing"), "--copies", "1:3",
                       "--format", "csv"});
  REQUIRE(csv.code == 0);
  CHECK(csv.out.rfind("N,u_norm,trace_distance,fidelity,per_copy_infidelity\n", 0) == 0);
  CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 1 + 3 * 2);
  CHECK(run({"rate", "--problem", problem("u1_coherence_bit"), "--format", "csv"}).code == 2);

  setenv("ASYMKIT_TENSOR_CAP", "8", 1);
  const Run cap = run({"simulate", "scan", "--problem", problem("variance_decreasing"), "--copies", "1:5"});
  unsetenv("ASYMKIT_TENSOR_CAP");
  CHECK(cap.code == 4);

  const std::string shifts = temp_path("shifts.json");
  {
    std::ofstream f(shifts);
    f << "{\"shifts\": [[0.25], [1.0]]}";
  }
  const Run sh = run({"simulate", "scan", "--problem", problem("variance_decreasing"), "--copies", "2,4",
                      "--shift-file", shifts});
  REQUIRE(sh.code == 0);
  CHECK(json::parse(sh.out)["results"]["rows"].size() == 4);
  fs::remove(shifts);
}

TEST_CASE("reports are byte-identical across reruns") {
  const std::vector<std::vector<std::string>> cmds{
      {"measure", "qgt", "--problem", problem("so3_reference_J1")},
      {"rate", "rate", "--problem", problem("su2_highest_weight")},
      {"rate", "reversible", "--problem", problem("u1_coherence_bit")},
      {"channel", "twirl", "--problem", problem("variance_decreasing"), "--seed", "5"},
      {"simulate", "convert", "--problem", problem("variance_decreasing"), "--seed", "7", "--random-frame"},
      {"simulate", "check", "--problem", problem("u1_coherence_bit"), "--suite", "monotonicity", "--count", "10",
       "--seed", "3"}};
  for (const auto& c : cmds) {
    const Run a = run(c), b = run(c);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("output file is written whole") {
  const std::string out = temp_path("report.json");
  fs::remove(out);
  REQUIRE(run({"rate", "--problem", problem("u1_coherence_bit"), "--out", out}).code == 0);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(json::parse(ss.str())["results"]["sym_verdict"] == "holds");
  CHECK_FALSE(fs::exists(out + ".tmp"));
  fs::remove(out);
}

TEST_CASE("problem files round trip through serialization") {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(ASYMKIT_PROBLEM_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    const Problem p = load_problem(entry.path().string());
    const json s1 = serialize_problem(p);
    const json s2 = serialize_problem(parse_problem(s1));
    CHECK_MESSAGE(s1 == s2, entry.path().filename().string());
  }
  CHECK(count >= 5);
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const std::string cli = ASYMKIT_CLI_PATH;
  const std::string devnull = " >/dev/null 2>&1";
  auto code = [&](const std::string& args) {
    const int s = std::system((cli + " " + args + devnull).c_str());
    return WEXITSTATUS(s);
  };
  CHECK(code("rate --problem " + problem("u1_coherence_bit")) == 0);
  CHECK(code("rate --problem /nonexistent.json") == 2);
  CHECK(code("channel build --problem " + problem("variance_increasing")) == 3);
}
