#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"

using h2::cli::run;
using json = nlohmann::json;

namespace {

struct Captured {
  int code;
  json report;
  std::string out;
  std::string err;
};

Captured call(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  auto r = run(args, out, err);
  return {r.exit_code, r.report, out.str(), err.str()};
}

} // namespace

TEST_CASE("group verify passes and prints the coset table") {
  const auto c = call({"group", "verify"});
  CHECK(c.code == 0);
  CHECK(c.report["status"] == "pass");
  const auto &rows = c.report["details"]["coset_table"]["rows"];
  CHECK(rows.size() == 7);
  CHECK(rows["T"][3] == "URU.Gamma");
  CHECK(rows["U"][1] == "Gamma");
  CHECK(c.report["details"]["factorization"]["cases"] == 343);
  CHECK(c.report["details"]["failed"].empty());
  CHECK(c.report.contains("timings"));
}

TEST_CASE("stdout carries the same JSON as the report") {
  const auto c = call({"group", "orbits"});
  CHECK(c.code == 0);
  const json parsed = json::parse(c.out);
  CHECK(parsed == c.report);
  CHECK(parsed["details"]["O1"].size() == 5);
  CHECK(parsed["details"]["O2"].size() == 10);
  // round trip through the serializer
  CHECK(json::parse(parsed.dump()) == parsed);
}

TEST_CASE("group member and cosets") {
  auto c = call({"group", "member", "--matrix", "[[1,1,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["member"] == true);
  c = call({"group", "member", "--matrix", "[[0,0,0,-1],[0,0,1,0],[0,-1,0,0],[1,0,0,0]]"});
  CHECK(c.report["details"]["member"] == false);
  CHECK(c.report["details"]["coset"] == "U.Gamma");
  c = call({"group", "member", "--matrix", "[[2,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"});
  CHECK(c.code == 2);
  c = call({"group", "cosets"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["mismatches"].empty());
  c = call({"group", "cosets", "--matrix", "[[1,0,0,0],[0,1,0,0],[0,0,1,1],[0,0,0,1]]"});
  CHECK(c.report["details"]["coset"] == "Gamma");
}

TEST_CASE("group orbits from a chosen vector") {
  const auto c = call({"group", "orbits", "--vector", "[0,1,0,0]", "--generators", "TSRU"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["size"] == 15);
  CHECK(call({"group", "orbits", "--vector", "[1,0,0,0]", "--generators", "TQ"}).code == 2);
}

TEST_CASE("group factor") {
  const auto c = call({"group", "factor", "--l", "1", "--m", "2", "--n", "3"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["equal"] == true);
  CHECK(c.report["details"]["display"] == json::parse("[[1,2,2,0],[0,1,0,0],[0,0,1,0],[0,-2,3,1]]"));
}

TEST_CASE("theta eval and check") {
  auto c = call({"theta", "eval", "--sigma", "[[[0,1],0],[0,[0,1]]]"});
  CHECK(c.code == 0);
  const double re = c.report["details"]["value"][0];
  CHECK(std::abs(re - 1.1803406) < 1e-7);
  c = call({"theta", "check", "--sigma", "[[[0.1,1.2],[0.2,0.3]],[[0.2,0.3],[-0.3,0.9]]]", "--eps", "[1,0]",
            "--eps-prime", "[1,1]", "--z", "[[0.2,0.1],[-0.4,0.3]]", "--k", "1", "--nu", "[1,-2]",
            "--nu-prime", "[0,3]"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["residuals"].size() == 4);
  c = call({"theta", "eval", "--sigma", "[[[0,1],0],[0,[0,1]]]", "--eps", "[1]"});
  CHECK(c.code == 2);
  c = call({"--tol", "1e-20", "theta", "eval", "--sigma", "[[[0,1],0],[0,[0,1]]]"});
  CHECK(c.code == 2);
}

TEST_CASE("periods output feeds recover") {
  auto c = call({"periods", "--lambdas", R"([0,1,2.1,3.4,[0.5,1.2],"inf"])"});
  REQUIRE(c.code == 0);
  const json pi = c.report["details"]["Pi"];
  CHECK(c.report["details"]["symmetry_defect"].get<double>() < 1e-8);
  auto r = call({"recover", "--sigma", pi.dump()});
  REQUIRE(r.code == 0);
  const auto lambdas = r.report["details"]["lambdas"];
  CHECK(std::abs(lambdas[2][0].get<double>() - 2.1) < 1e-6);
  CHECK(std::abs(lambdas[3][0].get<double>() - 3.4) < 1e-6);
  CHECK(std::abs(lambdas[4][1].get<double>() - 1.2) < 1e-6);
  CHECK(lambdas[5] == "inf");
  r = call({"recover", "--sigma", pi.dump(), "--index", "6"});
  CHECK(r.code == 1);
  CHECK(r.report["details"]["error"].get<std::string>().find("degenerate") != std::string::npos);
}

TEST_CASE("periods normalizes a general configuration") {
  const auto c = call({"periods", "--lambdas", "[[1,1],[3,1],[4,2],[5,3.5],[2,4],[-2,0]]"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["lambdas"][0] == json::parse("[0.0,0.0]"));
  CHECK(c.report["details"]["lambdas"][5] == "inf");
}

TEST_CASE("roundtrip") {
  auto c = call({"roundtrip", "--lambdas", R"([0,1,2.1,3.4,[0.5,1.2],"inf"])"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["max_error"].get<double>() < 1e-6);
  c = call({"--seed", "5", "roundtrip", "--random", "3"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["cases"].size() == 3);
  const auto again = call({"--seed", "5", "roundtrip", "--random", "3"});
  CHECK(again.report["details"]["cases"] == c.report["details"]["cases"]);
  c = call({"roundtrip", "--random", "2", "--genus", "1"});
  CHECK(c.code == 0);
  CHECK(call({"roundtrip"}).code == 2);
  CHECK(call({"roundtrip", "--lambdas", "[0,1,2]"}).code == 2);
}

TEST_CASE("surface commands") {
  auto c = call({"surface", "build", "--chain", "[1,[0,1],-1,[0,-1]]", "--exact"});
  REQUIRE(c.code == 0);
  CHECK(c.report["details"]["area"]["exact"] == "3");
  CHECK(c.report["details"]["weierstrass_points"].size() == 6);
  c = call({"surface", "build", "--chain", "[1,[0,1],1,[0,1]]"});
  CHECK(c.code == 2);
  CHECK(c.report["details"]["error"].get<std::string>().find("condition 2") != std::string::npos);

  c = call({"surface", "move", "--chain", "[1,[0,1],-1,[0,-1]]", "--word", "S"});
  REQUIRE(c.code == 0);
  CHECK(c.report["details"]["period_vector"] == json::parse("[[0.0,-1.0],[1.0,0.0],[0.0,1.0],[-2.0,0.0]]"));
  CHECK(c.report["details"]["frame_in_gamma"] == true);

  c = call({"surface", "move", "--chain", "[1,[0,1],[-1,1],-1]", "--word", "TR"});
  CHECK(c.code == 1);
  CHECK(c.report["details"]["failed_move"] == 1);

  c = call({"--seed", "9", "surface", "verify", "--chain", "[1,[0,1],-1,[0,-1]]", "--exact", "--word", "TtRrSs",
            "--random", "20"});
  CHECK(c.code == 0);
  CHECK(c.report["details"]["words"].size() == 21);
  CHECK(call({"surface", "verify", "--chain", "[1,[0,1],-1,[0,-1]]"}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"group"}).code == 2);
  CHECK(call({"group", "member"}).code == 2);
  CHECK(call({"bogus"}).code == 2);
  CHECK(call({"periods", "--lambdas", "[0,1,"}).code == 2);
  CHECK(call({"theta", "eval", "--sigma", "[[[0,1],[0,2]],[[0,-2],[0,1]]]"}).code == 2);
}

TEST_CASE("quiet and output flags") {
  const std::string path = "h2_cli_test_report.json";
  const auto c = call({"--quiet", "--output", path, "group", "factor", "--l", "0", "--m", "0", "--n", "0"});
  CHECK(c.code == 0);
  CHECK(c.out.empty());
  std::ifstream f(path);
  REQUIRE(f.good());
  const json saved = json::parse(f);
  CHECK(saved == c.report);
  std::remove(path.c_str());
}
