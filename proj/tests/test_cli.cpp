#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "../tools/cli.hpp"

using namespace wreathmix;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("verify passes on the built-in grid") {
  auto r = run({"verify", "--n-max", "3"});
  CHECK(r.code == cli::ok);
  CHECK(r.out.find("PASS") != std::string::npos);
  auto j = run({"verify", "--n-max", "2", "--json"});
  auto doc = nlohmann::json::parse(j.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["instances"].get<int>() > 0);
}

TEST_CASE("exact series has the documented header and starts at the point mass") {
  auto r = run({"exact", "--n", "2", "--p", "0.7,0.3", "--x0", "2", "--k-max", "3"});
  REQUIRE(r.code == cli::ok);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == "k,l2,tv,chi2_identity");
  CHECK(rows[1].rfind("0,", 0) == 0);
  // From (2,2; e) the stationary mass is 0.09/2, so chi2 at k = 0 is 2/0.09 - 1.
  const double chi2 = std::stod(rows[1].substr(rows[1].rfind(',') + 1));
  CHECK(chi2 == doctest::Approx(2 / 0.09 - 1));
}

TEST_CASE("decompose rejects k = 0 and writes the per-subset table") {
  auto bad = run({"decompose", "--n", "3", "--k", "0"});
  CHECK(bad.code == cli::usage);
  CHECK(bad.err.find("k ≥ 1 required") != std::string::npos);
  auto good = run({"decompose", "--family", "coset", "--n", "4", "--r", "2", "--k", "2"});
  REQUIRE(good.code == cli::ok);
  auto rows = lines(good.out);
  CHECK(rows.size() == 17);
  CHECK(rows[0] == "J,mask,mu,weight,multiplicity,d,term1,term2");
}

TEST_CASE("bounds sweep columns") {
  auto r = run({"bounds", "--n", "3", "--p", "0.7,0.3", "--k-max", "40", "--c", "0.5,2"});
  REQUIRE(r.code == cli::ok);
  auto rows = lines(r.out);
  CHECK(rows[0] == "n,r,p_min,c,k,exact_L2,cor24,cor25,cor28,lower_indicator");
  CHECK(rows.size() == 81);
  // Small k lies below every threshold, so the last two bound columns are empty there.
  CHECK(rows[1].find(",,,") != std::string::npos);
  auto coset = run({"bounds", "--family", "coset", "--n", "4", "--r", "2", "--k", "3"});
  REQUIRE(coset.code == cli::ok);
  CHECK(lines(coset.out)[0] == "n,r,p_min,c,k,exact_L2,cor24,cor25,cor38,lower_indicator");
}

TEST_CASE("measure files round trip to identical kernels") {
  const auto path = (std::filesystem::temp_directory_path() / "wreathmix_test_measure.json").string();
  REQUIRE(run({"measure", "--family", "coset", "--n", "4", "--r", "2", "--out", path}).code == cli::ok);
  auto named = run({"exact", "--family", "coset", "--n", "4", "--r", "2", "--p", "0.7,0.3", "--k-max", "6"});
  auto from_file =
      run({"exact", "--family", "coset", "--n", "4", "--r", "2", "--p", "0.7,0.3", "--k-max", "6", "--measure", path});
  REQUIRE(named.code == cli::ok);
  REQUIRE(from_file.code == cli::ok);
  auto a = lines(named.out), b = lines(from_file.out);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 1; i < a.size(); ++i) {
    std::istringstream sa(a[i]), sb(b[i]);
    for (std::string x, y; std::getline(sa, x, ',') && std::getline(sb, y, ',');)
      CHECK(std::abs(std::stod(x) - std::stod(y)) <= 1e-15);
  }
  std::remove(path.c_str());
}

TEST_CASE("simulate output") {
  auto r = run({"simulate", "--n", "2", "--k", "3", "--replicas", "2000", "--seed", "4", "--json"});
  REQUIRE(r.code == cli::ok);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["n_replicas"] == 2000);
  CHECK(doc["seed"] == 4);
  CHECK(doc.contains("tv"));
  CHECK(doc.contains("se"));
  auto csv = run({"simulate", "--n", "2", "--k", "0", "--replicas", "10"});
  auto rows = lines(csv.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1] == "0,\"(1,1; e)\",10");
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == cli::usage);
  CHECK(run({"frobnicate"}).code == cli::usage);
  CHECK(run({"exact", "--family", "coset", "--n", "4"}).code == cli::usage);
  CHECK(run({"exact", "--n", "3", "--p", "0.7,0.2"}).code == cli::usage);
  CHECK(run({"exact", "--n", "3", "--x0", "1,2"}).code == cli::usage);
  CHECK(run({"exact", "--n", "3", "--measure", "/nonexistent/q.json"}).code == cli::usage);
  CHECK(run({"exact", "--n", "8", "--alphabet", "3"}).code == cli::capacity);
  CHECK(run({"exact", "--n", "2", "--help"}).code == cli::ok);
}
