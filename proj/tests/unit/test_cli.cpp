#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <json.hpp>
#include <sstream>

#include "expmatch/cli.hpp"
#include "expmatch/graph.hpp"
#include "expmatch/rng.hpp"

using namespace expmatch;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("spectral report") {
  const Run r = run({"spectral", "--family", "cocktail", "--n", "6"});
  REQUIRE(r.code == 0);
  const json j = r.report();
  CHECK(j["sigma2"].get<double>() == doctest::Approx(0.2).epsilon(1e-8));
  CHECK(j["graph"]["num_vertices"] == 12);
  CHECK(j["graph"]["hash"] == graph_fingerprint(build_cocktail_party(6)));
  CHECK(j.contains("lambda_min"));
  CHECK(j.contains("lambda2"));
  CHECK(j["is_expander_at"].front().get<double>() == doctest::Approx(0.2));
}

TEST_CASE("count example lands in range") {
  const Run r = run({"count", "--family", "complete", "--n", "6", "--delta", "0.1", "--seed", "7"});
  REQUIRE(r.code == 0);
  const double est = r.report()["estimate"].get<double>();
  CHECK(est >= 9355);
  CHECK(est <= 11435);
  CHECK(r.report()["per_level_ratios"].size() == 5);
  CHECK(r.report()["steps"].get<std::uint64_t>() > 0);

  const Run part = run({"count", "--family", "petersen", "--levels", "1,3", "--steps-override", "1000"});
  REQUIRE(part.code == 0);
  CHECK(part.report()["estimate"].is_null());
  CHECK(part.report()["per_level_ratios"].size() == 2);
}

TEST_CASE("counterexample example") {
  const Run r = run({"counterexample", "--family", "complete", "--n", "6"});
  REQUIRE(r.code == 0);
  CHECK(r.report()["has_pm"] == false);
  CHECK(r.report()["sigma2_bound_ok"] == true);
}

TEST_CASE("oracle, lower-bound and sample reports") {
  const Run o = run({"oracle", "--family", "complete", "--n", "3"});
  REQUIRE(o.code == 0);
  CHECK(o.report()["census"] == json::array({1, 15, 45, 15}));

  const Run lb = run({"lower-bound", "--family", "complete", "--n", "6", "--eps", "0.0909090909090909"});
  REQUIRE(lb.code == 0);
  const json j = lb.report();
  CHECK(j["k"] == 5);
  CHECK(j["num_sequences"] == 9450);
  CHECK(j["distinct"] == 9450);
  CHECK(j["oracle_m_k"] == 62370);
  CHECK(j["log_bound_pm"].get<double>() == doctest::Approx(std::log(0.06187)).epsilon(1e-3));
  CHECK(j.contains("log_bound_meps"));

  const Run s = run({"sample", "--family", "petersen", "--seed", "2"});
  REQUIRE(s.code == 0);
  CHECK(s.report()["matching"].size() == 5);
}

TEST_CASE("augment-demo prints JSON lines") {
  const Run r = run({"augment-demo", "--family", "complete", "--n", "6", "--seed", "3", "--k", "2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<json> parsed;
  while (std::getline(lines, line)) parsed.push_back(json::parse(line));
  REQUIRE(parsed.size() >= 2);
  CHECK(parsed.front().contains("left_layer_sizes"));
  CHECK(parsed.back()["found"] == true);
  CHECK(parsed.back()["valid"] == true);
  CHECK(parsed.back()["path_length"].get<int>() <= parsed.back()["rho"].get<int>());
}

TEST_CASE("gen writes a graph that other subcommands read back") {
  const auto dir = std::filesystem::temp_directory_path() / "expmatch-cli-test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "g.txt").string();
  const Run g = run({"gen", "--family", "random-regular", "--n", "6", "--d", "3", "--seed", "4", "--out", path});
  REQUIRE(g.code == 0);
  const Run s = run({"spectral", "--graph", path});
  REQUIRE(s.code == 0);
  CHECK(s.report()["graph"]["hash"] == g.report()["graph"]["hash"]);
  CHECK(load_graph(path) == build_random_regular(6, 3, derive_seed(4, 0x6772617068ULL)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("exit codes") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"spectral", "--family", "complete"}).code == 1);
  CHECK(run({"spectral", "--family", "complete", "--n", "3", "--graph", "x.txt"}).code == 1);
  CHECK(run({"spectral", "--graph", "/nonexistent/g.txt"}).code == 1);
  CHECK(run({"count", "--family", "complete", "--n", "3", "--delta", "2"}).code == 1);
  CHECK(run({"verify", "--criteria", "12"}).code == 1);
  const Run bad = run({"spectral", "--family", "nope", "--n", "3"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("unknown family") != std::string::npos);
  CHECK(bad.out.empty());
  // No perfect matching: the sampler times out.
  CHECK(run({"sample", "--graph", "/dev/null"}).code == 1);
  CHECK(run({"sample", "--family", "random-regular", "--n", "3", "--d", "1", "--steps-override", "20", "--budget",
             "1000", "--eps", "0.9"})
            .code == 0);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("budget exit code") {
  // pendant graph file: no perfect matching, so sampling times out.
  const auto dir = std::filesystem::temp_directory_path() / "expmatch-cli-budget";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "h.txt").string();
  save_graph(pendant_augment(build_complete(3)), path);
  CHECK(run({"sample", "--graph", path, "--eps", "0.5", "--steps-override", "10", "--budget", "1"}).code == 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("identical arguments give identical output") {
  const std::vector<std::string> args{"count", "--family", "petersen", "--seed", "5", "--budget", "30000"};
  CHECK(run(args).out == run(args).out);
}
