#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "orbis/io.hpp"
#include "orbis/psi.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = orbis::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "orbis_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("signature") {
    const auto r = run({"signature", "-g", "0", "-m", "2,3,7"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["chi"] == "-1/42");
    CHECK(j["hyperbolic"] == true);
    CHECK(j["area"].get<double>() == doctest::Approx(std::numbers::pi / 21).epsilon(1e-14));

    const auto flat = run({"signature", "-g", "0", "-m", "2,3,6"});
    REQUIRE(flat.code == 0);
    CHECK(json::parse(flat.out)["area"].is_null());
  }

  TEST_CASE("usage and domain errors") {
    const auto bogus = run({"signature", "--bogus-flag"});
    CHECK(bogus.code == 2);
    CHECK(bogus.err.find("usage") != std::string::npos);

    const auto euclidean = run({"triangle", "2", "3", "6"});
    CHECK(euclidean.code == 1);
    CHECK(euclidean.out.empty());
    REQUIRE(std::count(euclidean.err.begin(), euclidean.err.end(), '\n') == 1);
    const auto e = json::parse(euclidean.err);
    CHECK(e["error"] == "NotHyperbolic");
    CHECK(e.contains("message"));

    CHECK(run({}).code == 2);
    CHECK(run({"lengths", "--preset", "2,3,7", "--max-length", "-1"}).code != 0);
  }

  TEST_CASE("triangle output feeds lengths") {
    const auto t = run({"triangle", "2", "3", "7"});
    REQUIRE(t.code == 0);
    const auto path = scratch("t237.json");
    std::ofstream(path) << t.out;
    const auto a = run({"lengths", "--generators", path.string(), "--max-length", "3", "--depth", "10"});
    const auto b = run({"lengths", "--preset", "2,3,7", "--max-length", "3", "--depth", "10"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto first = json::parse(a.out.substr(0, a.out.find('\n')));
    CHECK(first["length"].get<double>() == doctest::Approx(0.983986562207583).epsilon(1e-12));
    CHECK(first["primitive"] == true);
    CHECK(json::parse(a.err).contains("completeness_bound"));
  }

  TEST_CASE("lengths output is byte-identical across runs") {
    const std::vector<std::string> args{"lengths", "--preset", "2,3,7", "--max-length", "4", "--depth", "12"};
    CHECK(run(args).out == run(args).out);
    const auto csv = run({"lengths", "--preset", "2,3,7", "--max-length", "4", "--depth", "12", "--format", "csv"});
    CHECK(csv.out.rfind("length,multiplicity,word,primitive\n", 0) == 0);
  }

  TEST_CASE("trace-eval") {
    const auto r = run({"trace-eval", "--preset", "2,3,7", "--t", "0.5", "--max-length", "5", "--depth", "16"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["convention"] == "h(r)=∫g(u)e^{iru}du");
    CHECK(j["total"].get<double>() >= std::exp(0.125) - j["error_budget"].get<double>());
  }

  TEST_CASE("cones decompose") {
    const std::vector<int> orders{2, 2, 7};
    const auto s = orbis::sample_psi_sum(orders, 0.0, 0.05, 301);
    const auto path = scratch("cones.csv");
    {
      std::ofstream f(path);
      orbis::write_csv(f, s);
    }
    const auto r = run({"cones", "decompose", "--input", path.string(), "--max-order", "12"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["orders"] == json(orders));
    CHECK(run({"cones", "decompose", "--input", (path.string() + ".missing")}).code == 1);
  }

  TEST_CASE("wave synth and invert") {
    const auto csv = scratch("wave237.csv");
    CHECK(run({"wave", "synth", "--preset", "2,3,7"}).code == 2);
    const auto s = run({"wave", "synth", "--preset", "2,3,7", "--max-length", "3", "--depth", "14",
                        "--output", csv.string()});
    REQUIRE(s.code == 0);
    const auto side = json::parse(std::ifstream(csv.string() + ".json"));
    CHECK(side["area"].get<double>() == doctest::Approx(std::numbers::pi / 21).epsilon(1e-14));
    CHECK(side["sigma"].get<double>() <= 0.05);

    const auto inv = run({"wave", "invert", "--input", csv.string()});
    REQUIRE(inv.code == 0);
    const auto j = json::parse(inv.out);
    CHECK(j["cone_orders"] == json({2, 3, 7}));
    CHECK(j["genus"] == 0);
    CHECK(j["lengths"][0]["length"].get<double>() == doctest::Approx(0.983986562207583).epsilon(1e-3));
  }
}
