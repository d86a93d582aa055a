#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../src/cli/commands.hpp"

using simplexgeo::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args, const std::string& input) {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  for (std::string l; std::getline(s, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("eval") {
  const std::string doc = R"({"tensor":{"kind":"lm","lambda":2,"mu":1},"point":[0.625,0.375],"X":{"z":1},"Y":{"z":1}})";
  auto r = invoke({"eval"}, doc);
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(5.12).epsilon(1e-15));

  auto exact = invoke({"--mode", "rational", "eval"},
                      R"({"tensor":{"kind":"lm","lambda":"2","mu":1},"point":["5/8","3/8"],"X":{"z":1},"Y":{"z":1}})");
  CHECK(exact.code == 0);
  CHECK(exact.out == "128/25\n");

  auto fisher = invoke({"--mode", "rational", "eval"},
                       R"({"tensor":{"kind":"fisher"},"point":["1/3","1/3","1/3"],"X":{"z":2},"Y":{"z":2}})");
  CHECK(fisher.out == "2\n");
}

TEST_CASE("input errors exit 2 with a pointer, domain errors exit 1") {
  auto malformed = invoke({"eval"}, "{");
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);

  auto kind = invoke({"eval"}, R"({"tensor":{"kind":"bogus"},"point":[0.5,0.5],"X":[1,-1],"Y":[1,-1]})");
  CHECK(kind.code == 2);
  CHECK(kind.err.find("/tensor/kind") != std::string::npos);

  auto missing = invoke({"eval"}, R"({"tensor":{"kind":"d"}})");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/point") != std::string::npos);

  auto dims = invoke({"eval"}, R"({"tensor":{"kind":"fisher"},"point":[0.5,0.5],"X":[1,-1,0],"Y":[1,-1]})");
  CHECK(dims.code == 1);
  CHECK(dims.err.find("DimensionMismatch") != std::string::npos);

  auto normalized = invoke({"eval"}, R"({"tensor":{"kind":"fisher"},"point":[0.5,0.6],"X":[1,-1],"Y":[1,-1]})");
  CHECK(normalized.code == 1);

  CHECK(invoke({"--mode", "quad", "eval"}, "{}").code == 2);
  CHECK(invoke({"nonsense"}, "{}").code == 2);
}

TEST_CASE("pullback of a non-scalar patch") {
  auto r = invoke({"--mode", "rational", "pullback"},
                  R"({"tensor":{"kind":"d"},"map":{"kind":"patch","n":1,"sigma":[1,2,3],"a":["1/2","9/10"]},)"
                  R"("point":["1/2","1/2"],"X":{"z":1},"Y":{"z":1}})");
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["pullback"] == "22/9");
  CHECK(doc["original"] == "2");
}

TEST_CASE("sweep writes CSV rows") {
  auto r = invoke({"sweep"}, R"({"quantity":"M_of_u","tensor":{"kind":"s","scale":2.25},"grid":[0.25,0.5,0.75]})");
  REQUIRE(r.code == 0);
  auto rows = lines(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == "u,value");
  CHECK(rows[2] == "0.5,0");
  CHECK(std::stod(rows[1].substr(rows[1].find(',') + 1)) == doctest::Approx(-2));

  auto rt = invoke({"sweep"}, R"({"quantity":"r_of_t","tensor":{"kind":"d"},"grid":[0.2,0.5]})");
  auto rrows = lines(rt.out);
  REQUIRE(rrows.size() == 3);
  CHECK(rrows[2] == "1,1");
  CHECK(std::stod(rrows[1].substr(rrows[1].find(',') + 1)) == doctest::Approx(0.0625));

  CHECK(invoke({"sweep"}, R"({"quantity":"x","tensor":{"kind":"d"}})").code == 2);
  CHECK(invoke({"sweep"}, R"({"quantity":"A1_diag","tensor":{"kind":"d"},"grid":[1.5]})").code == 2);
}

TEST_CASE("reconstruct through the CLI") {
  auto r = invoke({"--n-max", "3", "--trials", "50", "reconstruct"},
                  R"({"target":"lambda","family":{"kind":"d","scale":3.7}})");
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["value"].get<double>() == doctest::Approx(3.7));
  CHECK(doc["report"]["passed"] == true);

  auto bad = invoke({"--n-max", "3", "--trials", "50", "reconstruct"},
                    R"({"target":"mu","family":{"kind":"d"}})");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("PrereqFailed") != std::string::npos);
}

TEST_CASE("suite is deterministic and meets its expectations") {
  const std::vector<std::string> args{"--n-max", "3", "--trials", "50", "suite"};
  auto a = invoke(args, "");
  auto b = invoke(args, "");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  auto doc = nlohmann::json::parse(a.out);
  CHECK(doc["summary"]["unexpected"] == 0);
  CHECK(doc["summary"]["checks"].get<int>() == static_cast<int>(doc["results"].size()));

  auto exact = invoke({"--mode", "rational", "--n-max", "3", "--trials", "20", "suite"}, "");
  CHECK(exact.code == 0);
  for (const auto& r : nlohmann::json::parse(exact.out)["results"]) {
    if (r["check"] == "family_invariance" && r["expected"] == "passed") CHECK(r["report"]["max_deviation"] == 0.0);
  }
}
