#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace simplexgeo::cli {

struct RunConfig {
  std::uint64_t seed = 20240917;
  double tol = 1e-9;
  int n_max = 6;
  int trials = 1000;
  bool rational = false;
  std::string out;     // empty: standard output
  std::string config;  // empty: standard input
};

/// Exit codes: 0 ran (check failures are data), 1 domain error or unexpected
/// suite outcome, 2 malformed input.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// The canonical families with their expected outcomes. `all_expected` is
/// cleared when any outcome differs from its expectation.
nlohmann::ordered_json run_suite(const RunConfig& config, bool& all_expected);

}  // namespace simplexgeo::cli
