#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "zsg/experiments.h"
#include "zsg/learners.h"
#include "zsg/matrix_game.h"
#include "zsg/oracles.h"

namespace zsg {

// {"m": rows, "l": cols, "entries": [row-major reals]}.
nlohmann::json matrix_to_json(const PayoffMatrix& a);
// Throws ConfigError on a malformed object.
PayoffMatrix matrix_from_json(const nlohmann::json& j);
PayoffMatrix read_matrix_file(const std::string& path);

nlohmann::json oracle_report_to_json(const OracleReport& r);

// Single-run configuration. Exactly one of `matrix` and `generator` is set.
struct RunConfig {
  Algorithm algo = Algorithm::kAe;
  std::int64_t horizon = 0;
  double sigma = 0.0;
  std::int64_t k = 0;
  std::uint64_t seed = 0;
  std::optional<PayoffMatrix> matrix;
  std::optional<InstanceSpec> generator;
};

// Fields: algo, T, sigma, k (etc only), seed, and either "matrix" (matrix
// object) or "generator" {"m", "l", "entry_sigma", "seed"}. Unknown keys are
// rejected.
RunConfig run_config_from_json(const nlohmann::json& j);
RunConfig read_run_config_file(const std::string& path);

}  // namespace zsg
