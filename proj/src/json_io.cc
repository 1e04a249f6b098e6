#include "zsg/json_io.h"

#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "zsg/error.h"

namespace zsg {
namespace {

using nlohmann::json;

json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(what + ": unknown key \"" + item.key() + "\"");
    }
  }
}

template <class T>
T get_field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + ": missing \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(what + ": bad \"" + key + "\": " + e.what());
  }
}

}  // namespace

json matrix_to_json(const PayoffMatrix& a) {
  return json{{"m", a.rows()},
              {"l", a.cols()},
              {"entries", std::vector<double>(a.entries().begin(), a.entries().end())}};
}

PayoffMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("matrix must be a JSON object");
  reject_unknown_keys(j, {"m", "l", "entries"}, "matrix");
  const auto m = get_field<std::int64_t>(j, "m", "matrix");
  const auto l = get_field<std::int64_t>(j, "l", "matrix");
  auto entries = get_field<std::vector<double>>(j, "entries", "matrix");
  if (m < 1 || l < 1) throw ConfigError("matrix: m and l must be >= 1");
  try {
    return PayoffMatrix(static_cast<std::size_t>(m), static_cast<std::size_t>(l),
                        std::move(entries));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("matrix: ") + e.what());
  }
}

PayoffMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(parse_file(path));
}

json oracle_report_to_json(const OracleReport& r) {
  return json{{"quantity", r.quantity},
              {"oracle_value", r.oracle_value},
              {"main_value", r.main_value},
              {"abs_deviation", r.abs_deviation},
              {"rel_deviation", r.rel_deviation},
              {"trials", r.trials},
              {"stderr", r.stderr_value},
              {"pass", r.pass}};
}

RunConfig run_config_from_json(const json& j) {
  const std::string what = "config";
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown_keys(j, {"algo", "T", "sigma", "k", "seed", "matrix", "generator"},
                      what);
  RunConfig c;
  c.algo = parse_algorithm(get_field<std::string>(j, "algo", what));
  c.horizon = get_field<std::int64_t>(j, "T", what);
  c.sigma = get_field<double>(j, "sigma", what);
  if (j.contains("k")) c.k = get_field<std::int64_t>(j, "k", what);
  if (j.contains("seed")) c.seed = get_field<std::uint64_t>(j, "seed", what);

  if (j.contains("matrix") == j.contains("generator")) {
    throw ConfigError("config: give exactly one of \"matrix\" and \"generator\"");
  }
  if (j.contains("matrix")) {
    c.matrix = matrix_from_json(j.at("matrix"));
  } else {
    const json& g = j.at("generator");
    const std::string gw = "generator";
    if (!g.is_object()) throw ConfigError("generator must be a JSON object");
    reject_unknown_keys(g, {"m", "l", "entry_sigma", "seed"}, gw);
    InstanceSpec spec;
    const auto m = get_field<std::int64_t>(g, "m", gw);
    const auto l = get_field<std::int64_t>(g, "l", gw);
    if (m < 1 || l < 1) throw ConfigError("generator: m and l must be >= 1");
    spec.rows = static_cast<std::size_t>(m);
    spec.cols = static_cast<std::size_t>(l);
    spec.entry_sigma = g.contains("entry_sigma") ? get_field<double>(g, "entry_sigma", gw)
                                                 : c.sigma;
    spec.noise_sigma = c.sigma;
    if (g.contains("seed")) spec.seed = get_field<std::uint64_t>(g, "seed", gw);
    c.generator = spec;
  }
  return c;
}

RunConfig read_run_config_file(const std::string& path) {
  return run_config_from_json(parse_file(path));
}

}  // namespace zsg
