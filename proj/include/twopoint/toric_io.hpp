#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "twopoint/toric.hpp"

namespace twopoint {

namespace detail {

inline Rat json_rat(const nlohmann::json& v, const std::string& what) {
  if (v.is_number_integer()) return Rat(v.get<long>());
  if (v.is_string()) return Rat::parse(v.get<std::string>());
  throw ValidationError("toric: " + what + " must be an integer or a rational string");
}

inline std::vector<long> json_longs(const nlohmann::json& v, const std::string& what) {
  if (!v.is_array()) throw ValidationError("toric: " + what + " must be an array of integers");
  std::vector<long> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) throw ValidationError("toric: " + what + " must contain integers only");
    out.push_back(x.get<long>());
  }
  return out;
}

inline std::vector<Rat> json_lambda(const nlohmann::json& v) {
  if (!v.is_array()) throw ValidationError("toric: lambda must be an array");
  std::vector<Rat> out;
  for (const auto& x : v) out.push_back(json_rat(x, "lambda entry"));
  return out;
}

}  // namespace detail

/// Reads a toric spec. Keys: name, dim, rays, max_cones (1-based), divisor_matrix,
/// mori [{degrees, coords}], optional lambda (one array or two arrays).
inline ToricSpec parse_toric_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("toric: spec must be a JSON object");
  for (const char* key : {"dim", "rays", "max_cones", "divisor_matrix", "mori"})
    if (!j.contains(key)) throw ValidationError(std::string("toric: missing key '") + key + "'");
  ToricSpec s;
  s.name = j.value("name", std::string("toric"));
  if (!j["dim"].is_number_integer()) throw ValidationError("toric: dim must be an integer");
  s.n = j["dim"].get<int>();
  for (const auto& r : j["rays"]) s.rays.push_back(detail::json_longs(r, "ray"));
  for (const auto& c : j["max_cones"]) {
    std::vector<std::size_t> cone;
    for (long i : detail::json_longs(c, "max cone")) {
      if (i < 1) throw ValidationError("toric: max_cones use 1-based ray indices");
      cone.push_back(static_cast<std::size_t>(i - 1));
    }
    std::sort(cone.begin(), cone.end());
    s.cones.push_back(cone);
  }
  for (const auto& r : j["divisor_matrix"]) s.m.push_back(detail::json_longs(r, "divisor matrix row"));
  for (const auto& g : j["mori"]) {
    if (!g.is_object() || !g.contains("degrees") || !g.contains("coords"))
      throw ValidationError("toric: each Mori generator needs degrees and coords");
    s.mori.push_back({detail::json_longs(g["degrees"], "Mori degrees"), detail::json_longs(g["coords"], "Mori coords")});
  }
  if (j.contains("lambda")) {
    const auto& l = j["lambda"];
    if (l.is_array() && !l.empty() && l[0].is_array()) {
      if (l.size() != 2) throw ValidationError("toric: lambda must be one assignment or a pair of assignments");
      s.lambda_a = detail::json_lambda(l[0]);
      s.lambda_b = detail::json_lambda(l[1]);
    } else {
      s.lambda_a = detail::json_lambda(l);
    }
  }
  validate_toric(s);
  return s;
}

inline ToricSpec load_toric_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open toric spec '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("toric spec '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_toric_json(j);
}

}  // namespace twopoint
