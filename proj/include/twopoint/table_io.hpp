#pragma once

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "twopoint/invariants.hpp"

namespace twopoint {

using ojson = nlohmann::ordered_json;

/// A table together with the lambda assignment it was evaluated at (empty if none).
struct TableFile {
  InvariantTable table;
  std::vector<Rat> lambda;

  friend bool operator==(const TableFile&, const TableFile&) = default;
};

inline ojson table_to_json(const TableFile& f) {
  const InvariantTable& t = f.table;
  ojson j;
  j["target"] = t.target;
  j["equivariant"] = t.equivariant;
  j["dim"] = t.dim;
  j["max_psi_total"] = t.max_psi_total;
  if (!f.lambda.empty()) {
    ojson lam = ojson::array();
    for (const auto& l : f.lambda) lam.push_back(l.str());
    j["lambda"] = lam;
  }
  ojson basis = ojson::array();
  for (std::size_t i = 0; i < t.names.size(); ++i) basis.push_back({{"name", t.names[i]}, {"degree", t.class_degrees[i].str()}});
  j["basis"] = basis;
  ojson degs = ojson::array();
  for (const auto& [d, c] : t.c1) degs.push_back({{"degree", d.str()}, {"c1", c.str()}});
  j["degrees"] = degs;
  ojson vals = ojson::array();
  for (const auto& [k, v] : t.values) {
    vals.push_back({{"a", k.a},
                    {"a_name", t.names[k.a]},
                    {"k", k.k},
                    {"b", k.b},
                    {"b_name", t.names[k.b]},
                    {"l", k.l},
                    {"degree", k.beta.str()},
                    {"value", v.str()}});
  }
  j["invariants"] = vals;
  return j;
}

inline std::string table_to_json_string(const TableFile& f) { return table_to_json(f).dump(2) + "\n"; }

inline TableFile table_from_json(const ojson& j) {
  TableFile f;
  InvariantTable& t = f.table;
  try {
    t.target = j.at("target").get<std::string>();
    t.equivariant = j.at("equivariant").get<bool>();
    t.dim = j.at("dim").get<int>();
    t.max_psi_total = j.at("max_psi_total").get<int>();
    if (j.contains("lambda"))
      for (const auto& l : j["lambda"]) f.lambda.push_back(Rat::parse(l.get<std::string>()));
    for (const auto& b : j.at("basis")) {
      t.names.push_back(b.at("name").get<std::string>());
      t.class_degrees.push_back(Rat::parse(b.at("degree").get<std::string>()));
    }
    for (const auto& d : j.at("degrees"))
      t.add_degree(Degree::parse(d.at("degree").get<std::string>()), Rat::parse(d.at("c1").get<std::string>()));
    for (const auto& e : j.at("invariants")) {
      std::size_t a = e.at("a").get<std::size_t>(), b = e.at("b").get<std::size_t>();
      if (a >= t.names.size() || b >= t.names.size()) throw ValidationError("table entry refers to a missing basis element");
      Rat v = Rat::parse(e.at("value").get<std::string>());
      if (v.is_zero()) throw ValidationError("table files store nonzero values only");
      t.set(a, e.at("k").get<int>(), b, e.at("l").get<int>(), Degree::parse(e.at("degree").get<std::string>()), v);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed table JSON: ") + e.what());
  }
  return f;
}

inline TableFile table_from_json_string(const std::string& s) {
  try {
    return table_from_json(ojson::parse(s));
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("table is not valid JSON: ") + e.what());
  }
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw ValidationError("unterminated quote in CSV line");
  out.push_back(cur);
  return out;
}

}  // namespace detail

/// CSV with '#'-prefixed metadata rows followed by one row per nonzero value.
inline std::string table_to_csv(const TableFile& f) {
  const InvariantTable& t = f.table;
  using detail::csv_field;
  std::ostringstream os;
  os << "#target," << csv_field(t.target) << "\n";
  os << "#equivariant," << (t.equivariant ? "true" : "false") << "\n";
  os << "#dim," << t.dim << "\n";
  os << "#max_psi_total," << t.max_psi_total << "\n";
  if (!f.lambda.empty()) {
    os << "#lambda";
    for (const auto& l : f.lambda) os << "," << l.str();
    os << "\n";
  }
  for (std::size_t i = 0; i < t.names.size(); ++i)
    os << "#basis," << csv_field(t.names[i]) << "," << t.class_degrees[i].str() << "\n";
  for (const auto& [d, c] : t.c1) os << "#degree," << csv_field(d.str()) << "," << c.str() << "\n";
  os << "a,a_name,k,b,b_name,l,degree,value\n";
  for (const auto& [k, v] : t.values)
    os << k.a << "," << csv_field(t.names[k.a]) << "," << k.k << "," << k.b << "," << csv_field(t.names[k.b]) << ","
       << k.l << "," << csv_field(k.beta.str()) << "," << v.str() << "\n";
  return os.str();
}

inline TableFile table_from_csv(const std::string& text) {
  TableFile f;
  InvariantTable& t = f.table;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  auto need = [](const std::vector<std::string>& row, std::size_t n) {
    if (row.size() != n) throw ValidationError("CSV row has " + std::to_string(row.size()) + " fields, expected " + std::to_string(n));
  };
  auto to_int = [](const std::string& s) {
    try {
      std::size_t pos = 0;
      long v = std::stol(s, &pos);
      if (pos != s.size()) throw ValidationError("bad integer '" + s + "' in CSV");
      return v;
    } catch (const std::logic_error&) {
      throw ValidationError("bad integer '" + s + "' in CSV");
    }
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = detail::csv_split(line);
    const std::string& tag = row[0];
    if (tag == "#target") {
      need(row, 2);
      t.target = row[1];
    } else if (tag == "#equivariant") {
      need(row, 2);
      t.equivariant = row[1] == "true";
    } else if (tag == "#dim") {
      need(row, 2);
      t.dim = static_cast<int>(to_int(row[1]));
    } else if (tag == "#max_psi_total") {
      need(row, 2);
      t.max_psi_total = static_cast<int>(to_int(row[1]));
    } else if (tag == "#lambda") {
      for (std::size_t i = 1; i < row.size(); ++i) f.lambda.push_back(Rat::parse(row[i]));
    } else if (tag == "#basis") {
      need(row, 3);
      t.names.push_back(row[1]);
      t.class_degrees.push_back(Rat::parse(row[2]));
    } else if (tag == "#degree") {
      need(row, 3);
      t.add_degree(Degree::parse(row[1]), Rat::parse(row[2]));
    } else if (tag == "a") {
      header = true;
    } else {
      if (!header) throw ValidationError("CSV value row before header");
      need(row, 8);
      std::size_t a = static_cast<std::size_t>(to_int(row[0])), b = static_cast<std::size_t>(to_int(row[3]));
      if (a >= t.names.size() || b >= t.names.size()) throw ValidationError("CSV entry refers to a missing basis element");
      t.set(a, static_cast<int>(to_int(row[2])), b, static_cast<int>(to_int(row[5])), Degree::parse(row[6]), Rat::parse(row[7]));
    }
  }
  if (!header) throw ValidationError("CSV table has no header row");
  return f;
}

}  // namespace twopoint
