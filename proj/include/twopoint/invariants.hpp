#pragma once

#include <compare>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "twopoint/novikov.hpp"
#include "twopoint/rat.hpp"

namespace twopoint {

/// Key of <v_a psi^k, v_b psi^l>_beta. Ordered by basis indices, then psi
/// powers, then degree.
struct InvariantKey {
  std::size_t a = 0;
  std::size_t b = 0;
  int k = 0;
  int l = 0;
  Degree beta;

  friend bool operator==(const InvariantKey&, const InvariantKey&) = default;
  friend auto operator<=>(const InvariantKey&, const InvariantKey&) = default;
};

/// Genus-zero two-point descendants of one target, over a class basis.
/// Only nonzero values are stored; keys with k + l <= max_psi_total and a
/// listed degree that are absent are exactly zero.
struct InvariantTable {
  std::string target;
  std::vector<std::string> names;
  std::vector<Rat> class_degrees;
  int dim = 0;
  bool equivariant = false;
  int max_psi_total = 0;
  std::map<Degree, Rat> c1;  // covered nonzero degrees with <c1(TX), beta>
  std::map<InvariantKey, Rat> values;

  template <class Target>
  static InvariantTable for_target(const Target& t) {
    InvariantTable out;
    out.target = t.name;
    for (const auto& b : t.basis) {
      out.names.push_back(b.name);
      out.class_degrees.push_back(b.degree);
    }
    out.dim = t.dim;
    out.equivariant = t.equivariant;
    return out;
  }

  void add_degree(const Degree& d, const Rat& c) { c1.insert_or_assign(d, c); }

  void set(std::size_t a, int k, std::size_t b, int l, const Degree& d, const Rat& v) {
    InvariantKey key{a, b, k, l, d};
    if (v.is_zero())
      values.erase(key);
    else
      values.insert_or_assign(std::move(key), v);
  }

  Rat value(std::size_t a, int k, std::size_t b, int l, const Degree& d) const {
    if (k + l > max_psi_total) throw ValidationError("psi powers beyond the exact range of the table");
    auto it = values.find(InvariantKey{a, b, k, l, d});
    return it == values.end() ? Rat(0) : it->second;
  }

  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
      if (names[i] == name) return i;
    throw ValidationError("no basis element named '" + name + "' in table for " + target);
  }

  /// True when the key can be nonzero by the dimension axiom (non-equivariant).
  bool admissible(std::size_t a, int k, std::size_t b, int l, const Degree& d) const {
    return class_degrees.at(a) + class_degrees.at(b) + Rat(k + l) == c1.at(d) + Rat(dim - 1);
  }

  friend bool operator==(const InvariantTable&, const InvariantTable&) = default;
};

/// One-point descendants <v_a psi^k>_{0,1,beta}.
struct OnePointTable {
  int max_psi = 0;
  std::map<std::tuple<std::size_t, int, Degree>, Rat> values;

  Rat value(std::size_t a, int k, const Degree& d) const {
    auto it = values.find({a, k, d});
    return it == values.end() ? Rat(0) : it->second;
  }
};

/// Outcome of a named consistency check.
struct CheckReport {
  CheckReport() = default;
  explicit CheckReport(std::string n) : name(std::move(n)) {}

  std::string name;
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped = 0;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
  std::string str() const {
    std::string s = (pass ? "PASS " : "FAIL ") + name + " (" + std::to_string(checked) + " checked";
    if (skipped) s += ", " + std::to_string(skipped) + " skipped";
    s += ")";
    if (!detail.empty()) s += ": " + detail;
    return s;
  }
};

/// value(a,k,b,l) = value(b,l,a,k) for every stored entry.
inline CheckReport check_swap_symmetry(const InvariantTable& t) {
  CheckReport r{"swap-symmetry"};
  for (const auto& [key, v] : t.values) {
    ++r.checked;
    Rat w = t.value(key.b, key.l, key.a, key.k, key.beta);
    if (w != v)
      r.fail("<" + t.names[key.a] + " psi^" + std::to_string(key.k) + ", " + t.names[key.b] + " psi^" +
             std::to_string(key.l) + ">_" + key.beta.str() + " = " + v.str() + " but swapped = " + w.str());
  }
  return r;
}

/// Every nonzero entry of a non-equivariant table satisfies the dimension axiom.
inline CheckReport check_dimension(const InvariantTable& t) {
  CheckReport r{"dimension-filter"};
  if (t.equivariant) {
    r.skipped = t.values.size();
    r.detail = "equivariant table";
    return r;
  }
  for (const auto& [key, v] : t.values) {
    ++r.checked;
    if (!t.admissible(key.a, key.k, key.b, key.l, key.beta))
      r.fail("nonzero inadmissible entry <" + t.names[key.a] + " psi^" + std::to_string(key.k) + ", " +
             t.names[key.b] + " psi^" + std::to_string(key.l) + ">_" + key.beta.str() + " = " + v.str());
  }
  return r;
}

}  // namespace twopoint
