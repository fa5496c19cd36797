#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "twopoint/rat.hpp"

namespace twopoint {

/// Effective curve degree: a rational scalar (weighted projective spaces), an
/// integer scalar (projective spaces) or an integer vector of Mori coordinates
/// (toric targets). All are stored as rational vectors of fixed rank.
struct Degree {
  std::vector<Rat> c;

  Degree() = default;
  explicit Degree(std::vector<Rat> coords) : c(std::move(coords)) {}
  static Degree scalar(const Rat& d) { return Degree({d}); }
  static Degree zero(std::size_t rank) { return Degree(std::vector<Rat>(rank, Rat(0))); }

  std::size_t rank() const { return c.size(); }
  bool is_zero() const {
    for (const auto& x : c)
      if (!x.is_zero()) return false;
    return true;
  }
  bool effective() const {
    for (const auto& x : c)
      if (x.sign() < 0) return false;
    return true;
  }
  Rat total() const {
    Rat t(0);
    for (const auto& x : c) t += x;
    return t;
  }
  const Rat& operator[](std::size_t i) const { return c.at(i); }

  friend Degree operator+(const Degree& a, const Degree& b) {
    check_rank(a, b);
    Degree out = a;
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] += b.c[i];
    return out;
  }
  friend Degree operator-(const Degree& a, const Degree& b) {
    check_rank(a, b);
    Degree out = a;
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[i] -= b.c[i];
    return out;
  }
  friend bool operator==(const Degree&, const Degree&) = default;
  friend auto operator<=>(const Degree& a, const Degree& b) {
    // order by total degree first so tables list small degrees first
    if (auto t = a.total() <=> b.total(); t != 0) return t;
    return a.c <=> b.c;
  }

  /// "1", "1/2" for scalars; "(1,0)" for vectors.
  std::string str() const {
    if (c.size() == 1) return c[0].str();
    std::string s = "(";
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i) s += ",";
      s += c[i].str();
    }
    return s + ")";
  }
  static Degree parse(const std::string& s) {
    std::string body = s;
    if (!body.empty() && body.front() == '(') {
      if (body.back() != ')') throw ValidationError("malformed degree '" + s + "'");
      body = body.substr(1, body.size() - 2);
    }
    std::vector<Rat> out;
    std::size_t start = 0;
    while (true) {
      auto pos = body.find(',', start);
      out.push_back(Rat::parse(body.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return Degree(std::move(out));
  }

 private:
  static void check_rank(const Degree& a, const Degree& b) {
    if (a.c.size() != b.c.size()) throw ValidationError("degrees from different monoids");
  }
};

/// Degree-indexed table, truncated at a bound on the total degree.
template <class V>
struct NovikovTable {
  std::size_t rank = 1;
  Rat bound{0};
  std::map<Degree, V> entries;

  NovikovTable() = default;
  NovikovTable(std::size_t r, Rat b) : rank(r), bound(std::move(b)) {}

  bool admits(const Degree& d) const { return d.rank() == rank && d.effective() && d.total() <= bound; }

  void set(const Degree& d, V v) {
    if (!admits(d)) throw ValidationError("degree " + d.str() + " outside the table's monoid or bound");
    entries.insert_or_assign(d, std::move(v));
  }
  const V* find(const Degree& d) const {
    auto it = entries.find(d);
    return it == entries.end() ? nullptr : &it->second;
  }
};

/// Cauchy product over the degree monoid: C(b) = sum_{b1 + b2 = b} mul(A(b1), B(b2)),
/// keeping only degrees within min(bound_A, bound_B).
template <class V, class Mul>
NovikovTable<V> novikov_convolve(const NovikovTable<V>& a, const NovikovTable<V>& b, Mul mul) {
  if (a.rank != b.rank) throw ValidationError("convolving tables over different degree monoids");
  NovikovTable<V> out(a.rank, std::min(a.bound, b.bound));
  for (const auto& [da, va] : a.entries) {
    for (const auto& [db, vb] : b.entries) {
      Degree d = da + db;
      if (!out.admits(d)) continue;
      auto it = out.entries.find(d);
      if (it == out.entries.end())
        out.entries.emplace(d, mul(va, vb));
      else
        it->second += mul(va, vb);
    }
  }
  return out;
}

template <class V>
NovikovTable<V> novikov_convolve(const NovikovTable<V>& a, const NovikovTable<V>& b) {
  return novikov_convolve(a, b, [](const V& x, const V& y) { return x * y; });
}

}  // namespace twopoint
