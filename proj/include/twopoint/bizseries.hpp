#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <utility>

#include "twopoint/zseries.hpp"

namespace twopoint {

/// Truncated series in 1/z1, 1/z2 (all exponents <= 0).
///
/// Coefficients of z1^{-a} z2^{-b} are exact when a <= depth1, b <= depth2 and
/// a + b <= diagonal. The diagonal bound is what survives exact division by
/// (z1 + z2), which mixes the two variables along anti-diagonals.
template <class C>
class BiZSeries {
 public:
  using Key = std::pair<int, int>;  // (e1, e2), both <= 0

  BiZSeries() = default;
  BiZSeries(int depth1, int depth2, int diagonal) : depth1_(depth1), depth2_(depth2), diagonal_(diagonal) {}

  /// a(z1) * b(z2).
  static BiZSeries outer(const ZSeries<C>& a, const ZSeries<C>& b) {
    if (a.top() > 0 || b.top() > 0) throw ValidationError("outer product needs series without positive z powers");
    BiZSeries out(a.depth(), b.depth(), clamp_sum(a.depth(), b.depth()));
    for (const auto& [ea, ca] : a.terms())
      for (const auto& [eb, cb] : b.terms()) out.add(ea, eb, ca * cb);
    return out;
  }
  static BiZSeries constant(const C& c) {
    BiZSeries out(kExactDepth, kExactDepth, kExactDepth);
    out.add(0, 0, c);
    return out;
  }

  int depth1() const { return depth1_; }
  int depth2() const { return depth2_; }
  int diagonal() const { return diagonal_; }
  const std::map<Key, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool in_box(int e1, int e2) const {
    return e1 <= 0 && e2 <= 0 && -e1 <= depth1_ && -e2 <= depth2_ &&
           static_cast<long>(-e1) + static_cast<long>(-e2) <= diagonal_;
  }

  C coeff(int e1, int e2) const {
    auto it = terms_.find({e1, e2});
    return it == terms_.end() ? C{} : it->second;
  }

  void add(int e1, int e2, const C& c) {
    if (e1 > 0 || e2 > 0) {
      if (!twopoint::is_zero(c)) throw ValidationError("positive exponent in two-variable series");
      return;
    }
    if (!in_box(e1, e2) || twopoint::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(Key{e1, e2}, c);
    if (!inserted) {
      it->second += c;
      if (twopoint::is_zero(it->second)) terms_.erase(it);
    }
  }

  BiZSeries& operator+=(const BiZSeries& o) {
    shrink_to(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c);
    return *this;
  }
  BiZSeries& operator-=(const BiZSeries& o) {
    shrink_to(o);
    for (const auto& [k, c] : o.terms_) add(k.first, k.second, c * Rat(-1));
    return *this;
  }
  friend BiZSeries operator+(BiZSeries a, const BiZSeries& b) { return a += b; }
  friend BiZSeries operator-(BiZSeries a, const BiZSeries& b) { return a -= b; }

  /// Multiplication by (z1 + z2), kept inside the current box.
  BiZSeries times_z1_plus_z2() const {
    BiZSeries out(depth1_, depth2_, diagonal_);
    for (const auto& [k, c] : terms_) {
      out.add(k.first + 1, k.second, c);
      out.add(k.first, k.second + 1, c);
    }
    return out;
  }

  friend bool operator==(const BiZSeries& a, const BiZSeries& b) {
    BiZSeries x = a;
    x -= b;
    return x.is_zero();
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c << ")z1^" << k.first << "z2^" << k.second;
    }
    return os.str();
  }

 private:
  static int clamp_sum(int a, int b) {
    long s = static_cast<long>(a) + b;
    return s >= kExactDepth ? kExactDepth : static_cast<int>(s);
  }
  void shrink_to(const BiZSeries& o) {
    depth1_ = std::min(depth1_, o.depth1_);
    depth2_ = std::min(depth2_, o.depth2_);
    diagonal_ = std::min(diagonal_, o.diagonal_);
    std::erase_if(terms_, [this](const auto& kv) { return !in_box(kv.first.first, kv.first.second); });
  }

  std::map<Key, C> terms_;
  int depth1_ = kExactDepth;
  int depth2_ = kExactDepth;
  int diagonal_ = kExactDepth;
};

template <class C>
bool is_zero(const BiZSeries<C>& s) {
  return s.is_zero();
}

/// Exact quotient R with (z1 + z2) R = T.
///
/// Writing u = 1/z1, v = 1/z2, we have z1 + z2 = (u + v)/(uv), so R = uv T/(u + v).
/// Each homogeneous component T_n = sum_a t_a u^a v^{n-a} is divided by (u + v)
/// with q_0 = t_0, q_a = t_a - q_{a-1}; the remainder t_n - q_{n-1} must vanish.
/// Only anti-diagonals lying fully inside T's box are processed, and the result
/// is exact on a + b <= (that bound) + 1.
template <class C>
BiZSeries<C> divide_by_z1_plus_z2(const BiZSeries<C>& t) {
  long full = std::min<long>({static_cast<long>(t.diagonal()), static_cast<long>(t.depth1()),
                              static_cast<long>(t.depth2())});
  // an anti-diagonal a+b = n lies in the box iff n <= min(depth1, depth2, diagonal)
  int nmax = static_cast<int>(std::min<long>(full, kExactDepth - 1));
  int observed = 0;
  for (const auto& [k, c] : t.terms()) observed = std::max(observed, -k.first - k.second);
  nmax = std::min(nmax, observed);

  int out_diag = static_cast<int>(std::min<long>(full + 1, kExactDepth));
  BiZSeries<C> out(kExactDepth, kExactDepth, out_diag);
  for (int n = 0; n <= nmax; ++n) {
    C prev{};
    for (int a = 0; a < n; ++a) {
      C q = t.coeff(-a, -(n - a)) - prev;
      // q u^a v^{n-1-a} times uv -> u^{a+1} v^{n-a}
      out.add(-(a + 1), -(n - a), q);
      prev = q;
    }
    C rem = t.coeff(-n, 0) - prev;
    if (!twopoint::is_zero(rem)) {
      std::ostringstream os;
      os << "nonzero remainder " << rem << " dividing by (z1+z2) on anti-diagonal " << n;
      throw DivisibilityError(os.str(), n);
    }
  }
  return out;
}

}  // namespace twopoint
