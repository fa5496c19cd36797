#pragma once

#include <algorithm>
#include <climits>
#include <map>
#include <ostream>
#include <sstream>

#include "twopoint/cohclass.hpp"
#include "twopoint/rat.hpp"

namespace twopoint {

/// Depth value marking a series that is an exact (finite) Laurent polynomial.
inline constexpr int kExactDepth = INT_MAX / 8;

/// Truncated Laurent series in z with coefficients in C.
///
/// Every series carries a box [-depth, top]: stored exponents lie in it, and
/// every coefficient inside it is exact. Coefficients below -depth are unknown.
/// Binary operations compute the largest box on which the result is exact:
///   sum:     top = max, depth = min
///   product: top = ta + tb, depth = min(Da - tb, Db - ta)
template <class C>
class ZSeries {
 public:
  ZSeries() = default;
  ZSeries(int top, int depth) : top_(top), depth_(depth) {}

  static ZSeries constant(const C& c) {
    ZSeries s(0, kExactDepth);
    s.set(0, c);
    return s;
  }
  /// c * z^e as an exact series.
  static ZSeries monomial(const C& c, int e) {
    ZSeries s(e, kExactDepth);
    s.set(e, c);
    return s;
  }

  /// Same coefficients, declared exact.
  ZSeries as_exact() const {
    ZSeries out = *this;
    out.depth_ = kExactDepth;
    return out;
  }

  int top() const { return top_; }
  int depth() const { return depth_; }
  bool exact() const { return depth_ >= kExactDepth; }
  const std::map<int, C>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// Largest exponent with a nonzero coefficient (INT_MIN for zero).
  int max_exponent() const { return terms_.empty() ? INT_MIN : terms_.rbegin()->first; }
  int min_exponent() const { return terms_.empty() ? INT_MAX : terms_.begin()->first; }

  C coeff(int e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? C{} : it->second;
  }

  void set(int e, const C& c) {
    if (e > top_) throw ValidationError("exponent " + std::to_string(e) + " above series top " + std::to_string(top_));
    if (e < -depth_) return;
    if (twopoint::is_zero(c))
      terms_.erase(e);
    else
      terms_[e] = c;
  }
  void add(int e, const C& c) {
    if (e > top_ || e < -depth_ || twopoint::is_zero(c)) {
      if (e > top_ && !twopoint::is_zero(c))
        throw ValidationError("exponent " + std::to_string(e) + " above series top " + std::to_string(top_));
      return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (twopoint::is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Drops everything below -depth.
  ZSeries truncated(int depth) const {
    ZSeries out(top_, std::min(depth, depth_));
    for (const auto& [e, c] : terms_)
      if (e >= -out.depth_) out.terms_.emplace(e, c);
    return out;
  }

  /// Lowers the declared top to `top`; fails if a nonzero term would be lost.
  ZSeries with_top(int top) const {
    if (max_exponent() > top)
      throw ValidationError("series has a nonzero z^" + std::to_string(max_exponent()) + " term above requested top");
    ZSeries out = *this;
    out.top_ = top;
    return out;
  }

  /// Substitution z -> -z.
  ZSeries negated_z() const {
    ZSeries out(top_, depth_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, (e % 2 == 0) ? c : c * Rat(-1));
    return out;
  }

  /// Multiplication by z^k.
  ZSeries shifted(int k) const {
    ZSeries out(top_ + k, exact() ? kExactDepth : depth_ - k);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
    return out;
  }

  ZSeries& operator+=(const ZSeries& o) {
    top_ = std::max(top_, o.top_);
    depth_ = std::min(depth_, o.depth_);
    prune_below();
    for (const auto& [e, c] : o.terms_) add(e, c);
    return *this;
  }
  ZSeries& operator-=(const ZSeries& o) {
    top_ = std::max(top_, o.top_);
    depth_ = std::min(depth_, o.depth_);
    prune_below();
    for (const auto& [e, c] : o.terms_) add(e, c * Rat(-1));
    return *this;
  }
  ZSeries& operator*=(const Rat& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c = c * s;
    return *this;
  }
  friend ZSeries operator+(ZSeries a, const ZSeries& b) { return a += b; }
  friend ZSeries operator-(ZSeries a, const ZSeries& b) { return a -= b; }
  friend ZSeries operator*(ZSeries a, const Rat& s) { return a *= s; }
  friend ZSeries operator*(const Rat& s, ZSeries a) { return a *= s; }

  friend ZSeries operator*(const ZSeries& a, const ZSeries& b) {
    int top = a.top_ + b.top_;
    int depth = product_depth(a, b);
    ZSeries out(top, depth);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        int e = ea + eb;
        if (e < -depth) continue;
        out.add(e, ca * cb);
      }
    }
    return out;
  }
  ZSeries& operator*=(const ZSeries& o) { return *this = *this * o; }

  /// Equality of coefficients on the common exact box.
  friend bool operator==(const ZSeries& a, const ZSeries& b) {
    int depth = std::min(a.depth_, b.depth_);
    auto ia = a.terms_.lower_bound(-depth);
    auto ib = b.terms_.lower_bound(-depth);
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      if (ia == a.terms_.end() || ib == b.terms_.end()) return false;
      if (ia->first != ib->first || !(ia->second == ib->second)) return false;
      ++ia;
      ++ib;
    }
    return true;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!first) os << " + ";
      first = false;
      os << "(" << it->second << ")z^" << it->first;
    }
    return os.str();
  }

 private:
  static int product_depth(const ZSeries& a, const ZSeries& b) {
    long da = a.exact() ? LONG_MAX / 4 : static_cast<long>(a.depth_) - b.top_;
    long db = b.exact() ? LONG_MAX / 4 : static_cast<long>(b.depth_) - a.top_;
    long d = std::min(da, db);
    return d >= kExactDepth ? kExactDepth : static_cast<int>(d);
  }
  void prune_below() {
    if (depth_ >= kExactDepth) return;
    terms_.erase(terms_.begin(), terms_.lower_bound(-depth_));
  }

  std::map<int, C> terms_;
  int top_ = 0;
  int depth_ = kExactDepth;
};

template <class C>
bool is_zero(const ZSeries<C>& s) {
  return s.is_zero();
}

template <class C>
std::ostream& operator<<(std::ostream& os, const ZSeries<C>& s) {
  return os << s.str();
}

inline Rat unit_like(const Rat&) { return Rat(1); }
inline CohClass unit_like(const CohClass& c) {
  if (!c.has_sector()) return CohClass();
  return CohClass::constant(c.sector(), c.generators(), c.dim(), Rat(1));
}

/// Expansion of 1/(w*c + b*z) = sum_{m>=0} (-1)^m w^m c^m b^{-m-1} z^{-m-1}.
///
/// For nilpotent c the sum terminates and the result is exact. Otherwise it is
/// cut at z^{-depth}.
template <class C>
ZSeries<C> invert_affine(const C& c, const Rat& w, const Rat& b, int depth) {
  if (b.is_zero()) throw ArithmeticError("invert_affine: zero coefficient of z");
  if (depth < 1) throw ValidationError("invert_affine: depth must be positive");
  ZSeries<C> out(-1, depth);
  C power = unit_like(c);
  Rat binv = Rat(1) / b;
  Rat scale = binv;  // (-w)^m b^{-m-1}
  for (int m = 0; m + 1 <= depth; ++m) {
    if (twopoint::is_zero(power)) {
      return out.as_exact();
    }
    out.add(-m - 1, power * scale);
    power = power * c;
    scale = scale * (-w) * binv;
  }
  if (twopoint::is_zero(power)) return out.as_exact();
  return out;
}

}  // namespace twopoint
