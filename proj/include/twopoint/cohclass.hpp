#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "twopoint/rat.hpp"

namespace twopoint {

/// Element of one sector of H*(IX): a polynomial in the divisor generators
/// P_1..P_k, truncated at the sector's complex dimension.
///
/// A default-constructed class is the zero class of no particular sector and
/// combines with any sector; every other class is pinned to one sector.
class CohClass {
 public:
  using Exponents = std::vector<int>;

  CohClass() = default;
  CohClass(Rat sector, int generators, int dim) : sector_(std::move(sector)), gens_(generators), dim_(dim) {
    if (generators < 0 || dim < 0) throw ValidationError("negative generator count or sector dimension");
  }

  static CohClass constant(const Rat& sector, int generators, int dim, const Rat& c) {
    CohClass out(sector, generators, dim);
    out.add_term(Exponents(static_cast<std::size_t>(generators), 0), c);
    return out;
  }
  static CohClass monomial(const Rat& sector, int generators, int dim, Exponents e, const Rat& c = Rat(1)) {
    CohClass out(sector, generators, dim);
    out.add_term(std::move(e), c);
    return out;
  }
  static CohClass generator(const Rat& sector, int generators, int dim, int i) {
    Exponents e(static_cast<std::size_t>(generators), 0);
    e.at(static_cast<std::size_t>(i)) = 1;
    return monomial(sector, generators, dim, std::move(e));
  }

  bool has_sector() const { return sector_.has_value(); }
  const Rat& sector() const {
    if (!sector_) throw SectorError("sectorless zero class has no sector");
    return *sector_;
  }
  int generators() const { return gens_; }
  int dim() const { return dim_; }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Exponents, Rat>& terms() const { return terms_; }

  Rat coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }
  /// Coefficient of P^p for single-generator classes.
  Rat coeff(int p) const { return coeff(Exponents{p}); }

  /// True when the constant term vanishes, so some power of the class is zero.
  bool nilpotent() const {
    for (const auto& [e, c] : terms_)
      if (degree(e) == 0) return false;
    return true;
  }

  CohClass& operator+=(const CohClass& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  CohClass& operator-=(const CohClass& o) {
    adopt(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  CohClass& operator*=(const Rat& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }
  friend CohClass operator+(CohClass a, const CohClass& b) { return a += b; }
  friend CohClass operator-(CohClass a, const CohClass& b) { return a -= b; }
  friend CohClass operator*(CohClass a, const Rat& s) { return a *= s; }
  friend CohClass operator*(const Rat& s, CohClass a) { return a *= s; }
  CohClass operator-() const { return *this * Rat(-1); }

  friend CohClass operator*(const CohClass& a, const CohClass& b) {
    CohClass out;
    if (a.sector_ && b.sector_) {
      check_compatible(a, b);
      out = CohClass(*a.sector_, a.gens_, a.dim_);
    } else if (a.sector_) {
      out = CohClass(*a.sector_, a.gens_, a.dim_);
    } else if (b.sector_) {
      out = CohClass(*b.sector_, b.gens_, b.dim_);
    }
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }
  CohClass& operator*=(const CohClass& o) { return *this = *this * o; }

  friend bool operator==(const CohClass& a, const CohClass& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.sector_ == b.sector_ && a.terms_ == b.terms_;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (!first) os << " + ";
      first = false;
      os << "(" << c << ")";
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) os << "*P" << (e.size() > 1 ? std::to_string(i + 1) : "") << "^" << e[i];
    }
    if (sector_ && !sector_->is_zero()) os << " [1_" << *sector_ << "]";
    return os.str();
  }

 private:
  static int degree(const Exponents& e) {
    int d = 0;
    for (int x : e) d += x;
    return d;
  }
  static void check_compatible(const CohClass& a, const CohClass& b) {
    if (*a.sector_ != *b.sector_)
      throw SectorError("cannot combine classes from sectors " + a.sector_->str() + " and " + b.sector_->str());
    if (a.gens_ != b.gens_ || a.dim_ != b.dim_)
      throw SectorError("classes over incompatible generator sets");
  }
  void adopt(const CohClass& o) {
    if (!o.sector_) return;
    if (!sector_) {
      sector_ = o.sector_;
      gens_ = o.gens_;
      dim_ = o.dim_;
      return;
    }
    check_compatible(*this, o);
  }
  void add_term(Exponents e, const Rat& c) {
    if (static_cast<int>(e.size()) != gens_) throw ValidationError("exponent vector has wrong length");
    if (degree(e) > dim_ || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  std::optional<Rat> sector_;
  int gens_ = 0;
  int dim_ = 0;
  std::map<Exponents, Rat> terms_;
};

inline bool is_zero(const CohClass& c) { return c.is_zero(); }

inline std::ostream& operator<<(std::ostream& os, const CohClass& c) { return os << c.str(); }

}  // namespace twopoint
