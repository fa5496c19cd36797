#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "twopoint/error.hpp"

namespace twopoint {

/// Exact rational number in canonical form (reduced, positive denominator).
/// Thin value wrapper over GMP's mpq_class.
class Rat {
 public:
  Rat() = default;
  Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  Rat(int n) : v_(static_cast<long>(n)) {}  // NOLINT
  Rat(long n, long d) {
    if (d == 0) throw ArithmeticError("rational with zero denominator");
    v_ = mpq_class(n, d);
    v_.canonicalize();
  }
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }

  /// Parses "p", "-p" or "p/q".
  static Rat parse(std::string_view s) {
    std::string str(s);
    auto trim = [](std::string& t) {
      while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.erase(t.begin());
      while (!t.empty() && (t.back() == ' ' || t.back() == '\t')) t.pop_back();
    };
    trim(str);
    if (str.empty()) throw ValidationError("empty rational literal");
    if (str.front() == '+') str.erase(str.begin());
    mpq_class q;
    if (q.set_str(str, 10) != 0) throw ValidationError("malformed rational literal '" + str + "'");
    if (q.get_den() == 0) throw ArithmeticError("rational with zero denominator");
    q.canonicalize();
    return Rat(q);
  }

  mpz_class num() const { return v_.get_num(); }
  mpz_class den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  /// Largest integer not exceeding the value.
  mpz_class floor() const {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
  }
  mpz_class ceil() const {
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
    return q;
  }
  /// Fractional part in [0, 1).
  Rat frac() const { return Rat(mpq_class(v_ - mpq_class(floor()))); }

  long to_long() const {
    if (!is_integer() || !v_.get_num().fits_slong_p())
      throw ArithmeticError("rational " + str() + " is not a machine integer");
    return v_.get_num().get_si();
  }

  std::string str() const {
    if (v_.get_den() == 1) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw ArithmeticError("division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class v_;
};

inline bool is_zero(const Rat& r) { return r.is_zero(); }

inline Rat pow(const Rat& base, unsigned e) {
  Rat out(1);
  for (unsigned i = 0; i < e; ++i) out *= base;
  return out;
}

inline Rat factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rat(mpq_class(f));
}

inline Rat binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return Rat(0);
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rat(mpq_class(b));
}

}  // namespace twopoint
