#pragma once

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "twopoint/invariants.hpp"
#include "twopoint/projective.hpp"

namespace twopoint {

/// Insertion tau_k(P^a).
struct Insertion {
  int k = 0;
  int a = 0;
  auto operator<=>(const Insertion&) const = default;
};

/// Which psi-carrying slot topological recursion peels off.
enum class TrrSchedule { FirstPsi, LastPsi };

/// Genus-0 descendant invariants of P^r (r = 1, 2) reconstructed from the
/// string, dilaton and divisor equations, genus-0 topological recursion, the
/// degree-0 multinomial formula and the primary numbers (1 line through P^1,
/// Kontsevich's N_d for P^2). Independent of the J-function machinery.
class DescendantOracle {
 public:
  explicit DescendantOracle(int r, TrrSchedule schedule = TrrSchedule::FirstPsi) : r_(r), schedule_(schedule) {
    if (r != 1 && r != 2) throw ValidationError("oracle supports P^1 and P^2 only");
  }

  int r() const { return r_; }

  Rat invariant(std::vector<Insertion> ins, long d) {
    for (const auto& x : ins)
      if (x.k < 0 || x.a < 0 || x.a > r_) return Rat(0);
    if (d < 0) return Rat(0);
    std::sort(ins.begin(), ins.end());
    const long n = static_cast<long>(ins.size());
    long lhs = 0;
    for (const auto& x : ins) lhs += x.k + x.a;
    if (lhs != r_ + (r_ + 1) * d + n - 3) return Rat(0);
    if (d == 0) return degree_zero(ins);

    auto key = std::make_pair(d, ins);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Rat v = reconstruct(ins, d);
    memo_.emplace(std::move(key), v);
    return v;
  }

  /// Kontsevich's count of rational plane curves of degree d through 3d - 1 points.
  static Rat kontsevich(long d) {
    static std::map<long, Rat> cache{{1, Rat(1)}};
    if (d < 1) throw ValidationError("Kontsevich number needs d >= 1");
    if (auto it = cache.find(d); it != cache.end()) return it->second;
    Rat sum(0);
    for (long a = 1; a < d; ++a) {
      long b = d - a;
      Rat t = kontsevich(a) * kontsevich(b) * Rat(a * a) * Rat(b) *
              (Rat(b) * binomial(static_cast<unsigned>(3 * d - 4), static_cast<unsigned>(3 * a - 2)) -
               Rat(a) * binomial(static_cast<unsigned>(3 * d - 4), static_cast<unsigned>(3 * a - 1)));
      sum += t;
    }
    cache.emplace(d, sum);
    return sum;
  }

 private:
  Rat degree_zero(const std::vector<Insertion>& ins) const {
    const long n = static_cast<long>(ins.size());
    if (n < 3) return Rat(0);
    long asum = 0, ksum = 0;
    for (const auto& x : ins) {
      asum += x.a;
      ksum += x.k;
    }
    if (asum != r_ || ksum != n - 3) return Rat(0);
    Rat v = factorial(static_cast<unsigned>(n - 3));
    for (const auto& x : ins) v /= factorial(static_cast<unsigned>(x.k));
    return v;
  }

  static std::vector<Insertion> without(const std::vector<Insertion>& ins, std::size_t i) {
    std::vector<Insertion> out;
    for (std::size_t j = 0; j < ins.size(); ++j)
      if (j != i) out.push_back(ins[j]);
    return out;
  }

  Rat reconstruct(const std::vector<Insertion>& ins, long d) {
    const std::size_t n = ins.size();
    // string
    for (std::size_t i = 0; i < n; ++i) {
      if (ins[i].k == 0 && ins[i].a == 0) {
        auto rest = without(ins, i);
        Rat v(0);
        for (std::size_t j = 0; j < rest.size(); ++j) {
          if (rest[j].k == 0) continue;
          auto t = rest;
          --t[j].k;
          v += invariant(t, d);
        }
        return v;
      }
    }
    // dilaton
    for (std::size_t i = 0; i < n; ++i) {
      if (ins[i].k == 1 && ins[i].a == 0) return Rat(static_cast<long>(n) - 3) * invariant(without(ins, i), d);
    }
    bool psi = false;
    for (const auto& x : ins) psi = psi || x.k > 0;
    if (psi && n >= 3) return trr(ins, d);
    if (psi) {
      // inverse divisor: <X> = (<tau_0(P) X> - sum_j <X with tau_{k_j - 1}(P gamma_j)>) / d
      auto more = ins;
      more.push_back({0, 1});
      Rat v = invariant(more, d);
      for (std::size_t j = 0; j < n; ++j) {
        if (ins[j].k == 0) continue;
        auto t = ins;
        --t[j].k;
        ++t[j].a;
        v -= invariant(t, d);
      }
      return v / Rat(d);
    }
    // primary: divisor equation
    for (std::size_t i = 0; i < n; ++i)
      if (ins[i].a == 1) return Rat(d) * invariant(without(ins, i), d);
    // only point classes remain
    if (r_ == 1) {
      if (n == 0 && d == 1) return Rat(1);
      return Rat(0);
    }
    if (static_cast<long>(n) == 3 * d - 1) return kontsevich(d);
    return Rat(0);
  }

  Rat trr(const std::vector<Insertion>& ins, long d) {
    const std::size_t n = ins.size();
    std::size_t i = n;
    if (schedule_ == TrrSchedule::FirstPsi) {
      for (std::size_t t = 0; t < n && i == n; ++t)
        if (ins[t].k > 0) i = t;
    } else {
      for (std::size_t t = n; t-- > 0 && i == n;)
        if (ins[t].k > 0) i = t;
    }
    std::vector<std::size_t> others;
    for (std::size_t t = 0; t < n; ++t)
      if (t != i) others.push_back(t);
    const std::size_t j = others[0], m = others[1];
    std::vector<std::size_t> rest(others.begin() + 2, others.end());
    Insertion lowered = ins[i];
    --lowered.k;

    Rat total(0);
    const std::size_t subsets = std::size_t{1} << rest.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
      std::vector<Insertion> left{lowered}, right{ins[j], ins[m]};
      for (std::size_t t = 0; t < rest.size(); ++t) ((mask >> t) & 1 ? left : right).push_back(ins[rest[t]]);
      for (long d1 = 0; d1 <= d; ++d1) {
        for (int e = 0; e <= r_; ++e) {
          auto l = left;
          l.push_back({0, e});
          Rat lv = invariant(l, d1);
          if (lv.is_zero()) continue;
          auto rr = right;
          rr.push_back({0, r_ - e});
          total += lv * invariant(rr, d - d1);
        }
      }
    }
    return total;
  }

  int r_;
  TrrSchedule schedule_;
  std::map<std::pair<long, std::vector<Insertion>>, Rat> memo_;
};

/// Two-point table of P^r with the same basis and naming as the projective module.
inline InvariantTable two_point_oracle(int r, long dmax, int max_psi_total, TrrSchedule schedule = TrrSchedule::FirstPsi) {
  DescendantOracle o(r, schedule);
  InvariantTable t = InvariantTable::for_target(make_projective_target(r));
  t.max_psi_total = max_psi_total;
  for (long d = 1; d <= dmax; ++d) {
    t.add_degree(Degree::scalar(Rat(d)), Rat((r + 1) * d));
    for (int a = 0; a <= r; ++a)
      for (int b = 0; b <= r; ++b)
        for (int k = 0; k <= max_psi_total; ++k)
          for (int l = 0; k + l <= max_psi_total; ++l) {
            if (a + b + k + l != (r + 1) * d + r - 1) continue;
            t.set(static_cast<std::size_t>(a), k, static_cast<std::size_t>(b), l, Degree::scalar(Rat(d)),
                  o.invariant({{k, a}, {l, b}}, d));
          }
  }
  return t;
}

}  // namespace twopoint
