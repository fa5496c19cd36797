#pragma once

#include <string>
#include <vector>

#include "twopoint/engine.hpp"

namespace twopoint {

namespace detail {

inline std::string power_name(const std::string& gen, int p) {
  if (p == 0) return "1";
  if (p == 1) return gen;
  return gen + "^" + std::to_string(p);
}

/// Coefficient of P^p in each z-coefficient of a single-generator class series.
inline ZSeries<Rat> class_component(const ZSeries<CohClass>& s, int p) {
  ZSeries<Rat> out(std::max(s.top(), 0), s.depth());
  for (const auto& [e, c] : s.terms()) out.set(e, c.coeff(p));
  return out;
}

}  // namespace detail

/// (P + d z)^j / prod_{k=1}^d (P + k z)^{n+1} in H*(P^n), split into components
/// along 1, P, ..., P^n.
inline std::vector<ZSeries<Rat>> pn_column(int n, int j, long d, int depth) {
  if (n < 1) throw ValidationError("P^n needs n >= 1");
  if (j < 0 || j > n) throw ValidationError("column index " + std::to_string(j) + " is not a basis column of P^" + std::to_string(n));
  if (d < 0) throw ValidationError("negative degree");
  const Rat sector(0);
  CohClass P = CohClass::generator(sector, 1, n, 0);
  CohClass one = CohClass::constant(sector, 1, n, Rat(1));
  ZSeries<CohClass> acc = ZSeries<CohClass>::constant(one);
  ZSeries<CohClass> lin(1, kExactDepth);
  lin.set(0, P);
  lin.set(1, one * Rat(d));
  for (int i = 0; i < j; ++i) acc *= lin;
  for (long k = 1; k <= d; ++k) {
    ZSeries<CohClass> inv = invert_affine(P, Rat(1), Rat(k), depth + n + 1);
    for (int i = 0; i <= n; ++i) acc *= inv;
  }
  std::vector<ZSeries<Rat>> out;
  for (int p = 0; p <= n; ++p) out.push_back(detail::class_component(acc, p));
  return out;
}

inline TargetSpec make_projective_target(int n) {
  if (n < 1) throw ValidationError("P^n needs n >= 1");
  TargetSpec t;
  t.name = "P^" + std::to_string(n);
  const std::size_t size = static_cast<std::size_t>(n) + 1;
  t.gram = Matrix<Rat>(size, Rat(0));
  t.unit.assign(size, Rat(0));
  t.unit[0] = Rat(1);
  for (int p = 0; p <= n; ++p) {
    t.basis.push_back({detail::power_name("P", p), Rat(p)});
    t.gram(static_cast<std::size_t>(p), static_cast<std::size_t>(n - p)) = Rat(1);
  }
  DivisorData div{"P", std::vector<Rat>(size, Rat(0)), Matrix<Rat>(size, Rat(0)), [](const Degree& d) { return d[0]; }};
  div.coords[1] = Rat(1);
  for (std::size_t j = 0; j + 1 < size; ++j) div.multiply(j + 1, j) = Rat(1);
  t.divisors.push_back(std::move(div));
  t.degree_rank = 1;
  t.degrees = [](const Rat& bound) {
    std::vector<Degree> out;
    for (long d = 0; Rat(d) <= bound; ++d) out.push_back(Degree::scalar(Rat(d)));
    return out;
  };
  t.c1 = [n](const Degree& d) { return d[0] * Rat(n + 1); };
  t.dim = n;
  t.column = [n](std::size_t j, const Degree& d, int depth) {
    return pn_column(n, static_cast<int>(j), d[0].to_long(), depth);
  };
  t.finalize();
  return t;
}

/// <P^a psi^k, P^b psi^l>_{0,2,d} for all d <= dmax.
inline InvariantTable pn_two_point(int n, long dmax, int depth = 0, unsigned threads = 1) {
  TargetSpec t = make_projective_target(n);
  Rat bound(dmax);
  if (depth <= 0) depth = t.default_depth(bound);
  return compute_two_point(t, bound, depth, threads).invariants;
}

}  // namespace twopoint
