#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "twopoint/engine.hpp"
#include "twopoint/projective.hpp"

namespace twopoint {

/// Combinatorial data of P(w_0, ..., w_n). Index j runs over 0..N-1 with
/// N = sum w_i; the basis is v_j = sigma_j P^{r_j} 1_{c_j}.
struct WpsSpec {
  std::vector<long> weights;
  long N = 0;
  long lcm = 1;
  std::vector<Rat> c;
  std::vector<Rat> sectors;  // F, increasing
  std::vector<Rat> sigma;
  std::vector<int> r;
  std::vector<int> d;             // #{i : c_i = c_j}
  std::vector<Rat> m;             // prod_{i : c_j w_i integral} w_i
  std::vector<std::size_t> hat;   // partner in sector <1 - c_j> with complementary P-power
  std::vector<int> sector_dim;    // dim of the component of c_j

  int dim() const { return static_cast<int>(weights.size()) - 1; }

  bool in_F(const Rat& f) const { return std::binary_search(sectors.begin(), sectors.end(), f); }

  int dim_of(const Rat& f) const {
    int count = 0;
    for (long w : weights)
      if ((f * Rat(w)).is_integer()) ++count;
    return count - 1;
  }

  Rat m_of(const Rat& f) const {
    Rat out(1);
    for (long w : weights)
      if ((f * Rat(w)).is_integer()) out *= Rat(w);
    return out;
  }

  /// Degree shift of the sector: sum_i <-f w_i>.
  Rat age(const Rat& f) const {
    Rat out(0);
    for (long w : weights) out += (-(f * Rat(w))).frac();
    return out;
  }

  /// Basis index of P^p 1_f; N when the class is zero or f is not a sector.
  std::size_t index_of(const Rat& f, int p) const {
    for (std::size_t j = 0; j < c.size(); ++j)
      if (c[j] == f && r[j] == p) return j;
    return c.size();
  }

  std::string name(std::size_t j) const {
    std::string s = detail::power_name("P", r[j]);
    if (c[j].is_zero()) return s;
    std::string tw = "1_{" + c[j].str() + "}";
    return r[j] == 0 ? tw : s + " " + tw;
  }
};

inline WpsSpec wps_basis_data(const std::vector<long>& w) {
  if (w.size() < 2) throw ValidationError("weighted projective space needs at least two weights");
  for (long x : w)
    if (x < 1) throw ValidationError("weights must be positive integers");
  WpsSpec s;
  s.weights = w;
  for (long x : w) {
    s.N += x;
    s.lcm = std::lcm(s.lcm, x);
  }
  for (long x : w)
    for (long k = 0; k < x; ++k) s.c.push_back(Rat(k, x));
  std::sort(s.c.begin(), s.c.end());
  s.sectors = s.c;
  s.sectors.erase(std::unique(s.sectors.begin(), s.sectors.end()), s.sectors.end());

  const std::size_t n = s.c.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Rat& cj = s.c[j];
    Rat num(1);
    for (std::size_t m = 0; m < n; ++m)
      if (s.c[m] < cj) num *= cj - s.c[m];
    Rat den(1);
    for (long x : w) {
      // b in (0, cj w] with <b> = <cj w>
      Rat top = cj * Rat(x);
      for (Rat b = top; b.sign() > 0; b -= Rat(1)) den *= b;
    }
    s.sigma.push_back(num / den);
    int rj = 0, dj = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s.c[i] == cj) {
        ++dj;
        if (i < j) ++rj;
      }
    }
    s.r.push_back(rj);
    s.d.push_back(dj);
    s.m.push_back(s.m_of(cj));
    s.sector_dim.push_back(s.dim_of(cj));
    if (s.sector_dim.back() + 1 != dj) throw ValidationError("sector multiplicity does not match its dimension");
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat dual = (Rat(1) - s.c[j]).frac();
    std::size_t h = s.index_of(dual, s.sector_dim[j] - s.r[j]);
    if (h == n) throw ValidationError("no dual basis element for index " + std::to_string(j));
    s.hat.push_back(h);
  }
  return s;
}

/// Class-valued z^{-1} D_j J at the Q^{d - c_j} term:
/// prod_{m<j} (P + (d - c_m) z) / prod_i prod_{0<b<=d w_i, <b>=<d w_i>} (w_i P + b z),
/// supported on the sector <d>. Zero when <d> is not a sector.
inline ZSeries<CohClass> wps_class_column(const WpsSpec& s, std::size_t j, const Rat& d, int depth) {
  if (j >= s.c.size()) throw ValidationError("column index out of range for P(w)");
  if (d.sign() < 0) throw ValidationError("negative degree");
  const Rat f = d.frac();
  if (!s.in_F(f)) return ZSeries<CohClass>(0, kExactDepth);
  const int sdim = s.dim_of(f);
  CohClass P = CohClass::generator(f, 1, sdim, 0);
  CohClass one = CohClass::constant(f, 1, sdim, Rat(1));
  ZSeries<CohClass> acc = ZSeries<CohClass>::constant(one);
  for (std::size_t m = 0; m < j; ++m) {
    ZSeries<CohClass> lin(1, kExactDepth);
    lin.set(0, P);
    lin.set(1, one * (d - s.c[m]));
    acc *= lin;
  }
  const int inv_depth = depth + s.dim() + 2;
  for (long w : s.weights) {
    for (Rat b = d * Rat(w); b.sign() > 0; b -= Rat(1)) acc *= invert_affine(P, Rat(w), b, inv_depth);
  }
  return acc;
}

/// Components along v_0..v_{N-1} of the normalized column j at Novikov exponent e.
inline std::vector<ZSeries<Rat>> wps_column(const WpsSpec& s, std::size_t j, const Rat& e, int depth) {
  const std::size_t n = s.c.size();
  const Rat d = e + s.c.at(j);
  ZSeries<CohClass> col = wps_class_column(s, j, d, depth);
  std::vector<ZSeries<Rat>> out(n, ZSeries<Rat>(std::max(col.top(), 0), col.depth()));
  if (col.is_zero()) return out;
  const Rat f = d.frac();
  for (std::size_t i = 0; i < n; ++i) {
    if (s.c[i] != f) continue;
    ZSeries<Rat> comp = detail::class_component(col, s.r[i]);
    out[i] = comp * (Rat(1) / s.sigma[i]);
  }
  return out;
}

inline std::string wps_name(const std::vector<long>& w) {
  std::string s = "P(";
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? "," : "") + std::to_string(w[i]);
  return s + ")";
}

inline TargetSpec make_wps_target(const WpsSpec& s) {
  const std::size_t n = s.c.size();
  TargetSpec t;
  t.name = wps_name(s.weights);
  t.gram = Matrix<Rat>(n, Rat(0));
  t.unit.assign(n, Rat(0));
  t.unit[0] = Rat(1);
  for (std::size_t j = 0; j < n; ++j) {
    t.basis.push_back({s.name(j), Rat(s.r[j]) + s.age(s.c[j])});
    for (std::size_t i = 0; i < n; ++i) {
      if (s.c[i] != (Rat(1) - s.c[j]).frac() || s.r[i] + s.r[j] != s.sector_dim[j]) continue;
      t.gram(i, j) = s.sigma[i] * s.sigma[j] / s.m[j];
    }
  }
  if (s.dim() >= 1) {
    DivisorData div{"P", std::vector<Rat>(n, Rat(0)), Matrix<Rat>(n, Rat(0)), [](const Degree& d) { return d[0]; }};
    std::size_t p = s.index_of(Rat(0), 1);
    div.coords[p] = Rat(1) / s.sigma[p];
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t up = s.index_of(s.c[j], s.r[j] + 1);
      if (up != n) div.multiply(up, j) = s.sigma[j] / s.sigma[up];
    }
    t.divisors.push_back(std::move(div));
  }
  t.degree_rank = 1;
  const long L = s.lcm;
  t.degrees = [L](const Rat& bound) {
    std::vector<Degree> out;
    for (long k = 0; Rat(k, L) <= bound; ++k) out.push_back(Degree::scalar(Rat(k, L)));
    return out;
  };
  const long N = s.N;
  t.c1 = [N](const Degree& d) { return d[0] * Rat(N); };
  t.dim = s.dim();
  t.column = [s](std::size_t j, const Degree& e, int depth) { return wps_column(s, j, e[0], depth); };
  t.finalize();
  return t;
}

inline InvariantTable wps_two_point(const WpsSpec& s, const Rat& dmax, int depth = 0, unsigned threads = 1) {
  TargetSpec t = make_wps_target(s);
  if (depth <= 0) depth = t.default_depth(dmax);
  return compute_two_point(t, dmax, depth, threads).invariants;
}

/// Monomial key (P^p 1_f) x (P^q 1_g) z1^{-k-1} z2^{-l-1}.
struct ClosedFormKey {
  int p = 0;
  Rat f;
  int q = 0;
  Rat g;
  int k = 0;
  int l = 0;
  friend auto operator<=>(const ClosedFormKey&, const ClosedFormKey&) = default;
  friend bool operator==(const ClosedFormKey&, const ClosedFormKey&) = default;
};

using ClosedFormTable = std::map<ClosedFormKey, Rat>;

/// Bivariate generating identity at degree d > 0:
///   (1/(z1+z2)) sum_s sum_{d1+d2 = d+c_s+c_hat(s)} m_s/(sigma_s sigma_hat(s)) C_s(d1; z1) (x) C_hat(s)(d2; z2)
/// where C_s(d1; z) is the class-valued column on the sector <d1>.
inline ClosedFormTable wps_closed_form(const WpsSpec& s, const Rat& d, int max_psi_total) {
  if (d.sign() <= 0) throw ValidationError("closed form needs a positive degree");
  const std::size_t n = s.c.size();
  const int depth = max_psi_total + 1;
  std::map<std::tuple<int, Rat, int, Rat>, BiZSeries<Rat>> acc;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t b = s.hat[a];
    const Rat total = d + s.c[a] + s.c[b];
    const Rat factor = s.m[a] / (s.sigma[a] * s.sigma[b]);
    for (long k = 0; Rat(k, s.lcm) <= total; ++k) {
      const Rat d1(k, s.lcm);
      const Rat d2 = total - d1;
      if (!s.in_F(d1.frac()) || !s.in_F(d2.frac())) continue;
      ZSeries<CohClass> c1 = wps_class_column(s, a, d1, depth).truncated(depth);
      ZSeries<CohClass> c2 = wps_class_column(s, b, d2, depth).truncated(depth);
      if (c1.is_zero() || c2.is_zero()) continue;
      if (c1.max_exponent() > 0 || c2.max_exponent() > 0)
        throw ConditionError("closed form: positive z power in a column of " + wps_name(s.weights));
      c1 = c1.with_top(0);
      c2 = c2.with_top(0);
      const Rat f1 = d1.frac(), f2 = d2.frac();
      for (int p = 0; p <= s.dim_of(f1); ++p) {
        ZSeries<Rat> x = detail::class_component(c1, p).with_top(0);
        if (x.is_zero()) continue;
        for (int q = 0; q <= s.dim_of(f2); ++q) {
          ZSeries<Rat> y = detail::class_component(c2, q).with_top(0);
          if (y.is_zero()) continue;
          auto term = BiZSeries<Rat>::outer(x * factor, y);
          auto [it, fresh] = acc.try_emplace({p, f1, q, f2}, term);
          if (!fresh) it->second += term;
        }
      }
    }
  }
  ClosedFormTable out;
  for (const auto& [key, t] : acc) {
    BiZSeries<Rat> q = divide_by_z1_plus_z2(t);
    for (const auto& [e, v] : q.terms()) {
      int k = -e.first - 1, l = -e.second - 1;
      if (k < 0 || l < 0 || k + l > max_psi_total) continue;
      out[ClosedFormKey{std::get<0>(key), std::get<1>(key), std::get<2>(key), std::get<3>(key), k, l}] = v;
    }
  }
  return out;
}

/// The same keys predicted from a matrix-route table:
/// <v_a psi^k, v_b psi^l>_d (m_a/sigma_a)(m_b/sigma_b) sits at P^{r_hat(a)} 1_{c_hat(a)} (x) P^{r_hat(b)} 1_{c_hat(b)}.
inline ClosedFormTable closed_form_keys_from_table(const WpsSpec& s, const InvariantTable& t, const Degree& d) {
  ClosedFormTable out;
  for (const auto& [key, v] : t.values) {
    if (key.beta != d) continue;
    const std::size_t ha = s.hat[key.a], hb = s.hat[key.b];
    Rat scaled = v * (s.m[key.a] / s.sigma[key.a]) * (s.m[key.b] / s.sigma[key.b]);
    out[ClosedFormKey{s.r[ha], s.c[ha], s.r[hb], s.c[hb], key.k, key.l}] += scaled;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

/// Closed form versus matrix route at every positive exponent up to dmax.
inline CheckReport check_wps_routes(const WpsSpec& s, const Rat& dmax, int depth = 0) {
  CheckReport r{"route-equivalence"};
  TargetSpec t = make_wps_target(s);
  if (depth <= 0) depth = t.default_depth(dmax);
  InvariantTable table = compute_two_point(t, dmax, depth).invariants;
  for (const auto& d : t.degrees(dmax)) {
    if (d.is_zero()) continue;
    ++r.checked;
    ClosedFormTable closed = wps_closed_form(s, d[0], table.max_psi_total);
    ClosedFormTable matrix = closed_form_keys_from_table(s, table, d);
    if (closed != matrix) {
      std::string where;
      for (const auto& [k, v] : closed) {
        auto it = matrix.find(k);
        if (it == matrix.end() || it->second != v) {
          where = "key (P^" + std::to_string(k.p) + " 1_" + k.f.str() + ", P^" + std::to_string(k.q) + " 1_" +
                  k.g.str() + ", psi " + std::to_string(k.k) + "," + std::to_string(k.l) + ") closed=" + v.str() +
                  " matrix=" + (it == matrix.end() ? std::string("0") : it->second.str());
          break;
        }
      }
      if (where.empty()) where = "matrix route has keys absent from the closed form";
      r.fail(wps_name(s.weights) + " at degree " + d.str() + ": " + where);
    }
  }
  return r;
}

}  // namespace twopoint
