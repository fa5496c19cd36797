#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "twopoint/engine.hpp"

namespace twopoint {

struct MoriGenerator {
  std::vector<long> degrees;  // R_j(beta), one per ray
  std::vector<long> coords;   // beta_i = int_beta P_i
};

/// Smooth projective toric variety with its Mori data. Cones are stored as
/// sorted 0-based ray indices; user-facing labels are 1-based.
struct ToricSpec {
  std::string name;
  int n = 0;
  std::vector<std::vector<long>> rays;
  std::vector<std::vector<std::size_t>> cones;
  std::vector<std::vector<long>> m;  // k x N: R_j = sum_i m_ij P_i - lambda_j
  std::vector<MoriGenerator> mori;
  std::optional<std::vector<Rat>> lambda_a;
  std::optional<std::vector<Rat>> lambda_b;
  bool split_columns = false;  // recover S* columns by splitting off a polynomial factor

  std::size_t N() const { return rays.size(); }
  std::size_t k() const { return m.size(); }

  std::vector<long> R_of(const Degree& beta) const {
    std::vector<long> out(N(), 0);
    for (std::size_t i = 0; i < k(); ++i) {
      long b = beta[i].to_long();
      for (std::size_t j = 0; j < N(); ++j) out[j] += m[i][j] * b;
    }
    return out;
  }

  long c1(const Degree& beta) const {
    long s = 0;
    for (long r : R_of(beta)) s += r;
    return s;
  }

  bool fano() const {
    for (const auto& g : mori) {
      long s = 0;
      for (long r : g.degrees) s += r;
      if (s <= 0) return false;
    }
    return true;
  }

  std::string cone_label(std::size_t c) const {
    std::string s = "v{";
    for (std::size_t t = 0; t < cones[c].size(); ++t) s += (t ? "," : "") + std::to_string(cones[c][t] + 1);
    return s + "}";
  }

  /// Effective degrees with total <= bound, in Degree order.
  std::vector<Degree> degrees(const Rat& bound) const {
    std::vector<Degree> out;
    const long b = bound.floor().get_si();
    std::vector<Rat> cur(k(), Rat(0));
    auto rec = [&](auto&& self, std::size_t i, long left) -> void {
      if (i == k()) {
        out.push_back(Degree(cur));
        return;
      }
      for (long v = 0; v <= left; ++v) {
        cur[i] = Rat(v);
        self(self, i + 1, left - v);
      }
      cur[i] = Rat(0);
    };
    if (b >= 0) rec(rec, 0, b);
    std::sort(out.begin(), out.end());
    return out;
  }
};

namespace detail {

inline long det_long(std::vector<std::vector<long>> a) {
  // exact integer determinant through rationals
  const std::size_t n = a.size();
  Matrix<Rat> m(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(a[i][j]);
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m(piv, col).is_zero()) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      Rat f = m(r, col) / m(col, col);
      for (std::size_t j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
  }
  return det.to_long();
}

}  // namespace detail

/// Checks every structural invariant of a toric spec; the message names the failing one.
inline void validate_toric(const ToricSpec& s) {
  const std::size_t N = s.N();
  if (s.n < 1) throw ValidationError("toric: dimension must be positive");
  if (N <= static_cast<std::size_t>(s.n)) throw ValidationError("toric: need more rays than the dimension");
  for (const auto& r : s.rays)
    if (r.size() != static_cast<std::size_t>(s.n)) throw ValidationError("toric: every ray must have length n");
  const std::size_t k = N - static_cast<std::size_t>(s.n);
  if (s.m.size() != k) throw ValidationError("toric: divisor matrix must have N - n = " + std::to_string(k) + " rows");
  for (const auto& row : s.m)
    if (row.size() != N) throw ValidationError("toric: divisor matrix rows must have N entries");
  if (s.cones.empty()) throw ValidationError("toric: no maximal cones");
  std::set<std::vector<std::size_t>> seen;
  for (const auto& c : s.cones) {
    if (c.size() != static_cast<std::size_t>(s.n)) throw ValidationError("toric: every maximal cone must have n rays");
    std::set<std::size_t> u(c.begin(), c.end());
    if (u.size() != c.size()) throw ValidationError("toric: repeated ray in a maximal cone");
    for (auto j : c)
      if (j >= N) throw ValidationError("toric: cone references a ray index out of range");
    if (!seen.insert(std::vector<std::size_t>(u.begin(), u.end())).second)
      throw ValidationError("toric: duplicate maximal cone");
    std::vector<std::vector<long>> mat;
    for (auto j : c) mat.push_back(s.rays[j]);
    long det = detail::det_long(mat);
    if (det != 1 && det != -1) throw ValidationError("toric: cone is not smooth (ray determinant " + std::to_string(det) + ")");
  }
  // the divisor matrix must contain the k x k identity among its columns
  for (std::size_t i = 0; i < k; ++i) {
    bool found = false;
    for (std::size_t j = 0; j < N && !found; ++j) {
      bool unit = true;
      for (std::size_t r = 0; r < k; ++r) unit = unit && s.m[r][j] == (r == i ? 1 : 0);
      found = unit;
    }
    if (!found) throw ValidationError("toric: divisor matrix has no identity column for P_" + std::to_string(i + 1));
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (int c = 0; c < s.n; ++c) {
      long sum = 0;
      for (std::size_t j = 0; j < N; ++j) sum += s.m[i][j] * s.rays[j][static_cast<std::size_t>(c)];
      if (sum != 0) throw ValidationError("toric: row " + std::to_string(i + 1) + " of the divisor matrix is not a linear relation among the rays");
    }
  }
  if (s.mori.size() != k) throw ValidationError("toric: need exactly k = " + std::to_string(k) + " Mori generators");
  std::set<std::size_t> dual;
  for (std::size_t g = 0; g < k; ++g) {
    const auto& gen = s.mori[g];
    if (gen.coords.size() != k || gen.degrees.size() != N)
      throw ValidationError("toric: Mori generator " + std::to_string(g + 1) + " has wrong sizes");
    std::size_t ones = 0, at = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (gen.coords[i] == 1) {
        ++ones;
        at = i;
      } else if (gen.coords[i] != 0) {
        ones = k + 1;
      }
    }
    if (ones != 1) throw ValidationError("toric: Mori generator coordinates must be dual to the basis P_i");
    dual.insert(at);
    for (std::size_t j = 0; j < N; ++j) {
      long expect = 0;
      for (std::size_t i = 0; i < k; ++i) expect += s.m[i][j] * gen.coords[i];
      if (expect != gen.degrees[j])
        throw ValidationError("toric: Mori generator " + std::to_string(g + 1) + " degree on ray " + std::to_string(j + 1) +
                              " disagrees with the divisor matrix");
    }
  }
  if (dual.size() != k) throw ValidationError("toric: Mori generators must be distinct");
  for (const auto* lam : {&s.lambda_a, &s.lambda_b}) {
    if (!*lam) continue;
    if ((*lam)->size() != N) throw ValidationError("toric: lambda needs one value per ray");
    std::set<Rat> u((*lam)->begin(), (*lam)->end());
    if (u.size() != N) throw ValidationError("toric: lambda values must be distinct");
  }
}

inline std::vector<Rat> default_lambda_a(std::size_t N) {
  std::vector<Rat> out;
  for (std::size_t j = 1; j <= N; ++j) out.push_back(Rat(static_cast<long>(j)));
  return out;
}
inline std::vector<Rat> default_lambda_b(std::size_t N) {
  std::vector<Rat> out;
  for (long j = 1; j <= static_cast<long>(N); ++j) out.push_back(Rat(j * j, 3) + Rat(1, j + 2));
  return out;
}

/// Restriction data at one torus fixed point.
struct FixedPoint {
  std::vector<std::size_t> cone;
  std::vector<Rat> x;    // P_i restricted
  std::vector<Rat> rho;  // R_j restricted (zero off the cone)
  Rat euler;             // n_S
  std::vector<Rat> partial;  // n_S / R_j|_S for j in the cone, in cone order
};

inline std::vector<FixedPoint> toric_fixed_points(const ToricSpec& s, const std::vector<Rat>& lambda) {
  const std::size_t N = s.N(), k = s.k();
  if (lambda.size() != N) throw ValidationError("toric: lambda needs one value per ray");
  std::vector<FixedPoint> out;
  for (const auto& cone : s.cones) {
    std::vector<std::size_t> off;
    for (std::size_t j = 0; j < N; ++j)
      if (std::find(cone.begin(), cone.end(), j) == cone.end()) off.push_back(j);
    Matrix<Rat> a(k, Rat(0));
    std::vector<Rat> b(k, Rat(0));
    for (std::size_t e = 0; e < k; ++e) {
      for (std::size_t i = 0; i < k; ++i) a(e, i) = Rat(s.m[i][off[e]]);
      b[e] = lambda[off[e]];
    }
    auto x = solve(a, b);
    if (!x) throw ValidationError("toric: fixed-point system is singular for a cone (not a smooth cone)");
    FixedPoint fp;
    fp.cone = cone;
    fp.x = *x;
    fp.rho.assign(N, Rat(0));
    for (std::size_t j = 0; j < N; ++j) {
      Rat v = -lambda[j];
      for (std::size_t i = 0; i < k; ++i) v += Rat(s.m[i][j]) * fp.x[i];
      fp.rho[j] = v;
    }
    for (std::size_t j : off)
      if (!fp.rho[j].is_zero()) throw ValidationError("toric: restriction of an off-cone divisor is nonzero");
    fp.euler = Rat(1);
    for (std::size_t j : cone) fp.euler *= fp.rho[j];
    if (fp.euler.is_zero()) throw DegenerateLambdaError("toric: Euler class vanishes at a fixed point for the chosen lambda");
    for (std::size_t j : cone) fp.partial.push_back(fp.euler / fp.rho[j]);
    out.push_back(std::move(fp));
  }
  return out;
}

/// prod_j prod_{m<=0}(rho_j + m z) / prod_{m<=R_j}(rho_j + m z), times the
/// composition factor prod_{t}(rho_{i_t} + sign R_{i_t} z), as a series cut at z^{-depth}.
inline ZSeries<Rat> toric_term(const std::vector<Rat>& rho, const std::vector<long>& R,
                               const std::vector<std::size_t>& composition, int depth, int sign = 1) {
  ZSeries<Rat> poly = ZSeries<Rat>::constant(Rat(1));
  auto lin = [](const Rat& c0, const Rat& c1) {
    ZSeries<Rat> l(1, kExactDepth);
    l.set(0, c0);
    l.set(1, c1);
    return l;
  };
  for (std::size_t i : composition) poly *= lin(rho[i], Rat(sign * R[i]));
  for (std::size_t j = 0; j < R.size(); ++j)
    for (long mm = R[j] + 1; mm <= 0; ++mm) poly *= lin(rho[j], Rat(mm));
  if (poly.is_zero()) return ZSeries<Rat>(0, kExactDepth);
  int top = std::max(poly.max_exponent(), 0);
  poly = poly.with_top(top);
  int inv_depth = depth + top + 1;
  ZSeries<Rat> acc = poly;
  bool any = false;
  for (std::size_t j = 0; j < R.size(); ++j) {
    for (long mm = 1; mm <= R[j]; ++mm) {
      acc *= invert_affine(rho[j], Rat(1), Rat(mm), inv_depth);
      any = true;
    }
  }
  if (!any) return acc;
  return acc.truncated(depth);
}

/// Components along v_{S'} of the normalized column of v_S at degree beta.
inline std::vector<ZSeries<Rat>> equivariant_columns(const ToricSpec& s, const std::vector<FixedPoint>& fps,
                                                     std::size_t cone, const Degree& beta, int depth, int sign = 1) {
  const std::vector<long> R = s.R_of(beta);
  std::vector<ZSeries<Rat>> out;
  out.reserve(fps.size());
  for (const auto& fp : fps) out.push_back(toric_term(fp.rho, R, fps.at(cone).cone, depth, sign) * (Rat(1) / fp.euler));
  return out;
}

/// Columns of S* recovered from the composition columns C by splitting
/// C = S* B degree by degree, with S*(beta) = O(1/z) and B(beta) polynomial in z
/// for beta != 0. When every composition column is already of the form
/// v_S + O(1/z), B is the identity and S* = C.
struct SplitColumns {
  // degree -> [column][fixed point]
  std::map<Degree, std::vector<std::vector<ZSeries<Rat>>>> sstar;
  std::map<Degree, std::vector<std::vector<ZSeries<Rat>>>> correction;  // B(beta), beta != 0
  bool trivial = true;  // no nonnegative z-power appeared at any beta != 0
};

inline SplitColumns split_toric_columns(const ToricSpec& s, const std::vector<FixedPoint>& fps, const Rat& bound, int depth,
                                        int sign = 1) {
  const std::size_t n = fps.size();
  const long total = std::max<long>(bound.floor().get_si(), 0);
  const int work = depth + s.n * static_cast<int>(total + 1) + 1;
  using Mat = std::vector<std::vector<ZSeries<Rat>>>;
  SplitColumns out;
  const auto degs = s.degrees(bound);
  for (const auto& beta : degs) {
    Mat x(n);
    for (std::size_t c = 0; c < n; ++c) x[c] = equivariant_columns(s, fps, c, beta, work, sign);
    if (beta.is_zero()) {
      out.sstar[beta] = x;
      continue;
    }
    for (const auto& [b2, bm] : out.correction) {
      Degree b1 = beta - b2;
      if (!b1.effective() || b1.is_zero()) continue;
      auto it = out.sstar.find(b1);
      if (it == out.sstar.end()) continue;
      const Mat& sm = it->second;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m) {
          if (bm[j][m].is_zero()) continue;
          for (std::size_t r = 0; r < n; ++r) x[j][r] -= sm[m][r] * bm[j][m];
        }
    }
    Mat neg(n, std::vector<ZSeries<Rat>>(n)), pos(n, std::vector<ZSeries<Rat>>(n));
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        const ZSeries<Rat>& v = x[j][r];
        ZSeries<Rat> lo(-1, v.depth()), hi(std::max(v.top(), 0), kExactDepth);
        for (const auto& [e, c] : v.terms()) (e < 0 ? lo : hi).set(e, c);
        if (!hi.is_zero()) any = true;
        neg[j][r] = lo;
        pos[j][r] = hi;
      }
    }
    out.sstar[beta] = neg;
    if (any) {
      out.trivial = false;
      out.correction[beta] = pos;
    }
  }
  for (auto& [beta, m] : out.sstar)
    for (auto& col : m)
      for (auto& v : col) {
        if (v.depth() < depth)
          throw ArithmeticError(s.name + ": column splitting lost precision at degree " + beta.str());
        v = v.truncated(depth);
      }
  return out;
}

/// Equivariant target in the fixed-point basis at one lambda assignment.
/// `sign` flips the z-coefficient of the composition factors (diagnostics only).
/// With s.split_columns, columns come from split_toric_columns instead of the raw compositions.
inline TargetSpec make_toric_target(const ToricSpec& s, const std::vector<Rat>& lambda, int sign = 1) {
  auto fps = std::make_shared<const std::vector<FixedPoint>>(toric_fixed_points(s, lambda));
  const std::size_t n = fps->size();
  TargetSpec t;
  t.name = s.name;
  t.gram = Matrix<Rat>(n, Rat(0));
  t.unit.assign(n, Rat(0));
  for (std::size_t a = 0; a < n; ++a) {
    t.basis.push_back({s.cone_label(a), Rat(s.n)});
    t.gram(a, a) = (*fps)[a].euler;
    t.unit[a] = Rat(1) / (*fps)[a].euler;
  }
  for (std::size_t i = 0; i < s.k(); ++i) {
    DivisorData div{"P" + std::to_string(i + 1), std::vector<Rat>(n, Rat(0)), Matrix<Rat>(n, Rat(0)),
                    [i](const Degree& d) { return d[i]; }};
    for (std::size_t a = 0; a < n; ++a) {
      div.coords[a] = (*fps)[a].x[i] / (*fps)[a].euler;
      div.multiply(a, a) = (*fps)[a].x[i];
    }
    t.divisors.push_back(std::move(div));
  }
  t.degree_rank = s.k();
  t.degrees = [s](const Rat& bound) { return s.degrees(bound); };
  t.c1 = [s](const Degree& d) { return Rat(s.c1(d)); };
  t.dim = s.n;
  t.equivariant = true;
  if (s.split_columns) {
    struct Cache {
      std::mutex mu;
      int depth = -1;
      Rat total{-1};
      SplitColumns cols;
    };
    auto cache = std::make_shared<Cache>();
    t.column = [s, fps, sign, cache](std::size_t j, const Degree& d, int depth) {
      std::lock_guard<std::mutex> lock(cache->mu);
      if (cache->depth != depth || d.total() > cache->total) {
        cache->cols = split_toric_columns(s, *fps, d.total(), depth, sign);
        cache->depth = depth;
        cache->total = d.total();
      }
      return cache->cols.sstar.at(d)[j];
    };
  } else {
    t.column = [s, fps, sign](std::size_t j, const Degree& d, int depth) {
      return equivariant_columns(s, *fps, j, d, depth, sign);
    };
  }
  t.finalize();
  return t;
}

// ---------------------------------------------------------------------------
// Condition 1 scan

struct ConditionEntry {
  Degree beta;
  long numerator = 0;  // z-degree of the composition factor
  long order = 0;      // guaranteed 1/z order of the I-term
  long top = 0;
  bool pass = true;
};

struct ConditionReport {
  std::string target;
  std::vector<std::size_t> composition;  // 1-based ray labels
  bool pass = true;
  std::vector<ConditionEntry> entries;
  std::optional<Degree> first_violation;

  std::string label() const {
    std::string s = "(";
    for (std::size_t i = 0; i < composition.size(); ++i) s += (i ? "," : "") + std::to_string(composition[i]);
    return s + ")";
  }
  std::string str() const {
    std::string s = target + " composition " + label() + ": " + (pass ? "pass" : "fail");
    if (first_violation) s += " (first violation at degree " + first_violation->str() + ")";
    return s;
  }
};

/// Guaranteed power of 1/z in the I-term: R_j for R_j >= 0 and 1 + R_j for R_j < 0.
inline long i_term_order(const std::vector<long>& R) {
  long ord = 0;
  for (long r : R) ord += r >= 0 ? r : 1 + r;
  return ord;
}

/// Compares the z-degree of prod_t (R_{i_t} + z R_{i_t}(beta)) with the 1/z order of
/// the I-term for every nonzero beta up to the bound. `composition` holds 1-based labels.
inline ConditionReport condition_scan(const ToricSpec& s, const std::vector<std::size_t>& composition, const Rat& bound) {
  ConditionReport rep;
  rep.target = s.name;
  rep.composition = composition;
  for (auto i : composition)
    if (i < 1 || i > s.N()) throw ValidationError("composition refers to a ray outside 1.." + std::to_string(s.N()));
  for (const auto& beta : s.degrees(bound)) {
    if (beta.is_zero()) continue;
    std::vector<long> R = s.R_of(beta);
    ConditionEntry e;
    e.beta = beta;
    for (auto i : composition)
      if (R[i - 1] != 0) ++e.numerator;
    e.order = i_term_order(R);
    e.top = e.numerator - e.order;
    e.pass = e.top <= 0;
    if (!e.pass && rep.pass) {
      rep.pass = false;
      rep.first_violation = beta;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

/// The compositions the Condition is about: every (n-1)-subset of every maximal cone,
/// in cone order, without repeats.
inline std::vector<std::vector<std::size_t>> condition_compositions(const ToricSpec& s) {
  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> out;
  for (const auto& cone : s.cones) {
    for (std::size_t drop = 0; drop < cone.size(); ++drop) {
      std::vector<std::size_t> comp;
      for (std::size_t t = 0; t < cone.size(); ++t)
        if (t != drop) comp.push_back(cone[t] + 1);
      std::sort(comp.rbegin(), comp.rend());
      if (seen.insert(comp).second) out.push_back(comp);
    }
  }
  return out;
}

inline std::vector<ConditionReport> condition_scan_all(const ToricSpec& s, const Rat& bound) {
  std::vector<ConditionReport> out;
  for (const auto& c : condition_compositions(s)) out.push_back(condition_scan(s, c, bound));
  return out;
}

struct JxEstimate {
  long value = 0;
  Degree argmin;
  Rat bound;
  bool satisfied = false;  // value >= dim - 1
  std::string str() const {
    return "j_X >= " + std::to_string(value) + " over degrees up to " + bound.str() + " (truncated estimate, attained at " +
           argmin.str() + "); criterion " + (satisfied ? "satisfied" : "not satisfied");
  }
};

/// min over nonzero effective beta with total <= bound of -K.beta + #{j : R_j(beta) < 0}.
inline JxEstimate jx_criterion(const ToricSpec& s, const Rat& bound) {
  if (!s.fano()) throw ValidationError(s.name + ": j_X criterion needs a Fano target");
  JxEstimate est;
  est.bound = bound;
  bool first = true;
  for (const auto& beta : s.degrees(bound)) {
    if (beta.is_zero()) continue;
    std::vector<long> R = s.R_of(beta);
    long v = 0;
    for (long r : R) v += r + (r < 0 ? 1 : 0);
    if (first || v < est.value) {
      est.value = v;
      est.argmin = beta;
      first = false;
    }
  }
  if (first) throw ValidationError("j_X criterion needs a positive degree bound");
  est.satisfied = est.value >= s.n - 1;
  return est;
}

// ---------------------------------------------------------------------------
// Equivariant computation and non-equivariant limits

struct ToricLambdas {
  std::vector<Rat> a;
  std::vector<Rat> b;
};

inline ToricLambdas toric_lambdas(const ToricSpec& s) {
  ToricLambdas l{s.lambda_a ? *s.lambda_a : default_lambda_a(s.N()), s.lambda_b ? *s.lambda_b : default_lambda_b(s.N())};
  if (l.a == l.b) throw ValidationError("toric: the two lambda assignments must differ");
  return l;
}

inline Computation toric_two_point(const ToricSpec& s, const std::vector<Rat>& lambda, const Rat& bound, int depth = 0,
                                   unsigned threads = 1) {
  TargetSpec t = make_toric_target(s, lambda);
  if (depth <= 0) depth = t.default_depth(bound);
  return compute_two_point(t, bound, depth, threads);
}

/// Monomial basis of H*(X) in the P_i, chosen degree by degree so that the
/// Poincare pairing stays nondegenerate.
struct ClassBasis {
  std::vector<std::vector<int>> exps;
  std::vector<std::string> names;
  std::vector<int> degree;
  Matrix<Rat> gram;
};

namespace detail {

inline std::vector<std::vector<int>> monomials_of_degree(std::size_t k, int p) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k, 0);
  auto rec = [&](auto&& self, std::size_t i, int left) -> void {
    if (i + 1 == k) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[i] = v;
      self(self, i + 1, left - v);
    }
  };
  rec(rec, 0, p);
  return out;
}

inline Rat restrict_monomial(const std::vector<int>& e, const FixedPoint& fp) {
  Rat v(1);
  for (std::size_t i = 0; i < e.size(); ++i) v *= pow(fp.x[i], static_cast<unsigned>(e[i]));
  return v;
}

inline Rat integrate(const std::vector<int>& e, const std::vector<FixedPoint>& fps) {
  Rat v(0);
  for (const auto& fp : fps) v += restrict_monomial(e, fp) / fp.euler;
  return v;
}

inline std::vector<int> add_exps(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline std::string monomial_name(const std::vector<int>& e) {
  std::string s;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!s.empty()) s += " ";
    s += power_name(e.size() == 1 ? "P" : "P" + std::to_string(i + 1), e[i]);
  }
  return s.empty() ? "1" : s;
}

inline std::size_t matrix_rank(std::vector<std::vector<Rat>> rows) {
  std::size_t rank = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t piv = rank;
    while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][c].is_zero()) continue;
      Rat f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

inline ClassBasis toric_class_basis(const ToricSpec& s, const std::vector<FixedPoint>& fps) {
  ClassBasis b;
  for (int p = 0; p <= s.n; ++p) {
    auto cand = detail::monomials_of_degree(s.k(), p);
    auto duals = detail::monomials_of_degree(s.k(), s.n - p);
    std::vector<std::vector<Rat>> rows;
    for (const auto& e : cand) {
      std::vector<Rat> row;
      for (const auto& f : duals) row.push_back(detail::integrate(detail::add_exps(e, f), fps));
      rows.push_back(row);
      if (detail::matrix_rank(rows) < rows.size()) {
        rows.pop_back();
        continue;
      }
      b.exps.push_back(e);
      b.names.push_back(detail::monomial_name(e));
      b.degree.push_back(p);
    }
  }
  if (b.exps.size() != fps.size())
    throw ValidationError(s.name + ": monomials in the P_i do not span cohomology of the expected rank");
  const std::size_t n = b.exps.size();
  b.gram = Matrix<Rat>(n, Rat(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b.degree[i] + b.degree[j] == s.n) b.gram(i, j) = detail::integrate(detail::add_exps(b.exps[i], b.exps[j]), fps);
  return b;
}

/// Non-equivariant basis data as a TargetSpec without columns, for the
/// universal checks on limit tables.
inline TargetSpec nonequivariant_target(const ToricSpec& s, const ClassBasis& b, const std::vector<FixedPoint>& fps) {
  const std::size_t n = b.exps.size();
  TargetSpec t;
  t.name = s.name;
  for (std::size_t i = 0; i < n; ++i) t.basis.push_back({b.names[i], Rat(b.degree[i])});
  t.gram = b.gram;
  t.unit.assign(n, Rat(0));
  t.unit[0] = Rat(1);
  auto ginv = inverse(b.gram);
  if (!ginv) throw ValidationError(s.name + ": degenerate intersection pairing");
  for (std::size_t i = 0; i < s.k(); ++i) {
    std::vector<int> e(s.k(), 0);
    e[i] = 1;
    DivisorData div{"P" + std::to_string(i + 1), std::vector<Rat>(n, Rat(0)), Matrix<Rat>(n, Rat(0)),
                    [i](const Degree& d) { return d[i]; }};
    auto it = std::find(b.exps.begin(), b.exps.end(), e);
    if (it == b.exps.end()) throw ValidationError(s.name + ": divisor P_" + std::to_string(i + 1) + " is not a basis monomial");
    div.coords[static_cast<std::size_t>(it - b.exps.begin())] = Rat(1);
    for (std::size_t j = 0; j < n; ++j) {
      // coordinates of P_i * b_j via the pairing: G c = (int P_i b_j b_r)_r
      std::vector<Rat> rhs(n, Rat(0));
      auto prod = detail::add_exps(e, b.exps[j]);
      for (std::size_t r = 0; r < n; ++r)
        if (b.degree[j] + 1 + b.degree[r] == s.n) rhs[r] = detail::integrate(detail::add_exps(prod, b.exps[r]), fps);
      for (std::size_t c = 0; c < n; ++c) {
        Rat v(0);
        for (std::size_t r = 0; r < n; ++r) v += (*ginv)(c, r) * rhs[r];
        div.multiply(c, j) = v;
      }
    }
    t.divisors.push_back(std::move(div));
  }
  t.degree_rank = s.k();
  t.degrees = [s](const Rat& bound) { return s.degrees(bound); };
  t.c1 = [s](const Degree& d) { return Rat(s.c1(d)); };
  t.dim = s.n;
  // the monomial basis need not pair by a permutation, so finalize() does not apply
  t.gram_inverse = *ginv;
  return t;
}

struct LimitResult {
  InvariantTable table;
  OnePointTable one_point;
  TargetSpec target;  // non-equivariant basis data
  ClassBasis basis;
  std::size_t certified = 0;  // entries compared across the two lambda assignments
};

/// Contracts fixed-point tables at two lambda assignments against the monomial
/// class basis. Keys with degree excess zero must agree across assignments;
/// keys with negative excess must vanish at both. Positive excess is zero by
/// the dimension axiom and is not evaluated.
inline LimitResult nonequivariant_limit(const ToricSpec& s, const Rat& bound, int depth = 0, unsigned threads = 1) {
  ToricLambdas lam = toric_lambdas(s);
  TargetSpec ta = make_toric_target(s, lam.a);
  TargetSpec tb = make_toric_target(s, lam.b);
  if (depth <= 0) depth = ta.default_depth(bound);
  Computation ca = compute_two_point(ta, bound, depth, threads);
  Computation cb = compute_two_point(tb, bound, depth, threads);
  if (!ca.unitarity.pass) throw DivisibilityError(s.name + ": " + ca.unitarity.str(), 0);
  if (!cb.unitarity.pass) throw DivisibilityError(s.name + ": " + cb.unitarity.str(), 0);
  auto fa = toric_fixed_points(s, lam.a);
  auto fb = toric_fixed_points(s, lam.b);
  LimitResult res;
  res.basis = toric_class_basis(s, fa);
  res.target = nonequivariant_target(s, res.basis, fa);
  const std::size_t nb = res.basis.exps.size(), nf = fa.size();

  auto coeffs = [&](const std::vector<FixedPoint>& fps) {
    std::vector<std::vector<Rat>> c(nb, std::vector<Rat>(nf));
    for (std::size_t a = 0; a < nb; ++a)
      for (std::size_t f = 0; f < nf; ++f) c[a][f] = detail::restrict_monomial(res.basis.exps[a], fps[f]) / fps[f].euler;
    return c;
  };
  const auto wa = coeffs(fa), wb = coeffs(fb);

  InvariantTable& out = res.table;
  out = InvariantTable::for_target(res.target);
  out.max_psi_total = ca.invariants.max_psi_total;
  for (const auto& [d, c1] : ca.invariants.c1) out.add_degree(d, c1);

  auto contract2 = [&](const InvariantTable& t, const std::vector<std::vector<Rat>>& w, std::size_t a, int k,
                       std::size_t b, int l, const Degree& d) {
    Rat v(0);
    for (std::size_t f1 = 0; f1 < nf; ++f1) {
      if (w[a][f1].is_zero()) continue;
      for (std::size_t f2 = 0; f2 < nf; ++f2) {
        if (w[b][f2].is_zero()) continue;
        v += w[a][f1] * w[b][f2] * t.value(f1, k, f2, l, d);
      }
    }
    return v;
  };
  auto key_str = [&](std::size_t a, int k, std::size_t b, int l, const Degree& d) {
    return "<" + res.basis.names[a] + " psi^" + std::to_string(k) + ", " + res.basis.names[b] + " psi^" +
           std::to_string(l) + ">_" + d.str();
  };

  for (const auto& [d, c1] : out.c1) {
    const long target_deg = c1.to_long() + s.n - 1;
    for (std::size_t a = 0; a < nb; ++a) {
      for (std::size_t b = 0; b < nb; ++b) {
        for (int k = 0; k <= out.max_psi_total; ++k) {
          for (int l = 0; k + l <= out.max_psi_total; ++l) {
            long excess = res.basis.degree[a] + res.basis.degree[b] + k + l - target_deg;
            if (excess > 0) continue;
            Rat va = contract2(ca.invariants, wa, a, k, b, l, d);
            Rat vb = contract2(cb.invariants, wb, a, k, b, l, d);
            ++res.certified;
            if (va != vb)
              throw LimitError(s.name + ": " + key_str(a, k, b, l, d) + " differs between lambda assignments (" +
                               va.str() + " vs " + vb.str() + ")");
            if (excess < 0 && !va.is_zero())
              throw LimitError(s.name + ": " + key_str(a, k, b, l, d) + " should vanish by degree but is " + va.str());
            out.set(a, k, b, l, d, va);
          }
        }
      }
    }
  }

  res.one_point.max_psi = ca.one_point.max_psi;
  for (const auto& [d, c1] : out.c1) {
    const long target_deg = c1.to_long() + s.n - 2;
    for (std::size_t a = 0; a < nb; ++a) {
      for (int k = 0; k <= res.one_point.max_psi; ++k) {
        long excess = res.basis.degree[a] + k - target_deg;
        if (excess > 0) continue;
        Rat va(0), vb(0);
        for (std::size_t f = 0; f < nf; ++f) {
          va += wa[a][f] * ca.one_point.value(f, k, d);
          vb += wb[a][f] * cb.one_point.value(f, k, d);
        }
        if (va != vb)
          throw LimitError(s.name + ": one-point <" + res.basis.names[a] + " psi^" + std::to_string(k) + ">_" + d.str() +
                           " differs between lambda assignments");
        if (excess < 0 && !va.is_zero()) throw LimitError(s.name + ": one-point value should vanish by degree");
        if (!va.is_zero()) res.one_point.values[{a, k, d}] = va;
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Built-in semi-Fano examples

namespace detail {

inline ToricSpec p1_bundle_builtin(const std::string& name, std::vector<long> p1_row,
                                   std::vector<std::vector<long>> rays) {
  ToricSpec s;
  s.name = name;
  s.n = 3;
  s.rays = std::move(rays);
  s.m = {std::move(p1_row), {0, 0, 1, 1, 1}};
  for (std::size_t base : {0u, 1u})
    for (auto [a, b] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 3}, {2, 4}, {3, 4}})
      s.cones.push_back({base, a, b});
  for (std::size_t i = 0; i < 2; ++i) {
    MoriGenerator g;
    g.coords = {i == 0 ? 1L : 0L, i == 1 ? 1L : 0L};
    g.degrees = s.m[i];
    s.mori.push_back(g);
  }
  validate_toric(s);
  return s;
}

}  // namespace detail

/// P(O + O(1) + O(1)) over P^1: R = (P1, P1, P2, P2 - P1, P2 - P1) - lambda.
inline ToricSpec builtin_x1() {
  ToricSpec s = detail::p1_bundle_builtin("X1", {1, 1, 0, -1, -1},
                                          {{0, 0, 1}, {1, 1, -1}, {-1, -1, 0}, {1, 0, 0}, {0, 1, 0}});
  // the compositions for cones containing rays 4 and 5 carry z-positive terms at degree (1,0)
  s.split_columns = true;
  return s;
}

/// P(O + O + O(2)) over P^1: R = (P1, P1, P2, P2, P2 - 2 P1) - lambda.
inline ToricSpec builtin_x2() {
  return detail::p1_bundle_builtin("X2", {1, 1, 0, 0, -2},
                                   {{0, 0, 1}, {-2, -2, -1}, {1, 0, 0}, {0, 1, 0}, {-1, -1, 0}});
}

inline ToricSpec builtin_spec(const std::string& which) {
  if (which == "X1") return builtin_x1();
  if (which == "X2") return builtin_x2();
  throw ValidationError("unknown built-in target '" + which + "' (expected X1 or X2)");
}

/// The equivariant target for a built-in. X2 needs a mirror change of variables
/// that is not reproduced here, so it is refused unless explicitly overridden.
inline TargetSpec make_builtin_target(const std::string& which, const std::vector<Rat>& lambda, bool allow_uncertified = false) {
  ToricSpec s = builtin_spec(which);
  if (which == "X2" && !allow_uncertified)
    throw NotCertifiedError("X2 two-point extraction needs the mirror change of variables; pass the override to run the uncorrected pipeline");
  return make_toric_target(s, lambda);
}

/// Coefficients (2d-1)!/(d!)^2 of f(Q), d = 1..dmax.
inline std::vector<Rat> x2_f_coefficients(long dmax) {
  std::vector<Rat> out;
  for (long d = 1; d <= dmax; ++d)
    out.push_back(factorial(static_cast<unsigned>(2 * d - 1)) / (factorial(static_cast<unsigned>(d)) * factorial(static_cast<unsigned>(d))));
  return out;
}

/// Scalar series in (Q1, Q2) truncated at total degree `bound`.
using QSeries = std::map<std::pair<long, long>, Rat>;

namespace detail {

inline QSeries q_mul(const QSeries& a, const QSeries& b, long bound) {
  QSeries out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::pair<long, long> e{ea.first + eb.first, ea.second + eb.second};
      if (e.first + e.second > bound) continue;
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

/// 1/g for g with constant term 1, by the recursion on total degree.
inline QSeries q_inverse(const QSeries& g, long bound) {
  auto it = g.find({0, 0});
  if (it == g.end() || it->second != Rat(1)) throw ArithmeticError("series inverse needs constant term 1");
  QSeries inv{{{0, 0}, Rat(1)}};
  for (long t = 1; t <= bound; ++t) {
    for (long a = 0; a <= t; ++a) {
      std::pair<long, long> e{a, t - a};
      Rat acc(0);
      for (const auto& [eg, cg] : g) {
        if (eg.first == 0 && eg.second == 0) continue;
        auto f = inv.find({e.first - eg.first, e.second - eg.second});
        if (f != inv.end()) acc += cg * f->second;
      }
      if (!acc.is_zero()) inv[e] = -acc;
    }
  }
  return inv;
}

}  // namespace detail

/// g1 = 1 + 2 Q1 f'(Q1) and g2 = 1 - Q2 f'(Q1), truncated at total degree `bound`.
struct X2MirrorFactors {
  QSeries g1;
  QSeries g2;
};

inline X2MirrorFactors x2_mirror_factors(long bound) {
  auto f = x2_f_coefficients(bound + 1);
  X2MirrorFactors out;
  out.g1[{0, 0}] = Rat(1);
  out.g2[{0, 0}] = Rat(1);
  for (long d = 1; d <= bound; ++d) {
    // Q1 f'(Q1) = sum d f_d Q1^d ; Q2 f'(Q1) = sum d f_d Q1^{d-1} Q2
    out.g1[{d, 0}] += Rat(2 * d) * f[static_cast<std::size_t>(d - 1)];
    if (d - 1 + 1 <= bound) out.g2[{d - 1, 1}] -= Rat(d) * f[static_cast<std::size_t>(d - 1)];
  }
  std::erase_if(out.g1, [](const auto& kv) { return kv.second.is_zero(); });
  std::erase_if(out.g2, [](const auto& kv) { return kv.second.is_zero(); });
  return out;
}

/// Largest z-exponent of the I-term restricted to any fixed point where it is nonzero,
/// negated: the measured 1/z order. Returns nullopt if the term vanishes everywhere.
inline std::optional<long> measured_i_term_order(const ToricSpec& s, const std::vector<FixedPoint>& fps, const Degree& beta,
                                                 int depth) {
  std::vector<long> R = s.R_of(beta);
  std::optional<long> best;
  for (const auto& fp : fps) {
    ZSeries<Rat> t = toric_term(fp.rho, R, {}, depth);
    if (t.is_zero()) continue;
    long ord = -static_cast<long>(t.max_exponent());
    if (!best || ord < *best) best = ord;
  }
  return best;
}

/// Printed X2 compositions evaluated at the fixed points, normalized by z^{-1}.
/// Each Q-degree maps to one series per fixed point.
enum class X2Composition { D3D1, D4D1, D5D1Main };

struct X2CompositionReport {
  std::string name;
  bool pass = true;  // no positive z power at any degree and fixed point
  std::optional<Degree> first_violation;
  int max_top = INT_MIN;
  std::string str() const {
    std::string s = "X2 " + name + " evaluated: " + (pass ? "pass" : "fail");
    if (first_violation) s += " (z^" + std::to_string(max_top) + " at degree " + first_violation->str() + ")";
    return s;
  }
};

inline X2CompositionReport x2_evaluate_composition(X2Composition which, const std::vector<Rat>& lambda, long bound, int depth) {
  ToricSpec s = builtin_x2();
  auto fps = toric_fixed_points(s, lambda);
  const X2MirrorFactors g = x2_mirror_factors(bound);
  const QSeries ig1 = detail::q_inverse(g.g1, bound), ig2 = detail::q_inverse(g.g2, bound);
  const QSeries one{{{0, 0}, Rat(1)}};

  // Per fixed point, per Q-degree: accumulated series.
  using PointTable = std::map<std::pair<long, long>, std::vector<ZSeries<Rat>>>;
  PointTable acc;
  auto add_scaled = [&](const std::pair<long, long>& e, std::size_t f, const ZSeries<Rat>& v) {
    if (e.first + e.second > bound) return;
    auto [it, fresh] = acc.try_emplace(e, std::vector<ZSeries<Rat>>(fps.size(), ZSeries<Rat>(0, kExactDepth)));
    it->second[f] += v;
  };
  auto lin = [](const Rat& c0, const Rat& c1) {
    ZSeries<Rat> l(1, kExactDepth);
    l.set(0, c0);
    l.set(1, c1);
    return l;
  };

  std::string name;
  for (long d1 = 0; d1 <= bound; ++d1) {
    for (long d2 = 0; d1 + d2 <= bound; ++d2) {
      Degree beta({Rat(d1), Rat(d2)});
      std::vector<long> R = s.R_of(beta);
      const long room = bound - d1 - d2;
      for (std::size_t f = 0; f < fps.size(); ++f) {
        const auto& fp = fps[f];
        ZSeries<Rat> iterm = toric_term(fp.rho, R, {}, depth + 2);
        if (iterm.is_zero()) continue;
        const Rat x1 = fp.x[0], x2 = fp.x[1];
        // Each factor is a sum over Q-monomials of (c0 + c1 z) terms.
        std::map<std::pair<long, long>, ZSeries<Rat>> a, b;
        QSeries prefactor;
        if (which == X2Composition::D5D1Main) {
          name = "(5,1) main term";
          // (x1 - g1 lambda1 + d1 z)
          for (const auto& [e, c] : g.g1) a[e] += lin(-c * lambda[0], Rat(0));
          a[{0, 0}] += lin(x1, Rat(d1));
          // x2/g2 - 2 x1/g1 - lambda5 + (d2/g2 - 2 d1/g1) z
          for (const auto& [e, c] : ig2) b[e] += lin(c * x2, c * Rat(d2));
          for (const auto& [e, c] : ig1) b[e] += lin(Rat(-2) * c * x1, Rat(-2) * c * Rat(d1));
          b[{0, 0}] += lin(-lambda[4], Rat(0));
          prefactor = ig1;
        } else {
          const bool four = which == X2Composition::D4D1;
          name = four ? "(4,1)" : "(3,1)";
          const Rat lam2 = four ? lambda[3] : lambda[2];
          for (const auto& [e, c] : g.g1) a[e] += lin(-c * lambda[0], Rat(0));
          a[{0, 0}] += lin(x1, Rat(d1));
          for (const auto& [e, c] : g.g2) b[e] += lin(-c * lam2, Rat(0));
          b[{0, 0}] += lin(x2, Rat(d2));
          prefactor = detail::q_mul(ig1, ig2, bound);
        }
        for (const auto& [ea, va] : a) {
          for (const auto& [eb, vb] : b) {
            for (const auto& [ep, cp] : prefactor) {
              std::pair<long, long> e{ea.first + eb.first + ep.first, ea.second + eb.second + ep.second};
              if (e.first + e.second > room) continue;
              ZSeries<Rat> v = va * vb * iterm * cp;
              add_scaled({e.first + d1, e.second + d2}, f, v);
            }
          }
        }
      }
    }
  }

  X2CompositionReport rep;
  rep.name = name;
  for (const auto& [e, vec] : acc) {
    for (const auto& v : vec) {
      if (v.is_zero()) continue;
      int top = v.max_exponent();
      if (top > 0 && rep.pass) {
        rep.pass = false;
        rep.first_violation = Degree({Rat(e.first), Rat(e.second)});
        rep.max_top = top;
      }
    }
  }
  return rep;
}

}  // namespace twopoint
