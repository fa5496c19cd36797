#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "twopoint/invariants.hpp"
#include "twopoint/parallel.hpp"
#include "twopoint/target.hpp"

namespace twopoint {

using SeriesMatrix = Matrix<ZSeries<Rat>>;
using BiSeriesMatrix = Matrix<BiZSeries<Rat>>;

/// Per-degree matrices of one-variable series. Entry (i, j) at degree b is the
/// component along v_i of column j at Q^b.
struct STable {
  NovikovTable<SeriesMatrix> table;
  int depth = 0;
};

/// Per-degree matrices of two-point generating series R(z1, z2).
struct RTable {
  NovikovTable<BiSeriesMatrix> table;
  int depth = 0;
};

namespace detail {

inline SeriesMatrix identity_series(std::size_t n) {
  SeriesMatrix id(n, ZSeries<Rat>(0, kExactDepth));
  for (std::size_t i = 0; i < n; ++i) id(i, i) = ZSeries<Rat>::constant(Rat(1));
  return id;
}

inline std::string entry_label(const TargetSpec& t, std::size_t i, std::size_t j) {
  return "(" + t.basis.at(i).name + ", " + t.basis.at(j).name + ")";
}

}  // namespace detail

/// Assembles the normalized S*-columns for every degree up to `bound`.
/// Fails with ConditionError if a column carries positive powers of z, and with
/// ValidationError if the degree-zero block is not the identity.
inline STable build_s_adjoint(const TargetSpec& target, const Rat& bound, int depth, unsigned threads = 1) {
  const std::size_t n = target.size();
  const std::vector<Degree> degrees = target.degrees(bound);
  const std::size_t tasks = degrees.size() * n;

  auto columns = parallel_map(tasks, threads, [&](std::size_t task) {
    const Degree& d = degrees[task / n];
    const std::size_t j = task % n;
    std::vector<ZSeries<Rat>> col = target.column(j, d, depth);
    if (col.size() != n) throw ValidationError(target.name + ": column generator returned wrong length");
    for (std::size_t i = 0; i < n; ++i) {
      if (col[i].max_exponent() > 0) {
        std::ostringstream os;
        os << target.name << ": column " << target.basis[j].name << " at degree " << d.str() << " has a z^"
           << col[i].max_exponent() << " term along " << target.basis[i].name
           << " (only non-positive powers of z are allowed)";
        throw ConditionError(os.str());
      }
      col[i] = col[i].with_top(0).truncated(depth);
    }
    return col;
  });

  STable out{NovikovTable<SeriesMatrix>(target.degree_rank, bound), depth};
  for (std::size_t di = 0; di < degrees.size(); ++di) {
    SeriesMatrix mat(n, ZSeries<Rat>(0, depth));
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) mat(i, j) = std::move(columns[di * n + j][i]);
    if (degrees[di].is_zero()) {
      if (!(mat == detail::identity_series(n)))
        throw ValidationError(target.name + ": degree-zero columns are not the identity");
    }
    out.table.set(degrees[di], std::move(mat));
  }
  return out;
}

/// S from S*: S_ij = (m_j / m_i) A_{hat(j), hat(i)}.
inline STable adjoint_to_s(const STable& a, const TargetSpec& target) {
  const std::size_t n = target.size();
  STable out{NovikovTable<SeriesMatrix>(a.table.rank, a.table.bound), a.depth};
  for (const auto& [d, mat] : a.table.entries) {
    if (mat.size() != n) throw ValidationError("S-table does not match the target basis");
    SeriesMatrix s(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) s(i, j) = mat(target.hat[j], target.hat[i]) * (target.m[j] / target.m[i]);
    out.table.set(d, std::move(s));
  }
  return out;
}

struct UnitarityReport {
  bool pass = true;
  std::optional<Degree> degree;
  std::size_t row = 0;
  std::size_t col = 0;
  int exponent = 0;
  std::size_t degrees_checked = 0;

  std::string str() const {
    if (pass) return "unitarity holds on " + std::to_string(degrees_checked) + " degrees";
    return "unitarity fails at degree " + degree->str() + ", entry (" + std::to_string(row) + "," +
           std::to_string(col) + "), z^" + std::to_string(exponent);
  }
};

/// Verifies sum_{b1 + b2 = b} A(b1)(-z) S(b2)(z) = delta_{b,0} Id for every degree.
inline UnitarityReport check_unitarity(const STable& a, const TargetSpec& target, const Rat& bound) {
  const std::size_t n = target.size();
  STable s = adjoint_to_s(a, target);
  UnitarityReport report;
  for (const auto& [d, unused] : a.table.entries) {
    if (d.total() > bound) continue;
    ++report.degrees_checked;
    SeriesMatrix acc(n, ZSeries<Rat>(0, a.depth));
    for (const auto& [d1, a1] : a.table.entries) {
      Degree d2 = d - d1;
      if (!d2.effective()) continue;
      const SeriesMatrix* s2 = s.table.find(d2);
      if (!s2) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) acc(i, j) += a1(i, k).negated_z() * (*s2)(k, j);
    }
    if (d.is_zero()) acc += [&] {
        SeriesMatrix neg = detail::identity_series(n);
        for (std::size_t i = 0; i < n; ++i) neg(i, i) *= Rat(-1);
        return neg;
      }();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        ZSeries<Rat> e = acc(i, j).truncated(a.depth);
        if (!e.is_zero()) {
          report.pass = false;
          report.degree = d;
          report.row = i;
          report.col = j;
          report.exponent = e.max_exponent();
          return report;
        }
      }
    }
  }
  return report;
}

/// R(b) = (sum_{b1 + b2 = b} A(b1)(z1) S(b2)(z2) - delta_{b,0} Id) / (z1 + z2).
inline RTable build_r(const STable& a, const TargetSpec& target, const Rat& bound, unsigned threads = 1) {
  const std::size_t n = target.size();
  const STable s = adjoint_to_s(a, target);
  std::vector<Degree> degrees;
  for (const auto& [d, unused] : a.table.entries)
    if (d.total() <= bound) degrees.push_back(d);

  auto mats = parallel_map(degrees.size(), threads, [&](std::size_t di) {
    const Degree& d = degrees[di];
    BiSeriesMatrix r(n, BiZSeries<Rat>(a.depth, a.depth, 2 * a.depth));
    if (d.is_zero()) return r;
    BiSeriesMatrix t(n, BiZSeries<Rat>(a.depth, a.depth, 2 * a.depth));
    for (const auto& [d1, a1] : a.table.entries) {
      Degree d2 = d - d1;
      if (!d2.effective()) continue;
      const SeriesMatrix* s2 = s.table.find(d2);
      if (!s2) continue;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t k = 0; k < n; ++k) {
            if (a1(i, k).is_zero() || (*s2)(k, j).is_zero()) continue;
            t(i, j) += BiZSeries<Rat>::outer(a1(i, k), (*s2)(k, j));
          }
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        try {
          r(i, j) = divide_by_z1_plus_z2(t(i, j));
        } catch (const DivisibilityError& e) {
          throw DivisibilityError(target.name + ": degree " + d.str() + ", entry " +
                                      detail::entry_label(target, i, j) + ": " + e.what(),
                                  e.antidiagonal());
        }
      }
    }
    return r;
  });

  RTable out{NovikovTable<BiSeriesMatrix>(a.table.rank, bound), a.depth};
  for (std::size_t di = 0; di < degrees.size(); ++di) out.table.set(degrees[di], std::move(mats[di]));
  return out;
}

/// Reads two-point invariants off R:
/// <v_hat(i) psi^k, v_j psi^l>_b = m_i [z1^{-k-1} z2^{-l-1}] R_ij(b).
inline InvariantTable extract_invariants(const RTable& r, const TargetSpec& target) {
  const std::size_t n = target.size();
  InvariantTable out = InvariantTable::for_target(target);
  out.max_psi_total = r.depth - 1;
  for (const auto& [d, mat] : r.table.entries) {
    if (d.is_zero()) continue;
    out.add_degree(d, target.c1(d));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (const auto& [key, c] : mat(i, j).terms()) {
          int k = -key.first - 1;
          int l = -key.second - 1;
          if (k < 0 || l < 0 || k + l > out.max_psi_total) continue;
          out.set(target.hat[i], k, j, l, d, c * target.m[i]);
        }
      }
    }
  }
  return out;
}

/// One-point descendants <v_hat(i) psi^k>_{0,1,b} = m_i [z^{-k-2}] (A(b) * unit)_i.
inline OnePointTable one_point_invariants(const STable& a, const TargetSpec& target) {
  const std::size_t n = target.size();
  OnePointTable out;
  out.max_psi = a.depth - 2;
  for (const auto& [d, mat] : a.table.entries) {
    if (d.is_zero()) continue;
    for (std::size_t i = 0; i < n; ++i) {
      ZSeries<Rat> col(0, a.depth);
      for (std::size_t u = 0; u < n; ++u)
        if (!target.unit[u].is_zero()) col += mat(i, u) * target.unit[u];
      for (const auto& [e, c] : col.terms()) {
        int k = -e - 2;
        if (k < 0 || k > out.max_psi) continue;
        out.values[{target.hat[i], k, d}] = c * target.m[i];
      }
    }
  }
  return out;
}

/// String and divisor equations against one-point data:
///   <a psi^k, 1>_b = <a psi^{k-1}>_b                                  (k >= 1)
///   <a psi^k, D>_b = <D,b> <a psi^k>_b + sum_c (D a)_c <v_c psi^{k-1}>_b
/// The k = 0 string cases are unstable reductions and are counted as skipped.
inline CheckReport check_string_divisor(const InvariantTable& inv, const OnePointTable& one,
                                        const TargetSpec& target) {
  CheckReport r{"string-divisor"};
  const std::size_t n = target.size();
  const int kmax = std::min(inv.max_psi_total, one.max_psi);
  auto label = [&](const std::string& what, std::size_t a, int k, const Degree& d, const Rat& lhs, const Rat& rhs) {
    return what + " fails for " + target.basis[a].name + " psi^" + std::to_string(k) + " at degree " + d.str() +
           ": " + lhs.str() + " != " + rhs.str();
  };
  for (const auto& [d, c1] : inv.c1) {
    for (std::size_t a = 0; a < n; ++a) {
      for (int k = 0; k <= kmax; ++k) {
        if (k == 0) {
          ++r.skipped;
        } else {
          ++r.checked;
          Rat lhs(0);
          for (std::size_t u = 0; u < n; ++u)
            if (!target.unit[u].is_zero()) lhs += target.unit[u] * inv.value(a, k, u, 0, d);
          Rat rhs = one.value(a, k - 1, d);
          if (lhs != rhs) r.fail(label("string equation", a, k, d, lhs, rhs));
        }
        for (const auto& div : target.divisors) {
          ++r.checked;
          Rat lhs(0);
          for (std::size_t c = 0; c < n; ++c)
            if (!div.coords[c].is_zero()) lhs += div.coords[c] * inv.value(a, k, c, 0, d);
          Rat rhs = div.pairing(d) * one.value(a, k, d);
          if (k >= 1)
            for (std::size_t c = 0; c < n; ++c)
              if (!div.multiply(c, a).is_zero()) rhs += div.multiply(c, a) * one.value(c, k - 1, d);
          if (lhs != rhs) r.fail(label("divisor equation for " + div.name, a, k, d, lhs, rhs));
        }
      }
    }
  }
  return r;
}

/// The whole pipeline for one target: columns, unitarity, R, extraction.
struct Computation {
  STable adjoint;
  RTable r;
  InvariantTable invariants;
  OnePointTable one_point;
  UnitarityReport unitarity;
};

inline Computation compute_two_point(const TargetSpec& target, const Rat& bound, int depth, unsigned threads = 1) {
  Computation c;
  c.adjoint = build_s_adjoint(target, bound, depth, threads);
  c.unitarity = check_unitarity(c.adjoint, target, bound);
  c.r = build_r(c.adjoint, target, bound, threads);
  c.invariants = extract_invariants(c.r, target);
  c.one_point = one_point_invariants(c.adjoint, target);
  return c;
}

}  // namespace twopoint
