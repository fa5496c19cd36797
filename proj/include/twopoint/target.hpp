#pragma once

#include <functional>
#include <string>
#include <vector>

#include "twopoint/algebra.hpp"

namespace twopoint {

struct BasisElement {
  std::string name;
  Rat degree;  // complex degree, including the age shift of its sector
};

/// A divisor class used by the divisor-equation check.
struct DivisorData {
  std::string name;
  std::vector<Rat> coords;                    // coordinates in the target basis
  Matrix<Rat> multiply;                       // (c, j): coordinate along v_c of D * v_j
  std::function<Rat(const Degree&)> pairing;  // <D, beta>
};

/// Column generator: (column j, degree, depth) -> components along v_1..v_N of the
/// normalized column of S*, i.e. of grad_{v_j} J at Q^degree (identity at degree 0).
using ColumnFn = std::function<std::vector<ZSeries<Rat>>(std::size_t, const Degree&, int)>;

/// Everything the engine needs to know about a target geometry.
///
/// The basis must pair diagonally up to a permutation: (v_hat(i), v_j) = m_i
/// delta_{hat(i), j}. `finalize()` derives hat and m from the Gram matrix and
/// checks the invariants (hat an involution, m_hat(j) = m_j).
struct TargetSpec {
  std::string name;
  std::vector<BasisElement> basis;
  Matrix<Rat> gram;  // (v_i, v_j)
  std::vector<Rat> unit;
  std::vector<DivisorData> divisors;
  std::size_t degree_rank = 1;
  std::function<std::vector<Degree>(const Rat& bound)> degrees;  // effective, sorted, includes 0
  std::function<Rat(const Degree&)> c1;
  int dim = 0;
  bool equivariant = false;
  ColumnFn column;

  std::vector<std::size_t> hat;
  std::vector<Rat> m;
  Matrix<Rat> gram_inverse;

  std::size_t size() const { return basis.size(); }

  void finalize() {
    const std::size_t n = basis.size();
    if (n == 0) throw ValidationError(name + ": empty basis");
    if (gram.size() != n || unit.size() != n) throw ValidationError(name + ": Gram matrix or unit has wrong size");
    hat.assign(n, n);
    m.assign(n, Rat(0));
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        if (gram(i, j).is_zero()) continue;
        if (hat[j] != n) throw ValidationError(name + ": pairing is not diagonal up to a permutation (column " + std::to_string(j) + ")");
        hat[j] = i;
      }
      if (hat[j] == n) throw ValidationError(name + ": degenerate pairing at basis element " + basis[j].name);
      m[j] = gram(hat[j], j);
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (hat[hat[j]] != j) throw ValidationError(name + ": hat is not an involution");
      if (m[hat[j]] != m[j]) throw ValidationError(name + ": pairing constants violate m_hat(j) = m_j");
    }
    auto inv = inverse(gram);
    if (!inv) throw ValidationError(name + ": singular Gram matrix");
    gram_inverse = *inv;
    for (const auto& d : divisors)
      if (d.coords.size() != n || d.multiply.size() != n) throw ValidationError(name + ": divisor data has wrong size");
  }

  /// Smallest depth that keeps every dimension-admissible two-point invariant
  /// up to `bound` exact: max c1(beta) + dim + 1.
  int default_depth(const Rat& bound) const {
    Rat best(0);
    for (const auto& d : degrees(bound)) best = std::max(best, c1(d));
    return static_cast<int>(best.ceil().get_si()) + dim + 1;
  }
};

}  // namespace twopoint
