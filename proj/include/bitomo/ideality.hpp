#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bitomo/checked.hpp"
#include "bitomo/dimension_calculus.hpp"
#include "bitomo/errors.hpp"
#include "bitomo/partitions.hpp"
#include "bitomo/rational.hpp"

namespace bitomo {

/// Partition shape: block sizes sorted descending.  Shapes double as the
/// identifiers of the permutation-invariant ansatz coefficients.
using Shape = std::vector<int>;

/// One unknown coefficient per partition shape of n+1 elements, excluding
/// the single-block shape (the left-hand side).
struct PartitionAnsatz {
  int n = 1;
  std::vector<Shape> shapes;
};

inline PartitionAnsatz build_ansatz(int n) {
  if (n < 1) throw DomainError("ansatz level must be >= 1");
  PartitionAnsatz ansatz;
  ansatz.n = n;
  for (auto& shape : integer_partitions(n + 1))
    if (shape.size() > 1) ansatz.shapes.push_back(shape);
  return ansatz;
}

/// Linear expression over the ansatz unknowns plus a constant term.
struct LinExpr {
  std::map<Shape, Rational> coeffs;
  Rational constant;

  LinExpr& add_term(const Shape& shape, const Rational& c) {
    Rational& v = coeffs[shape];
    v += c;
    if (v.is_zero()) coeffs.erase(shape);
    return *this;
  }

  bool is_zero() const { return constant.is_zero() && coeffs.empty(); }

  friend LinExpr operator-(LinExpr a, const LinExpr& b) {
    a.constant -= b.constant;
    for (const auto& [shape, c] : b.coeffs) a.add_term(shape, -c);
    return a;
  }
  friend bool operator==(const LinExpr& a, const LinExpr& b) {
    return (a - b).is_zero();
  }
};

struct Constraint {
  LinExpr expr;  // equation expr == 0
  std::string tag;
};

struct ConstraintSystem {
  std::vector<Constraint> equations;
};

/// Result of substituting trivial systems into the ansatz: the collected
/// coefficient of each surviving product shape, and the relations obtained
/// by requiring the reduced equation to hold identically.
struct ReducedEquation {
  int survivors = 0;
  std::map<Shape, LinExpr> shape_exprs;
  ConstraintSystem vacuity;
};

/// Substitutes K = 1 for the last num_trivial components.  Blocks made of
/// trivial components drop out entirely; partially trivial blocks shrink to
/// their surviving members.
inline ReducedEquation trivial_reduce(const PartitionAnsatz& ansatz,
                                      int num_trivial) {
  if (num_trivial < 1 || num_trivial > ansatz.n)
    throw DomainError("trivial reduction needs 1 <= num_trivial <= level");
  const int total = ansatz.n + 1;
  const int survivors = total - num_trivial;

  std::map<SetPartition, LinExpr> by_product;
  for (const auto& partition : all_set_partitions(total)) {
    if (partition.size() == 1) continue;
    const Shape shape = shape_of(partition);
    SetPartition reduced;
    for (const auto& block : partition) {
      std::vector<int> kept;
      for (int e : block)
        if (e < survivors) kept.push_back(e);
      if (!kept.empty()) reduced.push_back(std::move(kept));
    }
    std::sort(reduced.begin(), reduced.end());
    by_product[reduced].add_term(shape, Rational(1));
  }

  ReducedEquation out;
  out.survivors = survivors;
  for (const auto& [product, expr] : by_product) {
    const Shape rshape = shape_of(product);
    auto it = out.shape_exprs.find(rshape);
    if (it == out.shape_exprs.end())
      out.shape_exprs.emplace(rshape, expr);
    else if (!(it->second == expr))
      throw DerivationError("trivial reduction broke permutation symmetry");
  }

  const Shape full{survivors};
  for (const auto& [rshape, expr] : out.shape_exprs) {
    LinExpr eq = expr;
    if (rshape == full) eq.constant -= Rational(1);
    out.vacuity.equations.push_back(
        {std::move(eq), "trivial-system-" + std::to_string(num_trivial)});
  }
  return out;
}

/// Requiring the one-trivial-system reduction of the level-3 ansatz to be
/// vacuous yields exactly alpha = 1, alpha + beta + gamma = 0 and
/// 3 gamma + delta = 0.
inline ConstraintSystem novelty_constraints(int n) {
  if (n != 3)
    throw UnsupportedLevelError("novelty constraints derived only for level 3");
  ConstraintSystem out;
  for (auto eq : trivial_reduce(build_ansatz(3), 1).vacuity.equations) {
    eq.tag = "novelty";
    out.equations.push_back(std::move(eq));
  }
  return out;
}

/// Reduced row echelon form in place; returns the rank.
inline int rational_rref(std::vector<std::vector<Rational>>& m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (!m[r][col].is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    const Rational inv = Rational(1) / m[rank][col];
    for (auto& v : m[rank]) v *= inv;
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][col].is_zero()) continue;
      const Rational f = m[r][col];
      for (int c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

/// Solves the system exactly; throws DerivationError unless the solution is
/// unique.
inline std::map<Shape, Rational> solve_linear(
    const ConstraintSystem& system, const std::vector<Shape>& unknowns) {
  const int u = static_cast<int>(unknowns.size());
  std::vector<std::vector<Rational>> m;
  for (const auto& eq : system.equations) {
    std::vector<Rational> row(u + 1);
    for (int j = 0; j < u; ++j) {
      auto it = eq.expr.coeffs.find(unknowns[j]);
      if (it != eq.expr.coeffs.end()) row[j] = it->second;
    }
    row[u] = -eq.expr.constant;
    m.push_back(std::move(row));
  }
  const int rank = rational_rref(m);
  for (const auto& row : m) {
    bool all_zero = true;
    for (int j = 0; j < u; ++j)
      if (!row[j].is_zero()) all_zero = false;
    if (all_zero && !row[u].is_zero())
      throw DerivationError("constraint system is inconsistent");
  }
  if (rank < u) throw DerivationError("constraint system is underdetermined");

  std::map<Shape, Rational> solution;
  for (int r = 0; r < rank; ++r) {
    int pivot = -1;
    for (int j = 0; j < u; ++j) {
      if (!m[r][j].is_zero()) {
        pivot = j;
        break;
      }
    }
    if (pivot >= 0) solution[unknowns[pivot]] = m[r][u];
  }
  return solution;
}

/// Coefficient linear in the free parameter: value = a + b * epsilon.
struct EpsCoeff {
  Rational a;
  Rational b;
};

/// The one-parameter family of level-3 coefficients obtained from the
/// bilocal ideality equation.
struct InclusionFamily {
  std::map<Shape, EpsCoeff> coeffs;

  std::map<Shape, Rational> at(const Rational& eps) const {
    std::map<Shape, Rational> out;
    for (const auto& [shape, c] : coeffs) out[shape] = c.a + c.b * eps;
    return out;
  }
};

/// Re-derives the family (1/2 + eps, 1/3, -1/3 - 2 eps, 8 eps): fuse two of
/// the four components in the three-component bilocal equation, average over
/// all ways of doing so, then add eps times the (identically vanishing)
/// three-component equation applied to each triple and multiplied by the
/// remaining component's K.
inline InclusionFamily inclusion_family(int n) {
  if (n != 3)
    throw UnsupportedLevelError("inclusion family derived only for level 3");

  std::map<SetPartition, EpsCoeff> products;
  auto add = [&](SetPartition p, const Rational& a, const Rational& b) {
    for (auto& block : p) std::sort(block.begin(), block.end());
    std::sort(p.begin(), p.end());
    EpsCoeff& c = products[p];
    c.a += a;
    c.b += b;
  };

  // Average of K_abcd = K_ab K_cd + K_acd K_b + K_bcd K_a - 2 K_a K_b K_cd
  // over the six choices of the fused pair {c, d}.
  const Rational sixth(1, 6);
  for (int c1 = 0; c1 < 4; ++c1) {
    for (int c2 = c1 + 1; c2 < 4; ++c2) {
      std::vector<int> rest;
      for (int x = 0; x < 4; ++x)
        if (x != c1 && x != c2) rest.push_back(x);
      const int a = rest[0];
      const int b = rest[1];
      add({{a, b}, {c1, c2}}, sixth, Rational(0));
      add({{a, c1, c2}, {b}}, sixth, Rational(0));
      add({{b, c1, c2}, {a}}, sixth, Rational(0));
      add({{a}, {b}, {c1, c2}}, Rational(-2, 6), Rational(0));
    }
  }

  // eps * [K_xyz - (K_xy K_z + K_xz K_y + K_yz K_x) + 2 K_x K_y K_z] * K_w
  // for each triple {x, y, z}; the bracket vanishes for bilocally ideal
  // theories, so the family stays valid for every eps.
  for (int w = 0; w < 4; ++w) {
    std::vector<int> t;
    for (int x = 0; x < 4; ++x)
      if (x != w) t.push_back(x);
    add({t, {w}}, Rational(0), Rational(1));
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        int z = t[0] + t[1] + t[2] - t[i] - t[j];
        add({{t[i], t[j]}, {z}, {w}}, Rational(0), Rational(-1));
      }
    }
    add({{t[0]}, {t[1]}, {t[2]}, {w}}, Rational(0), Rational(2));
  }

  InclusionFamily family;
  for (const auto& [product, coeff] : products) {
    const Shape shape = shape_of(product);
    auto it = family.coeffs.find(shape);
    if (it == family.coeffs.end()) {
      family.coeffs.emplace(shape, coeff);
    } else if (!(it->second.a == coeff.a) || !(it->second.b == coeff.b)) {
      throw DerivationError("symmetrization broke permutation symmetry");
    }
  }
  return family;
}

struct IdealitySolution {
  int n = 1;
  std::map<Shape, Rational> coefficients;
  std::optional<Rational> epsilon;
};

/// Levels 1 and 2 follow from the trivial-system reduction alone; level 3
/// intersects the novelty constraints with the inclusion family, which pins
/// epsilon = 1/2.
inline IdealitySolution solve_ideality(int n) {
  if (n < 1 || n > 3)
    throw UnsupportedLevelError("ideality solver supports levels 1 to 3");
  const PartitionAnsatz ansatz = build_ansatz(n);
  if (n <= 2) {
    const ReducedEquation reduced = trivial_reduce(ansatz, 1);
    return IdealitySolution{n, solve_linear(reduced.vacuity, ansatz.shapes),
                            std::nullopt};
  }

  const ConstraintSystem novelty = novelty_constraints(n);
  const InclusionFamily family = inclusion_family(n);
  std::optional<Rational> eps;
  for (const auto& eq : novelty.equations) {
    Rational a = eq.expr.constant;
    Rational b;
    for (const auto& [shape, c] : eq.expr.coeffs) {
      const EpsCoeff& f = family.coeffs.at(shape);
      a += c * f.a;
      b += c * f.b;
    }
    if (b.is_zero()) {
      if (!a.is_zero())
        throw DerivationError("novelty and inclusion are inconsistent");
      continue;
    }
    const Rational candidate = -a / b;
    if (eps && !(*eps == candidate))
      throw DerivationError("novelty equations disagree on epsilon");
    eps = candidate;
  }
  if (!eps) throw DerivationError("epsilon is underdetermined");
  return IdealitySolution{n, family.at(*eps), eps};
}

/// Evaluates the level-3 ideality equation, scaled by 3 to clear
/// denominators, on the K values of a concrete theory; returns the absolute
/// integer residual (0 for every bilocally ideal theory).
inline std::int64_t verify_inclusion_numeric(const TheoryProfile& profile,
                                             const SystemDims& dims) {
  validate_profile(profile);
  validate_dims(dims);
  if (dims.size() != 4)
    throw DomainError("inclusion check needs exactly 4 components");

  const IdealitySolution solution = solve_ideality(3);

  std::array<std::int64_t, 16> k{};
  for (int mask = 1; mask < 16; ++mask) {
    SystemDims sub;
    for (int i = 0; i < 4; ++i)
      if (mask & (1 << i)) sub.push_back(dims[i]);
    k[mask] = kl_multi(sub, profile).k;
  }

  std::int64_t rhs = 0;
  for (const auto& partition : all_set_partitions(4)) {
    if (partition.size() == 1) continue;
    const Rational scaled = solution.coefficients.at(shape_of(partition)) * 3;
    if (!scaled.is_integer())
      throw DerivationError("scaled coefficient is not an integer");
    std::int64_t term = scaled.numerator();
    for (const auto& block : partition) {
      int mask = 0;
      for (int e : block) mask |= 1 << e;
      term = checked_mul(term, k[mask]);
    }
    rhs = checked_add(rhs, term);
  }
  const std::int64_t diff = checked_sub(checked_mul(3, k[15]), rhs);
  return diff < 0 ? -diff : diff;
}

}  // namespace bitomo
