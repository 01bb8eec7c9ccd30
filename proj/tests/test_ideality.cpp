#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "bitomo/ideality.hpp"

using namespace bitomo;

namespace {

const Shape kS31{3, 1};
const Shape kS22{2, 2};
const Shape kS211{2, 1, 1};
const Shape kS1111{1, 1, 1, 1};

bool system_contains(const ConstraintSystem& system, const LinExpr& expected) {
  for (const auto& eq : system.equations)
    if (eq.expr == expected) return true;
  return false;
}

/// Rows of the augmented rational matrix (unknown coefficients, constant).
std::vector<std::vector<Rational>> as_rows(const ConstraintSystem& system,
                                           const std::vector<Shape>& unknowns) {
  std::vector<std::vector<Rational>> rows;
  for (const auto& eq : system.equations) {
    std::vector<Rational> row(unknowns.size() + 1);
    for (std::size_t j = 0; j < unknowns.size(); ++j) {
      auto it = eq.expr.coeffs.find(unknowns[j]);
      if (it != eq.expr.coeffs.end()) row[j] = it->second;
    }
    row.back() = eq.expr.constant;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("ansatz shapes", "[ideality]") {
  CHECK(build_ansatz(1).shapes == std::vector<Shape>{{1, 1}});
  CHECK(build_ansatz(2).shapes == std::vector<Shape>{{2, 1}, {1, 1, 1}});
  CHECK(build_ansatz(3).shapes ==
        std::vector<Shape>{kS31, kS22, kS211, kS1111});
  for (int n = 1; n <= 5; ++n)
    CHECK(build_ansatz(n).shapes.size() ==
          integer_partitions(n + 1).size() - 1);
  CHECK_THROWS_AS(build_ansatz(0), DomainError);
}

TEST_CASE("one trivial system reduces the level-3 ansatz", "[ideality]") {
  const ReducedEquation reduced = trivial_reduce(build_ansatz(3), 1);
  CHECK(reduced.survivors == 3);
  REQUIRE(reduced.shape_exprs.size() == 3);

  LinExpr alpha;
  alpha.add_term(kS31, Rational(1));
  CHECK(reduced.shape_exprs.at(Shape{3}) == alpha);

  LinExpr sum_abc;
  sum_abc.add_term(kS31, Rational(1));
  sum_abc.add_term(kS22, Rational(1));
  sum_abc.add_term(kS211, Rational(1));
  CHECK(reduced.shape_exprs.at(Shape{2, 1}) == sum_abc);

  LinExpr tail;
  tail.add_term(kS211, Rational(3));
  tail.add_term(kS1111, Rational(1));
  CHECK(reduced.shape_exprs.at(Shape{1, 1, 1}) == tail);

  REQUIRE(reduced.vacuity.equations.size() == 3);
  LinExpr alpha_minus_one = alpha;
  alpha_minus_one.constant -= Rational(1);
  CHECK(system_contains(reduced.vacuity, alpha_minus_one));
  CHECK(system_contains(reduced.vacuity, sum_abc));
  CHECK(system_contains(reduced.vacuity, tail));
}

TEST_CASE("lower-level reductions", "[ideality]") {
  const ReducedEquation level1 = trivial_reduce(build_ansatz(1), 1);
  REQUIRE(level1.vacuity.equations.size() == 1);
  LinExpr alpha_minus_one;
  alpha_minus_one.add_term({1, 1}, Rational(1));
  alpha_minus_one.constant = Rational(-1);
  CHECK(system_contains(level1.vacuity, alpha_minus_one));

  const ReducedEquation level2 = trivial_reduce(build_ansatz(2), 1);
  REQUIRE(level2.vacuity.equations.size() == 2);
  LinExpr pair_eq;
  pair_eq.add_term({2, 1}, Rational(1));
  pair_eq.constant = Rational(-1);
  LinExpr singles_eq;
  singles_eq.add_term({2, 1}, Rational(2));
  singles_eq.add_term({1, 1, 1}, Rational(1));
  CHECK(system_contains(level2.vacuity, pair_eq));
  CHECK(system_contains(level2.vacuity, singles_eq));

  CHECK_THROWS_AS(trivial_reduce(build_ansatz(2), 0), DomainError);
  CHECK_THROWS_AS(trivial_reduce(build_ansatz(2), 3), DomainError);
}

TEST_CASE("two trivial systems stay in the span of one", "[ideality]") {
  const PartitionAnsatz ansatz = build_ansatz(3);
  const ConstraintSystem one = trivial_reduce(ansatz, 1).vacuity;
  const ConstraintSystem two = trivial_reduce(ansatz, 2).vacuity;
  CHECK(two.equations.size() == 2);

  auto rows_one = as_rows(one, ansatz.shapes);
  auto rows_both = rows_one;
  for (auto& row : as_rows(two, ansatz.shapes)) rows_both.push_back(row);

  const int rank_one = rational_rref(rows_one);
  const int rank_both = rational_rref(rows_both);
  CHECK(rank_one == 3);
  CHECK(rank_both == rank_one);
}

TEST_CASE("novelty constraints", "[ideality]") {
  const ConstraintSystem novelty = novelty_constraints(3);
  REQUIRE(novelty.equations.size() == 3);
  for (const auto& eq : novelty.equations) CHECK(eq.tag == "novelty");

  LinExpr alpha_is_one;
  alpha_is_one.add_term(kS31, Rational(1));
  alpha_is_one.constant = Rational(-1);
  LinExpr abc_sum;
  abc_sum.add_term(kS31, Rational(1));
  abc_sum.add_term(kS22, Rational(1));
  abc_sum.add_term(kS211, Rational(1));
  LinExpr gamma_delta;
  gamma_delta.add_term(kS211, Rational(3));
  gamma_delta.add_term(kS1111, Rational(1));
  CHECK(system_contains(novelty, alpha_is_one));
  CHECK(system_contains(novelty, abc_sum));
  CHECK(system_contains(novelty, gamma_delta));

  CHECK_THROWS_AS(novelty_constraints(2), UnsupportedLevelError);
}

TEST_CASE("inclusion family", "[ideality]") {
  const InclusionFamily family = inclusion_family(3);
  REQUIRE(family.coeffs.size() == 4);

  CHECK(family.coeffs.at(kS31).a == Rational(1, 2));
  CHECK(family.coeffs.at(kS31).b == Rational(1));
  CHECK(family.coeffs.at(kS22).a == Rational(1, 3));
  CHECK(family.coeffs.at(kS22).b == Rational(0));
  CHECK(family.coeffs.at(kS211).a == Rational(-1, 3));
  CHECK(family.coeffs.at(kS211).b == Rational(-2));
  CHECK(family.coeffs.at(kS1111).a == Rational(0));
  CHECK(family.coeffs.at(kS1111).b == Rational(8));

  const auto symmetrized = family.at(Rational(0));
  CHECK(symmetrized.at(kS31) == Rational(1, 2));
  CHECK(symmetrized.at(kS22) == Rational(1, 3));
  CHECK(symmetrized.at(kS211) == Rational(-1, 3));
  CHECK(symmetrized.at(kS1111) == Rational(0));

  const auto at_half = family.at(Rational(1, 2));
  CHECK(at_half.at(kS31) == Rational(1));
  CHECK(at_half.at(kS22) == Rational(1, 3));
  CHECK(at_half.at(kS211) == Rational(-4, 3));
  CHECK(at_half.at(kS1111) == Rational(4));

  CHECK_THROWS_AS(inclusion_family(2), UnsupportedLevelError);
}

TEST_CASE("unique ideality coefficients per level", "[ideality]") {
  const IdealitySolution level1 = solve_ideality(1);
  CHECK(level1.coefficients.at({1, 1}) == Rational(1));
  CHECK_FALSE(level1.epsilon.has_value());

  const IdealitySolution level2 = solve_ideality(2);
  CHECK(level2.coefficients.at({2, 1}) == Rational(1));
  CHECK(level2.coefficients.at({1, 1, 1}) == Rational(-2));

  const IdealitySolution level3 = solve_ideality(3);
  REQUIRE(level3.epsilon.has_value());
  CHECK(*level3.epsilon == Rational(1, 2));
  CHECK(level3.coefficients.at(kS31) == Rational(1));
  CHECK(level3.coefficients.at(kS22) == Rational(1, 3));
  CHECK(level3.coefficients.at(kS211) == Rational(-4, 3));
  CHECK(level3.coefficients.at(kS1111) == Rational(4));

  CHECK_THROWS_AS(solve_ideality(0), UnsupportedLevelError);
  CHECK_THROWS_AS(solve_ideality(4), UnsupportedLevelError);
}

TEST_CASE("numeric inclusion residuals vanish", "[ideality]") {
  CHECK(verify_inclusion_numeric({2, 1, 1}, {2, 2, 2, 2}) == 0);
  CHECK(verify_inclusion_numeric({2, 2, 1}, {2, 3, 2, 3}) == 0);
  CHECK(verify_inclusion_numeric({3, 1, 1}, {2, 2, 3, 2}) == 0);

  for (int r = 1; r <= 3; ++r) {
    for (int s = 1; s <= r; ++s) {
      const TheoryProfile profile{r, s, 1};
      for (std::int64_t a = 1; a <= 3; ++a)
        for (std::int64_t b = 1; b <= 3; ++b)
          for (std::int64_t c = 1; c <= 3; ++c)
            for (std::int64_t d = 1; d <= 3; ++d)
              CHECK(verify_inclusion_numeric(profile, {a, b, c, d}) == 0);
    }
  }

  CHECK_THROWS_AS(verify_inclusion_numeric({2, 1, 1}, {2, 2, 2}), DomainError);
}

TEST_CASE("rational row reduction", "[ideality]") {
  std::vector<std::vector<Rational>> m = {
      {Rational(2), Rational(1), Rational(5)},
      {Rational(1), Rational(-1), Rational(1)},
  };
  CHECK(rational_rref(m) == 2);
  CHECK(m[0][0] == Rational(1));
  CHECK(m[0][1] == Rational(0));
  CHECK(m[0][2] == Rational(2));
  CHECK(m[1][2] == Rational(1));

  std::vector<std::vector<Rational>> dependent = {
      {Rational(1), Rational(2)},
      {Rational(2), Rational(4)},
  };
  CHECK(rational_rref(dependent) == 1);
}
