#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "maxent/closed_form.hpp"
#include "maxent/errors.hpp"
#include "maxent/grid_lp.hpp"
#include "support.hpp"

using namespace maxent;
using namespace maxent::grid;

namespace {

const StratifiedTable& small_table() {
  static const StratifiedTable t({{"all", {20, 30, 90, 60}}});
  return t;
}

double solve_entropy(const DiscretizedProblem& p) {
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::kOptimal);
  return s.objective;
}

}  // namespace

TEST_CASE("grid geometry") {
  CHECK_THROWS_AS(CubeGrid(1), ParameterError);
  const CubeGrid g(4);
  CHECK(g.cell_count() == 64);
  CHECK(g.center(0) == 0.125);
  CHECK(g.center(3) == 0.875);
}

TEST_CASE("two-cell grid problem shape") {
  const auto p = build_problem(small_table(), 2, std::nullopt, std::nullopt, 1e-3);
  CHECK(p.column_count() == 8);
  CHECK(p.row_count() == 4);
  CHECK(p.equality_row_count() == 4);
  CHECK(p.inequality_row_count() == 0);
  for (std::size_t col = 0; col < 8; ++col) {
    const Triple t = p.center(p.decode(col).cell);
    for (double v : {t.pi, t.r0, t.r1}) CHECK((v == 0.25 || v == 0.75));
    CHECK(p.encode(p.decode(col)) == col);
  }
  const auto rows = p.rows();
  CHECK(rows[0].lo == doctest::Approx(0.1 - 1e-3));
  CHECK(rows[0].hi == doctest::Approx(0.1 + 1e-3));
}

TEST_CASE("column coefficients at a center") {
  const auto p = build_problem(small_table(), 2, std::nullopt, std::nullopt, 0.0);
  lp::SparseColumn col;
  p.coefficients(0, {0.25, 0.25, 0.75}, col);
  REQUIRE(col.size() == 4);
  CHECK(col[0].value == doctest::Approx(0.1875));
  CHECK(col[1].value == doctest::Approx(0.1875));
  CHECK(col[2].value == doctest::Approx(0.5625));
  CHECK(col[3].value == doctest::Approx(0.0625));
}

TEST_CASE("stratified problem with variance rows") {
  const auto p = build_problem(testing::table1(), 40, 0.3, 0.2, 1e-3);
  CHECK(p.column_count() == 640000);
  CHECK(p.row_count() == 42);
  REQUIRE(p.variance().has_value());
  CHECK(p.variance()->exposure_bound == doctest::Approx(0.069650).epsilon(1e-4));
  CHECK(p.variance()->outcome_bound == doctest::Approx(0.022591).epsilon(1e-3));
  CHECK(p.rows()[40].kind == lp::RowKind::kAtLeast);
}

TEST_CASE("build_problem parameter checks") {
  const auto& t = small_table();
  CHECK_THROWS_AS(build_problem(t, 1, std::nullopt, std::nullopt, 0.0), ParameterError);
  CHECK_THROWS_AS(build_problem(t, 4, 0.3, std::nullopt, 0.0), ParameterError);
  CHECK_THROWS_AS(build_problem(t, 4, 1.3, 0.2, 0.0), ParameterError);
  CHECK_THROWS_AS(build_problem(t, 4, std::nullopt, std::nullopt, -1.0), ParameterError);
  StratifiedTable zero({{"z", {0, 1, 1, 1}}});
  CHECK_THROWS_AS(build_problem(zero, 4, std::nullopt, std::nullopt, 0.0), DegenerateTableError);
}

TEST_CASE("specialized pricing agrees bit for bit with the generic scan") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  for (bool with_variance : {false, true}) {
    const auto p = with_variance ? build_problem(testing::table1(), 6, 0.3, 0.2, 1e-3)
                                 : build_problem(testing::table1(), 6, std::nullopt, std::nullopt, 1e-3);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<double> y(p.row_count());
      for (auto& v : y) v = g(rng);
      for (auto rule : {lp::PricingRule::kBest, lp::PricingRule::kFirst}) {
        const double threshold = trial % 2 ? 0.0 : 0.5;
        const auto fast = p.price(y, 1.0, threshold, rule);
        const auto slow = p.LpProblem::price(y, 1.0, threshold, rule);
        CHECK(fast.column == slow.column);
        CHECK(fast.reduced_cost == slow.reduced_cost);
      }
    }
  }
}

TEST_CASE("single atom at the cube center") {
  const auto p = build_problem(small_table(), 3, std::nullopt, std::nullopt, 1e-3);
  const std::size_t col = p.encode({0, {1, 1, 1}});
  const std::vector<lp::ColumnMass> masses{{col, 1.0}};
  const auto atoms = atoms_from_solution(p, masses);
  REQUIRE(atoms.atoms.size() == 1);
  CHECK(atoms.achieved_entropy == doctest::Approx(std::log(4.0)));
  CHECK(atoms.residuals.size() == 4);
  CHECK(atoms.residuals[0].activity == doctest::Approx(0.25));
  CHECK(atoms.residuals[0].target == doctest::Approx(0.1));
  CHECK(atoms.residuals[0].violation() > 0.1);
}

TEST_CASE("slightly short mass within epsilon is accepted and recorded") {
  StratifiedTable t({{"all", {25, 25, 25, 25}}});
  const auto p = build_problem(t, 3, std::nullopt, std::nullopt, 1e-3);
  const std::vector<lp::ColumnMass> masses{{p.encode({0, {1, 1, 1}}), 0.999}, {0, 1e-12}};
  const auto atoms = atoms_from_solution(p, masses);
  CHECK(atoms.atoms.size() == 1);
  CHECK(atoms.total_mass() == doctest::Approx(0.999));
  for (const auto& r : atoms.residuals) {
    CHECK(r.deviation() == doctest::Approx(-0.00025));
    CHECK(r.violation() == 0.0);
  }
}

TEST_CASE("homogeneous triple on a center is exactly feasible") {
  // (0.25, 0.25, 0.75) is a center of the m = 2 grid.
  StratifiedTable t({{"all", {3, 3, 9, 1}}});
  const auto p = build_problem(t, 2, std::nullopt, std::nullopt, 0.0);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::kOptimal);
  CHECK(s.objective == doctest::Approx(closed_form::relaxed_entropy_bound(t, 0.0)).epsilon(1e-9));
}

TEST_CASE("snapped homogeneous triple has O(1/m) residuals") {
  const auto& t = testing::table2();
  const auto h = closed_form::solve_homogeneous(joint_probs(t)).triple;
  for (int m : {10, 20, 40, 80}) {
    const auto p = build_problem(t, m, std::nullopt, std::nullopt, 0.0);
    auto snap = [m](double v) { return std::min(m - 1, static_cast<int>(v * m)); };
    const Cell cell{snap(h.pi), snap(h.r0), snap(h.r1)};
    const std::vector<Atom> atoms{{0, cell, p.center(cell), 1.0}};
    for (const auto& r : residuals_for(p, atoms)) CHECK(std::abs(r.deviation()) <= 1.5 / m);
  }
}

TEST_CASE("LP optimum respects the relaxed upper bound") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 6; ++trial) {
    const auto t = testing::random_table(rng, 1 + trial % 3, 60, 400);
    for (double eps : {0.0, 1e-3}) {
      const auto p = build_problem(t, 12, std::nullopt, std::nullopt, eps);
      CHECK(solve_entropy(p) <= closed_form::relaxed_entropy_bound(t, eps) + 1e-9);
    }
  }
}

TEST_CASE("coarse grids cannot reach extreme tables") {
  // The smallest r0 center is 1 / (2m); the pooled table needs r0 = 0.019.
  const auto p = build_problem(testing::table2(), 8, std::nullopt, std::nullopt, 1e-3);
  CHECK(lp::solve(p).status == lp::Status::kInfeasible);
}

TEST_CASE("nested grids and constraint addition") {
  const auto& t = small_table();
  const double coarse = solve_entropy(build_problem(t, 8, std::nullopt, std::nullopt, 1e-3));
  const double fine = solve_entropy(build_problem(t, 24, std::nullopt, std::nullopt, 1e-3));
  CHECK(fine >= coarse - 1e-12);
  for (int m : {8, 24}) {
    const double free = solve_entropy(build_problem(t, m, std::nullopt, std::nullopt, 1e-3));
    const double constrained = solve_entropy(build_problem(t, m, 0.1, 0.05, 1e-3));
    CHECK(constrained <= free + 1e-12);
  }
}

TEST_CASE("exposure swap mirrors the optimal atoms") {
  const int m = 20;
  const auto& t = testing::table2();
  const auto p = build_problem(t, m, 0.3, 0.2, 1e-3);
  const auto q = build_problem(t.with_exposure_swapped(), m, 0.3, 0.2, 1e-3);
  const auto a = atoms_from_solution(p, lp::solve(p).columns);
  const auto b = atoms_from_solution(q, lp::solve(q).columns);
  CHECK(a.achieved_entropy == doctest::Approx(b.achieved_entropy).epsilon(1e-9));
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (const auto& x : a.atoms) {
    const Cell mirrored{m - 1 - x.cell.j, x.cell.l, x.cell.k};
    bool found = false;
    for (const auto& y : b.atoms) {
      if (y.cell == mirrored) {
        found = true;
        CHECK(std::abs(y.mass - x.mass) <= 1e-6);
      }
    }
    CHECK(found);
  }
}
