#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "maxent/errors.hpp"
#include "maxent/lp_solver.hpp"

using namespace maxent;
using namespace maxent::lp;

namespace {

ExplicitLp random_lp(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                     std::vector<std::vector<double>>* dense = nullptr) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // A known nonnegative point keeps the problem feasible.
  std::vector<double> w0(cols);
  for (auto& w : w0) w = u(rng) < 0.3 ? u(rng) : 0.0;
  std::vector<std::vector<double>> a(cols, std::vector<double>(rows));
  for (auto& col : a)
    for (auto& v : col) v = u(rng) < 0.5 ? u(rng) : 0.0;
  for (std::size_t i = 0; i < rows; ++i) a[i % cols][i] += 1.0;
  std::vector<RowBound> rb;
  for (std::size_t i = 0; i < rows; ++i) {
    double act = 0.0;
    for (std::size_t j = 0; j < cols; ++j) act += a[j][i] * w0[j];
    if (i % 3 == 2) {
      rb.push_back(RowBound::at_least(act - 0.1));
    } else {
      rb.push_back(RowBound::range(act - 0.05, act + 0.05));
    }
  }
  // Keep the problem bounded: one row caps total mass.
  rb.push_back(RowBound::range(0.0, std::accumulate(w0.begin(), w0.end(), 0.0) + 1.0));
  ExplicitLp lp(rb);
  for (std::size_t j = 0; j < cols; ++j) {
    auto col = a[j];
    col.push_back(1.0);
    lp.add_column(u(rng) - 0.3, col);
  }
  if (dense) *dense = a;
  return lp;
}

double activity(const LpProblem& p, const LpSolution& s, std::size_t row) {
  SparseColumn col;
  double total = 0.0;
  for (const auto& cm : s.columns) {
    p.column(cm.column, col);
    for (const auto& e : col)
      if (e.row == row) total += e.value * cm.mass;
  }
  return total;
}

}  // namespace

TEST_CASE("sum of two weights fixed at one") {
  ExplicitLp lp({RowBound::equal(1.0)});
  lp.add_column(1.0, std::vector<double>{1.0});
  lp.add_column(1.0, std::vector<double>{1.0});
  const auto s = solve(lp);
  CHECK(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("upper bound written as an at-least row") {
  ExplicitLp lp({RowBound::equal(1.0), RowBound::at_least(-0.3)});
  lp.add_column(1.0, std::vector<double>{1.0, -1.0});
  lp.add_column(0.0, std::vector<double>{1.0, 0.0});
  const auto s = solve(lp);
  REQUIRE(s.status == Status::kOptimal);
  CHECK(s.objective == doctest::Approx(0.3));
}

TEST_CASE("contradictory equalities are infeasible") {
  ExplicitLp lp({RowBound::equal(1.0), RowBound::equal(2.0)});
  lp.add_column(1.0, std::vector<double>{1.0, 1.0});
  const auto s = solve(lp);
  CHECK(s.status == Status::kInfeasible);
  CHECK_FALSE(s.infeasible_rows.empty());
  CHECK(s.infeasibility > 0.5);
}

TEST_CASE("unbounded objective is reported") {
  ExplicitLp lp({RowBound::at_least(1.0)});
  lp.add_column(1.0, std::vector<double>{1.0});
  CHECK(solve(lp).status == Status::kUnbounded);
}

TEST_CASE("range row bounds are respected at both ends") {
  ExplicitLp lp({RowBound::range(0.2, 0.7)});
  lp.add_column(1.0, std::vector<double>{1.0});
  CHECK(solve(lp).objective == doctest::Approx(0.7));
  ExplicitLp lp2({RowBound::range(0.2, 0.7)});
  lp2.add_column(-1.0, std::vector<double>{1.0});
  CHECK(solve(lp2).objective == doctest::Approx(-0.2));
}

TEST_CASE("pricing examples") {
  ExplicitLp lp({RowBound::equal(1.0)});
  lp.add_column(1.0, std::vector<double>{1.0});
  lp.add_column(2.0, std::vector<double>{1.0});
  lp.add_column(2.0, std::vector<double>{1.0});
  std::vector<double> y{2.0};
  CHECK_FALSE(price_columns(lp, y).found());
  y[0] = 1.5;
  const auto tie = price_columns(lp, y);
  CHECK(tie.column == 1);
  CHECK(tie.reduced_cost == 0.5);
  y[0] = 0.5;
  CHECK(price_columns(lp, y, 1.0, 0.0, PricingRule::kFirst).column == 0);
  CHECK(price_columns(lp, y, 1.0, 0.0, PricingRule::kBest).column == 1);

  ExplicitLp single({RowBound::equal(1.0)});
  single.add_column(3.0, std::vector<double>{1.0});
  CHECK(price_columns(single, std::vector<double>{1.0}).column == 0);
  CHECK_THROWS_AS(price_columns(single, std::vector<double>{1.0, 2.0}), ParameterError);
}

TEST_CASE("parameter validation") {
  ExplicitLp lp({RowBound::equal(1.0)});
  lp.add_column(1.0, std::vector<double>{1.0});
  SolveOptions bad;
  bad.feasibility_tol = 0.0;
  CHECK_THROWS_AS(solve(lp, bad), ParameterError);
  SolveOptions few;
  few.max_rows = 0;
  CHECK_THROWS_AS(solve(lp, few), ParameterError);
  CHECK_THROWS_AS(relax_and_retry(lp, std::vector<double>{}), ParameterError);
  CHECK_THROWS_AS(relax_and_retry(lp, std::vector<double>{1e-9, 1e-6}), ParameterError);
}

TEST_CASE("relax and retry stages") {
  ExplicitLp lp({RowBound::equal(1.0), RowBound::equal(2.0)});
  lp.add_column(1.0, std::vector<double>{1.0, 2.0});
  lp.add_column(0.5, std::vector<double>{1.0, 1.0});
  const std::vector<double> schedule{1e-6, 1e-9};
  const auto ok = relax_and_retry(lp, schedule);
  CHECK(ok.reached_tightest);
  CHECK(ok.stages.size() == 2);
  CHECK(ok.accepted_stage == 1);
  CHECK(ok.solution.objective == doctest::Approx(1.0));

  ExplicitLp near({RowBound::equal(1.0), RowBound::equal(1.0 + 5e-8)});
  near.add_column(1.0, std::vector<double>{1.0, 1.0});
  const auto flagged = relax_and_retry(near, schedule);
  REQUIRE(flagged.stages.size() == 2);
  CHECK(flagged.stages[0].status == Status::kOptimal);
  CHECK(flagged.stages[1].status == Status::kInfeasible);
  CHECK(flagged.accepted_stage == 0);
  CHECK_FALSE(flagged.reached_tightest);
  CHECK(flagged.solution.status == Status::kOptimal);

  ExplicitLp never({RowBound::equal(1.0), RowBound::equal(2.0)});
  never.add_column(1.0, std::vector<double>{1.0, 1.0});
  const auto bad = relax_and_retry(never, schedule);
  CHECK(bad.stages.size() == 1);
  CHECK(bad.solution.status == Status::kInfeasible);
  CHECK_FALSE(bad.reached_tightest);
}

TEST_CASE("random problems: feasibility, duality, sparsity, determinism") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t rows = 3 + trial % 6, cols = 10 + 7 * (trial % 5);
    const auto lp = random_lp(rng, rows, cols);
    const auto s = solve(lp);
    REQUIRE(s.status == Status::kOptimal);
    CHECK(s.columns.size() <= lp.row_count());

    // Independent recomputation of objective and row activity.
    double obj = 0.0;
    for (const auto& cm : s.columns) {
      CHECK(cm.mass >= -1e-12);
      obj += lp.objective(cm.column) * cm.mass;
    }
    CHECK(obj == doctest::Approx(s.objective).epsilon(1e-9));
    for (std::size_t i = 0; i < lp.row_count(); ++i) {
      const double a = activity(lp, s, i);
      CHECK(a >= lp.rows()[i].lo - 1e-8);
      CHECK(a <= lp.rows()[i].hi + 1e-8);
    }
    // Duals price every column nonpositively.
    SparseColumn col;
    for (std::size_t j = 0; j < lp.column_count(); ++j) {
      lp.column(j, col);
      double rc = lp.objective(j);
      for (const auto& e : col) rc -= s.duals[e.row] * e.value;
      CHECK(rc <= 1e-8);
    }

    const auto again = solve(lp);
    CHECK(again.objective == s.objective);
    REQUIRE(again.columns.size() == s.columns.size());
    for (std::size_t k = 0; k < s.columns.size(); ++k) {
      CHECK(again.columns[k].column == s.columns[k].column);
      CHECK(again.columns[k].mass == s.columns[k].mass);
    }

    const auto warm = solve(lp, {}, &s.basis);
    CHECK(warm.status == Status::kOptimal);
    CHECK(warm.iterations == 0);
    CHECK(warm.objective == doctest::Approx(s.objective).epsilon(1e-12));
  }
}

TEST_CASE("optimum is invariant under column permutation") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> a;
    const auto lp = random_lp(rng, 5, 30, &a);
    const auto s = solve(lp);
    REQUIRE(s.status == Status::kOptimal);

    std::vector<std::size_t> perm(lp.column_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ExplicitLp shuffled(std::vector<RowBound>(lp.rows().begin(), lp.rows().end()));
    SparseColumn col;
    for (std::size_t j : perm) {
      lp.column(j, col);
      std::vector<double> dense(lp.row_count(), 0.0);
      for (const auto& e : col) dense[e.row] = e.value;
      shuffled.add_column(lp.objective(j), dense);
    }
    const auto t = solve(shuffled);
    REQUIRE(t.status == Status::kOptimal);
    CHECK(t.objective == doctest::Approx(s.objective).epsilon(1e-9));
  }
}

TEST_CASE("status names") {
  CHECK(to_string(Status::kOptimal) == "optimal");
  CHECK(to_string(Status::kInfeasible) == "infeasible");
  CHECK(to_string(Status::kIterationLimit) == "iteration-limit");
  CHECK(to_string(Status::kUnbounded) == "unbounded");
}
