#include <cmath>
#include <random>

#include <doctest.h>

#include "maxent/closed_form.hpp"
#include "maxent/errors.hpp"
#include "support.hpp"

using namespace maxent;
using namespace maxent::closed_form;

TEST_CASE("homogeneous solution of the pooled table") {
  const auto s = solve_homogeneous(joint_probs(testing::table2()));
  CHECK(s.triple.pi == doctest::Approx(2476.0 / 6758.0).epsilon(1e-14));
  CHECK(s.triple.r0 == doctest::Approx(81.0 / 4282.0).epsilon(1e-14));
  CHECK(s.triple.r1 == doctest::Approx(796.0 / 2476.0).epsilon(1e-14));
  CHECK(std::abs(s.triple.pi - 0.366381) < 1e-6);
  CHECK(std::abs(s.triple.r0 - 0.018916) < 1e-6);
  CHECK(std::abs(s.triple.r1 - 0.321486) < 1e-6);
  CHECK(s.entropy_per_individual == doctest::Approx(entropy(s.triple)));
}

TEST_CASE("uniform table gives the uniform triple") {
  const auto s = solve_homogeneous({0.25, 0.25, 0.25, 0.25});
  CHECK(s.triple.pi == 0.5);
  CHECK(s.triple.r0 == 0.5);
  CHECK(s.triple.r1 == 0.5);
  CHECK(s.entropy_per_individual == doctest::Approx(std::log(4.0)));
}

TEST_CASE("youngest male category") {
  const auto s = solve_homogeneous(joint_probs(testing::table1(), 0));
  CHECK(s.triple.pi == doctest::Approx(219.0 / 840.0).epsilon(1e-14));
  CHECK(s.triple.r0 == doctest::Approx(8.0 / 621.0).epsilon(1e-14));
  CHECK(s.triple.r1 == doctest::Approx(26.0 / 219.0).epsilon(1e-14));
}

TEST_CASE("degenerate tables are rejected") {
  CHECK_THROWS_AS(solve_homogeneous({0.0, 0.5, 0.25, 0.25}), DegenerateTableError);
  CHECK_THROWS_AS(solve_homogeneous({0.5, 0.0, 0.5, 0.0}), DegenerateTableError);
  StratifiedTable t({{"ok", {1, 2, 3, 4}}, {"bad", {0, 2, 3, 4}}});
  try {
    solve_conditional_homogeneous(t);
    FAIL("expected DegenerateTableError");
  } catch (const DegenerateTableError& e) {
    CHECK(std::string(e.what()).find("bad") != std::string::npos);
  }
}

TEST_CASE("conditional solution per category") {
  const auto& t1 = testing::table1();
  const auto s = solve_conditional_homogeneous(t1);
  REQUIRE(s.categories.size() == 10);
  double weight = 0.0, h = 0.0;
  for (std::size_t c = 0; c < t1.size(); ++c) {
    const auto& cat = s.categories[c];
    CHECK(cat.label == t1[c].label);
    const auto direct = solve_homogeneous(joint_probs(t1, c));
    CHECK(cat.solution.triple == direct.triple);
    weight += cat.weight;
    h += cat.weight * direct.entropy_per_individual;
  }
  CHECK(weight == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.entropy_per_individual() == doctest::Approx(h).epsilon(1e-14));
  const auto single = solve_conditional_homogeneous(testing::table2());
  CHECK(single.categories.size() == 1);
  CHECK(single.entropy_per_individual() ==
        solve_homogeneous(joint_probs(testing::table2())).entropy_per_individual);
}

TEST_CASE("identical categories reproduce the pooled solution") {
  StratifiedTable t({{"a", {5, 9, 40, 21}}, {"b", {5, 9, 40, 21}}});
  const auto s = solve_conditional_homogeneous(t);
  const auto pooled = solve_homogeneous(joint_probs(t));
  for (const auto& c : s.categories) {
    CHECK(c.solution.triple.pi == doctest::Approx(pooled.triple.pi).epsilon(1e-15));
    CHECK(c.solution.triple.r0 == doctest::Approx(pooled.triple.r0).epsilon(1e-15));
    CHECK(c.solution.triple.r1 == doctest::Approx(pooled.triple.r1).epsilon(1e-15));
    CHECK(c.weight == 0.5);
  }
}

TEST_CASE("variance bound and theoretical R^2") {
  CHECK(r2_to_variance_bound(0.30, 0.366381) == doctest::Approx(0.069650).epsilon(1e-5));
  CHECK(r2_to_variance_bound(0.20, 0.129772) == doctest::Approx(0.022591).epsilon(1e-4));
  CHECK(r2_to_variance_bound(0.0, 0.4) == 0.0);
  CHECK(theoretical_tjur_r2(0.09, 0.6) == doctest::Approx(0.375));
  CHECK(theoretical_tjur_r2(0.0, 0.3) == 0.0);
  CHECK(theoretical_tjur_r2(0.3 * 0.7, 0.3) == doctest::Approx(1.0));
  CHECK_THROWS_AS(theoretical_tjur_r2(0.3, 0.3), DomainError);
  CHECK_THROWS_AS(r2_to_variance_bound(0.2, 0.0), DomainError);
  CHECK_THROWS_AS(r2_to_variance_bound(0.2, 1.0), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double r2 = u(rng), p = 0.001 + 0.998 * u(rng);
    CHECK(theoretical_tjur_r2(r2_to_variance_bound(r2, p), p) == doctest::Approx(r2).epsilon(1e-12));
  }
}

TEST_CASE("homogeneous solution reconstructs the table and is label-swap equivariant") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 300; ++i) {
    const auto t = testing::random_table(rng, 1);
    const auto p = joint_probs(t);
    const auto s = solve_homogeneous(p);
    const auto q = outcome_masses(s.triple).as_array();
    const auto pa = p.as_array();
    for (int k = 0; k < 4; ++k) CHECK(std::abs(q[k] - pa[k]) <= 1e-12);
    CHECK(std::abs(expected_risk(s.triple) - p.diseased()) <= 1e-12);

    const auto w = solve_homogeneous(joint_probs(t.with_exposure_swapped()));
    const auto expect = swap_exposure(s.triple);
    CHECK(std::abs(w.triple.pi - expect.pi) <= 1e-14);
    CHECK(w.triple.r0 == expect.r0);
    CHECK(w.triple.r1 == expect.r1);
  }
}

TEST_CASE("relaxed bound reduces to the optimum and grows with epsilon") {
  const auto& t1 = testing::table1();
  const double h = solve_conditional_homogeneous(t1).entropy_per_individual();
  CHECK(relaxed_entropy_bound(t1, 0.0) == doctest::Approx(h).epsilon(1e-15));
  CHECK(relaxed_entropy_bound(t1, 1e-4) > h);
  CHECK(relaxed_entropy_bound(t1, 1e-3) > relaxed_entropy_bound(t1, 1e-4));
  CHECK_THROWS_AS(relaxed_entropy_bound(t1, -1.0), ParameterError);
}
