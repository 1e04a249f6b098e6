#include <doctest.h>

#include <cmath>
#include <random>

#include "test_util.h"
#include "zsg/error.h"
#include "zsg/learners.h"
#include "zsg/oracles.h"
#include "zsg/parallel.h"
#include "zsg/regret_metrics.h"

using namespace zsg;
using zsg::testing::example_2x2;

TEST_CASE("brute force saddle enumeration") {
  CHECK(brute_force_saddles(example_2x2()) == std::vector<Pair>{{0, 1}});
  CHECK(brute_force_saddles(PayoffMatrix{{1, -1}, {-1, 1}}).empty());
  CHECK(brute_force_saddles(PayoffMatrix(2, 2, std::vector<double>(4, 3.0))).size() == 4);
  CHECK_THROWS_AS(brute_force_saddles(PayoffMatrix(101, 100, std::vector<double>(10100, 0.0))),
                  ConfigError);
}

TEST_CASE("find_pure_ne agrees with brute force") {
  std::mt19937_64 rng(1);
  for (int n = 0; n < 1000; ++n) {
    const PayoffMatrix a = zsg::testing::random_dyadic(rng, 1 + rng() % 4, 1 + rng() % 4);
    const auto saddles = brute_force_saddles(a);
    const auto s = find_pure_ne(a);
    REQUIRE(s.num_saddles == saddles.size());
    REQUIRE(s.equilibrium.has_value() == !saddles.empty());
    REQUIRE(s.unique == (saddles.size() == 1));
    if (!saddles.empty()) REQUIRE(s.equilibrium->pair == saddles.front());
  }
}

TEST_CASE("closed-form 2x2 solution") {
  const MixedProfile mp = closed_form_2x2_mixed(PayoffMatrix{{1, -1}, {-1, 1}});
  CHECK(mp.p[0] == 0.5);
  CHECK(mp.q[0] == 0.5);
  CHECK(mp.value == 0.0);

  const MixedProfile s = closed_form_2x2_mixed(PayoffMatrix{{2, 0}, {1, 3}});
  CHECK(s.p[0] == doctest::Approx(0.5));
  CHECK(s.q[0] == doctest::Approx(0.75));
  CHECK(s.q[1] == doctest::Approx(0.25));
  CHECK(s.value == doctest::Approx(1.5));
  // p^T A is flat across columns, A q flat across rows.
  CHECK(s.p[0] * 2 + s.p[1] * 1 == doctest::Approx(s.p[0] * 0 + s.p[1] * 3));
  CHECK(2 * s.q[0] + 0 * s.q[1] == doctest::Approx(1 * s.q[0] + 3 * s.q[1]));

  const MixedProfile twice = closed_form_2x2_mixed(PayoffMatrix{{4, 0}, {2, 6}});
  CHECK(twice.value == doctest::Approx(3.0));
  CHECK(twice.p == s.p);
  CHECK(twice.q == s.q);

  CHECK_THROWS_AS(closed_form_2x2_mixed(example_2x2()), std::invalid_argument);
  CHECK_THROWS_AS(closed_form_2x2_mixed(PayoffMatrix{{1, 2, 3}}), std::invalid_argument);
}

TEST_CASE("solve_minimax agrees with the closed form") {
  std::mt19937_64 rng(2);
  int checked = 0;
  while (checked < 1000) {
    const PayoffMatrix a = zsg::testing::random_gaussian(rng, 2, 2);
    if (!brute_force_saddles(a).empty()) continue;
    ++checked;
    const MixedProfile c = closed_form_2x2_mixed(a);
    const MixedProfile s = solve_minimax(a);
    REQUIRE(std::abs(c.value - s.value) <= 1e-9);
    REQUIRE(std::abs(c.p[0] - s.p[0]) <= 1e-9);
    REQUIRE(std::abs(c.q[0] - s.q[0]) <= 1e-9);
  }
}

TEST_CASE("misidentification oracle") {
  const PayoffMatrix two(2, 1, {0.0, -0.5});
  SUBCASE("noiseless exploration never errs") {
    const auto mc = mc_misidentification(example_2x2(), 0.0, 1, 1000, 1);
    CHECK(mc.frequency == 0.0);
    CHECK(mc.bound == 0.0);
  }
  SUBCASE("tuned k respects the bound") {
    const auto mc = mc_misidentification(two, 0.5, 67, 10000, 4, resolve_threads(0));
    CHECK(mc.bound == doctest::Approx(std::exp(-67.0 * 0.25 / 4.0)));
    CHECK(mc.within());
  }
  SUBCASE("frequency does not grow with k") {
    double prev = 1.0, prev_se = 0.0;
    for (std::int64_t k : {1, 8, 64}) {
      const auto mc = mc_misidentification(two, 0.5, k, 4000, 9);
      CHECK(mc.frequency <= prev + 3.0 * std::max(mc.stderr_value, prev_se));
      prev = mc.frequency;
      prev_se = mc.stderr_value;
    }
  }
  CHECK_THROWS_AS(mc_misidentification(two, 0.5, 10, 999, 1), ConfigError);
  CHECK_THROWS_AS(mc_misidentification(PayoffMatrix{{1, -1}, {-1, 1}}, 0.5, 10, 1000, 1),
                  ConfigError);
}

TEST_CASE("keep probability oracle") {
  const PayoffMatrix a = example_2x2();
  const int t = first_resolving_round(compute_gaps(a).delta()(1, 1), 0.2);
  CHECK(t == 5);
  const auto at = mc_keep_probability(a, 0.2, 10000, t, {1, 1}, 2000, 3, resolve_threads(0));
  CHECK(at.bound == doctest::Approx(16.0 * 0.04 / (0.025 * 0.025 * 1e4)));
  CHECK(at.within());
  const auto next = mc_keep_probability(a, 0.2, 10000, t + 1, {1, 1}, 2000, 4,
                                        resolve_threads(0));
  CHECK(next.within());
  CHECK(next.frequency <= at.frequency + 3.0 * std::max(at.stderr_value, 1e-3));

  SUBCASE("vanishing noise") {
    for (Pair p : {Pair{0, 0}, Pair{1, 0}, Pair{1, 1}}) {
      const double d = compute_gaps(a).delta()[p];
      const int r = first_resolving_round(d, 1e-3);
      CHECK(mc_keep_probability(a, 1e-3, 10000, r, p, 1000, 1).frequency == 0.0);
    }
  }
  CHECK_THROWS_AS(mc_keep_probability(a, 0.2, 10000, t, {0, 1}, 1000, 1), ConfigError);
  CHECK_THROWS_AS(mc_keep_probability(a, 0.2, 10000, t - 1, {1, 1}, 1000, 1), ConfigError);
}

TEST_CASE("verify_instance reports") {
  const auto reports = verify_instance(example_2x2(), 0.2, 10000, 1000, 1);
  REQUIRE(reports.size() == 5);  // saddles, misidentification, three keep probes
  for (const OracleReport& r : reports) {
    CHECK(r.pass);
    CHECK(r.abs_deviation == doctest::Approx(std::abs(r.oracle_value - r.main_value)));
  }
  const auto mp = verify_instance(PayoffMatrix{{2, 0}, {1, 3}}, 0.5, 10000, 1000, 1);
  REQUIRE(mp.size() == 2);
  CHECK(mp[1].quantity == "minimax_value");
  CHECK(mp[1].pass);
}
