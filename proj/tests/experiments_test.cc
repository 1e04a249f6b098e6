#include <doctest.h>

#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "zsg/error.h"
#include "zsg/experiments.h"
#include "zsg/parallel.h"

using namespace zsg;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("instance generation") {
  SUBCASE("1x1 is accepted on the first draw") {
    InstanceSpec spec;
    spec.rows = spec.cols = 1;
    const GeneratedInstance g = generate_instance(spec);
    CHECK(g.attempts == 1);
    CHECK(g.gaps.equilibrium()->pair == Pair{0, 0});
  }
  SUBCASE("same seed, same matrix") {
    InstanceSpec spec;
    spec.rows = 3;
    spec.cols = 4;
    spec.seed = 99;
    CHECK(generate_instance(spec).matrix == generate_instance(spec).matrix);
    InstanceSpec other = spec;
    other.seed = 100;
    CHECK_FALSE(generate_instance(spec).matrix == generate_instance(other).matrix);
  }
  SUBCASE("generated games have a unique saddle") {
    for (std::uint64_t s = 0; s < 200; ++s) {
      InstanceSpec spec;
      spec.rows = 3;
      spec.cols = 3;
      spec.seed = s;
      REQUIRE(generate_instance(spec).gaps.unique_equilibrium());
    }
  }
  SUBCASE("2x2 acceptance rate") {
    // Accepted fraction over 10^4 draws from one stream: strictly inside
    // (0, 1) and frozen per seed.
    InstanceSpec spec;
    spec.entry_sigma = 0.5;
    spec.seed = 2024;
    spec.require_unique_pure_ne = false;
    std::mt19937_64 rng(spec.seed);
    int accepted = 0;
    for (int n = 0; n < 10000; ++n) {
      spec.seed = rng();
      accepted += generate_instance(spec).gaps.unique_equilibrium();
    }
    CHECK(accepted > 0);
    CHECK(accepted < 10000);
    // A saddle-free 2x2 game needs the diagonal pattern, probability 1/3.
    CHECK(accepted / 1e4 == doctest::Approx(2.0 / 3.0).epsilon(0.03));
    CHECK(accepted == 6655);
  }
  SUBCASE("rejection cap") {
    InstanceSpec spec;
    spec.entry_sigma = 0.0;  // constant game: four saddles every time
    spec.max_attempts = 50;
    CHECK_THROWS_AS(generate_instance(spec), std::runtime_error);
  }
  SUBCASE("validation") {
    InstanceSpec spec;
    spec.rows = 0;
    CHECK_THROWS_AS(generate_instance(spec), ConfigError);
  }
}

TEST_CASE("seed derivation") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(derive_seed(1, i));
  CHECK(seen.size() == 10000);
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 7) == derive_seed(5, 7));
}

TEST_CASE("parallel map keeps index order and propagates errors") {
  const auto v = parallel_map(1000, 4, [](std::size_t i) { return i * i; });
  for (std::size_t i = 0; i < v.size(); ++i) REQUIRE(v[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10, 3,
                               [](std::size_t i) -> int {
                                 if (i == 7) throw std::runtime_error("boom");
                                 return 0;
                               }),
                  std::runtime_error);
}

TEST_CASE("thread count resolution") {
  CHECK(resolve_threads(3) >= 1);
  if (!std::getenv("ZSG_THREADS")) CHECK(resolve_threads(3) == 3);
}

TEST_CASE("plan validation") {
  ExperimentPlan p = fig1_plan(10, 0);
  p.runs = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = fig1_plan(10, 0);
  p.delta_grid.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
  ExperimentPlan q = fig23_plan(true, 10, 0);
  q.sigma_list.clear();
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q = fig23_plan(true, 10, 0);
  q.k_list = {0};
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q.k_list = {2501};  // 4 * 2501 > 10^4
  CHECK_THROWS_AS(q.validate(), ConfigError);
  q.algorithms = {Algorithm::kAe};
  CHECK_NOTHROW(q.validate());
  CHECK(fig23_plan(true, 1, 0).k_list.size() == 97);
  CHECK(fig23_plan(false, 1, 0).sigma_list == std::vector<double>{0.1, 0.2});
}

TEST_CASE("fig1 output") {
  ExperimentPlan plan = fig1_plan(200, 3);
  plan.threads = 1;
  const auto rows = run_fig1(plan);
  REQUIRE(rows.size() == 21);
  CHECK(rows[10].delta == doctest::Approx(0.5));
  CHECK(rows[10].k == 67);
  CHECK(rows[10].bound == doctest::Approx(41.58).epsilon(0.0003));
  CHECK(rows[1].k == 1);
  CHECK(rows[0].mean_regret == 0.0);
  std::ostringstream os;
  write_fig1_csv(os, rows);
  CHECK(count_lines(os.str()) == 22);
  CHECK(os.str().rfind("delta,mean_regret,stderr,bound\n", 0) == 0);

  // Thread count does not change the numbers.
  plan.threads = 3;
  std::ostringstream again;
  write_fig1_csv(again, run_fig1(plan));
  CHECK(again.str() == os.str());
}

TEST_CASE("fig23 output shape") {
  ExperimentPlan plan = fig23_plan(true, 1, 0);
  plan.algorithms = {Algorithm::kEtc};
  const auto rows = run_fig23_rows(plan);
  CHECK(rows.size() == 100);
  CHECK(rows.front().t == 100);
  CHECK(rows.back().t == 10000);
  CHECK(rows.front().stderr_cum_regret == 0.0);

  plan.stride = 300;
  const auto odd = run_fig23_rows(plan);
  CHECK(odd.back().t == 10000);
  CHECK(odd[odd.size() - 2].t == 9900);

  std::ostringstream os;
  write_fig23_csv(os, rows);
  CHECK(os.str().rfind("algo,t,mean_cum_regret,stderr\netc,100,", 0) == 0);
}

TEST_CASE("fig23 curves are monotone and reproducible") {
  ExperimentPlan plan = fig23_plan(false, 8, 11);
  plan.horizon = 3000;
  plan.k_list = {100, 350, 750};
  const Fig23Result a = run_fig23(plan);
  const Fig23Result b = run_fig23(plan);
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t n = 0; n < a.rows.size(); ++n) {
    REQUIRE(a.rows[n].mean_cum_regret == b.rows[n].mean_cum_regret);
    if (n > 0 && a.rows[n].algo == a.rows[n - 1].algo) {
      REQUIRE(a.rows[n].mean_cum_regret >= a.rows[n - 1].mean_cum_regret);
    }
  }
  CHECK(a.final_mean.size() == 4);
}

TEST_CASE("number formatting") {
  CHECK(format_number(41.5800001234) == "41.5800001");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(1e-12) == "1e-12");
}
