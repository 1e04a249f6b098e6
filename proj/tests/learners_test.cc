#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "test_util.h"
#include "zsg/error.h"
#include "zsg/experiments.h"
#include "zsg/learners.h"
#include "zsg/parallel.h"

using namespace zsg;
using zsg::testing::example_2x2;

namespace {

RunTrace run(Algorithm algo, const PayoffMatrix& a, double sigma, std::int64_t T,
             std::uint64_t seed, std::int64_t k = 0) {
  Environment env(a, NoiseModel::gaussian(sigma), seed);
  return run_algorithm(algo, env, LearnerConfig{T, sigma, k, seed + 1});
}

void check_trace_consistent(const RunTrace& tr, std::int64_t T) {
  REQUIRE(static_cast<std::int64_t>(tr.steps.size()) == T);
  Grid<std::int64_t> counts(tr.counts.rows(), tr.counts.cols(), 0);
  for (std::size_t n = 0; n < tr.steps.size(); ++n) {
    REQUIRE(tr.steps[n].t == static_cast<std::int64_t>(n) + 1);
    ++counts[tr.steps[n].pair];
  }
  REQUIRE(counts == tr.counts);
  const auto total = std::accumulate(tr.counts.data().begin(), tr.counts.data().end(),
                                     std::int64_t{0});
  REQUIRE(total == T);
}

}  // namespace

TEST_CASE("algorithm tokens round-trip") {
  for (auto a : {Algorithm::kEtc, Algorithm::kAe, Algorithm::kNue, Algorithm::kTsallis}) {
    CHECK(parse_algorithm(algorithm_token(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("ucb"), ConfigError);
}

TEST_CASE("tuned ETC exploration count") {
  CHECK(etc_exploration_k(0.5, 0.5, 1000) == 67);
  CHECK(etc_exploration_k(0.05, 0.5, 1000) == 1);
  CHECK(etc_exploration_k(0.1, 0.5, 1000) == 367);
  // delta^2 T = 16 sigma^2: the log vanishes.
  CHECK(etc_exploration_k(0.4, 0.5, 25) == 1);
  CHECK_THROWS_AS(etc_exploration_k(0.0, 0.5, 1000), ConfigError);
}

TEST_CASE("ETC on the noiseless example") {
  const RunTrace tr = run(Algorithm::kEtc, example_2x2(), 0.0, 10, 1, 1);
  check_trace_consistent(tr, 10);
  const std::vector<Pair> order{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (std::size_t n = 0; n < 4; ++n) CHECK(tr.steps[n].pair == order[n]);
  for (std::size_t n = 4; n < 10; ++n) CHECK(tr.steps[n].pair == Pair{0, 1});
  REQUIRE(tr.committed);
  CHECK(*tr.committed == Pair{0, 1});
  CHECK(tr.commit_step == 5);
}

TEST_CASE("ETC phase boundary and validation") {
  const RunTrace tr = run(Algorithm::kEtc, example_2x2(), 0.7, 500, 3, 20);
  check_trace_consistent(tr, 500);
  for (std::size_t n = 0; n < 80; ++n) {
    CHECK(tr.steps[n].pair == Pair{n % 4 / 2, n % 2});
  }
  for (std::size_t n = 80; n < 500; ++n) REQUIRE(tr.steps[n].pair == *tr.committed);
  CHECK_THROWS_AS(run(Algorithm::kEtc, example_2x2(), 0.5, 10, 1, 3), ConfigError);
  CHECK_THROWS_AS(run(Algorithm::kEtc, example_2x2(), 0.5, 10, 1, 0), ConfigError);
}

TEST_CASE("single pair games play that pair throughout") {
  const PayoffMatrix one{{0.3}};
  for (auto a : {Algorithm::kEtc, Algorithm::kAe, Algorithm::kNue, Algorithm::kTsallis}) {
    const RunTrace tr = run(a, one, 0.5, 50, 2, 1);
    check_trace_consistent(tr, 50);
    CHECK(tr.counts(0, 0) == 50);
  }
  CHECK(run(Algorithm::kAe, one, 0.5, 50, 2).steps.size() ==
        run(Algorithm::kNue, one, 0.5, 50, 2).steps.size());
}

TEST_CASE("elimination schedule values") {
  const RoundSchedule s = ae_schedule(0, 0.5, 10000);
  CHECK(s.delta_hat == 2.0);
  CHECK(s.k_t == 10);
  CHECK(s.eps_t == doctest::Approx(std::sqrt(0.1 * std::log(1e4))));
  CHECK(s.eps_t == doctest::Approx(0.9597).epsilon(1e-4));
  CHECK(s.last_round == 5);
  CHECK(ae_last_round(1000) == 4);
  CHECK(ae_last_round(10000) == 5);
  CHECK(ae_last_round(1000000) == 9);
  CHECK(nue_last_round(1000) == 2);
  CHECK(nue_last_round(10000) == 2);
  CHECK(nue_last_round(1000000) == 4);
  CHECK_THROWS_AS(ae_schedule(6, 0.5, 10000), ConfigError);
  CHECK_THROWS_AS(ae_schedule(-1, 0.5, 10000), ConfigError);

  Grid<double> w(1, 1, 1.0);
  CHECK(nue_schedule(0, 0.5, 10000, w, {0, 0}) == 20);
  w(0, 0) = 0.0;
  CHECK(nue_schedule(0, 0.5, 10000, w, {0, 0}) == 10);
  CHECK_THROWS_AS(nue_schedule(3, 0.5, 10000, w, {0, 0}), ConfigError);
}

TEST_CASE("schedule identities hold for every valid round") {
  for (double sigma : {0.1, 0.25, 0.5, 1.0, 3.0}) {
    for (std::int64_t T : {100, 1000, 10000, 1000000}) {
      for (int t = 0; t <= ae_last_round(T); ++t) {
        const RoundSchedule s = ae_schedule(t, sigma, T);
        REQUIRE(s.delta_hat == std::ldexp(sigma, 2 - t));
        REQUIRE(s.eps_t <= s.delta_hat / 2.0);
        // The count is sigma-free: 4^t ln(T / 4^t).
        const double four_t = std::ldexp(1.0, 2 * t);
        REQUIRE(s.k_t == static_cast<std::int64_t>(
                             std::ceil(four_t * std::log(static_cast<double>(T) / four_t))));
      }
      for (int t = 0; t <= nue_last_round(T); ++t) {
        const std::int64_t kt = ae_schedule(t, sigma, T).k_t;
        Grid<double> w(1, 3, 0.0);
        w(0, 0) = 0.0;
        w(0, 1) = 0.3;
        w(0, 2) = 1.0;
        const auto k0 = nue_schedule(t, sigma, T, w, {0, 0});
        const auto k1 = nue_schedule(t, sigma, T, w, {0, 1});
        const auto k2 = nue_schedule(t, sigma, T, w, {0, 2});
        REQUIRE(k0 == kt);
        REQUIRE(k0 <= k1);
        REQUIRE(k1 <= k2);
        REQUIRE(k2 <= 2 * kt + 1);
      }
    }
  }
}

TEST_CASE("AE with vanishing noise eliminates everything in round 0") {
  const RunTrace tr = run(Algorithm::kAe, example_2x2(), 1e-6, 10000, 5);
  check_trace_consistent(tr, 10000);
  REQUIRE(!tr.rounds.empty());
  CHECK(tr.rounds[0].active_after.size() == 1);
  CHECK(tr.rounds[0].active_after.contains({0, 1}));
  CHECK(tr.rounds.size() == 1);
  const std::int64_t k0 = tr.rounds[0].k_t;
  CHECK(tr.counts(0, 1) >= 10000 - 4 * k0);
  CHECK(*tr.committed == Pair{0, 1});
}

TEST_CASE("NUE with vanishing noise concentrates on the saddle") {
  const RunTrace tr = run(Algorithm::kNue, example_2x2(), 1e-6, 10000, 5);
  check_trace_consistent(tr, 10000);
  REQUIRE(!tr.rounds.empty());
  const RoundRecord& r0 = tr.rounds[0];
  CHECK(r0.active_after.size() == 1);
  CHECK(r0.p_hat[0] == doctest::Approx(1.0));
  CHECK(r0.q_hat[1] == doctest::Approx(1.0));
  // Round 0 uses uniform weights over the four pairs.
  for (double w : r0.weights.data()) CHECK(w == 0.25);
}

TEST_CASE("elimination invariants across seeds") {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 40; ++n) {
    InstanceSpec spec;
    spec.rows = 2 + rng() % 2;
    spec.cols = 2 + rng() % 2;
    spec.entry_sigma = 0.5;
    spec.seed = rng();
    const PayoffMatrix a = generate_instance(spec).matrix;
    for (auto algo : {Algorithm::kAe, Algorithm::kNue}) {
      const RunTrace tr = run(algo, a, 0.5, 20000, rng());
      check_trace_consistent(tr, 20000);
      const int last = algo == Algorithm::kAe ? ae_last_round(20000) : nue_last_round(20000);
      REQUIRE(static_cast<int>(tr.rounds.size()) <= last + 1);
      for (const RoundRecord& r : tr.rounds) {
        REQUIRE(r.delta_hat == std::ldexp(0.5, 2 - r.round));
        REQUIRE(r.eps_t <= r.delta_hat / 2.0);
        REQUIRE(r.active_after.is_subset_of(r.active_before));
        REQUIRE_FALSE(r.active_after.empty());
        if (algo == Algorithm::kNue) {
          double total = 0.0;
          for (Pair p : r.active_before.pairs()) {
            total += r.weights[p];
            REQUIRE(r.quota[p] >= r.k_t);
            if (!r.truncated) REQUIRE(r.plays[p] >= r.k_t);
          }
          REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
        }
      }
      for (std::size_t k = 1; k < tr.rounds.size(); ++k) {
        REQUIRE(tr.rounds[k].active_before == tr.rounds[k - 1].active_after);
      }
    }
  }
}

TEST_CASE("constant games never eliminate and use every round") {
  const PayoffMatrix flat(2, 1, {0.25, 0.25});
  for (std::int64_t T : {1000, 10000, 1000000}) {
    const RunTrace ae = run(Algorithm::kAe, flat, 0.5, T, 3);
    CHECK(static_cast<int>(ae.rounds.size()) == ae_last_round(T) + 1);
    const RunTrace nue = run(Algorithm::kNue, flat, 0.5, T, 3);
    CHECK(static_cast<int>(nue.rounds.size()) == nue_last_round(T) + 1);
    check_trace_consistent(nue, T);
  }
}

TEST_CASE("truncation stops exactly at the horizon") {
  // Nine pairs at k_0 = ceil(ln 30) = 4 need 36 steps.
  const RunTrace tr = run(Algorithm::kAe, PayoffMatrix(3, 3, std::vector<double>(9, 0.0)),
                          1.0, 30, 1);
  check_trace_consistent(tr, 30);
  REQUIRE(!tr.rounds.empty());
  CHECK(tr.rounds.back().truncated);
  CHECK_FALSE(tr.committed);
}

TEST_CASE("elimination config validation") {
  CHECK_THROWS_AS(run(Algorithm::kAe, example_2x2(), 0.5, 3, 1), ConfigError);
  // T = 2 < e leaves no valid round.
  CHECK_THROWS_AS(run(Algorithm::kAe, PayoffMatrix(2, 1, {0.0, 1.0}), 0.5, 2, 1),
                  ConfigError);
  Environment env(example_2x2(), NoiseModel::gaussian(0.0), 1);
  CHECK_THROWS_AS(ae_run(env, LearnerConfig{1000, 0.0, 0, 0}), ConfigError);
}

TEST_CASE("runs are deterministic per seed") {
  for (auto algo : {Algorithm::kEtc, Algorithm::kAe, Algorithm::kNue, Algorithm::kTsallis}) {
    const RunTrace a = run(algo, example_2x2(), 0.3, 3000, 77, 50);
    const RunTrace b = run(algo, example_2x2(), 0.3, 3000, 77, 50);
    REQUIRE(a.steps.size() == b.steps.size());
    for (std::size_t n = 0; n < a.steps.size(); ++n) {
      REQUIRE(a.steps[n].pair == b.steps[n].pair);
      REQUIRE(a.steps[n].r == b.steps[n].r);
    }
  }
}

TEST_CASE("shifting payoffs leaves ETC, AE and NUE action sequences unchanged") {
  std::mt19937_64 rng(23);
  for (int n = 0; n < 20; ++n) {
    const PayoffMatrix a = zsg::testing::random_dyadic(rng, 2, 3);
    const double c = static_cast<double>(static_cast<int>(rng() % 9) - 4);
    const std::uint64_t seed = rng();
    for (auto algo : {Algorithm::kEtc, Algorithm::kAe, Algorithm::kNue}) {
      const RunTrace x = run(algo, a, 0.25, 4000, seed, 40);
      const RunTrace y = run(algo, a.shifted(c), 0.25, 4000, seed, 40);
      for (std::size_t k = 0; k < x.steps.size(); ++k) {
        REQUIRE(x.steps[k].pair == y.steps[k].pair);
      }
    }
  }
}

TEST_CASE("AE keeps the true saddle on the example game") {
  const int seeds = 1000;
  const auto lost = parallel_map(seeds, resolve_threads(0), [](std::size_t s) -> int {
    const RunTrace tr = run(Algorithm::kAe, example_2x2(), 0.2, 10000, derive_seed(99, s));
    for (const RoundRecord& r : tr.rounds) {
      if (!r.active_after.contains({0, 1})) return 1;
    }
    return 0;
  });
  const int total = std::accumulate(lost.begin(), lost.end(), 0);
  CHECK(total <= 0.05 * seeds);
}

TEST_CASE("Tsallis-INF weights are valid distributions") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int n = 0; n < 2000; ++n) {
    std::vector<double> loss(1 + rng() % 6);
    for (double& x : loss) x = u(rng);
    const double eta = 2.0 / std::sqrt(1.0 + static_cast<double>(rng() % 10000));
    const auto w = tsallis_weights(loss, eta);
    double total = 0.0;
    for (double x : w) {
      REQUIRE(x >= 0.0);
      total += x;
    }
    REQUIRE(std::abs(total - 1.0) <= 1e-8);
    // Smaller cumulative loss never gets less weight.
    for (std::size_t i = 0; i < w.size(); ++i) {
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (loss[i] < loss[j]) REQUIRE(w[i] >= w[j]);
      }
    }
  }
  const auto tie = tsallis_weights({1.0, 1.0, 1.0, 1.0}, 0.3);
  for (double x : tie) CHECK(x == doctest::Approx(0.25));
}

TEST_CASE("Tsallis-INF drifts toward the saddle on the example game") {
  const int seeds = 100;
  const auto freq = parallel_map(seeds, resolve_threads(0), [](std::size_t s) {
    const RunTrace tr = run(Algorithm::kTsallis, example_2x2(), 0.25, 10000,
                            derive_seed(5, s));
    int hits = 0;
    for (std::size_t n = 9000; n < tr.steps.size(); ++n) hits += tr.steps[n].pair == Pair{0, 1};
    return hits / 1000.0;
  });
  CHECK(std::accumulate(freq.begin(), freq.end(), 0.0) / seeds >= 0.5);
}
