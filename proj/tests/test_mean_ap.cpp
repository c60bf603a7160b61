#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "specdiff/mean_ap.hpp"
#include "specdiff/rng.hpp"

using namespace specdiff;

namespace {

std::vector<cplx> two_sided_of(const std::string& builtin,
                               const std::string& observable,
                               std::int64_t horizon, std::uint64_t seed) {
  const SystemSpec spec = SystemSpec::built_in(builtin);
  const Observable f = Observable::parse(spec, observable);
  const State x = sample_invariant(spec, seed, horizon + 2);
  return two_sided_samples(spec, f, x, horizon);
}

}  // namespace

TEST_SUITE_BEGIN("meanap");

TEST_CASE("mean seminorm basics") {
  const std::int64_t n = 5000;
  std::vector<cplx> h(static_cast<std::size_t>(2 * n + 1));
  for (std::size_t i = 0; i < h.size(); ++i) {
    h[i] = cplx{static_cast<double>(i % 7), 0.0};
  }
  CHECK(mean_seminorm_diff(h, 0, n) == 0.0);
  CHECK(mean_seminorm_diff(h, 7, n) == 0.0);  // exact period
  CHECK(mean_seminorm_diff(h, 14, n) == 0.0);
  CHECK(mean_seminorm_diff(h, 3, n) > 0.0);
  // exactly symmetric in t
  CHECK(mean_seminorm_diff(h, 3, n) == mean_seminorm_diff(h, -3, n));
  CHECK_THROWS_AS(mean_seminorm_diff(h, n / 10 + 1, n), std::invalid_argument);
}

TEST_CASE("iid signal has seminorm near one") {
  const std::int64_t n = 50000;
  Rng rng(42);
  std::vector<cplx> h(static_cast<std::size_t>(2 * n + 1));
  for (auto& v : h) v = cplx{rng.uniform() < 0.5 ? 1.0 : -1.0, 0.0};
  for (std::int64_t t : {1, 17, 500}) {
    // each difference is 0 or 2 with probability 1/2
    CHECK(std::abs(mean_seminorm_diff(h, t, n) - 1.0) <=
          3.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("almost period sets") {
  MeanApParams params;
  params.horizon = 20000;
  params.t_max = 1000;

  SUBCASE("constant signal: every shift qualifies") {
    const std::vector<cplx> h(2 * 20000 + 1, cplx{3.0, 0.0});
    const auto shifts = eps_almost_periods(h, 0.1, params);
    CHECK(shifts.size() == 2 * 1000 + 1);
  }
  SUBCASE("fibonacci letters: larger fibonacci numbers qualify at eps 0.5") {
    const auto h = two_sided_of("fibonacci", "pm1", 20000, 11);
    const auto shifts = eps_almost_periods(h, 0.5, params);
    auto has = [&shifts](std::int64_t t) {
      return std::binary_search(shifts.begin(), shifts.end(), t);
    };
    CHECK(has(0));
    // 4 ||t alpha|| < 0.5 holds for t = 5, 8, 13, 21, ... but not 1, 2, 3
    for (std::int64_t t : {5, 8, 13, 21, 34, 55, 89}) CHECK(has(t));
    for (std::int64_t t : {1, 2, 3}) CHECK(!has(t));
    // bounded gaps within the probed window
    CHECK(relative_denseness_gap(shifts, params.t_max) <= 20);
  }
  SUBCASE("iid signal keeps only the trivial shift") {
    Rng rng(4);
    std::vector<cplx> h(2 * 20000 + 1);
    for (auto& v : h) v = cplx{rng.uniform() < 0.5 ? 1.0 : -1.0, 0.0};
    const auto shifts = eps_almost_periods(h, 0.5, params);
    CHECK(shifts == std::vector<std::int64_t>{0});
  }
  SUBCASE("monotonicity in epsilon") {
    const auto h = two_sided_of("fibonacci", "pm1", 20000, 12);
    const auto small = eps_almost_periods(h, 0.2, params);
    const auto large = eps_almost_periods(h, 0.5, params);
    CHECK(std::includes(large.begin(), large.end(), small.begin(),
                        small.end()));
  }
}

TEST_CASE("relative denseness gaps") {
  const std::int64_t t_max = 1000;
  SUBCASE("full range") {
    std::vector<std::int64_t> all;
    for (std::int64_t t = -t_max; t <= t_max; ++t) all.push_back(t);
    CHECK(relative_denseness_gap(all, t_max) == 1);
  }
  SUBCASE("isolated zero spans the window") {
    const std::int64_t margin = t_max / 10;
    CHECK(relative_denseness_gap({0}, t_max) == 2 * (t_max - margin));
  }
  SUBCASE("multiples of five") {
    std::vector<std::int64_t> fives;
    for (std::int64_t t = -t_max; t <= t_max; t += 5) fives.push_back(t);
    CHECK(relative_denseness_gap(fives, t_max) == 5);
  }
  SUBCASE("one-sided clustering is not dense") {
    CHECK(relative_denseness_gap({0, 1, 2, 3}, t_max) > 1000);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(relative_denseness_gap({}, t_max), std::invalid_argument);
    CHECK_THROWS_AS(relative_denseness_gap({5, 10}, t_max),
                    std::invalid_argument);
  }
}

TEST_CASE("classifier ground truth at reduced scale") {
  MeanApParams params;
  params.horizon = 20000;
  params.t_max = 1000;
  params.eps_grid = {0.5, 0.2, 0.1};

  auto classify_one = [&params](const std::string& system,
                                const std::string& obs) {
    const SystemSpec spec = SystemSpec::built_in(system);
    const std::vector<Observable> fs = {Observable::parse(spec, obs)};
    return classify_discrete_spectrum(spec, fs, params, 1, 2025);
  };

  SUBCASE("rotation character is consistent with discrete spectrum") {
    const SystemSpec spec = SystemSpec::golden_rotation();
    const std::vector<Observable> fs = {Observable::character(spec, -1)};
    const auto rep = classify_discrete_spectrum(spec, fs, params, 1, 2025);
    CHECK(rep.overall == Verdict::kConsistentWithDiscrete);
    CHECK(rep.verdicts[0].horizons_agree);
  }
  SUBCASE("fibonacci letters are consistent with discrete spectrum") {
    const auto rep = classify_one("fibonacci", "pm1");
    CHECK(rep.overall == Verdict::kConsistentWithDiscrete);
  }
  SUBCASE("bernoulli fails at the loosest epsilon") {
    const auto rep = classify_one("bernoulli", "pm1");
    CHECK(rep.overall == Verdict::kNotMeanAp);
    CHECK(rep.verdicts[0].witness_eps == 0.5);
    CHECK(rep.verdicts[0].horizons_agree);
  }
  SUBCASE("thue-morse letters are not mean almost periodic") {
    const auto rep = classify_one("thue-morse", "pm1");
    CHECK(rep.overall == Verdict::kNotMeanAp);
  }
}

TEST_CASE("parameter validation") {
  MeanApParams p;
  p.horizon = 100;
  p.t_max = 50;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.horizon = 1000;
  p.t_max = 100;
  p.eps_grid = {0.1, 0.5};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.eps_grid = {0.5, 0.1};
  CHECK_NOTHROW(p.validate());
}

TEST_SUITE_END();
