#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "specdiff/rng.hpp"
#include "specdiff/systems.hpp"

using namespace specdiff;

namespace {

std::string word_of(const std::vector<Symbol>& symbols,
                    const SystemSpec& spec) {
  std::string out;
  for (Symbol s : symbols) out.push_back(spec.letter_name(s));
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("systems");

TEST_CASE("substitution fixed points match hand expansion") {
  const SystemSpec fib = SystemSpec::built_in("fibonacci");
  const SystemSpec tm = SystemSpec::built_in("thue-morse");
  const SystemSpec pd = SystemSpec::built_in("period-doubling");

  CHECK(word_of(substitution_fixed_point(SubstitutionRule::fibonacci(), 8),
                fib) == "abaababa");
  CHECK(word_of(substitution_fixed_point(SubstitutionRule::thue_morse(), 8),
                tm) == "abbabaab");
  CHECK(word_of(
            substitution_fixed_point(SubstitutionRule::period_doubling(), 8),
            pd) == "abaaabab");

  // long prefixes against the string-iteration oracle
  const auto prefix =
      substitution_fixed_point(SubstitutionRule::fibonacci(), 10000);
  const std::string expected =
      oracle::substitution_prefix({{'a', "ab"}, {'b', "a"}}, 'a', 10000);
  CHECK(word_of(prefix, fib) == expected);
}

TEST_CASE("non-primitive substitutions are rejected") {
  // b maps to itself and never reaches a
  const auto rule = SubstitutionRule::from_strings({{'a', "ab"}, {'b', "b"}});
  CHECK(!rule.is_primitive());
  CHECK_THROWS_AS(substitution_fixed_point(rule, 10), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::substitution(rule, "bad"), std::invalid_argument);
}

TEST_CASE("perron data of the built-ins") {
  const auto fib = SubstitutionRule::fibonacci();
  CHECK(fib.perron_eigenvalue() ==
        doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-10));
  const auto freq = fib.letter_frequencies();
  CHECK(freq[0] == doctest::Approx(oracle::golden()).epsilon(1e-10));

  const auto tm = SubstitutionRule::thue_morse();
  CHECK(tm.perron_eigenvalue() == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(tm.letter_frequencies()[0] == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("orbit samples: finite cyclic indicator") {
  const SystemSpec spec = SystemSpec::finite_cyclic(3);
  const Observable f = Observable::letter_weights(
      spec, {cplx{1, 0}, cplx{0, 0}, cplx{0, 0}}, false, "1_{0}");
  State x;
  x.value = std::int64_t{0};
  const auto sig = orbit_samples(spec, f, x, 6);
  const std::vector<double> expected = {1, 0, 0, 1, 0, 0};
  for (std::size_t n = 0; n < 6; ++n) {
    CHECK(sig.values[n].real() == expected[n]);
    CHECK(sig.values[n].imag() == 0.0);
  }
}

TEST_CASE("orbit samples: rotation character sign convention") {
  const SystemSpec spec = SystemSpec::golden_rotation();
  const double alpha = oracle::golden();
  const Observable f = Observable::character(spec, 1);  // e^{2 pi i xi}
  const State x = origin_state(spec, 8);
  const auto sig = orbit_samples(spec, f, x, 3);
  // n -> f(alpha_{-n} 0) = e^{-2 pi i n alpha}
  for (std::int64_t n = 0; n < 3; ++n) {
    const cplx expected{std::cos(2 * std::numbers::pi * n * alpha),
                        -std::sin(2 * std::numbers::pi * n * alpha)};
    CHECK(std::abs(sig.values[static_cast<std::size_t>(n)] - expected) <
          1e-12);
  }
}

TEST_CASE("orbit samples: thue-morse letters from the fixed point") {
  const SystemSpec spec = SystemSpec::built_in("thue-morse");
  const Observable f = Observable::parse(spec, "pm1");
  const State x = origin_state(spec, 16);
  const auto sig = orbit_samples(spec, f, x, 8);
  const std::vector<double> expected = {1, -1, -1, 1, -1, 1, 1, -1};
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(sig.values[n].real() == expected[n]);
  }
}

TEST_CASE("two-sided fixed point is locally legal and matches the prefix") {
  const SystemSpec spec = SystemSpec::built_in("thue-morse");
  const Observable f = Observable::parse(spec, "pm1");
  const State x = origin_state(spec, 64);
  // right half agrees with the one-sided fixed point
  const auto prefix =
      substitution_fixed_point(SubstitutionRule::thue_morse(), 64);
  for (std::int64_t t = 0; t < 64; ++t) {
    const State shifted = apply_action(spec, x, -t);
    const auto& w = std::get<SeqWindow>(shifted.value);
    CHECK(w.source->at(w.shift) == prefix[static_cast<std::size_t>(t)]);
  }
  // left half: coordinates -1.. -64 equal the suffix of a large even power
  const std::string big = oracle::expand({{'a', "ab"}, {'b', "ba"}}, "a", 10);
  const auto& w = std::get<SeqWindow>(x.value);
  for (std::int64_t j = 1; j <= 64; ++j) {
    CHECK(spec.letter_name(w.source->at(w.shift - j)) ==
          big[big.size() - static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("shift equivariance is exact on every variant") {
  const std::vector<std::string> names = {"fibonacci", "thue-morse",
                                          "rotation", "bernoulli", "cyclic"};
  for (const auto& name : names) {
    CAPTURE(name);
    const SystemSpec spec = SystemSpec::built_in(name);
    const Observable f =
        spec.is_rotation() ? Observable::character(spec, -1)
        : spec.is_finite_cyclic()
            ? Observable::parse(spec, "weights:1,0,2,0,0,0,3,0,0,0,0,5")
            : Observable::parse(spec, "indicator:a");
    const std::int64_t n = 64;
    const State x = sample_invariant(spec, 99, n + 2);
    const State y = apply_action(spec, x, -1);
    const auto long_run = orbit_samples(spec, f, x, n + 1);
    const auto short_run = orbit_samples(spec, f, y, n);
    for (std::int64_t i = 0; i < n; ++i) {
      // bit-exact: both paths evaluate f on the identical state
      CHECK(short_run.values[static_cast<std::size_t>(i)] ==
            long_run.values[static_cast<std::size_t>(i + 1)]);
    }
  }
}

TEST_CASE("action composes exactly") {
  for (const auto& name : {"fibonacci", "rotation", "bernoulli", "cyclic"}) {
    const SystemSpec spec = SystemSpec::built_in(name);
    const State x = sample_invariant(spec, 3, 64);
    const State a = apply_action(spec, apply_action(spec, x, 5), -9);
    const State b = apply_action(spec, x, -4);
    if (spec.is_rotation()) {
      CHECK(rotation_angle(spec, a) == rotation_angle(spec, b));
    } else if (spec.is_finite_cyclic()) {
      CHECK(std::get<std::int64_t>(a.value) == std::get<std::int64_t>(b.value));
    } else {
      CHECK(std::get<SeqWindow>(a.value).shift ==
            std::get<SeqWindow>(b.value).shift);
    }
  }
}

TEST_CASE("finite cyclic orbit distribution over one period") {
  const SystemSpec spec = SystemSpec::finite_cyclic(5);
  const Observable f = Observable::parse(spec, "weights:1,2,3,4,5");
  State x;
  x.value = std::int64_t{2};
  const auto sig = orbit_samples(spec, f, x, 5);
  // one full period visits every state exactly once
  std::vector<double> seen;
  for (const auto& v : sig.values) seen.push_back(v.real());
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<double>{1, 2, 3, 4, 5});
}

TEST_CASE("substitution letter frequencies converge to the perron vector") {
  for (const auto& name : {"fibonacci", "thue-morse", "period-doubling"}) {
    CAPTURE(name);
    const SystemSpec spec = SystemSpec::built_in(name);
    const auto& rule = std::get<SubstitutionSpec>(spec.variant()).rule;
    const auto word = substitution_fixed_point(rule, 1 << 20);
    std::vector<double> counts(rule.alphabet_size(), 0.0);
    for (Symbol s : word) counts[s] += 1.0;
    for (auto& c : counts) c /= static_cast<double>(word.size());
    const auto freq = rule.letter_frequencies();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      CHECK(std::abs(counts[i] - freq[i]) < 1e-3);
    }
  }
}

TEST_CASE("invariant sampling statistics") {
  SUBCASE("finite cyclic uniformity (chi-squared, 1% level)") {
    const SystemSpec spec = SystemSpec::finite_cyclic(4);
    std::vector<double> counts(4, 0.0);
    const std::int64_t trials = 10000;
    for (std::int64_t i = 0; i < trials; ++i) {
      const State x = sample_invariant(
          spec, derive_seed(1234, "chi2", static_cast<std::uint64_t>(i)), 0);
      counts[static_cast<std::size_t>(std::get<std::int64_t>(x.value))] += 1;
    }
    const std::vector<double> expected(4, trials / 4.0);
    // chi^2_3 critical value at p = 0.01
    CHECK(oracle::chi_squared(counts, expected) < 11.345);
  }
  SUBCASE("bernoulli origin symbol mean") {
    const SystemSpec spec = SystemSpec::built_in("bernoulli");
    const Observable f = Observable::parse(spec, "pm1");
    const std::int64_t trials = 10000;
    double mean = 0.0;
    for (std::int64_t i = 0; i < trials; ++i) {
      const State x = sample_invariant(
          spec, derive_seed(77, "mean", static_cast<std::uint64_t>(i)), 1);
      mean += f.eval(x).real();
    }
    mean /= static_cast<double>(trials);
    CHECK(std::abs(mean) <= 3.0 / std::sqrt(static_cast<double>(trials)));
  }
  SUBCASE("rotation angle uniformity (KS, 1% level)") {
    const SystemSpec spec = SystemSpec::golden_rotation();
    const std::int64_t trials = 10000;
    std::vector<double> xs;
    for (std::int64_t i = 0; i < trials; ++i) {
      const State x = sample_invariant(
          spec, derive_seed(55, "ks", static_cast<std::uint64_t>(i)), 0);
      xs.push_back(rotation_angle(spec, x));
    }
    CHECK(oracle::ks_uniform(xs) <=
          1.63 / std::sqrt(static_cast<double>(trials)));
  }
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(SystemSpec::rotation(0.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::rotation(1.0), std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::bernoulli({'a', 'b'}, {0.7, 0.7}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SystemSpec::finite_cyclic(4, 1, {0.4, 0.2, 0.2, 0.2}),
                  std::invalid_argument);  // unit step forces uniform
  // non-unit step: weights constant on orbits are accepted
  const SystemSpec ok = SystemSpec::finite_cyclic(4, 2, {0.3, 0.2, 0.3, 0.2});
  CHECK(ok.letter_frequencies()[0] == 0.3);
  CHECK_THROWS_AS(SystemSpec::finite_cyclic(4, 2, {0.4, 0.2, 0.2, 0.2}),
                  std::invalid_argument);  // not invariant under step 2
}

TEST_CASE("observables") {
  const SystemSpec fib = SystemSpec::built_in("fibonacci");
  SUBCASE("centered letter weights have zero invariant mean") {
    const Observable f = Observable::parse(fib, "indicator-centered:a");
    const State x = origin_state(fib, 1 << 20);
    const auto sig = orbit_samples(fib, f, x, 1 << 20);
    cplx mean{0.0, 0.0};
    for (const auto& v : sig.values) mean += v;
    mean /= static_cast<double>(sig.values.size());
    CHECK(std::abs(mean) < 2e-3);
  }
  SUBCASE("cylinder indicator") {
    const Observable f = Observable::cylinder(
        fib, {static_cast<Symbol>(0), static_cast<Symbol>(1)}, 0, "ab");
    const State x = origin_state(fib, 16);
    // fixed point starts a b a a b...
    CHECK(f.eval(x) == cplx{1.0, 0.0});
    CHECK(f.eval(apply_action(fib, x, -1)) == cplx{0.0, 0.0});
    CHECK(f.eval(apply_action(fib, x, -3)) == cplx{1.0, 0.0});
  }
  SUBCASE("parse errors") {
    CHECK_THROWS_AS(Observable::parse(fib, "character"),
                    std::invalid_argument);
    CHECK_THROWS_AS(Observable::parse(fib, "indicator:z"),
                    std::invalid_argument);
    CHECK_THROWS_AS(Observable::parse(fib, "nonsense"), std::invalid_argument);
    const SystemSpec rot = SystemSpec::golden_rotation();
    CHECK_THROWS_AS(Observable::parse(rot, "pm1"), std::invalid_argument);
  }
  SUBCASE("sup bound holds along orbits") {
    const Observable f = Observable::parse(fib, "indicator-centered:a");
    const State x = sample_invariant(fib, 9, 4096);
    const auto sig = orbit_samples(fib, f, x, 4096);
    for (const auto& v : sig.values) {
      CHECK(std::abs(v) <= f.sup_bound() + 1e-15);
    }
  }
}

TEST_CASE("explicit periodic system") {
  const SystemSpec spec =
      SystemSpec::explicit_periodic({'a', 'b'}, {0, 1, 1, 0});
  const auto freq = spec.letter_frequencies();
  CHECK(freq[0] == 0.5);
  const Observable f = Observable::parse(spec, "pm1");
  const State x = origin_state(spec, 0);
  const auto sig = orbit_samples(spec, f, x, 8);
  const std::vector<double> expected = {1, -1, -1, 1, 1, -1, -1, 1};
  for (std::size_t n = 0; n < 8; ++n) {
    CHECK(sig.values[n].real() == expected[n]);
  }
}

TEST_SUITE_END();
