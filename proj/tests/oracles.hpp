#pragma once

// Test-only oracles, kept independent of the library code paths they check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline double golden() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// O(N K) reference autocorrelation, biased 1/N normalization
inline std::vector<cplx> naive_autocorrelation(const std::vector<cplx>& s,
                                               std::int64_t max_lag) {
  const std::int64_t n = static_cast<std::int64_t>(s.size());
  std::vector<cplx> lags(static_cast<std::size_t>(max_lag) + 1);
  for (std::int64_t k = 0; k <= max_lag; ++k) {
    cplx acc{0.0, 0.0};
    for (std::int64_t i = 0; i + k < n; ++i) {
      acc += s[static_cast<std::size_t>(i + k)] *
             std::conj(s[static_cast<std::size_t>(i)]);
    }
    lags[static_cast<std::size_t>(k)] = acc / static_cast<double>(n);
  }
  return lags;
}

// Thue-Morse correlation recursion: eta(0)=1, eta(2n)=eta(n),
// eta(2n+1) = -(eta(n) + eta(n+1))/2
inline std::vector<double> tm_eta_table(std::int64_t max_n) {
  std::vector<double> e(static_cast<std::size_t>(max_n) + 2);
  e[0] = 1.0;
  e[1] = -1.0 / 3.0;  // fixed point of eta(1) = -(eta(0)+eta(1))/2
  for (std::int64_t n = 2; n <= max_n + 1; ++n) {
    if (n % 2 == 0) {
      e[static_cast<std::size_t>(n)] = e[static_cast<std::size_t>(n / 2)];
    } else {
      e[static_cast<std::size_t>(n)] =
          -(e[static_cast<std::size_t>((n - 1) / 2)] +
            e[static_cast<std::size_t>((n - 1) / 2 + 1)]) /
          2.0;
    }
  }
  return e;
}

// substitution expansion on strings, independent of the library machinery
inline std::string expand(const std::map<char, std::string>& rules,
                          std::string word, int times) {
  for (int i = 0; i < times; ++i) {
    std::string next;
    for (char c : word) next += rules.at(c);
    word = std::move(next);
  }
  return word;
}

inline std::string substitution_prefix(const std::map<char, std::string>& rules,
                                       char seed, std::size_t length) {
  std::string word(1, seed);
  while (word.size() < length) word = expand(rules, word, 1);
  return word.substr(0, length);
}

// chi-squared statistic against expected counts
inline double chi_squared(const std::vector<double>& observed,
                          const std::vector<double>& expected) {
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  return stat;
}

// Kolmogorov-Smirnov statistic of sorted samples against Uniform[0,1)
inline double ks_uniform(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    stat = std::max({stat, std::abs(samples[i] - lo),
                     std::abs(samples[i] - hi)});
  }
  return stat;
}

}  // namespace oracle
