#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "specdiff/test_function.hpp"

namespace specdiff {

// Hermitian coefficient window c_{-K..K}, the finite-lag representation of a
// positive definite sequence (equivalently, of the Fourier coefficients of a
// positive measure on the torus). c_0 is real and nonnegative, c_{-n} is
// exactly conj(c_n) after construction.
class PosDefSequence {
 public:
  // full: 2K+1 values, index n+K holds c_n. The constructor validates the
  // Hermitian property and |c_n| <= c_0 within `tol` relative to c_0
  // (estimated instances pass their statistical tolerance), then
  // symmetrizes exactly.
  PosDefSequence(std::vector<cplx> full, double tol = 1e-9,
                 std::string provenance = {},
                 std::vector<double> stderrs = {});

  // build from lags 0..K; negative lags filled by conjugation
  static PosDefSequence from_nonnegative_lags(std::vector<cplx> lags,
                                              double tol = 1e-9,
                                              std::string provenance = {},
                                              std::vector<double> stderrs = {});

  std::int64_t max_lag() const { return max_lag_; }
  double c0() const { return full_[static_cast<std::size_t>(max_lag_)].real(); }

  // c_n for |n| <= K; throws std::out_of_range beyond the window
  cplx at(std::int64_t n) const;

  // index n+K
  const std::vector<cplx>& full() const { return full_; }
  // per-lag standard errors (same indexing as full()); empty for exact paths
  const std::vector<double>& stderrs() const { return stderrs_; }
  const std::string& provenance() const { return provenance_; }

  // truncate to a smaller window
  PosDefSequence truncated(std::int64_t new_max_lag) const;

 private:
  std::int64_t max_lag_ = 0;
  std::vector<cplx> full_;
  std::vector<double> stderrs_;
  std::string provenance_;
};

// Q(phi) = sum_n c(n) (phi * phi~)(n). Throws if supp(phi * phi~) exceeds the
// lag window. Real up to roundoff for Hermitian c; the real part is returned.
double quadratic_form(const PosDefSequence& c, const TestFunction& phi);

struct PdCheckResult {
  double min_quadratic_form = 0.0;
  // witnessing test function when the minimum is below -tol, else empty
  std::optional<TestFunction> witness;
};

// Positive definiteness probe: `trials` random test functions supported in
// [-K/2, K/2], plus a deterministic eigenvalue check of the (floor(K/2)+1)
// Toeplitz matrix (dimension capped so the check stays cheap for very long
// windows; any principal submatrix failing is still a valid witness).
PdCheckResult check_positive_definite(const PosDefSequence& c,
                                      std::int64_t trials,
                                      std::uint64_t rng_seed,
                                      double tol = 1e-9,
                                      std::int64_t max_eigen_dim = 1024);

}  // namespace specdiff
