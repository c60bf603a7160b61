#include "specdiff/pos_def_sequence.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "specdiff/rng.hpp"

namespace specdiff {

PosDefSequence::PosDefSequence(std::vector<cplx> full, double tol,
                               std::string provenance,
                               std::vector<double> stderrs)
    : full_(std::move(full)),
      stderrs_(std::move(stderrs)),
      provenance_(std::move(provenance)) {
  if (full_.empty() || full_.size() % 2 == 0) {
    throw std::invalid_argument(
        "PosDefSequence: window must hold an odd number of lags");
  }
  max_lag_ = static_cast<std::int64_t>(full_.size() / 2);
  if (!stderrs_.empty() && stderrs_.size() != full_.size()) {
    throw std::invalid_argument("PosDefSequence: stderr size mismatch");
  }
  const std::size_t k0 = static_cast<std::size_t>(max_lag_);
  const double c0 = full_[k0].real();
  const double scale = std::max(c0, 1.0);
  if (std::abs(full_[k0].imag()) > tol * scale || c0 < -tol * scale) {
    throw std::invalid_argument(
        "PosDefSequence: c_0 must be real and nonnegative");
  }
  for (std::size_t n = 1; n <= k0; ++n) {
    if (std::abs(full_[k0 + n] - std::conj(full_[k0 - n])) > tol * scale) {
      throw std::invalid_argument("PosDefSequence: not Hermitian within tol");
    }
    if (std::abs(full_[k0 + n]) > c0 + tol * scale) {
      throw std::invalid_argument("PosDefSequence: |c_n| exceeds c_0");
    }
  }
  // symmetrize exactly so downstream algebra sees a true Hermitian window
  full_[k0] = cplx{std::max(c0, 0.0), 0.0};
  for (std::size_t n = 1; n <= k0; ++n) {
    cplx avg = 0.5 * (full_[k0 + n] + std::conj(full_[k0 - n]));
    full_[k0 + n] = avg;
    full_[k0 - n] = std::conj(avg);
  }
}

PosDefSequence PosDefSequence::from_nonnegative_lags(
    std::vector<cplx> lags, double tol, std::string provenance,
    std::vector<double> stderrs) {
  if (lags.empty()) {
    throw std::invalid_argument("PosDefSequence: need at least lag 0");
  }
  const std::size_t k = lags.size() - 1;
  std::vector<cplx> full(2 * k + 1);
  for (std::size_t n = 0; n <= k; ++n) {
    full[k + n] = lags[n];
    full[k - n] = std::conj(lags[n]);
  }
  std::vector<double> se;
  if (!stderrs.empty()) {
    se.resize(2 * k + 1);
    for (std::size_t n = 0; n <= k; ++n) {
      se[k + n] = stderrs[n];
      se[k - n] = stderrs[n];
    }
  }
  return PosDefSequence(std::move(full), tol, std::move(provenance),
                        std::move(se));
}

cplx PosDefSequence::at(std::int64_t n) const {
  if (n < -max_lag_ || n > max_lag_) {
    throw std::out_of_range("PosDefSequence: lag outside window");
  }
  return full_[static_cast<std::size_t>(n + max_lag_)];
}

PosDefSequence PosDefSequence::truncated(std::int64_t new_max_lag) const {
  if (new_max_lag < 0 || new_max_lag > max_lag_) {
    throw std::invalid_argument("PosDefSequence: bad truncation lag");
  }
  const std::size_t k0 = static_cast<std::size_t>(max_lag_);
  const std::size_t k1 = static_cast<std::size_t>(new_max_lag);
  std::vector<cplx> full(full_.begin() + static_cast<std::ptrdiff_t>(k0 - k1),
                         full_.begin() + static_cast<std::ptrdiff_t>(k0 + k1 + 1));
  std::vector<double> se;
  if (!stderrs_.empty()) {
    se.assign(stderrs_.begin() + static_cast<std::ptrdiff_t>(k0 - k1),
              stderrs_.begin() + static_cast<std::ptrdiff_t>(k0 + k1 + 1));
  }
  return PosDefSequence(std::move(full), 1e-9, provenance_, std::move(se));
}

double quadratic_form(const PosDefSequence& c, const TestFunction& phi) {
  if (phi.is_zero()) return 0.0;
  TestFunction g = convolve(phi, involute(phi));
  if (g.support_min() < -c.max_lag() || g.support_max() > c.max_lag()) {
    throw std::invalid_argument(
        "quadratic_form: test function support exceeds the lag window");
  }
  cplx q{0.0, 0.0};
  for (std::int64_t n = g.support_min(); n <= g.support_max(); ++n) {
    q += c.at(n) * g.at(n);
  }
  return q.real();
}

PdCheckResult check_positive_definite(const PosDefSequence& c,
                                      std::int64_t trials,
                                      std::uint64_t rng_seed, double tol,
                                      std::int64_t max_eigen_dim) {
  if (trials < 1) {
    throw std::invalid_argument("check_positive_definite: trials >= 1");
  }
  const std::int64_t half = c.max_lag() / 2;
  PdCheckResult result;
  result.min_quadratic_form = std::numeric_limits<double>::infinity();
  const double threshold = -tol * std::max(c.c0(), 1.0);

  Rng rng(derive_seed(rng_seed, "pd-check"));
  for (std::int64_t t = 0; t < trials; ++t) {
    std::vector<cplx> coeffs(static_cast<std::size_t>(2 * half + 1));
    for (auto& v : coeffs) v = cplx{rng.normal(), rng.normal()};
    TestFunction phi(-half, std::move(coeffs));
    // normalize so the form is comparable across trials
    double n2 = phi.l2_norm_sq();
    if (n2 == 0.0) continue;
    double q = quadratic_form(c, phi) / n2;
    if (q < result.min_quadratic_form) {
      result.min_quadratic_form = q;
      if (q < threshold) result.witness = phi;
    }
  }

  // deterministic eigenvalue check of the Toeplitz matrix T_{jk} = c_{j-k}
  const std::int64_t dim = std::min<std::int64_t>(half + 1, max_eigen_dim);
  Eigen::MatrixXcd toeplitz(dim, dim);
  for (std::int64_t j = 0; j < dim; ++j) {
    for (std::int64_t k = 0; k < dim; ++k) {
      const cplx v = c.at(j - k);
      toeplitz(j, k) = std::complex<double>(v.real(), v.imag());
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(toeplitz);
  const auto& evals = solver.eigenvalues();
  std::int64_t argmin = 0;
  for (std::int64_t i = 1; i < dim; ++i) {
    if (evals(i) < evals(argmin)) argmin = i;
  }
  if (evals(argmin) < result.min_quadratic_form) {
    result.min_quadratic_form = evals(argmin);
    if (evals(argmin) < threshold) {
      const auto vec = solver.eigenvectors().col(argmin);
      std::vector<cplx> coeffs(static_cast<std::size_t>(dim));
      for (std::int64_t i = 0; i < dim; ++i) {
        coeffs[static_cast<std::size_t>(i)] = cplx(vec(i).real(), vec(i).imag());
      }
      result.witness = TestFunction(0, std::move(coeffs));
    }
  }
  return result;
}

}  // namespace specdiff
