#include "specdiff/test_function.hpp"

#include <cmath>
#include <utility>

namespace specdiff {

namespace {

// canonical trimming: drop exactly-zero leading and trailing coefficients
void trim(std::int64_t& offset, std::vector<cplx>& c) {
  std::size_t lead = 0;
  while (lead < c.size() && c[lead] == cplx{0.0, 0.0}) ++lead;
  if (lead == c.size()) {
    c.clear();
    offset = 0;
    return;
  }
  std::size_t tail = c.size();
  while (tail > lead && c[tail - 1] == cplx{0.0, 0.0}) --tail;
  if (lead > 0 || tail < c.size()) {
    c = std::vector<cplx>(c.begin() + static_cast<std::ptrdiff_t>(lead),
                          c.begin() + static_cast<std::ptrdiff_t>(tail));
    offset += static_cast<std::int64_t>(lead);
  }
}

}  // namespace

TestFunction::TestFunction(std::int64_t support_offset,
                           std::vector<cplx> coefficients)
    : support_offset_(support_offset), coefficients_(std::move(coefficients)) {
  trim(support_offset_, coefficients_);
}

TestFunction TestFunction::delta(std::int64_t n) {
  return TestFunction(n, {cplx{1.0, 0.0}});
}

cplx TestFunction::at(std::int64_t n) const {
  if (coefficients_.empty() || n < support_min() || n > support_max()) {
    return {0.0, 0.0};
  }
  return coefficients_[static_cast<std::size_t>(n - support_offset_)];
}

TestFunction TestFunction::translated(std::int64_t shift) const {
  if (is_zero()) return {};
  return TestFunction(support_offset_ + shift, coefficients_);
}

double TestFunction::l1_norm() const {
  double s = 0.0;
  for (const auto& v : coefficients_) s += std::abs(v);
  return s;
}

double TestFunction::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& v : coefficients_) s += std::norm(v);
  return s;
}

TestFunction convolve(const TestFunction& phi, const TestFunction& psi) {
  if (phi.is_zero() || psi.is_zero()) return {};
  const auto& a = phi.coefficients();
  const auto& b = psi.coefficients();
  std::vector<cplx> out(a.size() + b.size() - 1, cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      out[i + j] += a[i] * b[j];
    }
  }
  return TestFunction(phi.support_offset() + psi.support_offset(),
                      std::move(out));
}

TestFunction involute(const TestFunction& phi) {
  if (phi.is_zero()) return {};
  const auto& c = phi.coefficients();
  std::vector<cplx> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    out[i] = std::conj(c[c.size() - 1 - i]);
  }
  return TestFunction(-phi.support_max(), std::move(out));
}

}  // namespace specdiff
