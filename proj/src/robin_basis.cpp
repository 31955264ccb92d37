#include "robin/robin_basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robin {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

void check_samples(int n_samples) {
  if (n_samples < 256) {
    throw std::invalid_argument("boundary sampling needs at least 256 points, got " +
                                std::to_string(n_samples));
  }
}

void check_index(const BasisSpec& spec, int j) {
  if (j < 1 || j > spec.size()) {
    throw std::out_of_range("basis index " + std::to_string(j) + " outside 1.." +
                            std::to_string(spec.size()));
  }
}

}  // namespace

void validate(const BasisSpec& spec) {
  if (spec.j1 < 1) throw std::invalid_argument("basis: j1 must be >= 1");
  if (spec.j2 < 0) throw std::invalid_argument("basis: j2 must be >= 0");
}

double eval_basis(const BasisSpec& spec, int j, double t) {
  check_index(spec, j);
  if (j <= spec.j1) return 0.5 * std::cos((j - 1) * kHalfPi * t);
  return 0.5 * std::sin((j - spec.j1) * kHalfPi * t);
}

double eval_basis_tderiv(const BasisSpec& spec, int j, double t) {
  check_index(spec, j);
  if (j <= spec.j1) {
    const double w = (j - 1) * kHalfPi;
    return -0.5 * w * std::sin(w * t);
  }
  const double w = (j - spec.j1) * kHalfPi;
  return 0.5 * w * std::cos(w * t);
}

RobinParameter::RobinParameter(BasisSpec spec, std::vector<double> alpha, std::vector<double> beta)
    : spec_(spec), alpha_(std::move(alpha)), beta_(std::move(beta)) {
  validate(spec_);
  if (static_cast<int>(alpha_.size()) != spec_.j1 || static_cast<int>(beta_.size()) != spec_.j2) {
    throw std::invalid_argument("RobinParameter: coefficient lengths do not match basis (" +
                                std::to_string(spec_.j1) + ", " + std::to_string(spec_.j2) + ")");
  }
}

RobinParameter RobinParameter::zero(BasisSpec spec) {
  validate(spec);
  return RobinParameter(spec, std::vector<double>(spec.j1, 0.0), std::vector<double>(spec.j2, 0.0));
}

RobinParameter RobinParameter::constant(BasisSpec spec, double value) {
  RobinParameter a = zero(spec);
  a.alpha_[0] = 2.0 * value;  // phi_{1,0} = 1/2
  return a;
}

RobinParameter RobinParameter::from_coefficients(BasisSpec spec, std::span<const double> x) {
  validate(spec);
  if (static_cast<int>(x.size()) != spec.size()) {
    throw std::invalid_argument("RobinParameter: coefficient vector has length " +
                                std::to_string(x.size()) + ", expected " +
                                std::to_string(spec.size()));
  }
  return RobinParameter(spec, std::vector<double>(x.begin(), x.begin() + spec.j1),
                        std::vector<double>(x.begin() + spec.j1, x.end()));
}

RobinParameter RobinParameter::basis_mode(BasisSpec spec, int j) {
  check_index(spec, j);
  RobinParameter a = zero(spec);
  if (j <= spec.j1) {
    a.alpha_[j - 1] = 1.0;
  } else {
    a.beta_[j - spec.j1 - 1] = 1.0;
  }
  return a;
}

std::vector<double> RobinParameter::coefficients() const {
  std::vector<double> x(alpha_);
  x.insert(x.end(), beta_.begin(), beta_.end());
  return x;
}

double RobinParameter::value(double t) const {
  double s = 0.0;
  for (std::size_t m = 0; m < alpha_.size(); ++m) {
    s += alpha_[m] * 0.5 * std::cos(static_cast<double>(m) * kHalfPi * t);
  }
  for (std::size_t n = 0; n < beta_.size(); ++n) {
    s += beta_[n] * 0.5 * std::sin(static_cast<double>(n + 1) * kHalfPi * t);
  }
  return s;
}

double RobinParameter::tderiv(double t) const {
  double s = 0.0;
  for (std::size_t m = 1; m < alpha_.size(); ++m) {
    const double w = static_cast<double>(m) * kHalfPi;
    s -= alpha_[m] * 0.5 * w * std::sin(w * t);
  }
  for (std::size_t n = 0; n < beta_.size(); ++n) {
    const double w = static_cast<double>(n + 1) * kHalfPi;
    s += beta_[n] * 0.5 * w * std::cos(w * t);
  }
  return s;
}

RobinParameter RobinParameter::resized(BasisSpec spec) const {
  RobinParameter out = zero(spec);
  std::copy_n(alpha_.begin(), std::min(spec.j1, spec_.j1), out.alpha_.begin());
  std::copy_n(beta_.begin(), std::min(spec.j2, spec_.j2), out.beta_.begin());
  return out;
}

RobinParameter& RobinParameter::operator+=(const RobinParameter& other) {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("RobinParameter: basis mismatch");
  for (std::size_t i = 0; i < alpha_.size(); ++i) alpha_[i] += other.alpha_[i];
  for (std::size_t i = 0; i < beta_.size(); ++i) beta_[i] += other.beta_[i];
  return *this;
}

RobinParameter& RobinParameter::operator-=(const RobinParameter& other) {
  if (!(spec_ == other.spec_)) throw std::invalid_argument("RobinParameter: basis mismatch");
  for (std::size_t i = 0; i < alpha_.size(); ++i) alpha_[i] -= other.alpha_[i];
  for (std::size_t i = 0; i < beta_.size(); ++i) beta_[i] -= other.beta_[i];
  return *this;
}

RobinParameter& RobinParameter::operator*=(double s) {
  for (double& v : alpha_) v *= s;
  for (double& v : beta_) v *= s;
  return *this;
}

double c1_norm(const RobinParameter& a, int n_samples) {
  check_samples(n_samples);
  double worst = 0.0;
  for (int k = 0; k < n_samples; ++k) {
    const double t = 4.0 * k / n_samples;
    worst = std::max(worst, std::abs(a.value(t)) + std::abs(a.tderiv(t)));
  }
  return worst;
}

double c1_distance(const RobinParameter& a, const RobinParameter& b, int n_samples) {
  const BasisSpec common{std::max(a.spec().j1, b.spec().j1), std::max(a.spec().j2, b.spec().j2)};
  return c1_norm(a.resized(common) - b.resized(common), n_samples);
}

double min_on_boundary(const RobinParameter& a, int n_samples) {
  check_samples(n_samples);
  double lo = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_samples; ++k) lo = std::min(lo, a.value(4.0 * k / n_samples));
  return lo;
}

}  // namespace robin
