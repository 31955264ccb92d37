#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numbers>
#include <random>

#include "robin/robin_basis.hpp"
#include "robin/sparse_linalg.hpp"

using namespace robin;

namespace {

const double kPi = std::numbers::pi;

RobinParameter truth() {
  return RobinParameter({6, 6}, {10, 1, -0.5, 2, 1, -0.5}, {0.2, 1, -0.5, 2, 1, -0.5});
}

RobinParameter random_parameter(BasisSpec spec, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> x(static_cast<std::size_t>(spec.size()));
  for (auto& v : x) v = u(rng);
  return RobinParameter::from_coefficients(spec, x);
}

}  // namespace

TEST_CASE("basis evaluation") {
  const BasisSpec spec{6, 6};
  CHECK(eval_basis(spec, 1, 0.37) == 0.5);
  CHECK(eval_basis(spec, 7, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_basis(spec, 2, 4.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(eval_basis(spec, 2, 4.0) == doctest::Approx(eval_basis(spec, 2, 0.0)));
  CHECK_THROWS_AS(eval_basis(spec, 0, 0.0), std::out_of_range);
  CHECK_THROWS_AS(eval_basis(spec, 13, 0.0), std::out_of_range);
  CHECK_THROWS_AS(validate(BasisSpec{0, 3}), std::invalid_argument);
}

TEST_CASE("Robin parameter evaluation") {
  const BasisSpec spec{6, 6};
  const auto one = RobinParameter::constant(spec, 1.0);
  CHECK(one.alpha()[0] == 2.0);
  for (double t : {0.0, 0.3, 1.7, 3.99}) CHECK(eval_robin(one, t) == doctest::Approx(1.0));
  CHECK(eval_robin(truth(), 0.0) == doctest::Approx(6.5).epsilon(1e-15));
  const auto zero = RobinParameter::zero(spec);
  CHECK(eval_robin(zero, 1.234) == 0.0);
  CHECK(truth().coefficients().size() == 12);
  CHECK_THROWS_AS(RobinParameter::from_coefficients(spec, std::vector<double>(5, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(RobinParameter(spec, {1.0}, {}), std::invalid_argument);
}

TEST_CASE("tangential derivative") {
  const BasisSpec spec{1, 1};
  CHECK(eval_robin_tderiv(RobinParameter::constant({4, 2}, 3.0), 1.3) == 0.0);
  const RobinParameter sine(spec, {0.0}, {1.0});
  for (double t : {0.0, 0.5, 2.2}) {
    CHECK(eval_robin_tderiv(sine, t) == doctest::Approx(kPi / 4.0 * std::cos(kPi * t / 2.0)));
  }

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 4.0);
  const auto a = truth();
  const double step = 1e-6;
  for (int s = 0; s < 100; ++s) {
    const double t = ut(rng);
    const double fd = (a.value(t + step) - a.value(t - step)) / (2.0 * step);
    CHECK(std::abs(fd - a.tderiv(t)) < 1e-6);
  }
}

TEST_CASE("C1 norm") {
  CHECK(c1_norm(RobinParameter::constant({3, 3}, 1.0)) == doctest::Approx(1.0));
  CHECK(c1_norm(truth() - truth()) == 0.0);
  CHECK_THROWS_AS(c1_norm(truth(), 100), std::invalid_argument);

  // Dense-sampling oracle for the single sine mode.
  const RobinParameter sine({1, 1}, {0.0}, {1.0});
  double oracle = 0.0;
  for (int k = 0; k < 1000000; ++k) {
    const double t = 4.0 * k / 1000000;
    oracle = std::max(oracle, std::abs(0.5 * std::sin(kPi * t / 2.0)) +
                                  std::abs(kPi / 4.0 * std::cos(kPi * t / 2.0)));
  }
  CHECK(std::abs(oracle - std::sqrt(0.25 + kPi * kPi / 16.0)) < 1e-6);
  CHECK(std::abs(c1_norm(sine) - oracle) < 1e-4);
  CHECK(c1_norm(sine) == doctest::Approx(0.9311).epsilon(1e-4));

  // Parameters in different spaces are compared as functions.
  const auto padded = truth().resized({8, 7});
  CHECK(c1_distance(padded, truth()) == 0.0);
}

TEST_CASE("boundary minimum") {
  CHECK(min_on_boundary(RobinParameter::constant({2, 2}, 1.0)) == doctest::Approx(1.0));
  CHECK(min_on_boundary(RobinParameter({1, 1}, {2.0}, {1.0})) == doctest::Approx(0.5));
  CHECK(min_on_boundary(RobinParameter::zero({3, 1})) == 0.0);
  CHECK(min_on_boundary(truth()) > 0.0);
}

TEST_CASE("linearity and periodicity (property)") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> ut(0.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    const BasisSpec spec{1 + trial % 8, trial % 9};
    const auto a = random_parameter(spec, rng);
    const auto b = random_parameter(spec, rng);
    const double t = ut(rng);
    CHECK(std::abs((a + b).value(t) - (a.value(t) + b.value(t))) < 1e-14);
    CHECK(std::abs((2.5 * a).value(t) - 2.5 * a.value(t)) < 1e-13);
  }
  const BasisSpec spec{8, 8};
  for (int j = 1; j <= spec.size(); ++j) {
    const auto mode = RobinParameter::basis_mode(spec, j);
    for (int s = 0; s < 20; ++s) {
      const double t = ut(rng);
      CHECK(std::abs(mode.value(t) - mode.value(t + 4.0)) < 1e-13);
      CHECK(std::abs(mode.tderiv(t) - mode.tderiv(t + 4.0)) < 1e-13);
    }
    // C1 compatibility across the start corner.
    CHECK(std::abs(mode.value(0.0) - mode.value(4.0)) < 1e-13);
    CHECK(std::abs(mode.tderiv(0.0) - mode.tderiv(4.0)) < 1e-13);
  }
}

TEST_CASE("least-squares projection recovers basis coefficients") {
  const BasisSpec spec{6, 6};
  const int dim = spec.size();
  const int samples = 4 * dim;
  DenseMatrix design(samples, dim);
  for (int s = 0; s < samples; ++s) {
    const double t = 4.0 * s / samples;
    for (int j = 1; j <= dim; ++j) design(s, j - 1) = eval_basis(spec, j, t);
  }
  const DenseMatrix dt = design.transpose();
  DenseMatrix normal(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double v = 0.0;
      for (int s = 0; s < samples; ++s) v += dt(i, s) * dt(j, s);
      normal(i, j) = v;
    }
  for (int j = 1; j <= dim; ++j) {
    const auto mode = RobinParameter::basis_mode(spec, j);
    std::vector<double> values(samples);
    for (int s = 0; s < samples; ++s) values[s] = mode.value(4.0 * s / samples);
    const auto coeffs = dense_solve(normal, dt.multiply(values));
    for (int i = 0; i < dim; ++i) CHECK(std::abs(coeffs[i] - (i + 1 == j ? 1.0 : 0.0)) < 1e-10);
  }
}
