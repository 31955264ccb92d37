#pragma once

#include <span>
#include <vector>

namespace robin {

/// Trigonometric boundary space: j1 cosine modes (including the constant)
/// followed by j2 sine modes, all with period 4 in the arc length t.
struct BasisSpec {
  int j1 = 1;
  int j2 = 0;

  int size() const { return j1 + j2; }
  friend bool operator==(const BasisSpec&, const BasisSpec&) = default;
};

void validate(const BasisSpec& spec);

/// Basis function j (1-based): 1/2 cos((j-1) pi t / 2) for j <= j1,
/// 1/2 sin((j-j1) pi t / 2) otherwise.
double eval_basis(const BasisSpec& spec, int j, double t);
double eval_basis_tderiv(const BasisSpec& spec, int j, double t);

/// Robin coefficient a(t) = sum alpha_m phi_{1,m-1}(t) + sum beta_n phi_{2,n}(t).
class RobinParameter {
 public:
  RobinParameter() = default;
  RobinParameter(BasisSpec spec, std::vector<double> alpha, std::vector<double> beta);

  static RobinParameter zero(BasisSpec spec);
  static RobinParameter constant(BasisSpec spec, double value);
  /// Coefficient vector ordered as (alpha, beta).
  static RobinParameter from_coefficients(BasisSpec spec, std::span<const double> x);
  /// Unit coefficient for basis index j (1-based).
  static RobinParameter basis_mode(BasisSpec spec, int j);

  const BasisSpec& spec() const { return spec_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<double>& beta() const { return beta_; }
  std::vector<double> coefficients() const;

  double value(double t) const;
  double tderiv(double t) const;

  /// Same function expressed in a larger space (zero padding) or truncated to
  /// a smaller one.
  RobinParameter resized(BasisSpec spec) const;

  RobinParameter& operator+=(const RobinParameter& other);
  RobinParameter& operator-=(const RobinParameter& other);
  RobinParameter& operator*=(double s);

  friend RobinParameter operator+(RobinParameter a, const RobinParameter& b) { return a += b; }
  friend RobinParameter operator-(RobinParameter a, const RobinParameter& b) { return a -= b; }
  friend RobinParameter operator*(double s, RobinParameter a) { return a *= s; }

 private:
  BasisSpec spec_;
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

inline double eval_robin(const RobinParameter& a, double t) { return a.value(t); }
inline double eval_robin_tderiv(const RobinParameter& a, double t) { return a.tderiv(t); }

inline constexpr int kDefaultBoundarySamples = 4096;

/// max over the uniform grid t_k = 4k/n of |a(t)| + |a'(t)|.
double c1_norm(const RobinParameter& a, int n_samples = kDefaultBoundarySamples);

/// C1 distance between parameters that may live in different spaces.
double c1_distance(const RobinParameter& a, const RobinParameter& b,
                   int n_samples = kDefaultBoundarySamples);

double min_on_boundary(const RobinParameter& a, int n_samples = kDefaultBoundarySamples);

}  // namespace robin
