#pragma once

#include <array>
#include <complex>
#include <vector>

namespace lamharm {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Coupling operators at one breakpoint. side1[m] = (alpha_{m1}, beta_{m1})
/// acts on the left segment, side2[m] = (alpha_{m2}, beta_{m2}) on the right:
///   [alpha_{m1} d/dx + beta_{m1}] phi_k = [alpha_{m2} d/dx + beta_{m2}] phi_{k+1}.
struct AxisCoupling {
  std::array<std::array<double, 2>, 2> side1{};
  std::array<std::array<double, 2>, 2> side2{};

  /// Delta_i = det [[alpha_{1i}, beta_{1i}], [alpha_{2i}, beta_{2i}]].
  double delta(int side) const;
  /// Continuity of value and derivative.
  static AxisCoupling continuity();
  bool operator==(const AxisCoupling&) const = default;
};

/// Piecewise-homogeneous axis: segments (-inf, l_1), (l_1, l_2), ..., (l_n, inf)
/// with speeds a_1..a_{n+1}.
struct AxisSpec {
  std::vector<double> breakpoints;
  std::vector<double> speeds;
  std::vector<AxisCoupling> couplings;

  std::size_t segment_count() const { return speeds.size(); }
  /// 1-based segment containing x; breakpoints belong to the right segment.
  std::size_t segment_of(double x) const;
  double speed_at(double x) const { return speeds[segment_of(x) - 1]; }
  bool operator==(const AxisSpec&) const = default;
};

/// Throws ValidationError on unordered breakpoints, non-positive speeds,
/// wrong counts or a vanishing Delta.
void validate_axis(const AxisSpec& spec);

/// Single segment of speed a.
AxisSpec homogeneous_axis(double a = 1.0);
/// Continuity couplings at every breakpoint.
AxisSpec continuity_axis(std::vector<double> breakpoints, std::vector<double> speeds);

enum class AxisKind { kDirect, kAdjoint };

/// phi_m(x) = c+_m e^{i lambda x / a_m} + c-_m e^{-i lambda x / a_m} on segment m.
/// The rightmost amplitudes are (1, 0) for the direct and (0, 1) for the
/// adjoint eigenfunction.
struct AxisEigenfunction {
  double lambda = 0.0;
  AxisKind kind = AxisKind::kDirect;
  std::vector<double> breakpoints;
  std::vector<double> speeds;
  std::vector<std::array<Complex, 2>> amplitudes;  // [m-1] -> segment m

  Complex value(double x) const;
  Complex derivative(double x) const;
  Complex value_in_segment(std::size_t m, double x) const;
  Complex derivative_in_segment(std::size_t m, double x) const;
};

/// Amplitudes propagated right to left through the coupling conditions (the
/// adjoint ones weighted by 1 / Delta_{1,k}, 1 / Delta_{2,k}). Throws
/// DomainError for lambda = 0 and SingularMatrix when a 2x2 coupling system
/// degenerates.
AxisEigenfunction eigenfunction(const AxisSpec& spec, double lambda, AxisKind kind);

/// Max relative residual of both coupling equations at every breakpoint.
double coupling_residual(const AxisSpec& spec, const AxisEigenfunction& ef);

/// Uniform sample grid on [-X, X].
struct AxisGrid {
  double half_width = 8.0;
  std::size_t samples = 801;

  std::vector<double> points() const;
  double step() const { return 2.0 * half_width / static_cast<double>(samples - 1); }
};

/// Midpoint lambda grid lambda_i = (i + 1/2) d_lambda, i = -M..M-1, with
/// M = ceil(lambda_max / d_lambda). Symmetric about 0, never hits lambda = 0.
struct AxisQuadrature {
  double lambda_max = 80.0;
  double d_lambda = 0.19634954084936207;

  std::vector<double> lambdas() const;
};

/// Defaults Lambda = 40 / sigma and d_lambda = pi / (2 X).
AxisQuadrature default_axis_quadrature(double sigma, double half_width);

/// Width of |f| as a distribution on the grid (its standard deviation).
double estimate_width(const std::vector<double>& xs, const ComplexVector& f);

/// f(x) = int phi(x, lambda) (int e^{-i lambda xi} f_hat(xi) d xi) d lambda.
ComplexVector direct_transform(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f_hat,
                               const AxisQuadrature& quad);

enum class InverseNormalization {
  /// Spectral weight 1 / a(xi)^2 in the analysis integral and the per-lambda
  /// 2x2 normalization pairing lambda with -lambda; synthesis with e^{+i lambda x} / (2 pi).
  kSpectral,
  /// The literal formula int e^{-i lambda x} (int phi* f d xi) d lambda / (4 pi^2).
  kPrinted,
};

ComplexVector inverse_transform(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f,
                                const AxisQuadrature& quad,
                                InverseNormalization normalization = InverseNormalization::kSpectral);

/// Relative discrete L2 error |a - b| / |b|; zero when both vanish.
double relative_l2(const ComplexVector& a, const ComplexVector& b);

struct AxisRoundTrip {
  ComplexVector f;
  ComplexVector f_hat_back;
  double error = 0.0;
};

AxisRoundTrip axis_roundtrip(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f_hat,
                             const AxisQuadrature& quad,
                             InverseNormalization normalization = InverseNormalization::kSpectral);

}  // namespace lamharm
