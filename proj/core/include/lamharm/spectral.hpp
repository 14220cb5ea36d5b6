#pragma once

#include <functional>
#include <vector>

#include "lamharm/matrix.hpp"
#include "lamharm/problem.hpp"
#include "lamharm/radial.hpp"

namespace lamharm {

/// C_l^nu(t) by the three-term recurrence. Throws DomainError for |t| > 1 + 1e-12.
double gegenbauer(int l, double nu, double t);
/// Legendre P_l(t) (= C_l^{1/2}).
double legendre(int l, double t);
/// Chebyshev T_l(t) = cos(l arccos t).
double chebyshev(int l, double t);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1], nodes ascending.
QuadratureRule gauss_legendre(int n);
/// Same rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

/// n-point trapezoid rule over [0, 2 pi). Exact for trigonometric degree < n.
double circle_quadrature(const std::function<double(double)>& f, int n);
/// n-point Gauss-Legendre over u = cos(theta) in [-1, 1].
double zonal_quadrature(const std::function<double(double)>& f, int n);

/// (N-1)-dimensional volume of the unit sphere in R^N (2 pi, 4 pi).
double sphere_volume(int dimension);

/// Samples an m-vector valued function of the polar angle.
using AngularSampler = std::function<Vector(double theta)>;

/// Fourier (N = 2) or zonal Legendre (N = 3) coefficients up to band limit L.
/// N = 2 uses a max(4L, 4)-point trapezoid rule, N = 3 a (2L + 2)-point
/// Gauss-Legendre rule in cos(theta). Modes whose coefficients are all below
/// 1e-13 of the largest one are dropped.
SurfaceData project_surface_function(const AngularSampler& sampler, int dimension, int band_limit);

/// Angular basis value of mode l: cos(l theta) / sin(l theta) for N = 2,
/// P_l(cos theta) for N = 3 (sin part zero).
struct AngularBasis {
  double cos_part = 0.0;
  double sin_part = 0.0;
};
AngularBasis angular_basis(int l, int dimension, double theta);

/// Weight convention of the zonal kernel series.
enum class KernelConvention {
  /// (2 - delta_l0) T_l(t) / (2 pi) for N = 2, (2l + 1) P_l(t) / (4 pi) for N = 3.
  kStandard,
  /// (2l + N - 1) / (N - 1) C_l^{(N-1)/2}(t) / omega_N.
  kGegenbauer,
};

/// Weight multiplying H*_l in the kernel series, including the 1 / omega_N factor.
double zonal_weight(int l, int dimension, double t, KernelConvention convention);

struct KernelValue {
  Matrix value;             // m x 2m
  double tail_ratio = 0.0;  // |last term| / |partial sum|
  bool converged = true;    // tail_ratio <= 1e-10
};

/// Coefficient stack H*_{j,s,l}(r, rho_s), l = 0..L, of one (target, source, r)
/// triple. Evaluating at many t reuses the stack.
class ZonalKernel {
 public:
  ZonalKernel(const ProblemSpec& spec, std::size_t j, Source source, double r, int band_limit = 200,
              const InfluenceOptions& opts = {});

  KernelValue operator()(double t, KernelConvention convention = KernelConvention::kStandard) const;
  int band_limit() const { return static_cast<int>(coefficients_.size()) - 1; }
  const Matrix& coefficient(int l) const { return coefficients_.at(l); }

 private:
  int dimension_;
  std::vector<Matrix> coefficients_;
};

/// Truncated kernel series sum_{l <= L} w_l(t) H*_{j,s,l}(r, rho_s), rho_s = r_0
/// for the boundary source and r_s for interface s. The field is recovered by
/// integrating the kernel against the data over the unit sphere of directions.
KernelValue zonal_kernel_eval(const ProblemSpec& spec, std::size_t j, Source source, double r, double t,
                              int band_limit = 200, KernelConvention convention = KernelConvention::kStandard,
                              const InfluenceOptions& opts = {});

}  // namespace lamharm
