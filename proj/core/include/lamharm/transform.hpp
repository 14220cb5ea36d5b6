#pragma once

#include <functional>
#include <variant>

#include "lamharm/field.hpp"
#include "lamharm/matrix.hpp"
#include "lamharm/problem.hpp"

namespace lamharm {

/// Harmonic polynomial in the unit ball given by its modes:
/// N = 2: sum_l r^l (cos(l theta) c_l + sin(l theta) s_l),
/// N = 3: sum_l r^l P_l(cos theta) c_l.
struct ModeSeries {
  int dimension = 2;
  std::size_t components = 1;
  SurfaceData modes;

  Vector evaluate(const Point& x) const;
  /// Upper bound of |u|_inf on the closed unit ball.
  double sup_bound() const;
};

/// Arbitrary callable, documented harmonic on |x| < 1 by the caller.
struct PointSampler {
  int dimension = 2;
  std::size_t components = 1;
  std::function<Vector(const Point&)> f;
};

using HarmonicInput = std::variant<ModeSeries, PointSampler>;

int input_dimension(const HarmonicInput& u);
std::size_t input_components(const HarmonicInput& u);
Vector evaluate_input(const HarmonicInput& u, const Point& x);

/// Radius at which samplers are projected onto modes.
inline constexpr double kProjectionRadius = 0.9;

/// Mode series of the input. Samplers are projected on |x| = 0.9 at the given
/// band limit and rescaled by 0.9^{-l}.
ModeSeries to_mode_series(const HarmonicInput& u, int band_limit = 16);

/// Layered field whose boundary data is the trace of u on the unit sphere of
/// directions, with every interface datum zero.
LayeredField apply_P0(const ProblemSpec& spec, const HarmonicInput& u, int band_limit = 16);

/// Layered field whose datum f_{j q} (j = 1, 2; interface q) is the trace of u,
/// with every other datum zero.
LayeredField apply_Pjq(const ProblemSpec& spec, int j, std::size_t q, const HarmonicInput& u,
                       int band_limit = 16);

/// Exact mode image of the Robin condition H u + r du/dr = f: (H + l E)^{-1} c.
Vector robin_mode_oracle(const Matrix& H, int l, const Vector& c);

struct RobinQuadrature {
  int points_per_unit = 16;  // Gauss-Legendre nodes per unit s panel
  double tail_tol = 1e-10;
};

/// u(x) = int_0^1 eps^{H-E} u_hat(eps x) d eps for symmetric positive-definite H.
/// Mode series go through the analytic per-mode map, samplers through the
/// quadrature in s = -ln eps.
class RobinTransform {
 public:
  explicit RobinTransform(Matrix H, RobinQuadrature quad = {});

  /// Analytic path: mode l coefficient c goes to (H + l E)^{-1} c.
  ModeSeries analytic(const ModeSeries& u) const;
  /// Quadrature path at one point, valid for any input representation.
  Vector quadrature(const HarmonicInput& u, const Point& x) const;
  /// Analytic for mode series, quadrature for samplers.
  Vector evaluate(const HarmonicInput& u, const Point& x) const;

  /// Truncation point of the s integral for a given |u_hat|_inf bound.
  double s_max(double sup_bound) const;
  double lambda_min() const { return lambda_min_; }
  const Matrix& H() const { return H_; }

 private:
  Matrix H_;
  RobinQuadrature quad_;
  SymmetricEigen eig_;
  double lambda_min_;
};

/// Per-mode coefficients of the two-layer transmission problem: inner
/// u = rho^l a; outer u = rho^l b + rho^{-l} d (b + ln(rho) d for l = 0).
struct ReflectionModes {
  Vector a;
  Vector b;
  Vector d;
};

/// Direct 3m x 3m solve: b + d = c at rho = 1, continuity and
/// K du^-/dn = du^+/dn at rho = r.
ReflectionModes reflection_mode_oracle(const Matrix& K, double r, int l, const Vector& c);

/// Geometric image series of the planar two-layer transmission problem,
/// Q = (E - K)(E + K)^{-1}:
///   outer: sum_j Q^j (u(x r^{2j}) - Q u(x r^{2j+2} / |x|^2)),
///   inner: 2K (E + K)^{-1} sum_j Q^j u(x r^{2j}).
class ReflectionSeries {
 public:
  /// Throws DivergenceError when the spectral radius bound of Q is >= 1 and
  /// DomainError for N != 2 or r outside (0, 1).
  ReflectionSeries(Matrix K, double r, HarmonicInput u, double tol = 1e-12);

  Vector evaluate(const Point& x) const;

  std::size_t depth() const { return depth_; }
  /// Ratio used in the truncation bound (spectral radius bound with a safety margin).
  double q() const { return q_; }
  double spectral_radius() const { return rho_; }
  const Matrix& reflection() const { return Q_; }

 private:
  Matrix K_;
  double r_;
  HarmonicInput u_;
  Matrix Q_;
  Matrix inner_factor_;
  std::vector<Matrix> powers_;  // Q^j, j < depth
  double rho_;
  double q_;
  std::size_t depth_;
};

}  // namespace lamharm
