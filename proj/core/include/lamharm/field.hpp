#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lamharm/problem.hpp"
#include "lamharm/radial.hpp"

namespace lamharm {

/// Point in R^N. For N = 2 the z coordinate is ignored; zonal N = 3 fields are
/// axisymmetric about the z axis.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double norm(const Point& p, int dimension);

/// Polar angle of p: atan2(y, x) for N = 2, arccos(z / |p|) for N = 3. Zero at the origin.
double polar_angle(const Point& p, int dimension);

/// Mode l of a layered field: the radial solution carrying the cos (or
/// Legendre) angular factor and, for N = 2, the one carrying sin(l theta).
struct ModeTerm {
  int l = 0;
  ModeSolution cos;
  std::optional<ModeSolution> sin;
};

/// Piecewise-harmonic field u = sum_k chi(V_k) u_k assembled from mode
/// solutions. Immutable after construction.
class LayeredField {
 public:
  LayeredField(std::shared_ptr<const ProblemSpec> spec, std::vector<ModeTerm> modes);

  /// Value at x, with the layer chosen by |x| (interface radii go to the
  /// outer layer). Throws DomainError for |x| > r_0.
  Vector evaluate(const Point& x) const;
  /// Layer-k representation evaluated at x, whichever layer x lies in. Used by
  /// residual checks that need one-sided limits on an interface.
  Vector evaluate_in_layer(std::size_t k, const Point& x) const;
  /// Gamma[u_k](x) with analytic radial derivatives.
  Vector apply_radial_op(std::size_t k, const RadialBoundaryOp& op, const Point& x) const;

  std::size_t layer_of(const Point& x) const;
  const ProblemSpec& spec() const { return *spec_; }
  std::shared_ptr<const ProblemSpec> spec_ptr() const { return spec_; }
  const std::vector<ModeTerm>& modes() const { return modes_; }
  int dimension() const { return spec_->dimension; }
  std::size_t components() const { return spec_->components; }

 private:
  template <typename RadialPart>
  Vector sum_modes(const Point& x, RadialPart&& radial) const;

  std::shared_ptr<const ProblemSpec> spec_;
  std::vector<ModeTerm> modes_;
};

/// Mode-l right-hand sides of `spec`, taken from its cos (sin = false) or sin
/// coefficients.
ModeData mode_data(const ProblemSpec& spec, int l, bool sin = false);

/// Wraps per-mode solutions into a field.
LayeredField synthesize_field(std::shared_ptr<const ProblemSpec> spec, std::vector<ModeTerm> modes);

/// Solves every data mode of `spec` (in parallel across modes) and synthesizes
/// the field.
LayeredField solve(std::shared_ptr<const ProblemSpec> spec, const RadialOptions& opts = {});
LayeredField solve(const ProblemSpec& spec, const RadialOptions& opts = {});

}  // namespace lamharm
