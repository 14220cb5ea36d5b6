#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lamharm/field.hpp"
#include "lamharm/problem.hpp"

namespace lamharm {

using VectorField = std::function<Vector(const Point&)>;

/// Max over centers and components of the 5-point (N = 2) or 7-point (N = 3)
/// stencil Laplacian of f.
double stencil_laplacian(const VectorField& f, int dimension, const std::vector<Point>& centers, double h);

/// Deterministic pseudo-random centers in layer k, kept max(2h, width / 10)
/// away from both bounding spheres. Throws DomainError when the layer is
/// thinner than 2h. The centers do not depend on h beyond the margin, so
/// residuals at different h are comparable when the margin is width-bound.
std::vector<Point> layer_centers(const ProblemSpec& spec, std::size_t k, double h, int samples,
                                 std::uint64_t seed = 12345);

/// Stencil Laplacian of the layer-k representation at `samples` centers.
double laplacian_residual(const LayeredField& field, std::size_t k, double h, int samples = 64,
                          std::uint64_t seed = 12345);

/// Least-squares slope of log(residual) against log(h).
double loglog_slope(const std::vector<double>& h, const std::vector<double>& residual);

struct InterfaceResidual {
  std::size_t k = 0;
  int j = 0;
  double value = 0.0;
};

struct ResidualReport {
  double boundary_residual = 0.0;
  std::vector<InterfaceResidual> interface_residuals;
  std::vector<double> laplacian_residuals;  // per layer, empty unless requested
  double h = 0.0;
  int angular_samples = 0;
  int laplacian_samples = 0;
  /// max(1, sampled |data|): residual thresholds are taken relative to it.
  double data_scale = 1.0;

  double max_condition_residual() const;
  double max_laplacian_residual() const;
};

/// Value of band-limited surface data in direction theta.
Vector surface_value(const SurfaceData& data, int dimension, std::size_t components, double theta);

/// Residuals of the boundary and conjugation conditions of `spec` on the
/// field, using analytic radial derivatives. Angular samples default to 64
/// points on the circle (N = 2) or 32 Gauss nodes in cos(theta) (N = 3).
ResidualReport condition_residuals(const LayeredField& field, const ProblemSpec& spec, int angular_samples = 0);

/// Adds per-layer Laplacian residuals at step h to a report.
void add_laplacian_residuals(ResidualReport& report, const LayeredField& field, double h, int samples = 64);

/// Max componentwise |f1 - f2| over the points.
double compare_fields(const VectorField& f1, const VectorField& f2, const std::vector<Point>& points);

/// Callable view of a layered field.
VectorField as_function(const LayeredField& field);

/// Deterministic pseudo-random points with |x| < radius.
std::vector<Point> random_points(int dimension, int count, double radius, std::uint64_t seed = 777);

}  // namespace lamharm
