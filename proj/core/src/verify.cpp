#include "lamharm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "lamharm/errors.hpp"
#include "lamharm/spectral.hpp"

namespace lamharm {

namespace {

Point direction(int dimension, std::mt19937_64& rng) {
  if (dimension == 2) {
    const double t = std::uniform_real_distribution<double>(0.0, 2.0 * std::numbers::pi)(rng);
    return {std::cos(t), std::sin(t), 0.0};
  }
  std::normal_distribution<double> g;
  Point p{g(rng), g(rng), g(rng)};
  const double n = norm(p, 3);
  return {p.x / n, p.y / n, p.z / n};
}

Point on_sphere(int dimension, double r, double theta) {
  if (dimension == 2) return {r * std::cos(theta), r * std::sin(theta), 0.0};
  return {r * std::sin(theta), 0.0, r * std::cos(theta)};
}

std::vector<double> sample_angles(int dimension, int count) {
  std::vector<double> out;
  if (dimension == 2) {
    for (int j = 0; j < count; ++j) out.push_back(2.0 * std::numbers::pi * j / count);
  } else {
    for (double u : gauss_legendre(count).nodes) out.push_back(std::acos(u));
  }
  return out;
}

}  // namespace

double stencil_laplacian(const VectorField& f, int dimension, const std::vector<Point>& centers, double h) {
  if (!(h > 0.0)) throw DomainError("stencil step must be positive");
  double worst = 0.0;
  for (const Point& c : centers) {
    const Vector center = f(c);
    Vector sum = (-2.0 * dimension) * center;
    const Point steps[3] = {{h, 0, 0}, {0, h, 0}, {0, 0, h}};
    for (int d = 0; d < dimension; ++d) {
      const Point& s = steps[d];
      sum = sum + f({c.x + s.x, c.y + s.y, c.z + s.z});
      sum = sum + f({c.x - s.x, c.y - s.y, c.z - s.z});
    }
    worst = std::max(worst, max_abs(sum) / (h * h));
  }
  return worst;
}

std::vector<Point> layer_centers(const ProblemSpec& spec, std::size_t k, double h, int samples,
                                 std::uint64_t seed) {
  if (k < 1 || k > spec.layer_count()) throw DomainError("layer index out of range");
  const double outer = spec.layer_outer(k);
  const double inner = spec.layer_inner(k);
  const double width = outer - inner;
  if (!(width > 2.0 * h)) throw DomainError("layer is thinner than 2h");
  const double margin = std::max(2.0 * h, 0.1 * width);
  const double lo = inner + margin;
  const double hi = outer - margin;
  if (!(hi > lo)) throw DomainError("layer is too thin for the stencil margin");
  std::mt19937_64 rng(seed + k);
  std::uniform_real_distribution<double> radius(lo, hi);
  std::vector<Point> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    const double r = radius(rng);
    const Point d = direction(spec.dimension, rng);
    out.push_back({r * d.x, r * d.y, r * d.z});
  }
  return out;
}

double laplacian_residual(const LayeredField& field, std::size_t k, double h, int samples, std::uint64_t seed) {
  const std::vector<Point> centers = layer_centers(field.spec(), k, h, samples, seed);
  const VectorField f = [&](const Point& p) { return field.evaluate_in_layer(k, p); };
  return stencil_laplacian(f, field.dimension(), centers, h);
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& residual) {
  if (h.size() != residual.size() || h.size() < 2) throw DomainError("slope fit needs matching samples (>= 2)");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0 && residual[i] > 0.0)) throw DomainError("slope fit needs positive values");
    const double x = std::log(h[i]);
    const double y = std::log(residual[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double ResidualReport::max_condition_residual() const {
  double m = boundary_residual;
  for (const InterfaceResidual& r : interface_residuals) m = std::max(m, r.value);
  return m;
}

double ResidualReport::max_laplacian_residual() const {
  double m = 0.0;
  for (double v : laplacian_residuals) m = std::max(m, v);
  return m;
}

Vector surface_value(const SurfaceData& data, int dimension, std::size_t components, double theta) {
  Vector out(components, 0.0);
  for (const SurfaceMode& mode : data.modes) {
    const AngularBasis b = angular_basis(mode.l, dimension, theta);
    out = out + b.cos_part * mode.cos;
    if (!mode.sin.empty()) out = out + b.sin_part * mode.sin;
  }
  return out;
}

ResidualReport condition_residuals(const LayeredField& field, const ProblemSpec& spec, int angular_samples) {
  if (field.spec().radii != spec.radii || field.dimension() != spec.dimension ||
      field.components() != spec.components)
    throw DimensionError("field and spec describe different geometries");
  const int count = angular_samples > 0 ? angular_samples : (spec.dimension == 2 ? 64 : 32);
  const std::vector<double> angles = sample_angles(spec.dimension, count);
  const std::size_t m = spec.components;
  ResidualReport report;
  report.angular_samples = count;

  for (double theta : angles) {
    const double r0 = spec.outer_radius();
    const Vector f0 = surface_value(spec.boundary_data, spec.dimension, m, theta);
    report.data_scale = std::max(report.data_scale, max_abs(f0));
    const Vector res = field.apply_radial_op(1, spec.boundary, on_sphere(spec.dimension, r0, theta)) - f0;
    report.boundary_residual = std::max(report.boundary_residual, max_abs(res));
  }
  for (std::size_t k = 1; k <= spec.interface_count(); ++k) {
    const InterfacePair& pair = spec.interfaces[k - 1];
    for (int j = 0; j < 2; ++j) {
      const SurfaceData& data = j == 0 ? spec.interface_data[k - 1].first : spec.interface_data[k - 1].second;
      double worst = 0.0;
      for (double theta : angles) {
        const Point p = on_sphere(spec.dimension, spec.radii[k], theta);
        const Vector f = surface_value(data, spec.dimension, m, theta);
        report.data_scale = std::max(report.data_scale, max_abs(f));
        const Vector res =
            field.apply_radial_op(k, pair.outer_side[j], p) - field.apply_radial_op(k + 1, pair.inner_side[j], p) - f;
        worst = std::max(worst, max_abs(res));
      }
      report.interface_residuals.push_back({k, j + 1, worst});
    }
  }
  return report;
}

void add_laplacian_residuals(ResidualReport& report, const LayeredField& field, double h, int samples) {
  report.h = h;
  report.laplacian_samples = samples;
  report.laplacian_residuals.clear();
  for (std::size_t k = 1; k <= field.spec().layer_count(); ++k)
    report.laplacian_residuals.push_back(laplacian_residual(field, k, h, samples));
}

double compare_fields(const VectorField& f1, const VectorField& f2, const std::vector<Point>& points) {
  double worst = 0.0;
  for (const Point& p : points) {
    const Vector a = f1(p);
    const Vector b = f2(p);
    if (a.size() != b.size()) throw DimensionError("fields have different component counts");
    worst = std::max(worst, max_abs(a - b));
  }
  return worst;
}

VectorField as_function(const LayeredField& field) {
  return [&field](const Point& p) { return field.evaluate(p); };
}

std::vector<Point> random_points(int dimension, int count, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r = radius * std::pow(u(rng), 1.0 / dimension);
    const Point d = direction(dimension, rng);
    out.push_back({r * d.x, r * d.y, r * d.z});
  }
  return out;
}

}  // namespace lamharm
