#include "lamharm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "lamharm/errors.hpp"

namespace lamharm {

namespace {

void check_argument(double t) {
  if (!(std::abs(t) <= 1.0 + 1e-12)) throw DomainError("polynomial argument outside [-1, 1]");
}

double clamp_unit(double t) { return std::clamp(t, -1.0, 1.0); }

}  // namespace

double gegenbauer(int l, double nu, double t) {
  check_argument(t);
  if (l < 0) throw DomainError("polynomial degree must be >= 0");
  if (!(nu > -0.5)) throw DomainError("Gegenbauer parameter must exceed -1/2");
  t = clamp_unit(t);
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = 2.0 * nu * t;
  for (int k = 2; k <= l; ++k) {
    const double next = (2.0 * (k + nu - 1.0) * t * cur - (k + 2.0 * nu - 2.0) * prev) / k;
    prev = cur;
    cur = next;
  }
  return cur;
}

double legendre(int l, double t) { return gegenbauer(l, 0.5, t); }

double chebyshev(int l, double t) {
  check_argument(t);
  if (l < 0) throw DomainError("polynomial degree must be >= 0");
  t = clamp_unit(t);
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = t;
  for (int k = 2; k <= l; ++k) {
    const double next = 2.0 * t * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  // P_n(x) and P_n'(x) by the Bonnet recurrence.
  const auto eval = [n](double x) {
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = eval(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = eval(x).second;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

double circle_quadrature(const std::function<double(double)>& f, int n) {
  if (n < 1) throw DomainError("quadrature needs at least one node");
  double sum = 0.0;
  for (int j = 0; j < n; ++j) sum += f(2.0 * std::numbers::pi * j / n);
  return sum * 2.0 * std::numbers::pi / n;
}

double zonal_quadrature(const std::function<double(double)>& f, int n) {
  const QuadratureRule rule = gauss_legendre(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(rule.nodes[i]);
  return sum;
}

double sphere_volume(int dimension) {
  if (dimension == 2) return 2.0 * std::numbers::pi;
  if (dimension == 3) return 4.0 * std::numbers::pi;
  throw DomainError("dimension must be 2 or 3");
}

SurfaceData project_surface_function(const AngularSampler& sampler, int dimension, int band_limit) {
  if (band_limit < 0) throw DomainError("band limit must be >= 0");
  std::vector<SurfaceMode> modes(band_limit + 1);
  std::size_t m = 0;
  if (dimension == 2) {
    const int n = std::max(4 * band_limit, 4);
    for (int j = 0; j < n; ++j) {
      const double theta = 2.0 * std::numbers::pi * j / n;
      const Vector f = sampler(theta);
      if (j == 0) {
        m = f.size();
        for (int l = 0; l <= band_limit; ++l) modes[l] = {l, Vector(m, 0.0), Vector(m, 0.0)};
      }
      if (f.size() != m) throw DimensionError("sampler returned vectors of varying length");
      for (int l = 0; l <= band_limit; ++l) {
        const double w = (l == 0 ? 1.0 : 2.0) / n;
        const double c = std::cos(l * theta) * w;
        const double s = std::sin(l * theta) * w;
        for (std::size_t i = 0; i < m; ++i) {
          modes[l].cos[i] += c * f[i];
          modes[l].sin[i] += s * f[i];
        }
      }
    }
    std::fill(modes[0].sin.begin(), modes[0].sin.end(), 0.0);
  } else if (dimension == 3) {
    const QuadratureRule rule = gauss_legendre(2 * band_limit + 2);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double u = rule.nodes[q];
      const Vector f = sampler(std::acos(u));
      if (q == 0) {
        m = f.size();
        for (int l = 0; l <= band_limit; ++l) modes[l] = {l, Vector(m, 0.0), {}};
      }
      if (f.size() != m) throw DimensionError("sampler returned vectors of varying length");
      for (int l = 0; l <= band_limit; ++l) {
        const double w = rule.weights[q] * (2.0 * l + 1.0) / 2.0 * legendre(l, u);
        for (std::size_t i = 0; i < m; ++i) modes[l].cos[i] += w * f[i];
      }
    }
  } else {
    throw DomainError("dimension must be 2 or 3");
  }

  double largest = 0.0;
  for (const SurfaceMode& mode : modes) largest = std::max({largest, max_abs(mode.cos), max_abs(mode.sin)});
  SurfaceData out;
  if (largest == 0.0) return out;
  for (SurfaceMode& mode : modes) {
    if (std::max(max_abs(mode.cos), max_abs(mode.sin)) > 1e-13 * largest) out.modes.push_back(std::move(mode));
  }
  return out;
}

AngularBasis angular_basis(int l, int dimension, double theta) {
  if (dimension == 2) return {std::cos(l * theta), std::sin(l * theta)};
  return {legendre(l, std::cos(theta)), 0.0};
}

double zonal_weight(int l, int dimension, double t, KernelConvention convention) {
  const double omega = sphere_volume(dimension);
  if (convention == KernelConvention::kGegenbauer) {
    const double nu = (dimension - 1) / 2.0;
    return (2.0 * l + dimension - 1.0) / (dimension - 1.0) * gegenbauer(l, nu, t) / omega;
  }
  if (dimension == 2) return (l == 0 ? 1.0 : 2.0) * chebyshev(l, t) / omega;
  return (2.0 * l + 1.0) * legendre(l, t) / omega;
}

ZonalKernel::ZonalKernel(const ProblemSpec& spec, std::size_t j, Source source, double r, int band_limit,
                         const InfluenceOptions& opts)
    : dimension_(spec.dimension) {
  if (band_limit < 0) throw DomainError("band limit must be >= 0");
  const double rho = source.kind == Source::Kind::kBoundary ? spec.outer_radius() : spec.radii.at(source.index);
  coefficients_.reserve(band_limit + 1);
  for (int l = 0; l <= band_limit; ++l) {
    const InfluenceFunction h(spec, propagate_pairs(spec, l, opts.radial), opts);
    coefficients_.push_back(h.evaluate(j, source, r, rho));
  }
}

KernelValue ZonalKernel::operator()(double t, KernelConvention convention) const {
  KernelValue out;
  Matrix last;
  for (int l = 0; l <= band_limit(); ++l) {
    Matrix term = coefficients_[l] * zonal_weight(l, dimension_, t, convention);
    out.value = l == 0 ? term : out.value + term;
    last = std::move(term);
  }
  const double size = out.value.max_abs();
  out.tail_ratio = size > 0.0 ? last.max_abs() / size : (last.max_abs() > 0.0 ? 1.0 : 0.0);
  out.converged = out.tail_ratio <= 1e-10;
  return out;
}

KernelValue zonal_kernel_eval(const ProblemSpec& spec, std::size_t j, Source source, double r, double t,
                              int band_limit, KernelConvention convention, const InfluenceOptions& opts) {
  return ZonalKernel(spec, j, source, r, band_limit, opts)(t, convention);
}

}  // namespace lamharm
