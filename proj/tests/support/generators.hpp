#pragma once

#include <cstdint>
#include <random>

#include "lamharm/problem.hpp"
#include "lamharm/radial.hpp"
#include "lamharm/transform.hpp"

namespace lamharm::testing {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t m, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix a(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) a(i, j) = u(rng);
  return a;
}

/// Symmetric positive-definite with eigenvalues roughly in [lo, hi].
inline Matrix random_spd(std::mt19937_64& rng, std::size_t m, double lo = 0.5, double hi = 3.0) {
  const Matrix g = random_matrix(rng, m);
  Matrix s = g * g.transpose();
  const double n = std::max(s.max_abs(), 1e-12);
  s *= (hi - lo) / (n * static_cast<double>(m));
  return s + Matrix::identity(m) * lo;
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t m, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(m);
  for (double& x : v) x = u(rng);
  return v;
}

struct RandomSpecOptions {
  std::size_t m = 2;
  std::size_t n = 2;
  int dimension = 2;
};

inline RandomSpecOptions spec_shape(int m, int n, int dimension) {
  return {static_cast<std::size_t>(m), static_cast<std::size_t>(n), dimension};
}

/// Layered spec with well-conditioned operators: value conditions E + small
/// perturbation, flux conditions weighted by SPD matrices, and a mixed
/// boundary operator.
inline ProblemSpec random_spec(std::mt19937_64& rng, const RandomSpecOptions& o) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProblemSpec spec;
  spec.dimension = o.dimension;
  spec.components = o.m;
  spec.radii.push_back(0.8 + 0.2 * u(rng));
  for (std::size_t k = 0; k < o.n; ++k) spec.radii.push_back(spec.radii.back() * (0.5 + 0.3 * u(rng)));
  const Matrix E = Matrix::identity(o.m);
  if (u(rng) < 0.5) {
    spec.boundary = RadialBoundaryOp::dirichlet(o.m);
  } else {
    spec.boundary = {E, random_spd(rng, o.m)};
  }
  for (std::size_t k = 1; k <= o.n; ++k) {
    const double r = spec.radii[k];
    InterfacePair pair;
    pair.outer_side[0] = {random_matrix(rng, o.m, -0.1, 0.1), E + random_matrix(rng, o.m, -0.2, 0.2)};
    pair.outer_side[1] = {random_spd(rng, o.m) * (1.0 / r), random_matrix(rng, o.m, -0.1, 0.1)};
    pair.inner_side[0] = RadialBoundaryOp::value(E);
    pair.inner_side[1] = RadialBoundaryOp::flux(random_spd(rng, o.m), r);
    spec.interfaces.push_back(pair);
  }
  spec.interface_data = zero_interface_data(o.n);
  return spec;
}

inline ModeData random_mode_data(std::mt19937_64& rng, const ProblemSpec& spec) {
  ModeData d;
  d.boundary = random_vector(rng, spec.components);
  for (std::size_t k = 0; k < spec.interface_count(); ++k)
    d.interfaces.emplace_back(random_vector(rng, spec.components), random_vector(rng, spec.components));
  return d;
}

/// Band-limited surface data with coefficients decaying like 2^{-l}.
inline SurfaceData random_surface_data(std::mt19937_64& rng, int dimension, std::size_t m, int band_limit) {
  SurfaceData data;
  for (int l = 0; l <= band_limit; ++l) {
    const double scale = std::ldexp(1.0, -l);
    SurfaceMode mode{l, random_vector(rng, m, scale), {}};
    if (dimension == 2) mode.sin = l == 0 ? Vector(m, 0.0) : random_vector(rng, m, scale);
    data.modes.push_back(std::move(mode));
  }
  return data;
}

inline ModeSeries random_series(std::mt19937_64& rng, int dimension, std::size_t m, int band_limit) {
  return {dimension, m, random_surface_data(rng, dimension, m, band_limit)};
}

}  // namespace lamharm::testing
