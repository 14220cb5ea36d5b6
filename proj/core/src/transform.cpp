#include "lamharm/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lamharm/errors.hpp"
#include "lamharm/radial.hpp"
#include "lamharm/spectral.hpp"

namespace lamharm {

namespace {

constexpr std::size_t kMaxSeriesDepth = 1'000'000;

// Max of |u| over a few directions at radius R, as a stand-in for the sup
// norm of a sampler on the ball of that radius (harmonic, so the max sits on
// the sphere).
double sampled_sup(const PointSampler& u, double R) {
  if (R == 0.0) return max_abs(u.f(Point{}));
  double best = 0.0;
  constexpr int kDirections = 64;
  for (int i = 0; i < kDirections; ++i) {
    Point p;
    if (u.dimension == 2) {
      const double t = 2.0 * std::numbers::pi * i / kDirections;
      p = {R * std::cos(t), R * std::sin(t), 0.0};
    } else {
      // Fibonacci sphere.
      const double z = 1.0 - (2.0 * i + 1.0) / kDirections;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = i * std::numbers::pi * (3.0 - std::sqrt(5.0));
      p = {R * rho * std::cos(phi), R * rho * std::sin(phi), R * z};
    }
    best = std::max(best, max_abs(u.f(p)));
  }
  return 1.5 * best;
}

double input_sup(const HarmonicInput& u, double R) {
  if (const auto* ms = std::get_if<ModeSeries>(&u)) return ms->sup_bound();
  return sampled_sup(std::get<PointSampler>(u), R);
}

Point scaled(const Point& x, double s) { return {x.x * s, x.y * s, x.z * s}; }

void check_input_matches(const ProblemSpec& spec, const HarmonicInput& u) {
  if (input_dimension(u) != spec.dimension) throw DimensionError("input dimension does not match the spec");
  if (input_components(u) != spec.components) throw DimensionError("input components do not match the spec");
}

}  // namespace

Vector ModeSeries::evaluate(const Point& x) const {
  const double r = norm(x, dimension);
  const double theta = polar_angle(x, dimension);
  Vector out(components, 0.0);
  for (const SurfaceMode& mode : modes.modes) {
    const double radial = mode.l == 0 ? 1.0 : radial_power(r, mode.l);
    const AngularBasis b = angular_basis(mode.l, dimension, theta);
    out = out + (radial * b.cos_part) * mode.cos;
    if (!mode.sin.empty() && b.sin_part != 0.0) out = out + (radial * b.sin_part) * mode.sin;
  }
  return out;
}

double ModeSeries::sup_bound() const {
  double s = 0.0;
  for (const SurfaceMode& mode : modes.modes) s += max_abs(mode.cos) + (mode.sin.empty() ? 0.0 : max_abs(mode.sin));
  return s;
}

int input_dimension(const HarmonicInput& u) {
  return std::visit([](const auto& v) { return v.dimension; }, u);
}

std::size_t input_components(const HarmonicInput& u) {
  return std::visit([](const auto& v) { return v.components; }, u);
}

Vector evaluate_input(const HarmonicInput& u, const Point& x) {
  if (const auto* ms = std::get_if<ModeSeries>(&u)) return ms->evaluate(x);
  return std::get<PointSampler>(u).f(x);
}

ModeSeries to_mode_series(const HarmonicInput& u, int band_limit) {
  if (const auto* ms = std::get_if<ModeSeries>(&u)) return *ms;
  const PointSampler& s = std::get<PointSampler>(u);
  const double R = kProjectionRadius;
  const AngularSampler on_sphere = [&](double theta) {
    const Point p = s.dimension == 2 ? Point{R * std::cos(theta), R * std::sin(theta), 0.0}
                                     : Point{R * std::sin(theta), 0.0, R * std::cos(theta)};
    return s.f(p);
  };
  ModeSeries out{s.dimension, s.components, project_surface_function(on_sphere, s.dimension, band_limit)};
  for (SurfaceMode& mode : out.modes.modes) {
    const double scale = radial_power(R, -static_cast<double>(mode.l));
    mode.cos = scale * mode.cos;
    if (!mode.sin.empty()) mode.sin = scale * mode.sin;
  }
  return out;
}

LayeredField apply_P0(const ProblemSpec& spec, const HarmonicInput& u, int band_limit) {
  check_input_matches(spec, u);
  auto copy = std::make_shared<ProblemSpec>(spec);
  copy->boundary_data = to_mode_series(u, band_limit).modes;
  copy->interface_data = zero_interface_data(spec.interface_count());
  return solve(std::shared_ptr<const ProblemSpec>(std::move(copy)));
}

LayeredField apply_Pjq(const ProblemSpec& spec, int j, std::size_t q, const HarmonicInput& u, int band_limit) {
  check_input_matches(spec, u);
  if (j != 1 && j != 2) throw DomainError("condition index j must be 1 or 2");
  if (q < 1 || q > spec.interface_count()) throw DomainError("interface index out of range");
  auto copy = std::make_shared<ProblemSpec>(spec);
  copy->boundary_data = {};
  copy->interface_data = zero_interface_data(spec.interface_count());
  SurfaceData trace = to_mode_series(u, band_limit).modes;
  if (j == 1) {
    copy->interface_data[q - 1].first = std::move(trace);
  } else {
    copy->interface_data[q - 1].second = std::move(trace);
  }
  return solve(std::shared_ptr<const ProblemSpec>(std::move(copy)));
}

Vector robin_mode_oracle(const Matrix& H, int l, const Vector& c) {
  if (!H.is_square()) throw DimensionError("H must be square");
  if (c.size() != H.rows()) throw DimensionError("coefficient length must equal dim H");
  return LuDecomposition(H + Matrix::identity(H.rows()) * static_cast<double>(l)).solve(c);
}

RobinTransform::RobinTransform(Matrix H, RobinQuadrature quad) : H_(std::move(H)), quad_(quad) {
  if (!H_.is_square() || H_.empty()) throw DimensionError("H must be square");
  if (!is_symmetric(H_)) throw DomainError("H must be symmetric");
  if (quad_.points_per_unit < 1 || !(quad_.tail_tol > 0.0)) throw DomainError("invalid quadrature parameters");
  eig_ = symmetric_eigen(H_);
  lambda_min_ = eig_.values.front();
  if (!(lambda_min_ > 0.0)) throw DomainError("H must be positive-definite (lambda_min <= 0)");
}

ModeSeries RobinTransform::analytic(const ModeSeries& u) const {
  if (u.components != H_.rows()) throw DimensionError("input components do not match H");
  ModeSeries out = u;
  for (SurfaceMode& mode : out.modes.modes) {
    mode.cos = robin_mode_oracle(H_, mode.l, mode.cos);
    if (!mode.sin.empty()) mode.sin = robin_mode_oracle(H_, mode.l, mode.sin);
  }
  return out;
}

double RobinTransform::s_max(double sup_bound) const {
  // Tail: int_S^inf |e^{-sH}| |u| ds <= sup e^{-S lambda_min} / lambda_min.
  if (!(sup_bound > 0.0)) return 1.0;
  return std::max(1.0, std::log(sup_bound / (quad_.tail_tol * lambda_min_)) / lambda_min_);
}

Vector RobinTransform::quadrature(const HarmonicInput& u, const Point& x) const {
  const std::size_t m = H_.rows();
  if (input_components(u) != m) throw DimensionError("input components do not match H");
  const int dim = input_dimension(u);
  const double sup = input_sup(u, norm(x, dim));
  const auto panels = static_cast<int>(std::ceil(s_max(sup)));
  const QuadratureRule unit = gauss_legendre(quad_.points_per_unit, 0.0, 1.0);
  Vector acc(m, 0.0);
  Vector decay(m);
  for (int p = 0; p < panels; ++p) {
    for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
      const double s = p + unit.nodes[q];
      const Vector f = evaluate_input(u, scaled(x, std::exp(-s)));
      // e^{-sH} f = V diag(e^{-s lambda}) V^T f
      for (std::size_t i = 0; i < m; ++i) {
        double proj = 0.0;
        for (std::size_t k = 0; k < m; ++k) proj += eig_.vectors(k, i) * f[k];
        decay[i] = std::exp(-s * eig_.values[i]) * proj;
      }
      for (std::size_t k = 0; k < m; ++k) {
        double v = 0.0;
        for (std::size_t i = 0; i < m; ++i) v += eig_.vectors(k, i) * decay[i];
        acc[k] += unit.weights[q] * v;
      }
    }
  }
  return acc;
}

Vector RobinTransform::evaluate(const HarmonicInput& u, const Point& x) const {
  if (const auto* ms = std::get_if<ModeSeries>(&u)) return analytic(*ms).evaluate(x);
  return quadrature(u, x);
}

ReflectionModes reflection_mode_oracle(const Matrix& K, double r, int l, const Vector& c) {
  if (!K.is_square() || K.empty()) throw DimensionError("K must be square");
  if (c.size() != K.rows()) throw DimensionError("coefficient length must equal dim K");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("interface radius must lie in (0, 1)");
  if (l < 0) throw DomainError("mode index must be >= 0");
  const std::size_t m = K.rows();
  const Matrix E = Matrix::identity(m);
  const double rl = radial_power(r, l);
  const double drl = l == 0 ? 0.0 : l * radial_power(r, l - 1);
  // Second outer solution s(rho): rho^{-l}, or ln rho for l = 0.
  const double s1 = l == 0 ? 0.0 : 1.0;
  const double sr = l == 0 ? std::log(r) : radial_power(r, -l);
  const double dsr = l == 0 ? 1.0 / r : -l * radial_power(r, -l - 1);

  Matrix sys(3 * m, 3 * m);
  Matrix rhs(3 * m, 1);
  sys.set_block(0, m, E);
  sys.set_block(0, 2 * m, E * s1);
  for (std::size_t i = 0; i < m; ++i) rhs(i, 0) = c[i];
  sys.set_block(m, 0, E * rl);
  sys.set_block(m, m, E * -rl);
  sys.set_block(m, 2 * m, E * -sr);
  sys.set_block(2 * m, 0, E * -drl);
  sys.set_block(2 * m, m, K * drl);
  sys.set_block(2 * m, 2 * m, K * dsr);

  const Matrix x = equilibrated_solve(sys, rhs);
  ReflectionModes out{Vector(m), Vector(m), Vector(m)};
  for (std::size_t i = 0; i < m; ++i) {
    out.a[i] = x(i, 0);
    out.b[i] = x(m + i, 0);
    out.d[i] = x(2 * m + i, 0);
  }
  return out;
}

ReflectionSeries::ReflectionSeries(Matrix K, double r, HarmonicInput u, double tol)
    : K_(std::move(K)), r_(r), u_(std::move(u)) {
  if (input_dimension(u_) != 2) throw DomainError("the image series is planar (N = 2 only)");
  if (!K_.is_square() || K_.empty()) throw DimensionError("K must be square");
  if (input_components(u_) != K_.rows()) throw DimensionError("input components do not match K");
  if (!(r_ > 0.0 && r_ < 1.0)) throw DomainError("interface radius must lie in (0, 1)");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const std::size_t m = K_.rows();
  const Matrix E = Matrix::identity(m);
  const Matrix inv = mat_inverse(E + K_);
  Q_ = (E - K_) * inv;
  inner_factor_ = 2.0 * (K_ * inv);
  rho_ = spectral_radius_bound(Q_);
  if (!(rho_ < 1.0)) {
    throw DivergenceError("reflection series diverges: spectral radius bound of (E-K)(E+K)^{-1} is " +
                          std::to_string(rho_));
  }
  q_ = std::max(rho_, std::min(1.01 * rho_, 0.5 * (1.0 + rho_)));
  const double sup = input_sup(u_, 1.0);
  depth_ = 0;
  double qj = 1.0;
  while (qj * sup * (1.0 + q_) > tol) {
    if (++depth_ > kMaxSeriesDepth) throw DivergenceError("reflection series needs too many terms");
    qj *= q_;
  }
  powers_.reserve(depth_);
  Matrix power = E;
  for (std::size_t j = 0; j < depth_; ++j) {
    powers_.push_back(power);
    power = power * Q_;
  }
}

Vector ReflectionSeries::evaluate(const Point& x) const {
  const double R = norm(x, 2);
  if (R > 1.0 + 1e-12) throw DomainError("point lies outside the unit disk");
  const std::size_t m = K_.rows();
  Vector sum(m, 0.0);
  const double r2 = r_ * r_;
  if (R < r_) {
    double scale = 1.0;
    for (std::size_t j = 0; j < depth_; ++j) {
      sum = sum + powers_[j] * evaluate_input(u_, scaled(x, scale));
      scale *= r2;
    }
    return inner_factor_ * sum;
  }
  double scale = 1.0;
  for (std::size_t j = 0; j < depth_; ++j) {
    const double inv_scale = scale * r2 / (R * R);
    if (!(inv_scale * R < 1.0)) throw DomainError("inverted point left the unit disk");
    const Vector direct = evaluate_input(u_, scaled(x, scale));
    const Vector image = Q_ * evaluate_input(u_, scaled(x, inv_scale));
    sum = sum + powers_[j] * (direct - image);
    scale *= r2;
  }
  return sum;
}

}  // namespace lamharm
