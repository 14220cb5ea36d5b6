#include "lamharm/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lamharm/errors.hpp"
#include "lamharm/parallel.hpp"
#include "lamharm/spectral.hpp"

namespace lamharm {

namespace {

constexpr double kRadiusSlack = 1e-12;

Vector coefficients(const SurfaceData& data, int l, bool sin, std::size_t m) {
  const SurfaceMode* mode = data.find(l);
  if (mode == nullptr) return Vector(m, 0.0);
  const Vector& v = sin ? mode->sin : mode->cos;
  return v.empty() ? Vector(m, 0.0) : v;
}

// Value of a layer profile at the origin, where r^{-e} and ln r are not
// defined. Only l = 0 survives, and a nonzero singular part is unbounded.
Vector origin_value(const ModeSolution& sol, std::size_t k) {
  const LayerCoefficients& c = sol.layers.at(k - 1);
  if (max_abs(c.b) != 0.0) return Vector(c.a.size(), std::numeric_limits<double>::infinity());
  if (sol.l != 0) return Vector(c.a.size(), 0.0);
  return c.a;
}

}  // namespace

double norm(const Point& p, int dimension) {
  return dimension == 2 ? std::hypot(p.x, p.y) : std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
}

double polar_angle(const Point& p, int dimension) {
  const double r = norm(p, dimension);
  if (r == 0.0) return 0.0;
  if (dimension == 2) return std::atan2(p.y, p.x);
  return std::acos(std::clamp(p.z / r, -1.0, 1.0));
}

LayeredField::LayeredField(std::shared_ptr<const ProblemSpec> spec, std::vector<ModeTerm> modes)
    : spec_(std::move(spec)), modes_(std::move(modes)) {
  if (!spec_) throw DomainError("layered field needs a spec");
  for (const ModeTerm& t : modes_) {
    if (t.cos.layers.size() != spec_->layer_count()) throw DimensionError("mode solution does not match the spec");
    if (t.sin && t.sin->layers.size() != spec_->layer_count())
      throw DimensionError("mode solution does not match the spec");
  }
}

std::size_t LayeredField::layer_of(const Point& x) const {
  const double r = norm(x, dimension());
  if (r > spec_->outer_radius() * (1.0 + kRadiusSlack)) throw DomainError("point lies outside the outer sphere");
  return spec_->layer_of(std::min(r, spec_->outer_radius()));
}

template <typename RadialPart>
Vector LayeredField::sum_modes(const Point& x, RadialPart&& radial) const {
  const double theta = polar_angle(x, dimension());
  Vector out(components(), 0.0);
  for (const ModeTerm& t : modes_) {
    const AngularBasis basis = angular_basis(t.l, dimension(), theta);
    out = out + basis.cos_part * radial(t.cos);
    if (t.sin && basis.sin_part != 0.0) out = out + basis.sin_part * radial(*t.sin);
  }
  return out;
}

Vector LayeredField::evaluate(const Point& x) const { return evaluate_in_layer(layer_of(x), x); }

Vector LayeredField::evaluate_in_layer(std::size_t k, const Point& x) const {
  if (k < 1 || k > spec_->layer_count()) throw DomainError("layer index out of range");
  const double r = norm(x, dimension());
  if (r == 0.0) return sum_modes(x, [k](const ModeSolution& s) { return origin_value(s, k); });
  return sum_modes(x, [k, r](const ModeSolution& s) { return s.value(k, r); });
}

Vector LayeredField::apply_radial_op(std::size_t k, const RadialBoundaryOp& op, const Point& x) const {
  if (k < 1 || k > spec_->layer_count()) throw DomainError("layer index out of range");
  const double r = norm(x, dimension());
  if (r == 0.0) return op.B * evaluate_in_layer(k, x);
  return sum_modes(x, [k, r, &op](const ModeSolution& s) { return s.gamma(k, op, r); });
}

ModeData mode_data(const ProblemSpec& spec, int l, bool sin) {
  const std::size_t m = spec.components;
  ModeData d;
  d.boundary = coefficients(spec.boundary_data, l, sin, m);
  for (const InterfaceData& f : spec.interface_data)
    d.interfaces.emplace_back(coefficients(f.first, l, sin, m), coefficients(f.second, l, sin, m));
  return d;
}

LayeredField synthesize_field(std::shared_ptr<const ProblemSpec> spec, std::vector<ModeTerm> modes) {
  return LayeredField(std::move(spec), std::move(modes));
}

LayeredField solve(std::shared_ptr<const ProblemSpec> spec, const RadialOptions& opts) {
  if (!spec) throw DomainError("solve needs a spec");
  check_structure(*spec);
  const std::vector<int> ls = spec->data_modes();
  std::vector<ModeTerm> terms(ls.size());
  parallel_for(ls.size(), [&](std::size_t i) {
    const int l = ls[i];
    ModeTerm t;
    t.l = l;
    t.cos = solve_mode(*spec, l, mode_data(*spec, l, false), opts);
    if (spec->dimension == 2 && l > 0) t.sin = solve_mode(*spec, l, mode_data(*spec, l, true), opts);
    terms[i] = std::move(t);
  });
  return synthesize_field(std::move(spec), std::move(terms));
}

LayeredField solve(const ProblemSpec& spec, const RadialOptions& opts) {
  return solve(std::make_shared<const ProblemSpec>(spec), opts);
}

}  // namespace lamharm
