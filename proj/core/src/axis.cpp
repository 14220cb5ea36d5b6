#include "lamharm/axis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lamharm/errors.hpp"

namespace lamharm {

namespace {

constexpr Complex kI{0.0, 1.0};

// Solves [[m00, m01], [m10, m11]] x = (b0, b1) by Cramer's rule.
std::array<Complex, 2> solve2(Complex m00, Complex m01, Complex m10, Complex m11, Complex b0, Complex b1,
                              const std::string& what) {
  const Complex det = m00 * m11 - m01 * m10;
  const double scale = std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
  if (!(std::abs(det) > 1e-13 * scale * scale)) throw SingularMatrix(what);
  return {(b0 * m11 - m01 * b1) / det, (m00 * b1 - b0 * m10) / det};
}

std::vector<double> trapezoid_weights(const std::vector<double>& xs) {
  std::vector<double> w(xs.size(), 0.0);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double h = 0.5 * (xs[i + 1] - xs[i]);
    w[i] += h;
    w[i + 1] += h;
  }
  return w;
}

// Trapezoid nodes split per segment: a node on a breakpoint appears once for
// each side so that piecewise weights and one-sided values stay exact.
struct SegmentNode {
  std::size_t index;
  std::size_t segment;
  double weight;
};

std::vector<SegmentNode> segment_nodes(const AxisSpec& spec, const std::vector<double>& xs) {
  std::vector<SegmentNode> nodes;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double h = 0.5 * (xs[i + 1] - xs[i]);
    const std::size_t m = spec.segment_of(0.5 * (xs[i] + xs[i + 1]));
    for (std::size_t k : {i, i + 1}) {
      if (!nodes.empty() && nodes.back().index == k && nodes.back().segment == m)
        nodes.back().weight += h;
      else
        nodes.push_back({k, m, h});
    }
  }
  return nodes;
}

void check_grid(const std::vector<double>& xs, std::size_t n) {
  if (xs.size() != n) throw DimensionError("sample count does not match the grid");
  if (xs.size() < 2) throw DomainError("need at least two sample points");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) throw DomainError("sample grid must be increasing");
}

}  // namespace

double AxisCoupling::delta(int side) const {
  const auto& s = side == 1 ? side1 : side2;
  return s[0][0] * s[1][1] - s[0][1] * s[1][0];
}

AxisCoupling AxisCoupling::continuity() {
  AxisCoupling c;
  c.side1 = {{{0.0, 1.0}, {1.0, 0.0}}};
  c.side2 = c.side1;
  return c;
}

std::size_t AxisSpec::segment_of(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) - breakpoints.begin()) +
         1;
}

void validate_axis(const AxisSpec& spec) {
  const std::size_t n = spec.breakpoints.size();
  if (spec.speeds.size() != n + 1) throw ValidationError("speeds", "need one speed per segment (breakpoints + 1)");
  if (spec.couplings.size() != n) throw ValidationError("couplings", "need one coupling per breakpoint");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(spec.breakpoints[i])) throw ValidationError("breakpoints", "non-finite breakpoint");
    if (i > 0 && !(spec.breakpoints[i] > spec.breakpoints[i - 1]))
      throw ValidationError("breakpoints", "breakpoints must be strictly increasing");
  }
  for (std::size_t m = 0; m <= n; ++m)
    if (!(spec.speeds[m] > 0.0 && std::isfinite(spec.speeds[m])))
      throw ValidationError("speeds[" + std::to_string(m) + "]", "speed must be positive");
  for (std::size_t k = 0; k < n; ++k)
    for (int side = 1; side <= 2; ++side)
      if (spec.couplings[k].delta(side) == 0.0)
        throw ValidationError("couplings[" + std::to_string(k) + "].m" + std::to_string(side),
                              "coupling determinant Delta vanishes");
}

AxisSpec homogeneous_axis(double a) {
  AxisSpec s;
  s.speeds = {a};
  validate_axis(s);
  return s;
}

AxisSpec continuity_axis(std::vector<double> breakpoints, std::vector<double> speeds) {
  AxisSpec s;
  s.breakpoints = std::move(breakpoints);
  s.speeds = std::move(speeds);
  s.couplings.assign(s.breakpoints.size(), AxisCoupling::continuity());
  validate_axis(s);
  return s;
}

Complex AxisEigenfunction::value_in_segment(std::size_t m, double x) const {
  const Complex k = kI * lambda / speeds[m - 1];
  const auto& c = amplitudes[m - 1];
  return c[0] * std::exp(k * x) + c[1] * std::exp(-k * x);
}

Complex AxisEigenfunction::derivative_in_segment(std::size_t m, double x) const {
  const Complex k = kI * lambda / speeds[m - 1];
  const auto& c = amplitudes[m - 1];
  return k * (c[0] * std::exp(k * x) - c[1] * std::exp(-k * x));
}

Complex AxisEigenfunction::value(double x) const {
  const auto m = static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                                          breakpoints.begin()) + 1;
  return value_in_segment(m, x);
}

Complex AxisEigenfunction::derivative(double x) const {
  const auto m = static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), x) -
                                          breakpoints.begin()) + 1;
  return derivative_in_segment(m, x);
}

AxisEigenfunction eigenfunction(const AxisSpec& spec, double lambda, AxisKind kind) {
  validate_axis(spec);
  if (lambda == 0.0) throw DomainError("lambda = 0 degenerates the oscillatory basis");
  const std::size_t n = spec.breakpoints.size();
  AxisEigenfunction ef;
  ef.lambda = lambda;
  ef.kind = kind;
  ef.breakpoints = spec.breakpoints;
  ef.speeds = spec.speeds;
  ef.amplitudes.resize(n + 1);
  ef.amplitudes[n] = kind == AxisKind::kDirect ? std::array<Complex, 2>{1.0, 0.0} : std::array<Complex, 2>{0.0, 1.0};
  for (std::size_t k = n; k >= 1; --k) {
    const double x = spec.breakpoints[k - 1];
    const AxisCoupling& c = spec.couplings[k - 1];
    const double w = kind == AxisKind::kAdjoint ? c.delta(1) / c.delta(2) : 1.0;
    const Complex v = ef.value_in_segment(k + 1, x);
    const Complex dv = ef.derivative_in_segment(k + 1, x);
    std::array<Complex, 2> rhs;
    std::array<std::array<Complex, 2>, 2> mat;
    const Complex kk = kI * lambda / spec.speeds[k - 1];
    for (int m = 0; m < 2; ++m) {
      rhs[m] = w * (c.side2[m][0] * dv + c.side2[m][1] * v);
      mat[m][0] = (c.side1[m][0] * kk + c.side1[m][1]) * std::exp(kk * x);
      mat[m][1] = (-c.side1[m][0] * kk + c.side1[m][1]) * std::exp(-kk * x);
    }
    ef.amplitudes[k - 1] = solve2(mat[0][0], mat[0][1], mat[1][0], mat[1][1], rhs[0], rhs[1],
                                  "coupling system degenerates at breakpoint " + std::to_string(k));
  }
  return ef;
}

double coupling_residual(const AxisSpec& spec, const AxisEigenfunction& ef) {
  double worst = 0.0;
  for (std::size_t k = 1; k <= spec.breakpoints.size(); ++k) {
    const double x = spec.breakpoints[k - 1];
    const AxisCoupling& c = spec.couplings[k - 1];
    const bool adjoint = ef.kind == AxisKind::kAdjoint;
    const double w1 = adjoint ? 1.0 / c.delta(1) : 1.0;
    const double w2 = adjoint ? 1.0 / c.delta(2) : 1.0;
    for (int m = 0; m < 2; ++m) {
      const Complex lhs =
          w1 * (c.side1[m][0] * ef.derivative_in_segment(k, x) + c.side1[m][1] * ef.value_in_segment(k, x));
      const Complex rhs = w2 * (c.side2[m][0] * ef.derivative_in_segment(k + 1, x) +
                                c.side2[m][1] * ef.value_in_segment(k + 1, x));
      const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
  }
  return worst;
}

std::vector<double> AxisGrid::points() const {
  if (samples < 2 || !(half_width > 0.0)) throw DomainError("axis grid needs >= 2 samples and X > 0");
  std::vector<double> xs(samples);
  for (std::size_t i = 0; i < samples; ++i) xs[i] = -half_width + step() * static_cast<double>(i);
  return xs;
}

std::vector<double> AxisQuadrature::lambdas() const {
  if (!(lambda_max > 0.0 && d_lambda > 0.0)) throw DomainError("lambda grid needs positive Lambda and step");
  const auto M = static_cast<long>(std::ceil(lambda_max / d_lambda));
  std::vector<double> out;
  out.reserve(2 * M);
  for (long i = -M; i < M; ++i) out.push_back((static_cast<double>(i) + 0.5) * d_lambda);
  return out;
}

AxisQuadrature default_axis_quadrature(double sigma, double half_width) {
  if (!(sigma > 0.0 && half_width > 0.0)) throw DomainError("width and half-width must be positive");
  return {40.0 / sigma, std::numbers::pi / (2.0 * half_width)};
}

double estimate_width(const std::vector<double>& xs, const ComplexVector& f) {
  check_grid(xs, f.size());
  double mass = 0.0, first = 0.0, second = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double w = std::abs(f[i]);
    mass += w;
    first += w * xs[i];
    second += w * xs[i] * xs[i];
  }
  if (mass == 0.0) return xs.back() - xs.front();
  const double mean = first / mass;
  return std::sqrt(std::max(second / mass - mean * mean, 0.0));
}

ComplexVector direct_transform(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f_hat,
                               const AxisQuadrature& quad) {
  check_grid(xs, f_hat.size());
  const std::vector<double> w = trapezoid_weights(xs);
  const std::vector<double> lambdas = quad.lambdas();
  ComplexVector f(xs.size(), 0.0);
  for (double lam : lambdas) {
    Complex spectrum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) spectrum += std::exp(-kI * lam * xs[i]) * f_hat[i] * w[i];
    if (spectrum == 0.0) continue;
    const AxisEigenfunction ef = eigenfunction(spec, lam, AxisKind::kDirect);
    for (std::size_t i = 0; i < xs.size(); ++i) f[i] += ef.value(xs[i]) * spectrum * quad.d_lambda;
  }
  return f;
}

ComplexVector inverse_transform(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f,
                                const AxisQuadrature& quad, InverseNormalization normalization) {
  check_grid(xs, f.size());
  const std::vector<SegmentNode> nodes = segment_nodes(spec, xs);
  const std::vector<double> lambdas = quad.lambdas();
  const std::size_t L = lambdas.size();
  const bool spectral = normalization == InverseNormalization::kSpectral;

  std::vector<AxisEigenfunction> direct, adjoint;
  direct.reserve(L);
  adjoint.reserve(L);
  ComplexVector analysis(L, 0.0);
  for (std::size_t j = 0; j < L; ++j) {
    adjoint.push_back(eigenfunction(spec, lambdas[j], AxisKind::kAdjoint));
    if (spectral) direct.push_back(eigenfunction(spec, lambdas[j], AxisKind::kDirect));
    Complex acc = 0.0;
    for (const SegmentNode& n : nodes) {
      const double a = spec.speeds[n.segment - 1];
      const double weight = spectral ? 1.0 / (a * a) : 1.0;
      acc += adjoint[j].value_in_segment(n.segment, xs[n.index]) * f[n.index] * weight * n.weight;
    }
    analysis[j] = acc;
  }

  ComplexVector spectrum(L, 0.0);
  if (spectral) {
    const double a_first = spec.speeds.front();
    const double a_last = spec.speeds.back();
    // D, E from the segment-1 amplitudes: the pairing of phi*(., lambda)
    // with phi(., +-lambda) produces delta masses pi D and pi E.
    const auto D = [&](std::size_t j) {
      const auto& c = direct[j].amplitudes.front();
      const auto& d = adjoint[j].amplitudes.front();
      return 1.0 / a_last + (c[0] * d[1] + c[1] * d[0]) / a_first;
    };
    const auto E = [&](std::size_t j, std::size_t partner) {
      const auto& c = direct[partner].amplitudes.front();
      const auto& d = adjoint[j].amplitudes.front();
      return (c[0] * d[0] + c[1] * d[1]) / a_first;
    };
    for (std::size_t j = 0; j < L; ++j) {
      const std::size_t p = L - 1 - j;  // lambdas[p] = -lambdas[j]
      const auto x = solve2(std::numbers::pi * D(j), std::numbers::pi * E(j, p), std::numbers::pi * E(p, j),
                            std::numbers::pi * D(p), analysis[j], analysis[p],
                            "spectral normalization degenerates at lambda = " + std::to_string(lambdas[j]));
      spectrum[j] = x[0];
    }
  }

  ComplexVector out(xs.size(), 0.0);
  const double sign = spectral ? 1.0 : -1.0;
  const double scale = spectral ? quad.d_lambda / (2.0 * std::numbers::pi)
                                : quad.d_lambda / (4.0 * std::numbers::pi * std::numbers::pi);
  for (std::size_t j = 0; j < L; ++j) {
    const Complex s = spectral ? spectrum[j] : analysis[j];
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] += std::exp(sign * kI * lambdas[j] * xs[i]) * s * scale;
  }
  return out;
}

double relative_l2(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) throw DimensionError("sample vectors differ in length");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::sqrt(num);
  return std::sqrt(num / den);
}

AxisRoundTrip axis_roundtrip(const AxisSpec& spec, const std::vector<double>& xs, const ComplexVector& f_hat,
                             const AxisQuadrature& quad, InverseNormalization normalization) {
  AxisRoundTrip out;
  out.f = direct_transform(spec, xs, f_hat, quad);
  out.f_hat_back = inverse_transform(spec, xs, out.f, quad, normalization);
  out.error = relative_l2(out.f_hat_back, f_hat);
  return out;
}

}  // namespace lamharm
