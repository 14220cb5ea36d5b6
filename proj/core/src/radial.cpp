#include "lamharm/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lamharm/errors.hpp"

namespace lamharm {

namespace {

bool uses_log(int l, int dimension, const RadialOptions& opts) {
  return is_log_mode(l, dimension) && opts.log_basis_for_degenerate_mode;
}

void require_compatible(const RadialSpan& a, const RadialSpan& b) {
  if (a.l != b.l || a.dimension != b.dimension || a.log_term != b.log_term)
    throw DimensionError("radial spans of different modes cannot be combined");
  if (a.P.rows() != b.P.rows() || a.P.cols() != b.P.cols())
    throw DimensionError("radial span shape mismatch");
}

Matrix hcat(const Matrix& left, const Matrix& right) {
  Matrix out(left.rows(), left.cols() + right.cols());
  out.set_block(0, 0, left);
  out.set_block(0, left.cols(), right);
  return out;
}

RadialSpan make_span(int l, int dimension, bool log_term, Matrix P, Matrix Q) {
  RadialSpan s;
  s.l = l;
  s.dimension = dimension;
  s.P = std::move(P);
  s.Q = std::move(Q);
  s.log_term = log_term;
  return s;
}

SingularMatrix tag(const SingularMatrix& e, std::size_t k, int l, const std::string& what) {
  return SingularMatrix(what + " (interface " + std::to_string(k) + ", mode " + std::to_string(l) + "): " + e.what(),
                        static_cast<int>(k), l);
}

Vector column_of(const Matrix& a) { return a.column_vector(0); }

}  // namespace

double radial_power(double r, double e) {
  if (e == 0.0) return 1.0;
  if (std::abs(e) > 30.0) return std::exp(e * std::log(r));
  return std::pow(r, e);
}

RadialSpan RadialSpan::regular_seed(int l, int dimension, std::size_t m, const RadialOptions& opts) {
  return make_span(l, dimension, uses_log(l, dimension, opts), Matrix::identity(m), Matrix::zeros(m, m));
}

RadialSpan RadialSpan::singular_seed(int l, int dimension, std::size_t m, const RadialOptions& opts) {
  return make_span(l, dimension, uses_log(l, dimension, opts), Matrix::zeros(m, m), Matrix::identity(m));
}

RadialSpan RadialSpan::zero_like(const RadialSpan& shape, std::size_t cols) {
  return make_span(shape.l, shape.dimension, shape.log_term, Matrix::zeros(shape.P.rows(), cols),
                   Matrix::zeros(shape.P.rows(), cols));
}

Matrix RadialSpan::value(double r) const {
  if (log_term) return P + Q * std::log(r);
  const double e = singular_exponent(l, dimension);
  return P * radial_power(r, l) + Q * radial_power(r, -e);
}

Matrix RadialSpan::gamma(const RadialBoundaryOp& op, double r) const {
  if (log_term) {
    const Matrix lead = op.A + op.B * std::log(r);
    return op.B * P + lead * Q;
  }
  const double e = singular_exponent(l, dimension);
  Matrix out = alpha_symbol(op, l) * P;
  out *= radial_power(r, l);
  Matrix sing = alpha_symbol(op, -e) * Q;
  sing *= radial_power(r, -e);
  return out + sing;
}

RadialSpan RadialSpan::operator*(const Matrix& right) const {
  return make_span(l, dimension, log_term, P * right, Q * right);
}

RadialSpan RadialSpan::operator+(const RadialSpan& other) const {
  require_compatible(*this, other);
  return make_span(l, dimension, log_term, P + other.P, Q + other.Q);
}

RadialSpan RadialSpan::operator-(const RadialSpan& other) const {
  require_compatible(*this, other);
  return make_span(l, dimension, log_term, P - other.P, Q - other.Q);
}

RadialSpan RadialSpan::operator-() const { return make_span(l, dimension, log_term, -P, -Q); }

Matrix alpha_symbol(const RadialBoundaryOp& op, double exponent) { return op.A * exponent + op.B; }

Matrix symbol_matrix(const ProblemSpec& spec, std::size_t k, int side, int l, const RadialOptions& opts) {
  if (k < 1 || k > spec.interface_count()) throw DomainError("interface index out of range");
  if (side != 1 && side != 2) throw DomainError("interface side must be 1 or 2");
  const InterfacePair& pair = spec.interfaces[k - 1];
  const auto& ops = side == 1 ? pair.outer_side : pair.inner_side;
  const std::size_t m = spec.components;
  Matrix out(2 * m, 2 * m);
  if (uses_log(l, spec.dimension, opts)) {
    const double lr = std::log(spec.radii[k]);
    for (int j = 0; j < 2; ++j) {
      out.set_block(j * m, 0, ops[j].B);
      out.set_block(j * m, m, ops[j].A + ops[j].B * lr);
    }
    return out;
  }
  const double e = singular_exponent(l, spec.dimension);
  for (int j = 0; j < 2; ++j) {
    out.set_block(j * m, 0, alpha_symbol(ops[j], l));
    out.set_block(j * m, m, alpha_symbol(ops[j], -e));
  }
  return out;
}

ModeBasis propagate_pairs(const ProblemSpec& spec, int l, const RadialOptions& opts) {
  if (l < 0) throw DomainError("mode index must be >= 0");
  const std::size_t m = spec.components;
  const std::size_t n = spec.interface_count();
  ModeBasis basis;
  basis.l = l;
  basis.dimension = spec.dimension;
  basis.pairs.resize(n + 1);
  basis.pairs[n] = {RadialSpan::regular_seed(l, spec.dimension, m, opts),
                    RadialSpan::singular_seed(l, spec.dimension, m, opts)};
  const bool log_mode = uses_log(l, spec.dimension, opts);
  const double e = singular_exponent(l, spec.dimension);

  for (std::size_t k = n; k >= 1; --k) {
    const double r = spec.radii[k];
    const InterfacePair& pair = spec.interfaces[k - 1];
    const auto& [phi_in, psi_in] = basis.pairs[k];
    Matrix rhs(2 * m, 2 * m);
    for (int j = 0; j < 2; ++j) {
      rhs.set_block(j * m, 0, phi_in.gamma(pair.inner_side[j], r));
      rhs.set_block(j * m, m, psi_in.gamma(pair.inner_side[j], r));
    }
    Matrix x;
    try {
      x = LuDecomposition(symbol_matrix(spec, k, 1, l, opts)).solve(rhs);
    } catch (const SingularMatrix& err) {
      throw tag(err, k, l, "outer-side symbol matrix is singular");
    }
    // The symbol system acts on (r^l P, r^{-e} Q); undo that scaling.
    Matrix P = x.block(0, 0, m, 2 * m);
    Matrix Q = x.block(m, 0, m, 2 * m);
    if (!log_mode) {
      P *= radial_power(r, -static_cast<double>(l));
      Q *= radial_power(r, e);
    }
    basis.pairs[k - 1] = {make_span(l, spec.dimension, log_mode, P.block(0, 0, m, m), Q.block(0, 0, m, m)),
                          make_span(l, spec.dimension, log_mode, P.block(0, m, m, m), Q.block(0, m, m, m))};
  }
  return basis;
}

double recurrence_residual(const ProblemSpec& spec, const ModeBasis& basis) {
  double worst = 0.0;
  for (std::size_t k = 1; k <= spec.interface_count(); ++k) {
    const double r = spec.radii[k];
    const InterfacePair& pair = spec.interfaces[k - 1];
    double scale = std::numeric_limits<double>::min();
    double diff = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int member = 0; member < 2; ++member) {
        const RadialSpan& outer = member == 0 ? basis.phi(k) : basis.psi(k);
        const RadialSpan& inner = member == 0 ? basis.phi(k + 1) : basis.psi(k + 1);
        const Matrix lhs = outer.gamma(pair.outer_side[j], r);
        const Matrix rhs = inner.gamma(pair.inner_side[j], r);
        scale = std::max({scale, lhs.max_abs(), rhs.max_abs()});
        diff = std::max(diff, (lhs - rhs).max_abs());
      }
    }
    worst = std::max(worst, diff / scale);
  }
  return worst;
}

BlockTwoMatrix omega_matrix(const ProblemSpec& spec, const ModeBasis& basis, std::size_t k, double rho,
                            OmegaConvention convention) {
  if (k < 1 || k > spec.interface_count()) throw DomainError("interface index out of range");
  const InterfacePair& pair = spec.interfaces[k - 1];
  const RadialSpan& phi = basis.phi(k);
  const RadialSpan& psi = basis.psi(k);
  const RadialBoundaryOp& second =
      convention == OmegaConvention::kConditionIndex ? pair.outer_side[1] : pair.inner_side[0];
  return {phi.gamma(pair.outer_side[0], rho), psi.gamma(pair.outer_side[0], rho), phi.gamma(second, rho),
          psi.gamma(second, rho)};
}

namespace {

/// Spans chi_k, k = 1..n, of the m-dimensional family of homogeneous solutions
/// with Gamma_0[chi_1](r_0) = 0, seeded from the null space of the boundary
/// symbol and carried inward with the inner-side symbol matrices.
std::vector<RadialSpan> boundary_adapted(const ProblemSpec& spec, int l, const RadialOptions& opts) {
  const std::size_t m = spec.components;
  const std::size_t n = spec.interface_count();
  const bool log_mode = uses_log(l, spec.dimension, opts);
  const double e = singular_exponent(l, spec.dimension);
  const auto unscale = [&](Matrix P, Matrix Q, double r) {
    if (!log_mode) {
      P *= radial_power(r, -static_cast<double>(l));
      Q *= radial_power(r, e);
    }
    return make_span(l, spec.dimension, log_mode, std::move(P), std::move(Q));
  };

  const double r0 = spec.outer_radius();
  const RadialBoundaryOp& b = spec.boundary;
  const Matrix symbol = log_mode ? hcat(b.B, b.A + b.B * std::log(r0)) : hcat(alpha_symbol(b, l), alpha_symbol(b, -e));
  Matrix kernel;
  try {
    kernel = null_space(symbol);
  } catch (const SingularMatrix&) {
    throw SingularMatrix("mode " + std::to_string(l) + ": boundary symbol is rank deficient", std::nullopt, l);
  }
  std::vector<RadialSpan> chi;
  chi.push_back(unscale(kernel.block(0, 0, m, m), kernel.block(m, 0, m, m), r0));
  for (std::size_t k = 1; k < n; ++k) {
    const double r = spec.radii[k];
    const InterfacePair& pair = spec.interfaces[k - 1];
    Matrix rhs(2 * m, m);
    for (int j = 0; j < 2; ++j) rhs.set_block(j * m, 0, chi.back().gamma(pair.outer_side[j], r));
    Matrix x;
    try {
      x = equilibrated_solve(symbol_matrix(spec, k, 2, l, opts), rhs);
    } catch (const SingularMatrix& err) {
      throw tag(err, k, l, "inner-side symbol matrix is singular");
    }
    chi.push_back(unscale(x.block(0, 0, m, m), x.block(m, 0, m, m), r));
  }
  return chi;
}

}  // namespace

SolvabilityReport check_solvability(const ProblemSpec& spec, int l, const InfluenceOptions& opts) {
  SolvabilityReport report;
  report.l = l;
  const auto record = [&](const std::string& label, const Matrix& a) {
    const DeterminantCheck d = check_determinant_equilibrated(a);
    report.entries.push_back({label, d.determinant, d.min_pivot_ratio, d.singular});
    if (d.singular) {
      report.pass = false;
      report.failures.push_back(label + " vanishes (determinant " + std::to_string(d.determinant) + ")");
    }
    return !d.singular;
  };

  bool propagable = true;
  for (std::size_t k = 1; k <= spec.interface_count(); ++k)
    for (int j = 1; j <= 2; ++j) {
      const std::string label = "det M[k=" + std::to_string(k) + ",j=" + std::to_string(j) + "]";
      const bool ok = record(label, symbol_matrix(spec, k, j, l, opts.radial));
      if (j == 1) propagable = propagable && ok;
    }
  if (!propagable) return report;

  const ModeBasis basis = propagate_pairs(spec, l, opts.radial);
  const bool exchanged = opts.convention == InfluenceConvention::kExchangedRoles;
  std::vector<RadialSpan> chi;
  if (exchanged && spec.interface_count() > 0) {
    try {
      chi = boundary_adapted(spec, l, opts.radial);
    } catch (const SingularMatrix& err) {
      report.pass = false;
      report.failures.push_back(err.what());
      return report;
    }
  }
  for (std::size_t k = 1; k <= spec.interface_count(); ++k) {
    BlockTwoMatrix om = omega_matrix(spec, basis, k, spec.radii[k], opts.omega);
    if (exchanged) {
      // det [Gamma phi, Gamma (psi + phi C)] = det Omega; chi is such a
      // combination (up to a right factor) and stays well conditioned.
      const InterfacePair& pair = spec.interfaces[k - 1];
      const RadialBoundaryOp& second =
          opts.omega == OmegaConvention::kConditionIndex ? pair.outer_side[1] : pair.inner_side[0];
      om.b12 = chi[k - 1].gamma(pair.outer_side[0], spec.radii[k]);
      om.b22 = chi[k - 1].gamma(second, spec.radii[k]);
    }
    record("det Omega[k=" + std::to_string(k) + "](r_k)", om.assemble());
  }
  const double r0 = spec.outer_radius();
  if (opts.convention == InfluenceConvention::kExchangedRoles) {
    record("boundary image of phi_1", basis.phi(1).gamma(spec.boundary, r0));
  } else {
    record("boundary image of psi_1", basis.psi(1).gamma(spec.boundary, r0));
  }
  return report;
}

Vector ModeSolution::value(std::size_t k, double r) const {
  const LayerCoefficients& c = layers.at(k - 1);
  if (log_term) return c.a + std::log(r) * c.b;
  const double e = singular_exponent(l, dimension);
  return radial_power(r, l) * c.a + radial_power(r, -e) * c.b;
}

Vector ModeSolution::radial_derivative(std::size_t k, double r) const {
  const LayerCoefficients& c = layers.at(k - 1);
  if (log_term) return c.b;
  const double e = singular_exponent(l, dimension);
  return (l * radial_power(r, l)) * c.a + (-e * radial_power(r, -e)) * c.b;
}

Vector ModeSolution::gamma(std::size_t k, const RadialBoundaryOp& op, double r) const {
  return op.A * radial_derivative(k, r) + op.B * value(k, r);
}

ModeData ModeData::zero(std::size_t m, std::size_t n) {
  ModeData d;
  d.boundary = Vector(m, 0.0);
  d.interfaces.assign(n, {Vector(m, 0.0), Vector(m, 0.0)});
  return d;
}

namespace {

void check_mode_data(const ProblemSpec& spec, const ModeData& data) {
  const std::size_t m = spec.components;
  if (data.boundary.size() != m) throw DimensionError("mode data: boundary vector has wrong length");
  if (data.interfaces.size() != spec.interface_count()) throw DimensionError("mode data: one pair per interface");
  for (const auto& [f1, f2] : data.interfaces)
    if (f1.size() != m || f2.size() != m) throw DimensionError("mode data: interface vector has wrong length");
}

}  // namespace

ModeSolution solve_mode(const ProblemSpec& spec, int l, const ModeData& data, const RadialOptions& opts) {
  if (l < 0) throw DomainError("mode index must be >= 0");
  check_mode_data(spec, data);
  const std::size_t m = spec.components;
  const std::size_t n = spec.interface_count();
  const std::size_t size = (2 * n + 1) * m;
  const RadialSpan reg = RadialSpan::regular_seed(l, spec.dimension, m, opts);
  const RadialSpan sing = RadialSpan::singular_seed(l, spec.dimension, m, opts);
  // Unknown layout [a_1, b_1, ..., a_n, b_n, a_{n+1}].
  const auto col_a = [m](std::size_t k) { return 2 * m * (k - 1); };
  const auto col_b = [m](std::size_t k) { return 2 * m * (k - 1) + m; };

  Matrix sys(size, size);
  Matrix rhs(size, 1);
  const double r0 = spec.outer_radius();
  sys.set_block(0, col_a(1), reg.gamma(spec.boundary, r0));
  if (n >= 1) sys.set_block(0, col_b(1), sing.gamma(spec.boundary, r0));
  for (std::size_t i = 0; i < m; ++i) rhs(i, 0) = data.boundary[i];

  for (std::size_t k = 1; k <= n; ++k) {
    const double r = spec.radii[k];
    const InterfacePair& pair = spec.interfaces[k - 1];
    for (int j = 0; j < 2; ++j) {
      const std::size_t row = m + 2 * m * (k - 1) + j * m;
      sys.set_block(row, col_a(k), reg.gamma(pair.outer_side[j], r));
      sys.set_block(row, col_b(k), sing.gamma(pair.outer_side[j], r));
      sys.set_block(row, col_a(k + 1), -reg.gamma(pair.inner_side[j], r));
      if (k + 1 <= n) sys.set_block(row, col_b(k + 1), -sing.gamma(pair.inner_side[j], r));
      const Vector& f = j == 0 ? data.interfaces[k - 1].first : data.interfaces[k - 1].second;
      for (std::size_t i = 0; i < m; ++i) rhs(row + i, 0) = f[i];
    }
  }

  Matrix x;
  try {
    x = equilibrated_solve(sys, rhs);
  } catch (const SingularMatrix& err) {
    throw SingularMatrix("mode " + std::to_string(l) + " block system is singular: " + err.what(), std::nullopt, l);
  }

  ModeSolution sol;
  sol.l = l;
  sol.dimension = spec.dimension;
  sol.log_term = reg.log_term;
  sol.layers.resize(n + 1);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    LayerCoefficients& c = sol.layers[k - 1];
    c.a.resize(m);
    c.b.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      c.a[i] = x(col_a(k) + i, 0);
      if (k <= n) c.b[i] = x(col_b(k) + i, 0);
    }
  }
  return sol;
}

double mode_residual(const ProblemSpec& spec, const ModeSolution& sol, const ModeData& data) {
  check_mode_data(spec, data);
  double scale = 1.0;
  double worst = 0.0;
  const auto track = [&](const Vector& lhs, const Vector& rhs, const Vector& f) {
    scale = std::max({scale, max_abs(lhs), max_abs(rhs), max_abs(f)});
    worst = std::max(worst, max_abs(lhs - rhs - f));
  };
  const Vector zero(spec.components, 0.0);
  track(sol.gamma(1, spec.boundary, spec.outer_radius()), zero, data.boundary);
  for (std::size_t k = 1; k <= spec.interface_count(); ++k) {
    const double r = spec.radii[k];
    const InterfacePair& pair = spec.interfaces[k - 1];
    track(sol.gamma(k, pair.outer_side[0], r), sol.gamma(k + 1, pair.inner_side[0], r),
          data.interfaces[k - 1].first);
    track(sol.gamma(k, pair.outer_side[1], r), sol.gamma(k + 1, pair.inner_side[1], r),
          data.interfaces[k - 1].second);
  }
  return worst / scale;
}


InfluenceFunction::InfluenceFunction(const ProblemSpec& spec, ModeBasis basis, InfluenceOptions opts)
    : spec_(&spec), basis_(std::move(basis)), opts_(opts) {
  if (basis_.pairs.size() != spec.layer_count()) throw DimensionError("mode basis does not match the spec");
  const double r0 = spec.outer_radius();
  p_ring_ = role_p(1).gamma(spec.boundary, r0);
  q_ring_ = role_q(1).gamma(spec.boundary, r0);
  try {
    q_ring_inv_ = equilibrated_inverse(q_ring_);
  } catch (const SingularMatrix& err) {
    throw SingularMatrix("mode " + std::to_string(basis_.l) + ": boundary image is singular: " + err.what(),
                         std::nullopt, basis_.l);
  }
  if (opts_.convention == InfluenceConvention::kExchangedRoles) chi_ = boundary_adapted(spec, basis_.l, opts_.radial);
}

const RadialSpan& InfluenceFunction::role_p(std::size_t k) const {
  return opts_.convention == InfluenceConvention::kExchangedRoles ? basis_.psi(k) : basis_.phi(k);
}

const RadialSpan& InfluenceFunction::role_q(std::size_t k) const {
  return opts_.convention == InfluenceConvention::kExchangedRoles ? basis_.phi(k) : basis_.psi(k);
}

Matrix InfluenceFunction::omega_inverse(std::size_t s, double rho) const {
  BlockTwoMatrix roles = omega_matrix(*spec_, basis_, s, rho, opts_.omega);
  if (!chi_.empty()) {
    // Columns (chi, phi): the phi-coefficient of the outer piece is absorbed
    // by chi, whose boundary image vanishes.
    const InterfacePair& pair = spec_->interfaces[s - 1];
    const RadialBoundaryOp& second =
        opts_.omega == OmegaConvention::kConditionIndex ? pair.outer_side[1] : pair.inner_side[0];
    const RadialSpan& chi = chi_.at(s - 1);
    const RadialSpan& phi = basis_.phi(s);
    roles = {chi.gamma(pair.outer_side[0], rho), phi.gamma(pair.outer_side[0], rho), chi.gamma(second, rho),
             phi.gamma(second, rho)};
  }
  try {
    return equilibrated_inverse(roles.assemble());
  } catch (const SingularMatrix& err) {
    throw tag(err, s, basis_.l, "Omega is singular");
  }
}

RadialSpan InfluenceFunction::first_piece(std::size_t k, const Matrix& omega_inv) const {
  const std::size_t m = spec_->components;
  if (!chi_.empty()) return chi_.at(k - 1) * omega_inv.block(0, 0, m, 2 * m);
  const RadialSpan lead = role_p(k) - role_q(k) * (q_ring_inv_ * p_ring_);
  return lead * omega_inv.block(0, 0, m, 2 * m);
}

RadialSpan InfluenceFunction::second_piece(std::size_t k, const Matrix& omega_inv) const {
  const std::size_t m = spec_->components;
  if (!chi_.empty()) return -(role_q(k) * omega_inv.block(m, 0, m, 2 * m));
  const Matrix rings = hcat(p_ring_, q_ring_);
  return -(role_q(k) * (q_ring_inv_ * rings * omega_inv));
}

RadialSpan InfluenceFunction::span(std::size_t k, Source source, double rho, bool above) const {
  const std::size_t n = spec_->interface_count();
  const std::size_t m = spec_->components;
  if (k < 1 || k > n + 1) throw DomainError("layer index out of range");
  const bool exchanged = opts_.convention == InfluenceConvention::kExchangedRoles;

  if (source.kind == Source::Kind::kBoundary) {
    if (exchanged) return role_q(k) * hcat(Matrix::zeros(m, m), q_ring_inv_);
    if (n == 0) throw DomainError("the literal boundary column needs Omega_1, which a single layer does not have");
    const Matrix inv = omega_inverse(1, rho);
    return k == 1 ? first_piece(k, inv) : second_piece(k, inv);
  }

  const std::size_t s = source.index;
  if (s < 1 || s > n) throw DomainError("source interface index out of range");
  const Matrix inv = omega_inverse(s, rho);
  bool use_first = k < s;
  if (k == s) use_first = exchanged ? above : !above;
  return use_first ? first_piece(k, inv) : second_piece(k, inv);
}

Matrix InfluenceFunction::evaluate(std::size_t k, Source source, double r, double rho) const {
  return span(k, source, rho, r >= rho).value(r);
}

Matrix hstar(const ProblemSpec& spec, const ModeBasis& basis, std::size_t k, Source source, double r, double rho,
             const InfluenceOptions& opts) {
  return InfluenceFunction(spec, basis, opts).evaluate(k, source, r, rho);
}

ModeSolution mode_solution_via_hstar(const ProblemSpec& spec, const ModeBasis& basis, const ModeData& data,
                                     const InfluenceOptions& opts) {
  check_mode_data(spec, data);
  const std::size_t m = spec.components;
  const std::size_t n = spec.interface_count();
  const InfluenceFunction h(spec, basis, opts);
  const Matrix f0 = Matrix::column(concat(Vector(m, 0.0), data.boundary));

  ModeSolution sol;
  sol.l = basis.l;
  sol.dimension = basis.dimension;
  sol.log_term = basis.phi(1).log_term;
  sol.layers.resize(n + 1);
  for (std::size_t k = 1; k <= n + 1; ++k) {
    RadialSpan total = h.span(k, Source::boundary(), spec.outer_radius(), false) * f0;
    for (std::size_t s = 1; s <= n; ++s) {
      const Matrix fs = Matrix::column(concat(data.interfaces[s - 1].first, data.interfaces[s - 1].second));
      // Layer s lies above r_s, so the k = s piece is the r >= rho one.
      total = total + h.span(k, Source::interface(s), spec.radii[s], true) * fs;
    }
    sol.layers[k - 1] = {column_of(total.P), column_of(total.Q)};
  }
  return sol;
}

double coefficient_discrepancy(const ProblemSpec& spec, const ModeSolution& x, const ModeSolution& y) {
  if (x.layers.size() != spec.layer_count() || y.layers.size() != spec.layer_count())
    throw DimensionError("mode solutions do not match the spec");
  if (x.l != y.l || x.log_term != y.log_term) throw DimensionError("mode solutions of different modes");
  const double e = singular_exponent(x.l, spec.dimension);
  double worst = 0.0;
  for (std::size_t k = 1; k <= spec.layer_count(); ++k) {
    const LayerCoefficients& cx = x.layers[k - 1];
    const LayerCoefficients& cy = y.layers[k - 1];
    const double r_out = spec.layer_outer(k);
    const double r_in = spec.layer_inner(k);
    const double wa = x.log_term ? 1.0 : radial_power(r_out, x.l);
    double wb = 0.0;
    if (k <= spec.interface_count()) {
      wb = x.log_term ? std::max({1.0, std::abs(std::log(r_in)), std::abs(std::log(r_out))})
                      : radial_power(r_in, -e);
    } else if (max_abs(cx.b) != 0.0 || max_abs(cy.b) != 0.0) {
      // A singular term in the innermost layer is unbounded at the origin.
      return std::numeric_limits<double>::infinity();
    }
    double diff = 0.0;
    double size = 0.0;
    for (std::size_t i = 0; i < cx.a.size(); ++i) {
      diff = std::max({diff, wa * std::abs(cx.a[i] - cy.a[i]), wb * std::abs(cx.b[i] - cy.b[i])});
      size = std::max({size, wa * std::abs(cx.a[i]), wa * std::abs(cy.a[i]), wb * std::abs(cx.b[i]),
                       wb * std::abs(cy.b[i])});
    }
    if (diff == 0.0) continue;
    worst = std::max(worst, diff / std::max(size, std::numeric_limits<double>::min()));
  }
  return worst;
}

}  // namespace lamharm
