#include <doctest.h>

#include <cmath>
#include <random>

#include "generators.hpp"
#include "lamharm/errors.hpp"
#include "lamharm/radial.hpp"

using namespace lamharm;
using lamharm::testing::random_mode_data;
using lamharm::testing::random_spec;

namespace {

ProblemSpec scalar_transmission(double k, double r) {
  return transmission_preset(Matrix::from_rows({{k}}), r, {});
}

ModeData scalar_data(double f0, std::size_t n) {
  ModeData d = ModeData::zero(1, n);
  d.boundary = {f0};
  return d;
}

}  // namespace

TEST_CASE("alpha_symbol") {
  const Matrix H = Matrix::from_rows({{2, 1}, {1, 3}});
  CHECK(alpha_symbol(RadialBoundaryOp::dirichlet(2), 7) == Matrix::identity(2));
  CHECK(alpha_symbol({Matrix::identity(2), H}, 3) == H + Matrix::identity(2) * 3.0);
  CHECK(alpha_symbol({Matrix::identity(1), Matrix::zeros(1, 1)}, -1) == Matrix::from_rows({{-1}}));
}

TEST_CASE("radial span value and gamma") {
  RadialSpan s = RadialSpan::regular_seed(2, 3, 1);
  s.Q = Matrix::from_rows({{0.5}});
  // r^2 + 0.5 r^{-3}
  CHECK(s.value(0.5)(0, 0) == doctest::Approx(0.25 + 0.5 * 8.0));
  const RadialBoundaryOp op{Matrix::from_rows({{2}}), Matrix::from_rows({{1}})};
  // (2*2 + 1) r^2 + (2*(-3) + 1) 0.5 r^{-3}
  CHECK(s.gamma(op, 0.5)(0, 0) == doctest::Approx(5 * 0.25 - 5 * 0.5 * 8.0));

  RadialSpan lg = RadialSpan::singular_seed(0, 2, 1);
  CHECK(lg.log_term);
  CHECK(lg.value(std::exp(1.0))(0, 0) == doctest::Approx(1.0));
  // Gamma[ln r] = A + B ln r
  CHECK(lg.gamma(op, std::exp(2.0))(0, 0) == doctest::Approx(2 + 2));
  CHECK(radial_power(0.5, 40) == doctest::Approx(std::pow(0.5, 40)));
}

TEST_CASE("propagate_pairs: single layer is the seeds") {
  const ProblemSpec spec = dirichlet_preset(2, {1.0}, {});
  const ModeBasis b = propagate_pairs(spec, 3);
  REQUIRE(b.pairs.size() == 1);
  CHECK(b.phi(1).P == Matrix::identity(2));
  CHECK(b.phi(1).Q.max_abs() == 0.0);
  CHECK(b.psi(1).Q == Matrix::identity(2));
  CHECK(b.psi(1).P.max_abs() == 0.0);
}

TEST_CASE("propagate_pairs: transparent interfaces keep the seeds") {
  const ProblemSpec spec = dirichlet_preset(2, {1.0, 0.7, 0.4}, {}, 3);
  const ModeBasis b = propagate_pairs(spec, 4);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK((b.phi(k).P - Matrix::identity(2)).max_abs() < 1e-14);
    CHECK(b.phi(k).Q.max_abs() < 1e-14);
    CHECK(b.psi(k).P.max_abs() < 1e-14);
    CHECK((b.psi(k).Q - Matrix::identity(2)).max_abs() < 1e-14);
  }
}

TEST_CASE("propagate_pairs: scalar K-flux interface") {
  // Continuity and 2 u1' = u2' at r = 0.5, mode l = 1: solved by hand,
  // phi_1 = 0.75 r + 0.0625 / r and psi_1 = r + 0.75 / r.
  const ProblemSpec spec = scalar_transmission(2.0, 0.5);
  const ModeBasis b = propagate_pairs(spec, 1);
  CHECK(b.phi(1).P(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(b.phi(1).Q(0, 0) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(b.psi(1).P(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(b.psi(1).Q(0, 0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(recurrence_residual(spec, b) < 1e-14);
}

TEST_CASE("propagate_pairs: recurrence residual on random specs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemSpec spec = random_spec(rng, lamharm::testing::spec_shape(1 + trial % 3, 1 + trial % 3, 2 + trial % 2));
    for (int l : {0, 1, 5, 20}) CHECK(recurrence_residual(spec, propagate_pairs(spec, l)) <= 1e-10);
  }
}

TEST_CASE("propagate_pairs: singular outer symbol is reported with indices") {
  ProblemSpec spec = dirichlet_preset(1, {1.0, 0.5}, {});
  // Both outer conditions are the value operator: M_{11} is singular.
  spec.interfaces[0].outer_side[1] = RadialBoundaryOp::value(Matrix::identity(1));
  try {
    propagate_pairs(spec, 2);
    FAIL("expected SingularMatrix");
  } catch (const SingularMatrix& e) {
    CHECK(e.interface_index() == 1);
    CHECK(e.mode() == 2);
  }
}

TEST_CASE("omega_matrix on the seeds") {
  // One interface; layer 2 carries the seeds r and 1/r (N = 2, l = 1).
  const ProblemSpec spec = dirichlet_preset(1, {1.0, 0.5}, {});
  const ModeBasis b = propagate_pairs(spec, 1);
  const double rho = 0.5;
  // Layer-1 pair equals the seeds because the interface is transparent; rows
  // are value and r d/dr * (1/r) = derivative.
  const Matrix om = omega_matrix(spec, b, 1, rho).assemble();
  CHECK(om(0, 0) == doctest::Approx(rho));
  CHECK(om(0, 1) == doctest::Approx(1.0 / rho));
  CHECK(om(1, 0) == doctest::Approx(1.0));
  CHECK(om(1, 1) == doctest::Approx(-1.0 / (rho * rho)));

  // With value and r d/dr rows the hand-evaluated determinant is -2.
  ProblemSpec euler = spec;
  euler.interfaces[0].outer_side[1] = {Matrix::identity(1), Matrix::zeros(1, 1)};
  euler.interfaces[0].inner_side[1] = euler.interfaces[0].outer_side[1];
  const Matrix om2 = omega_matrix(euler, propagate_pairs(euler, 1), 1, rho).assemble();
  CHECK(om2(0, 0) == doctest::Approx(rho));
  CHECK(om2(0, 1) == doctest::Approx(1.0 / rho));
  CHECK(om2(1, 0) == doctest::Approx(rho));
  CHECK(om2(1, 1) == doctest::Approx(-1.0 / rho));
  CHECK(determinant(om2) == doctest::Approx(-2.0));
}

TEST_CASE("omega_matrix: identical value rows are singular") {
  ProblemSpec spec = dirichlet_preset(1, {1.0, 0.5}, {});
  for (auto* side : {&spec.interfaces[0].outer_side, &spec.interfaces[0].inner_side})
    (*side)[1] = RadialBoundaryOp::value(Matrix::identity(1));
  ModeBasis b;
  b.l = 1;
  b.dimension = 2;
  b.pairs = {{RadialSpan::regular_seed(1, 2, 1), RadialSpan::singular_seed(1, 2, 1)},
             {RadialSpan::regular_seed(1, 2, 1), RadialSpan::singular_seed(1, 2, 1)}};
  CHECK(check_determinant_equilibrated(omega_matrix(spec, b, 1, 0.7).assemble()).singular);
}

TEST_CASE("check_solvability") {
  CHECK(check_solvability(dirichlet_preset(1, {1.0}, {}), 1).pass);

  ProblemSpec dead = dirichlet_preset(1, {1.0}, {});
  dead.boundary = {Matrix::zeros(1, 1), Matrix::zeros(1, 1)};
  const SolvabilityReport r = check_solvability(dead, 1);
  CHECK_FALSE(r.pass);
  REQUIRE_FALSE(r.failures.empty());

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix K = lamharm::testing::random_spd(rng, 2);
    const ProblemSpec spec = transmission_preset(K, 0.5, {});
    for (int l = 0; l <= 20; ++l) CHECK(check_solvability(spec, l).pass);
  }
}

TEST_CASE("solve_mode: single-layer harmonic extension") {
  const ProblemSpec spec = dirichlet_preset(1, {0.8}, {});
  const ModeSolution s = solve_mode(spec, 3, scalar_data(2.0, 0));
  CHECK(s.layers[0].a[0] == doctest::Approx(2.0 / std::pow(0.8, 3)));
  CHECK(s.layers[0].b[0] == 0.0);
  CHECK(s.value(1, 0.4)[0] == doctest::Approx(2.0 * std::pow(0.5, 3)));
}

TEST_CASE("solve_mode: transparent interface") {
  const ProblemSpec spec = transmission_preset(Matrix::identity(2), 0.5, {});
  ModeData d = ModeData::zero(2, 1);
  d.boundary = {1.0, -2.0};
  const ModeSolution s = solve_mode(spec, 2, d);
  for (const LayerCoefficients& c : s.layers) {
    CHECK(c.a[0] == doctest::Approx(1.0));
    CHECK(c.a[1] == doctest::Approx(-2.0));
    CHECK(std::abs(c.b[0]) < 1e-14);
    CHECK(std::abs(c.b[1]) < 1e-14);
  }
}

TEST_CASE("solve_mode: scalar K-flux interface matches the hand solution") {
  // a = 16/13 inside, b = 12/13 and d = 1/13 outside for k = 2, r = 0.5, l = 1.
  const ProblemSpec spec = scalar_transmission(2.0, 0.5);
  const ModeData d = scalar_data(1.0, 1);
  const ModeSolution s = solve_mode(spec, 1, d);
  CHECK(s.layers[0].a[0] == doctest::Approx(12.0 / 13.0).epsilon(1e-14));
  CHECK(s.layers[0].b[0] == doctest::Approx(1.0 / 13.0).epsilon(1e-14));
  CHECK(s.layers[1].a[0] == doctest::Approx(16.0 / 13.0).epsilon(1e-14));
  CHECK(mode_residual(spec, s, d) < 1e-14);
}

TEST_CASE("solve_mode: residual on random specs") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const ProblemSpec spec = random_spec(rng, lamharm::testing::spec_shape(1 + trial % 3, trial % 4, 2 + trial % 2));
    const ModeData d = random_mode_data(rng, spec);
    for (int l : {0, 1, 7, 20}) CHECK(mode_residual(spec, solve_mode(spec, l, d), d) <= 1e-10);
  }
}

TEST_CASE("degenerate mode needs the log basis") {
  const ProblemSpec spec = scalar_transmission(3.0, 0.5);
  const ModeData d = scalar_data(1.0, 1);
  RadialOptions naive;
  naive.log_basis_for_degenerate_mode = false;
  CHECK_THROWS_AS(solve_mode(spec, 0, d, naive), SingularMatrix);
  CHECK_THROWS_AS(propagate_pairs(spec, 0, naive), SingularMatrix);
  const ModeSolution s = solve_mode(spec, 0, d);
  CHECK(s.log_term);
  // Constants pass through any flux interface unchanged.
  CHECK(s.layers[0].a[0] == doctest::Approx(1.0));
  CHECK(std::abs(s.layers[0].b[0]) < 1e-14);
  CHECK(s.layers[1].a[0] == doctest::Approx(1.0));
}

TEST_CASE("influence: boundary column reproduces the Dirichlet extension") {
  const ProblemSpec spec = dirichlet_preset(1, {0.9}, {});
  const ModeBasis b = propagate_pairs(spec, 2);
  const Matrix h = hstar(spec, b, 1, Source::boundary(), 0.45, 0.9);
  REQUIRE(h.cols() == 2);
  CHECK(h(0, 0) == 0.0);
  CHECK(h(0, 1) == doctest::Approx(0.25));
}

TEST_CASE("influence: jump across the source sphere equals the data") {
  std::mt19937_64 rng(8);
  const ProblemSpec spec = random_spec(rng, lamharm::testing::spec_shape(2, 2, 2));
  for (std::size_t s = 1; s <= 2; ++s) {
    const ModeBasis b = propagate_pairs(spec, 3);
    const InfluenceFunction h(spec, b);
    const double rho = spec.radii[s];
    const RadialSpan above = h.span(s, Source::interface(s), rho, true);
    const RadialSpan below = h.span(s + 1, Source::interface(s), rho, false);
    const InterfacePair& pair = spec.interfaces[s - 1];
    for (int j = 0; j < 2; ++j) {
      const Matrix jump = above.gamma(pair.outer_side[j], rho) - below.gamma(pair.inner_side[j], rho);
      Matrix expected = Matrix::zeros(2, 4);
      expected.set_block(0, 2 * j, Matrix::identity(2));
      CHECK((jump - expected).max_abs() < 1e-10);
    }
  }
}

TEST_CASE("oracle equivalence on random specs") {
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const lamharm::testing::RandomSpecOptions o{1 + static_cast<std::size_t>(trial % 3),
                                                static_cast<std::size_t>(trial % 4), 2 + (trial / 4) % 2};
    const ProblemSpec spec = random_spec(rng, o);
    const ModeData d = random_mode_data(rng, spec);
    for (int l : {0, 1, 4, 13, 20}) {
      if (!check_solvability(spec, l).pass) continue;
      const ModeSolution direct = solve_mode(spec, l, d);
      const ModeSolution via = mode_solution_via_hstar(spec, propagate_pairs(spec, l), d);
      CHECK(coefficient_discrepancy(spec, direct, via) <= 1e-9);
      ++checked;
    }
  }
  CHECK(checked >= 150);
}

TEST_CASE("the literal influence formula is not a solution operator") {
  // Read literally, the inner piece is built from psi, which is singular at the origin.
  const ProblemSpec spec = scalar_transmission(2.0, 0.5);
  const ModeData d = scalar_data(1.0, 1);
  InfluenceOptions printed;
  printed.convention = InfluenceConvention::kAsPrinted;
  const ModeSolution direct = solve_mode(spec, 1, d);
  const ModeSolution literal = mode_solution_via_hstar(spec, propagate_pairs(spec, 1), d, printed);
  CHECK(coefficient_discrepancy(spec, direct, literal) > 1e-3);

  CHECK_THROWS_AS(hstar(dirichlet_preset(1, {1.0}, {}), propagate_pairs(dirichlet_preset(1, {1.0}, {}), 1), 1,
                        Source::boundary(), 0.5, 1.0, printed),
                  DomainError);
}

TEST_CASE("the side-index reading of Omega fails on continuity interfaces") {
  // Condition 1 applied on both sides gives two equal rows at r_k.
  const ProblemSpec spec = transmission_preset(Matrix::from_rows({{2.0}}), 0.5, {});
  InfluenceOptions side;
  side.omega = OmegaConvention::kSideIndex;
  CHECK_FALSE(check_solvability(spec, 1, side).pass);
  CHECK(check_solvability(spec, 1).pass);
}

TEST_CASE("coefficient_discrepancy") {
  const ProblemSpec spec = scalar_transmission(2.0, 0.5);
  const ModeSolution s = solve_mode(spec, 1, scalar_data(1.0, 1));
  CHECK(coefficient_discrepancy(spec, s, s) == 0.0);
  ModeSolution t = s;
  t.layers[1].a[0] *= 1.0 + 1e-6;
  CHECK(coefficient_discrepancy(spec, s, t) == doctest::Approx(1e-6).epsilon(1e-3));
}
