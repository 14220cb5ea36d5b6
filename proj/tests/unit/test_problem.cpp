#include <doctest.h>

#include "lamharm/errors.hpp"
#include "lamharm/problem.hpp"

using namespace lamharm;

namespace {

SurfaceData one_mode(int l, Vector cos, Vector sin = {}) { return {{SurfaceMode{l, std::move(cos), std::move(sin)}}}; }

}  // namespace

TEST_CASE("radial operator constructors") {
  CHECK(RadialBoundaryOp::dirichlet(2).A.max_abs() == 0.0);
  CHECK(RadialBoundaryOp::dirichlet(2).B == Matrix::identity(2));
  const RadialBoundaryOp f = RadialBoundaryOp::flux(Matrix::identity(1) * 3.0, 0.5);
  CHECK(f.A(0, 0) == doctest::Approx(6.0));
  CHECK(f.B(0, 0) == 0.0);
  CHECK((RadialBoundaryOp{Matrix::zeros(1, 1), Matrix::zeros(1, 1)}).degenerate());
}

TEST_CASE("layer bookkeeping") {
  const ProblemSpec spec = dirichlet_preset(1, {1.0, 0.6, 0.3}, {});
  CHECK(spec.layer_count() == 3);
  CHECK(spec.layer_of(1.0) == 1);
  CHECK(spec.layer_of(0.6) == 1);
  CHECK(spec.layer_of(0.59) == 2);
  CHECK(spec.layer_of(0.3) == 2);
  CHECK(spec.layer_of(0.0) == 3);
  CHECK(spec.layer_inner(3) == 0.0);
  CHECK(spec.layer_outer(2) == 0.6);
  CHECK_THROWS_AS(spec.layer_of(-0.1), DomainError);
}

TEST_CASE("data_modes is the sorted union") {
  ProblemSpec spec = dirichlet_preset(1, {1.0, 0.5}, one_mode(3, {1}, {0}));
  spec.interface_data[0].second = one_mode(1, {2}, {1});
  CHECK(spec.data_modes() == std::vector<int>{1, 3});
  CHECK(spec.boundary_data.find(3) != nullptr);
  CHECK(spec.boundary_data.find(2) == nullptr);
  CHECK(spec.boundary_data.max_mode() == 3);
}

TEST_CASE("check_structure rejects malformed specs with a path") {
  const ProblemSpec good = dirichlet_preset(2, {1.0, 0.5}, one_mode(1, {1, 2}, {0, 0}));
  CHECK_NOTHROW(check_structure(good));

  auto expect_path = [](const ProblemSpec& s, const std::string& prefix) {
    try {
      check_structure(s);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.path().rfind(prefix, 0) == 0);
    }
  };
  ProblemSpec s = good;
  s.radii = {1.0, 1.0};
  expect_path(s, "radii");
  s = good;
  s.radii = {1.5, 0.5};
  expect_path(s, "radii[0]");
  s = good;
  s.dimension = 4;
  expect_path(s, "dimension");
  s = good;
  s.boundary.A = Matrix::identity(3);
  expect_path(s, "boundary");
  s = good;
  s.boundary_data.modes[0].cos = {1};
  expect_path(s, "boundary");
  s = good;
  s.boundary_data.modes.push_back(s.boundary_data.modes[0]);
  expect_path(s, "boundary");
  s = good;
  s.interfaces.clear();
  expect_path(s, "interfaces");
  s = good;
  s.boundary_data.modes[0] = {0, {1, 1}, {1, 0}};
  expect_path(s, "boundary");
  s = good;
  s.dimension = 3;
  expect_path(s, "boundary");
}

TEST_CASE("validate reports without throwing") {
  ProblemSpec dead = dirichlet_preset(1, {1.0}, one_mode(2, {1}, {0}));
  dead.boundary.B = Matrix::zeros(1, 1);
  const ValidationReport r = validate(dead);
  CHECK_FALSE(r.ok());
  CHECK(validate(dirichlet_preset(1, {1.0}, one_mode(2, {1}, {0}))).ok());

  ProblemSpec broken = dead;
  broken.radii = {};
  CHECK_FALSE(validate(broken).ok());
}

TEST_CASE("presets") {
  const ProblemSpec r = robin_preset(Matrix::from_rows({{2}}), {});
  CHECK(r.boundary.A == Matrix::identity(1));
  CHECK(r.boundary.B == Matrix::from_rows({{2}}));
  CHECK(r.interface_count() == 0);
  const ProblemSpec t = transmission_preset(Matrix::from_rows({{3}}), 0.5, {}, 3);
  CHECK(t.dimension == 3);
  CHECK(t.interfaces[0].outer_side[0] == RadialBoundaryOp::value(Matrix::identity(1)));
  CHECK(t.interfaces[0].outer_side[1].A(0, 0) == doctest::Approx(6.0));
  CHECK_THROWS_AS(transmission_preset(Matrix::identity(1), 1.0, {}), DomainError);
  CHECK_THROWS_AS(dirichlet_preset(1, {0.5, 0.7}, {}), DomainError);
}
