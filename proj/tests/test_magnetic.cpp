#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pbcurves/errors.hpp"
#include "pbcurves/frenet.hpp"
#include "pbcurves/magnetic.hpp"

using namespace pbcurves;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

MagneticProblem constant(int K, double k0) { return {SpaceForm(2, K), ConstantField{k0}}; }

DiscreteCurve from_origin(const MagneticProblem& pb, double length, double h = 1e-3) {
  return integrate_magnetic(pb, pb.space.origin(), pb.space.canonical_frame()[0], length, {h, 25});
}

}  // namespace

TEST_CASE("planar circle") {
  const auto c = from_origin(constant(0, 1), 2 * kPi);
  CHECK((c.points.back() - c.points.front()).norm() < 1e-10);
  for (std::size_t i = 0; i < c.size(); i += 250) CHECK((c.points[i] - make_vec({0, 1})).norm() == Approx(1).epsilon(1e-10));
}

TEST_CASE("small circle on the sphere closes after pi sqrt 2") {
  const auto c = from_origin(constant(1, 1), kPi * std::sqrt(2.0));
  CHECK((c.points.back() - c.points.front()).norm() < 1e-6);
  CHECK((c.T.back() - c.T.front()).norm() < 1e-6);
}

TEST_CASE("magnetic curve with constant field matches the Frenet curve") {
  for (int K : {0, 1, -1}) {
    CurvatureProfile prof;
    prof.constants = {{"k0", 0.8}};
    const auto m = from_origin(constant(K, 0.8), 3);
    const auto f = integrate_frenet(SpaceForm(2, K), prof, {0, 3});
    for (std::size_t i = 0; i < m.size(); i += 500) CHECK((m.points[i] - f.points[i]).norm() < 1e-10);
  }
}

TEST_CASE("speed is conserved") {
  for (int K : {0, 1, -1})
    for (double k : {0.0, 0.5, 1.0, 2.0, -1.3}) {
      CAPTURE(K);
      CAPTURE(k);
      CHECK(speed_drift(from_origin(constant(K, k), 10)) < 1e-9);
    }
  CurvatureProfile prof;
  prof.family = Family::Sphere2D;
  prof.constants = {{"c1", 3}};
  CHECK(speed_drift(from_origin({SpaceForm(2, 1), ArclengthField{prof}}, 10)) < 1e-9);
}

TEST_CASE("speed drift of a hand-scaled velocity") {
  auto c = from_origin(constant(1, 1), 1, 1e-2);
  c.T[3] *= 1.5;
  CHECK(speed_drift(c) == Approx(0.5).epsilon(1e-12));
}

TEST_CASE("geodesic drift equals the Frenet arclength defect") {
  CurvatureProfile prof;
  prof.constants = {{"k0", 0.0}};
  for (int K : {0, 1, -1}) {
    const auto m = from_origin(constant(K, 0), 4);
    const auto f = integrate_frenet(SpaceForm(2, K), prof, {0, 4});
    CHECK(std::abs(speed_drift(m) - curve_diagnostics(f).arclength_defect) < 1e-12);
  }
}

TEST_CASE("reversing direction and field retraces the trajectory") {
  for (int K : {0, 1, -1}) {
    const auto pb = constant(K, 1.4);
    const auto fwd = from_origin(pb, 5);
    const auto back = integrate_magnetic(constant(K, -1.4), fwd.points.back(), -fwd.T.back(), 5);
    CHECK((back.points.back() - fwd.points.front()).norm() < 1e-8);
    CHECK((back.T.back() + fwd.T.front()).norm() < 1e-8);
  }
}

TEST_CASE("recovered curvature follows the prescribed field") {
  CurvatureProfile prof;
  prof.family = Family::Sphere2D;
  prof.constants = {{"c1", 3}};
  std::vector<double> err;
  for (double h : {0.04, 0.02}) {
    const auto c = from_origin({SpaceForm(2, 1), ArclengthField{prof}}, 3, h);
    const auto r = recompute_curvature(c);
    double e = 0;
    for (std::size_t i = 3; i + 3 < c.size(); ++i) e = std::max(e, std::abs(r.k[i] - eval_k(prof, c.s[i])));
    err.push_back(e);
  }
  CHECK(err[1] < 1e-5);
  CHECK(std::log2(err[0] / err[1]) >= 2);
}

TEST_CASE("sampled fields") {
  SampledField f{-3, 3, -3, 3, 3, 3, {1, 1, 1, 1, 1, 1, 1, 1, 1}};
  const MagneticProblem pb{SpaceForm(2, 0), f};
  const auto c = from_origin(pb, 2 * kPi);
  CHECK((c.points.back() - c.points.front()).norm() < 1e-10);
  // Bilinear interpolation is exact for affine data.
  SampledField g{0, 1, 0, 2, 2, 2, {0, 2, 1, 3}};
  const MagneticProblem pg{SpaceForm(2, 0), g};
  CHECK(prescribed_curvature(pg, make_vec({0.25, 0.5}), 0) == Approx(0.25 + 0.5));
  CHECK_THROWS_AS(prescribed_curvature(pg, make_vec({1.5, 0.5}), 0), DomainError);
  // Leaving the sampled region during integration is an error.
  CHECK_THROWS_AS(from_origin({SpaceForm(2, 0), SampledField{-0.5, 0.5, -0.5, 0.5, 2, 2, {0, 0, 0, 0}}}, 2), DomainError);
  SampledField bad{0, 1, 0, 1, 2, 2, {1, 2}};
  CHECK_THROWS_AS(prescribed_curvature({SpaceForm(2, 0), bad}, make_vec({0.5, 0.5}), 0), DomainError);
}

TEST_CASE("chart coordinates") {
  const SpaceForm s2(2, 1);
  const auto [lon, lat] = chart_coordinates(s2, make_vec({0, 1, 0}));
  CHECK(lon == Approx(kPi / 2));
  CHECK(lat == Approx(0));
  CHECK(chart_coordinates(s2, s2.origin()).second == Approx(kPi / 2));
  CHECK_THROWS_AS(chart_coordinates(SpaceForm(3, 0), make_vec({0, 0, 0})), UnsupportedDimension);
}

TEST_CASE("input validation") {
  const auto pb = constant(1, 1);
  CHECK_THROWS_AS(integrate_magnetic(pb, make_vec({0, 0, 2}), make_vec({1, 0, 0}), 1), DomainError);
  CHECK_THROWS_AS(integrate_magnetic(pb, pb.space.origin(), make_vec({2, 0, 0}), 1), DomainError);
  CHECK_THROWS_AS(integrate_magnetic(pb, pb.space.origin(), make_vec({1, 0, 0}), -1), DomainError);
  CHECK_THROWS_AS(integrate_magnetic({SpaceForm(3, 1), ConstantField{1}}, SpaceForm(3, 1).origin(),
                                     make_vec({1, 0, 0, 0}), 1),
                  UnsupportedDimension);
  CHECK_THROWS_AS(default_grid(pb.space, 0), DomainError);
}

TEST_CASE("default grid") {
  for (int K : {0, 1, -1}) {
    const SpaceForm space(2, K);
    const auto grid = default_grid(space, 5);
    CHECK(grid.size() == 25);
    for (const auto& ic : grid) {
      CHECK(space.is_point(ic.point, 1e-12));
      CHECK(space.is_tangent(ic.point, ic.direction, 1e-12));
      CHECK(space.norm(ic.direction) == Approx(1).epsilon(1e-12));
    }
  }
}

TEST_CASE("every closed orbit of the unit field on the sphere has length pi sqrt 2") {
  const auto found = shoot_closed(constant(1, 1), default_grid(SpaceForm(2, 1), 8));
  REQUIRE(!found.empty());
  int total = 0;
  for (const auto& c : found) {
    CHECK(c.length == Approx(kPi * std::sqrt(2.0)).epsilon(1e-4 / 4.44));
    CHECK(c.defect < 1e-6);
    CHECK(c.curvature_integral == Approx(c.length).epsilon(1e-8));
    CHECK(c.curvature_residual < 1e-5);
    total += c.multiplicity;
  }
  CHECK(total == 64);
}

TEST_CASE("hyperbolic dichotomy") {
  const double exact = 2 * kPi * std::sinh(std::atanh(0.5));
  const auto closed = shoot_closed(constant(-1, 2), default_grid(SpaceForm(2, -1), 3));
  REQUIRE(closed.size() == 1);
  CHECK(std::abs(closed.front().length - exact) < 1e-4);
  ShootOptions wide;
  wide.max_length = 50;
  CHECK(shoot_closed(constant(-1, 0.5), default_grid(SpaceForm(2, -1), 3), wide).empty());
  CHECK(shoot_closed(constant(-1, 1.0), default_grid(SpaceForm(2, -1), 2), wide).empty());
  // For |k| <= 1 the distance from the start only grows.
  const auto far = from_origin(constant(-1, 0.5), 50, 1e-2);
  const SpaceForm& h2 = far.space;
  double last = 0;
  bool monotone = true;
  for (std::size_t i = 1; i < far.size(); ++i) {
    const double d = h2.distance(far.points.front(), far.points[i]);
    monotone = monotone && d > last;
    last = d;
  }
  CHECK(monotone);
  CHECK(last > 10);
}

TEST_CASE("straight lines never close") {
  CHECK(shoot_closed(constant(0, 0), default_grid(SpaceForm(2, 0), 3)).empty());
}

TEST_CASE("profile-driven search reports residuals") {
  CurvatureProfile prof;
  prof.family = Family::Sphere2D;
  prof.constants = {{"c1", 3}};
  ShootOptions opt;
  opt.tol = 1e-2;
  opt.max_length = 12;
  opt.h = 4e-3;
  const auto found = shoot_closed({SpaceForm(2, 1), ArclengthField{prof}}, default_grid(SpaceForm(2, 1), 2), opt);
  for (const auto& c : found) {
    CHECK(c.defect < 1e-2);
    CHECK(c.profile_residual < 1e-8);
    CHECK(std::isfinite(c.curvature_residual));
  }
}
