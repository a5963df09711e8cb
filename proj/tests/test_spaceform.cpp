#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pbcurves/errors.hpp"
#include "pbcurves/spaceform.hpp"
#include "support.hpp"

using namespace pbcurves;
using doctest::Approx;

namespace {

Point pt(std::initializer_list<double> c) { return {make_vec(c)}; }
TangentVector tv(const Point& P, std::initializer_list<double> c) { return {P.coords, make_vec(c)}; }

}  // namespace

TEST_CASE("model is fixed by dimension and curvature") {
  CHECK(SpaceForm(2, 0).model() == Model::Flat);
  CHECK(SpaceForm(3, 1).model() == Model::RoundSphere);
  CHECK(SpaceForm(2, -1).model() == Model::Hyperboloid);
  CHECK(SpaceForm(3, -1).ambient_dim() == 4);
  CHECK(SpaceForm::parse("h3") == SpaceForm(3, -1));
  CHECK_THROWS_AS(SpaceForm(4, 0), UnsupportedDimension);
  CHECK_THROWS_AS(SpaceForm(2, 2), DomainError);
  CHECK_THROWS_AS(SpaceForm::parse("q2"), DomainError);
}

TEST_CASE("metric examples") {
  const SpaceForm r2(2, 0), s2(2, 1), h2(2, -1);
  const Point o = pt({0, 0});
  CHECK(metric(r2, o, tv(o, {1, 0}), tv(o, {0, 1})) == 0.0);
  const Point np = pt({0, 0, 1});
  CHECK(metric(s2, np, tv(np, {1, 0, 0}), tv(np, {1, 0, 0})) == 1.0);
  CHECK(metric(h2, np, tv(np, {1, 0, 0}), tv(np, {1, 0, 0})) == 1.0);
  CHECK_THROWS_AS(metric(s2, np, tv(pt({1, 0, 0}), {0, 1, 0}), tv(np, {1, 0, 0})), DomainError);
}

TEST_CASE("projection examples") {
  const SpaceForm s2(2, 1), h2(2, -1);
  const Point np = pt({0, 0, 1});
  CHECK(project_to_tangent(s2, np, make_vec({0, 0, 5})).comps.norm() == 0.0);
  CHECK(project_to_tangent(s2, np, make_vec({1, 2, 3})).comps.isApprox(make_vec({1, 2, 0})));
  // w + <w,P>_Mink P with <w,P> = -1 at the apex.
  CHECK(project_to_tangent(h2, np, make_vec({0, 0, 1})).comps.norm() == 0.0);
}

TEST_CASE("exponential map examples") {
  const Point o = pt({0, 0});
  CHECK(exp_map(SpaceForm(2, 0), o, tv(o, {1, 1})).coords.isApprox(make_vec({1, 1})));
  const Point np = pt({0, 0, 1});
  const Vec q = exp_map(SpaceForm(2, 1), np, tv(np, {std::numbers::pi / 2, 0, 0})).coords;
  CHECK((q - make_vec({1, 0, 0})).norm() < 1e-15);
  const Vec r = exp_map(SpaceForm(2, -1), np, tv(np, {1, 0, 0})).coords;
  CHECK(r[0] == Approx(std::sinh(1.0)).epsilon(1e-15));
  CHECK(r[1] == 0.0);
  CHECK(r[2] == Approx(std::cosh(1.0)).epsilon(1e-15));
  CHECK(exp_map(SpaceForm(2, 1), np, tv(np, {0, 0, 0})).coords == np.coords);
}

TEST_CASE("curvature operator examples") {
  const Point np = pt({0, 0, 1});
  const auto X = tv(np, {1, 0, 0}), Y = tv(np, {0, 1, 0});
  CHECK(curvature_op(SpaceForm(2, 0), X, Y, Y).comps.isZero());
  CHECK(curvature_op(SpaceForm(2, 1), X, Y, Y).comps.isApprox(X.comps));
  CHECK(curvature_op(SpaceForm(2, -1), X, Y, Y).comps.isApprox(-X.comps));
  CHECK_THROWS_AS(curvature_op(SpaceForm(2, 1), X, tv(pt({1, 0, 0}), {0, 1, 0}), Y), DomainError);
}

TEST_CASE("rotation examples") {
  const SpaceForm r2(2, 0);
  const Point o = pt({0, 0});
  CHECK(rotate_J(r2, o, tv(o, {1, 0})).comps.isApprox(make_vec({0, 1})));
  const auto once = rotate_J(r2, o, tv(o, {1, 0}));
  CHECK(rotate_J(r2, o, once).comps.isApprox(make_vec({-1, 0})));
  const Point np = pt({0, 0, 1});
  CHECK(rotate_J(SpaceForm(2, 1), np, tv(np, {1, 0, 0})).comps.isApprox(make_vec({0, 1, 0})));
  CHECK(rotate_J(SpaceForm(2, -1), np, tv(np, {1, 0, 0})).comps.isApprox(make_vec({0, 1, 0})));
  CHECK_THROWS_AS(rotate_J(SpaceForm(3, 0), pt({0, 0, 0}), tv(pt({0, 0, 0}), {1, 0, 0})),
                  UnsupportedDimension);
}

TEST_CASE("metric is symmetric and bilinear on random tangent pairs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-3, 3);
  for (const auto& space : testing::all_spaces()) {
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = testing::random_point(space, rng);
      const Vec u = testing::random_tangent(space, x, rng), v = testing::random_tangent(space, x, rng),
                w = testing::random_tangent(space, x, rng);
      const double a = coef(rng), b = coef(rng);
      const double scale = 1 + u.squaredNorm() + v.squaredNorm() + w.squaredNorm();
      CHECK(std::abs(space.dot(u, v) - space.dot(v, u)) <= 1e-12 * scale);
      CHECK(std::abs(space.dot(a * u + b * v, w) - a * space.dot(u, w) - b * space.dot(v, w)) <=
            1e-12 * scale * 10);
      CHECK(space.dot(u, u) >= -1e-12 * scale);
    }
  }
}

TEST_CASE("projection is idempotent and lands in the tangent space") {
  std::mt19937_64 rng(12);
  for (const auto& space : testing::all_spaces()) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = testing::random_point(space, rng);
      Vec w = Vec::Random(space.ambient_dim());
      const Vec p1 = space.project(x, w);
      const Vec p2 = space.project(x, p1);
      CHECK((p1 - p2).norm() <= 1e-12 * (1 + w.norm()) * (1 + x.squaredNorm()));
      CHECK(space.is_tangent(x, p1, 1e-10));
    }
  }
}

TEST_CASE("exp map stays on the model for |v| <= 10") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> len(0, 10);
  for (const auto& space : testing::all_spaces()) {
    if (space.model() == Model::Flat) continue;
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = testing::random_point(space, rng, 1.0);
      Vec v = testing::random_tangent(space, x, rng);
      v *= len(rng) / space.norm(v);
      const Vec y = space.exp(x, v);
      CHECK(space.constraint_defect(y) <= 1e-10);
      // The geodesic distance equals |v| (below the cut locus on the sphere).
      if (space.model() == Model::Hyperboloid || space.norm(v) < 3.0)
        CHECK(space.distance(x, y) == Approx(space.norm(v)).epsilon(1e-8));
    }
  }
}

TEST_CASE("curvature operator antisymmetries") {
  std::mt19937_64 rng(14);
  for (const auto& space : testing::all_spaces()) {
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = testing::random_point(space, rng, 1.0);
      const Vec X = testing::random_tangent(space, x, rng), Y = testing::random_tangent(space, x, rng),
                Z = testing::random_tangent(space, x, rng), W = testing::random_tangent(space, x, rng);
      CHECK((space.curvature_op(X, Y, Z) + space.curvature_op(Y, X, Z)).norm() <= 1e-12 * 100);
      const double a = space.dot(space.curvature_op(X, Y, Z), W);
      const double b = space.dot(space.curvature_op(X, Y, W), Z);
      CHECK(std::abs(a + b) <= 1e-12 * 100);
    }
  }
}

TEST_CASE("rotation preserves norm and squares to minus the identity") {
  std::mt19937_64 rng(15);
  for (const auto& space : testing::all_spaces()) {
    if (space.dim() != 2) continue;
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = testing::random_point(space, rng, 1.5);
      const Vec v = testing::random_tangent(space, x, rng);
      const Vec Jv = space.rotate(x, v);
      const double scale = 1 + x.squaredNorm();
      CHECK(std::abs(space.norm(Jv) - space.norm(v)) <= 1e-12 * scale * scale);
      CHECK(std::abs(space.dot(Jv, v)) <= 1e-12 * scale * scale);
      CHECK((space.rotate(x, Jv) + v).norm() <= 1e-12 * scale * scale * (1 + v.norm()));
      // Positive orientation: det[v, Jv, x] > 0.
      CHECK(space.orientation(x, {v, Jv}) > 0);
    }
  }
}

TEST_CASE("canonical frame has orientation +1 and complete_frame agrees") {
  for (const auto& space : testing::all_spaces()) {
    const Vec x = space.origin();
    const auto F = space.canonical_frame();
    CHECK(space.orientation(x, F) == Approx(1.0));
    if (space.dim() == 3) CHECK((space.complete_frame(x, F[0], F[1]) - F[2]).norm() < 1e-15);
  }
}

TEST_CASE("complete_frame yields a positively oriented orthonormal frame") {
  std::mt19937_64 rng(16);
  for (const auto& space : testing::all_spaces()) {
    if (space.dim() != 3) continue;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = testing::random_point(space, rng, 1.5);
      Vec T = testing::random_tangent(space, x, rng);
      T /= space.norm(T);
      Vec N = testing::random_tangent(space, x, rng);
      N -= space.dot(N, T) * T;
      N /= space.norm(N);
      const Vec B = space.complete_frame(x, T, N);
      CHECK(std::abs(space.norm(B) - 1) < 1e-10);
      CHECK(std::abs(space.dot(B, T)) < 1e-10);
      CHECK(std::abs(space.dot(B, N)) < 1e-10);
      CHECK(space.is_tangent(x, B, 1e-10));
      CHECK(space.orientation(x, {T, N, B}) > 0);
    }
  }
}

TEST_CASE("hyperboloid retraction stays well conditioned far out") {
  const SpaceForm h2(2, -1);
  const Vec x = h2.exp(h2.origin(), make_vec({20, 0, 0}));
  CHECK(h2.constraint_defect(x) < 1e-12);
  const Vec v = h2.complete_tangent(x, make_vec({0.3, 1, 0.2}));
  CHECK(std::abs(h2.dot(v, x)) < 1e-6 * x.squaredNorm());
  CHECK(h2.distance(h2.origin(), x) == Approx(20).epsilon(1e-12));
}
