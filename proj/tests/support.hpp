#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "pbcurves/spaceform.hpp"

namespace testing {

using pbcurves::SpaceForm;
using pbcurves::Vec;

inline std::vector<SpaceForm> all_spaces() {
  std::vector<SpaceForm> out;
  for (int dim : {2, 3})
    for (int K : {0, 1, -1}) out.emplace_back(dim, K);
  return out;
}

/// A point of the model reached from the base point by a random tangent step.
inline Vec random_point(const SpaceForm& space, std::mt19937_64& rng, double radius = 2.0) {
  std::uniform_real_distribution<double> u(-radius, radius);
  Vec v = Vec::Zero(space.ambient_dim());
  for (int j = 0; j < space.dim(); ++j) v[j] = u(rng);
  return space.exp(space.origin(), v);
}

inline Vec random_tangent(const SpaceForm& space, const Vec& x, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec w(space.ambient_dim());
  for (int j = 0; j < space.ambient_dim(); ++j) w[j] = u(rng);
  return space.complete_tangent(x, w);
}

/// Observed convergence order from errors at h and h/2.
inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace testing

#include "pbcurves/profiles.hpp"

namespace testing {

/// Random admissible constants for a closed-form family.
inline pbcurves::CurvatureProfile random_profile(pbcurves::Family family, std::mt19937_64& rng,
                                                 pbcurves::ProfileVariant variant = pbcurves::ProfileVariant::Canonical) {
  using pbcurves::Family;
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto nonzero = [&](double a, double b) { return (uni(0, 1) < 0.5 ? -1.0 : 1.0) * uni(a, b); };
  pbcurves::CurvatureProfile p;
  p.family = family;
  p.variant = variant;
  switch (family) {
    case Family::Flat2D: p.constants = {{"c1", uni(0.2, 3)}, {"c2", uni(-2, 2)}}; break;
    case Family::Sphere2D: p.constants = {{"c1", uni(2, 6)}, {"c3", uni(-M_PI, M_PI)}}; break;
    case Family::Hyperbolic2D: p.constants = {{"c1", uni(-3, 3)}, {"c4", uni(-1, 1)}}; break;
    case Family::Flat3D: p.constants = {{"b1", nonzero(0.2, 2)}, {"b4", uni(0.2, 3)}, {"b5", uni(-2, 2)}}; break;
    case Family::Sphere3D: {
      const double b1 = nonzero(0.2, 2);
      const double floor = 2 * std::sqrt(1 + b1 * b1);
      p.constants = {{"b1", b1}, {"b2", uni(floor, floor + 4)}, {"b3", uni(-M_PI, M_PI)}};
      break;
    }
    case Family::Hyperbolic3D: p.constants = {{"b1", nonzero(0.2, 2)}, {"b6", uni(-3, 3)}, {"b7", uni(-0.5, 0.5)}}; break;
    case Family::ConstantK: p.constants = {{"k0", uni(0.1, 2)}}; break;
  }
  return p;
}

inline const std::vector<pbcurves::Family>& closed_form_families() {
  static const std::vector<pbcurves::Family> all{pbcurves::Family::Flat2D,   pbcurves::Family::Sphere2D,
                                                 pbcurves::Family::Hyperbolic2D, pbcurves::Family::Flat3D,
                                                 pbcurves::Family::Sphere3D, pbcurves::Family::Hyperbolic3D};
  return all;
}

/// Largest governing-equation residual of a profile over n points of [a, b]:
/// the surface equation on 2D families, both 3D components otherwise.
inline double max_residual(const pbcurves::CurvatureProfile& p, int K, double a = -1, double b = 1, int n = 201) {
  double worst = 0;
  const bool three_d = pbcurves::family_dimension(p.family) == 3;
  for (int i = 0; i < n; ++i) {
    const double s = a + (b - a) * i / (n - 1);
    if (three_d) {
      const auto [r1, r2] = pbcurves::residual_3d(p, s, K);
      worst = std::max({worst, std::abs(r1), std::abs(r2)});
    } else {
      worst = std::max(worst, std::abs(pbcurves::residual_surface(p, s, K)));
    }
  }
  return worst;
}

}  // namespace testing

#include "pbcurves/frenet.hpp"

namespace testing {

/// Curvature (and torsion) a + b sin(c s + d) + e cos 2s with k >= 0.2; used
/// as a generic smooth non-geodesic test curve.
struct SmoothRates {
  double a, b, c, d, e, t0, t1;
  pbcurves::FrenetRates operator()(double s) const {
    return {a + b * std::sin(c * s + d) + e * std::cos(2 * s), t0 + t1 * std::sin(s)};
  }
};

inline SmoothRates random_rates(std::mt19937_64& rng, bool torsion) {
  auto uni = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
  SmoothRates r{uni(1, 2), uni(-0.5, 0.5), uni(0.5, 2), uni(-M_PI, M_PI), uni(-0.3, 0.3), 0, 0};
  if (torsion) {
    r.t0 = uni(-1, 1);
    r.t1 = uni(-0.5, 0.5);
  }
  return r;
}

inline pbcurves::DiscreteCurve smooth_curve(const SpaceForm& space, const SmoothRates& rates, double length, double h) {
  return pbcurves::integrate_frenet(space, rates, space.origin(), space.canonical_frame(), {0, length}, {h, {}});
}

}  // namespace testing
