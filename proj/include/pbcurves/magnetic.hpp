#pragma once

#include <variant>
#include <vector>

#include "pbcurves/frenet.hpp"
#include "pbcurves/profiles.hpp"

namespace pbcurves {

struct ConstantField {
  double k0 = 0;
};

/// k prescribed as a function of arclength along the trajectory.
struct ArclengthField {
  CurvatureProfile profile;
};

/// k prescribed as a function on the surface, sampled on a regular grid in
/// chart coordinates and interpolated bilinearly. Charts: (x, y) on R^2,
/// (x0, x1) on the hyperboloid, (longitude, latitude) on S^2.
struct SampledField {
  double u0 = 0, u1 = 1, v0 = 0, v1 = 1;
  std::size_t nu = 2, nv = 2;
  std::vector<double> values;  ///< row-major, values[iu * nv + iv]
};

using CurvatureSource = std::variant<ConstantField, ArclengthField, SampledField>;

struct MagneticProblem {
  SpaceForm space{2, 0};
  CurvatureSource source = ConstantField{};
};

/// Chart coordinates of a point, as used by SampledField.
std::pair<double, double> chart_coordinates(const SpaceForm& space, const Vec& x);

/// Prescribed curvature at point x reached after arclength s.
double prescribed_curvature(const MagneticProblem& problem, const Vec& x, double s);

struct MagneticOptions {
  double h = 1e-3;
  /// Hyperbolic trajectories stop once this far from their start.
  double escape_distance = 25.0;
};

/// Integrates gamma' = v, nabla_{gamma'} v = k J(v) in ambient coordinates.
/// The curve stores the velocity in T (not renormalized), N = J(T)/|T| and
/// the prescribed k. A hyperbolic trajectory that escapes is truncated.
DiscreteCurve integrate_magnetic(const MagneticProblem& problem, const Vec& start, const Vec& v0,
                                 double length, const MagneticOptions& options = {});

/// max | |T_i| - 1 |.
double speed_drift(const DiscreteCurve& curve);

struct InitialCondition {
  Vec point;
  Vec direction;
};

/// n base points times n unit directions, deterministic.
std::vector<InitialCondition> default_grid(const SpaceForm& space, int n);

struct ShootOptions {
  double min_length = 0.5;
  double max_length = 20.0;
  double h = 1e-3;
  double tol = 1e-6;
  double escape_distance = 25.0;
};

struct ClosedCandidate {
  InitialCondition start;
  double length = 0;
  double defect = 0;               ///< |gamma(L) - gamma(0)| + |v(L) - v(0)|
  double curvature_integral = 0;   ///< int_0^L k ds
  double curvature_residual = 0;   ///< max interior |recomputed k - prescribed k|
  double profile_residual = 0;     ///< max |surface-equation residual| (arclength sources)
  int multiplicity = 1;            ///< initial conditions that produced this orbit
};

/// First-return closed orbits from each initial condition, refined by
/// golden-section search on the phase-space defect, deduplicated by
/// (length, curvature integral).
std::vector<ClosedCandidate> shoot_closed(const MagneticProblem& problem,
                                          const std::vector<InitialCondition>& grid,
                                          const ShootOptions& options = {});

}  // namespace pbcurves
