#pragma once

namespace pbcurves {

/// Every numerical threshold used by the library, in one place.
struct Tolerances {
  // Model constraints.
  double point = 1e-12;    // |x|^2 = 1 on the sphere, <x,x> = -1 on the hyperboloid
  double tangent = 1e-10;  // <v, x> = 0
  double frame = 1e-10;    // orthonormality of user-supplied initial frames

  // Profiles.
  double pole = 1e-14;            // |denominator| below this raises PoleError
  double relation = 1e-12;        // k0^2 + tau0^2 = K in the constant-curvature classifier

  // Integration.
  double step_drift = 1e-6;       // per-step constraint drift before projection
  double escape_distance = 25.0;  // hyperbolic trajectories stop beyond this distance

  // Residuals and stability.
  double near_geodesic = 1e-8;    // k_min for p < 2
  double criticality = 1e-3;      // extrapolated Euler-Lagrange residual at a critical curve
  double criticality_step = 0.02; // node spacing used to evaluate that residual
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace pbcurves
