#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "pbcurves/profiles.hpp"
#include "pbcurves/spaceform.hpp"

namespace pbcurves {

/// Curvature and torsion at one arclength value.
struct FrenetRates {
  double k = 0, tau = 0;
};

using CurvatureFn = std::function<FrenetRates(double s)>;

/// Arclength-sampled curve with its Frenet frame. B and tau are empty in
/// dimension 2. When `closed` is set the last node repeats the first.
struct DiscreteCurve {
  SpaceForm space{2, 0};
  std::vector<double> s;
  std::vector<Vec> points, T, N, B;
  std::vector<double> k, tau;
  bool closed = false;
  double closure_tol = 0;
  /// Set when the curve was synthesized from a closed-form profile.
  std::optional<CurvatureProfile> profile;

  std::size_t size() const { return s.size(); }
  double step() const;
  double length() const { return s.empty() ? 0.0 : s.back() - s.front(); }
  /// Frame vectors of node i: T, N[, B].
  std::vector<Vec> frame(std::size_t i) const;
};

struct FrenetOptions {
  double h = 1e-3;
  /// When set, the curve is marked closed if its endpoint gap is within this.
  std::optional<double> closure_tol;
};

/// Integrates gamma' = T together with the Frenet system in ambient
/// coordinates. `frame0` holds T (and optionally N, and B in dimension 3);
/// missing vectors are completed with the positive orientation.
DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureFn& rates, const Vec& start,
                               const std::vector<Vec>& frame0, std::pair<double, double> span,
                               const FrenetOptions& options = {});

/// Profile-driven overload; the curve remembers the profile.
DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureProfile& profile,
                               const Vec& start, const std::vector<Vec>& frame0,
                               std::pair<double, double> span, const FrenetOptions& options = {});

/// Same, starting from the canonical base point and frame.
DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureProfile& profile,
                               std::pair<double, double> span, const FrenetOptions& options = {});

struct RecoveredCurvature {
  std::vector<double> k, tau;
};

/// Curvature and torsion recovered from the sampled points alone, by
/// fourth-order differences and tangency projection. In dimension 2 the
/// curvature is signed relative to the orientation of the stored frame.
RecoveredCurvature recompute_curvature(const DiscreteCurve& curve);

struct CurveDiagnostics {
  double arclength_defect = 0;
  double constraint_defect = 0;
  double frame_defect = 0;
  double closure_defect = 0;  ///< infinity unless the curve is closed
};

CurveDiagnostics curve_diagnostics(const DiscreteCurve& curve);

/// Largest ambient mismatch between first and last node over point and frame.
double endpoint_gap(const DiscreteCurve& curve);

/// Every `stride`-th node. The result stays closed only if the stride divides
/// the node count of one period.
DiscreteCurve subsample(const DiscreteCurve& curve, std::size_t stride);

}  // namespace pbcurves
