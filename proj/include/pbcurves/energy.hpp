#pragma once

#include <vector>

#include "pbcurves/frenet.hpp"

namespace pbcurves {

struct EnergyResult {
  double value = 0;
  /// Some node has |tension| below 1e-12 while p < 2.
  bool near_geodesic = false;
};

/// Composite Simpson rule on a uniform grid. Odd interval counts close with
/// the 3/8 rule, averaged over both ends so the result is reversal-symmetric.
double simpson(const std::vector<double>& f, double h);

/// (1/p) int |nabla_{gamma'} gamma'|^p ds over the curve parameter, with the
/// tension from fourth-order differences of the points and tangency
/// projection. The parameter is not renormalized.
EnergyResult energy_p_biharmonic(const DiscreteCurve& curve, double p);

/// Same functional evaluated on raw samples (used for varied curves).
EnergyResult energy_p_biharmonic(const SpaceForm& space, const std::vector<Vec>& points, double h,
                                 bool closed, double p);

/// (1/p) int |k|^p ds from the stored node curvatures.
EnergyResult energy_p_elastic(const DiscreteCurve& curve, double p);

/// int sqrt(k + mu) ds; DomainError on a negative radicand.
double energy_blaschke(const DiscreteCurve& curve, double mu);

/// A vector field on a subset of the nodes.
struct ResidualField {
  std::vector<std::size_t> nodes;
  std::vector<Vec> values;
  double max_norm = 0;
};

/// W = nabla nabla (|tau|^{p-2} tau) - |tau|^{p-2} R(gamma', tau) gamma' with
/// tau = nabla_{gamma'} gamma', from composed projected second differences.
/// Open curves report nodes 4 .. n-5; closed curves every node of one period.
/// NearGeodesicError when p < 2 and |tau| < 1e-8 on a node used.
ResidualField el_residual(const DiscreteCurve& curve, double p);

/// d^2/ds^2 (dL/dgamma'') - d/ds (dL/dgamma') + dL/dgamma with
/// L = (1/p)|gamma''|^p in flat coordinates, by nested central differences
/// and complex-step partials. UnsupportedSpace off flat space.
ResidualField el_residual_lagrangian(const DiscreteCurve& curve, double p);

struct TangentialCheck {
  double max_tangential = 0;   ///< max |<W, gamma'>|
  double max_predicted = 0;    ///< max |(-2 + 1/p) d/ds k^p|
  double max_discrepancy = 0;  ///< max |<W, gamma'> - predicted|
};

TangentialCheck tangential_identity_check(const DiscreteCurve& curve, double p);

}  // namespace pbcurves
