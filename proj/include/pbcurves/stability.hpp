#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pbcurves/frenet.hpp"

namespace pbcurves {

enum class HessianMethod {
  ClosedForm2D,
  ClosedFormPNeHalf,
  ClosedFormHalf2D,
  ClosedForm3D,
  ClosedFormHalf3D,
  GeneralQuadraticForm,
  FiniteDifference,
};

std::string to_string(HessianMethod method);

struct StabilityReport {
  double value = 0;
  HessianMethod method = HessianMethod::GeneralQuadraticForm;
  double p = 0;
  int K = 0;
  double h = 0;
  std::optional<double> t_step;  ///< FiniteDifference only
};

/// Tangent vectors eta_i along a curve, one per node.
struct VariationField {
  std::vector<Vec> eta;
  bool normal = false;  ///< eta is orthogonal to T at every node
};

/// eta = N.
VariationField normal_variation(const DiscreteCurve& curve);
VariationField scaled(const VariationField& field, double factor);

/// Richardson-extrapolated Euler-Lagrange residual, evaluated on the curve
/// subsampled to a spacing near the criticality step and at twice that.
double criticality_residual(const DiscreteCurve& curve, double p);

/// NotCriticalError unless criticality_residual is below the tolerance.
void require_critical(const DiscreteCurve& curve, double p);

/// Every integral of the space-form second variation, with projected
/// fourth-order differences of eta and Simpson quadrature.
StabilityReport hessian_quadratic_form(const DiscreteCurve& curve, const VariationField& eta, double p);

/// int ((p-1)k^{p+2} + k'^2 k^{p-2} + (p-1)K^2 k^{p-2} - (2p+2)K k^p) ds.
/// k' comes from the profile when the curve carries one.
StabilityReport hessian_normal_2d(const DiscreteCurve& curve, double p);

/// int ((p-1)k^{p-2}(k^2+tau^2)^2 + (k'^2+tau'^2)k^{p-2} + (p-1)K^2 k^{p-2}
///      - (2p+2)K k^p + (2-2p)K tau^2 k^{p-2}) ds.
StabilityReport hessian_normal_3d(const DiscreteCurve& curve, double p);

/// int (-k^{5/2}/2 + k'^2 k^{-3/2} - K^2 k^{-3/2}/2 - 3K k^{1/2}) ds with the
/// analytic jet of the curve's profile.
StabilityReport hessian_half_2d(const DiscreteCurve& curve);

/// The p = 1/2 form on a curve with tau = a k:
/// int (-(1+a^2)^2 k^{5/2}/2 + (1+a^2) k'^2 k^{-3/2} - K^2 k^{-3/2}/2
///      - 3K k^{1/2} + a^2 K k^{1/2}) ds.
StabilityReport hessian_half_3d(const DiscreteCurve& curve);

/// -4 K length k0^p for a constant critical pair k0^2 + tau0^2 = K, p != 1/2.
double hessian_p_ne_half(double k0, int K, double length, double p, double tau0 = 0);

struct FdOptions {
  double t_step = 1e-3;
  bool richardson = false;
};

/// Central second difference of the energy along gamma_t = exp(t eta) with
/// the parameter frozen.
StabilityReport hessian_fd(const DiscreteCurve& curve, const VariationField& eta, double p,
                           const FdOptions& options = {});

}  // namespace pbcurves
