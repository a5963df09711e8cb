#include "pbcurves/stability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pbcurves/config.hpp"
#include "pbcurves/energy.hpp"
#include "pbcurves/errors.hpp"
#include "pbcurves/stencil.hpp"

namespace pbcurves {

namespace {

void check_exponent(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw DomainError("exponent p must be positive and finite");
}

void check_variation(const DiscreteCurve& curve, const VariationField& field) {
  if (field.eta.size() != curve.size())
    throw DomainError("variation field has " + std::to_string(field.eta.size()) + " vectors for " +
                      std::to_string(curve.size()) + " nodes");
  const double tol = default_tolerances().tangent;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    if (!curve.space.is_tangent(curve.points[i], field.eta[i], tol))
      throw DomainError("variation vector is not tangent at s = " + std::to_string(curve.s[i]));
    if (field.normal && i < curve.T.size() &&
        std::abs(curve.space.dot(field.eta[i], curve.T[i])) > tol * std::max(1.0, field.eta[i].norm()))
      throw DomainError("variation marked normal has a tangential component at s = " +
                        std::to_string(curve.s[i]));
  }
}

void check_positive(const DiscreteCurve& curve, const std::vector<double>& k) {
  for (std::size_t i = 0; i < k.size(); ++i)
    if (!(k[i] > 0))
      throw DomainError("geodesic curvature must be positive, found " + std::to_string(k[i]) +
                        " at s = " + std::to_string(curve.s[i]));
}

// Derivative of a stored nodal quantity, analytic when the profile provides it.
std::vector<double> node_derivative(const DiscreteCurve& curve, const std::vector<double>& f) {
  return differentiate(f, curve.step(), 1, 4, curve.closed);
}

struct HalfJet {
  std::vector<double> k, dk, tau, dtau;
};

HalfJet profile_jet(const DiscreteCurve& curve, bool with_torsion) {
  if (!curve.profile) throw DomainError("the p = 1/2 closed forms need a profile-backed curve");
  const CurvatureProfile& profile = *curve.profile;
  const int K = curve.space.curvature();
  if (auto fk = family_curvature(profile.family); fk && *fk != K)
    throw NotCriticalError(to_string(profile.family) + " profiles are critical only in curvature " +
                           std::to_string(*fk) + " spaces");
  HalfJet out;
  try {
    for (double s : curve.s) {
      const CurvatureJet j = curvature_jet(profile, s);
      if (!(j.k > 0))
        throw DomainError("profile curvature must be positive, found " + std::to_string(j.k) +
                          " at s = " + std::to_string(s));
      double residual;
      if (with_torsion) {
        const TorsionJet t = torsion_jet(profile, s);
        const auto [r1, r2] = residual_3d(profile, s, K);
        residual = std::max(std::abs(r1), std::abs(r2));
        out.tau.push_back(t.tau);
        out.dtau.push_back(t.dtau);
      } else {
        residual = std::abs(residual_surface(profile, s, K));
      }
      if (residual > 1e-8)
        throw NotCriticalError("profile does not solve the p = 1/2 equations in " +
                               curve.space.name() + " (residual " + std::to_string(residual) + ")");
      out.k.push_back(j.k);
      out.dk.push_back(j.dk);
    }
  } catch (const PoleError& e) {
    throw DomainError(e.what());
  }
  return out;
}

StabilityReport report(double value, HessianMethod method, double p, const DiscreteCurve& curve) {
  return {value, method, p, curve.space.curvature(), curve.step(), std::nullopt};
}

}  // namespace

std::string to_string(HessianMethod method) {
  switch (method) {
    case HessianMethod::ClosedForm2D: return "closed-form-2d";
    case HessianMethod::ClosedFormPNeHalf: return "closed-form-p-ne-half";
    case HessianMethod::ClosedFormHalf2D: return "closed-form-half-2d";
    case HessianMethod::ClosedForm3D: return "closed-form-3d";
    case HessianMethod::ClosedFormHalf3D: return "closed-form-half-3d";
    case HessianMethod::GeneralQuadraticForm: return "general-quadratic-form";
    case HessianMethod::FiniteDifference: return "finite-difference";
  }
  return "unknown";
}

VariationField normal_variation(const DiscreteCurve& curve) {
  if (curve.N.size() != curve.size()) throw DomainError("curve carries no normal field");
  return {curve.N, true};
}

VariationField scaled(const VariationField& field, double factor) {
  VariationField out = field;
  for (Vec& v : out.eta) v *= factor;
  return out;
}

double criticality_residual(const DiscreteCurve& curve, double p) {
  const auto& tol = default_tolerances();
  const std::size_t intervals = curve.size() > 0 ? curve.size() - 1 : 0;
  const double h = curve.step();
  auto stride = static_cast<std::size_t>(std::max(1.0, std::round(tol.criticality_step / h)));
  // Keep at least 16 coarse intervals so the open window is not empty.
  stride = std::max<std::size_t>(1, std::min(stride, intervals / 32));
  const ResidualField fine = el_residual(subsample(curve, stride), p);
  const ResidualField coarse = el_residual(subsample(curve, 2 * stride), p);

  std::map<std::size_t, std::size_t> fine_slot;
  for (std::size_t r = 0; r < fine.nodes.size(); ++r) fine_slot[fine.nodes[r]] = r;
  double worst = 0;
  for (std::size_t r = 0; r < coarse.nodes.size(); ++r) {
    auto it = fine_slot.find(2 * coarse.nodes[r]);
    if (it == fine_slot.end()) continue;
    const Vec& x = curve.points[coarse.nodes[r] * 2 * stride];
    const Vec w = (4 * fine.values[it->second] - coarse.values[r]) / 3;
    worst = std::max(worst, curve.space.norm(curve.space.project(x, w)));
  }
  return worst;
}

void require_critical(const DiscreteCurve& curve, double p) {
  const double r = criticality_residual(curve, p);
  const double tol = default_tolerances().criticality;
  if (!(r <= tol))
    throw NotCriticalError("curve is not critical for p = " + std::to_string(p) +
                           ": extrapolated Euler-Lagrange residual " + std::to_string(r) + " > " +
                           std::to_string(tol));
}

StabilityReport hessian_quadratic_form(const DiscreteCurve& curve, const VariationField& field,
                                       double p) {
  check_exponent(p);
  check_variation(curve, field);
  require_critical(curve, p);
  const SpaceForm& space = curve.space;
  const double K = space.curvature();
  const double h = curve.step();
  const bool periodic = curve.closed;
  const std::size_t n = curve.size();

  const auto d1x = differentiate(curve.points, h, 1, 4, periodic);
  const auto d2x = differentiate(curve.points, h, 2, 4, periodic);
  const auto d1e = differentiate(field.eta, h, 1, 4, periodic);
  const auto d2e = differentiate(field.eta, h, 2, 4, periodic);

  std::vector<Vec> vel(n), A(n), V(n);
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = curve.points[i];
    vel[i] = space.project(x, d1x[i]);
    A[i] = space.project(x, d2x[i]);
    k[i] = space.norm(A[i]);
    if (k[i] < default_tolerances().near_geodesic)
      throw NearGeodesicError("tension vanishes at s = " + std::to_string(curve.s[i]));
    V[i] = std::pow(k[i], p - 2) * A[i];
  }
  const auto d1V = differentiate(V, h, 1, 4, periodic);

  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = curve.points[i];
    const Vec& g = vel[i];
    const Vec& a = A[i];
    const Vec& e = field.eta[i];
    const Vec De = space.project(x, d1e[i]);
    const Vec DDe = space.project(x, d2e[i]) + K * space.dot(e, g) * g;
    const Vec DV = space.project(x, d1V[i]);
    auto dot = [&](const Vec& u, const Vec& v) { return space.dot(u, v); };
    const double kp2 = std::pow(k[i], p - 2);
    const double kp4 = std::pow(k[i], p - 4);
    const double gg = dot(g, g);
    const double ddea = dot(DDe, a);
    const double eg = dot(e, g), ga = dot(g, a), ae = dot(a, e);
    const double mixed = eg * ga - gg * ae;
    const Vec sweep = eg * g - gg * e;

    double t = 0;
    t += (p - 2) * kp4 * ddea * ddea;
    t += kp2 * dot(DDe, DDe);
    t += (p - 2) * K * K * kp4 * mixed * mixed;
    t += K * K * kp2 * dot(sweep, sweep);
    t += K * (dot(e, e) * dot(g, DV) - eg * dot(e, DV));
    t += -2 * K * kp2 * (ga * dot(De, e) - dot(De, g) * ae);
    t += 2 * (p - 2) * K * ddea * kp4 * (gg * ae - eg * ga);
    t += -2 * K * kp2 * (dot(g, DDe) * eg - gg * dot(DDe, e));
    t += -K * kp2 * (dot(a, De) * eg - dot(De, g) * ae);
    f[i] = t;
  }
  return report(simpson(f, h), HessianMethod::GeneralQuadraticForm, p, curve);
}

StabilityReport hessian_normal_2d(const DiscreteCurve& curve, double p) {
  check_exponent(p);
  if (curve.space.dim() != 2) throw UnsupportedDimension("hessian_normal_2d needs a surface");
  check_positive(curve, curve.k);
  require_critical(curve, p);
  const double K = curve.space.curvature();
  std::vector<double> dk;
  if (curve.profile) {
    for (double s : curve.s) dk.push_back(curvature_jet(*curve.profile, s).dk);
  } else {
    dk = node_derivative(curve, curve.k);
  }
  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = curve.k[i];
    f[i] = (p - 1) * std::pow(k, p + 2) + dk[i] * dk[i] * std::pow(k, p - 2) +
           (p - 1) * K * K * std::pow(k, p - 2) - (2 * p + 2) * K * std::pow(k, p);
  }
  return report(simpson(f, curve.step()), HessianMethod::ClosedForm2D, p, curve);
}

StabilityReport hessian_normal_3d(const DiscreteCurve& curve, double p) {
  check_exponent(p);
  if (curve.space.dim() != 3) throw UnsupportedDimension("hessian_normal_3d needs a 3-dimensional space");
  check_positive(curve, curve.k);
  require_critical(curve, p);
  const double K = curve.space.curvature();
  std::vector<double> dk, dtau;
  if (curve.profile) {
    const auto fam_dim = family_dimension(curve.profile->family);
    const bool torsion = fam_dim == 3 || curve.profile->family == Family::ConstantK;
    for (double s : curve.s) {
      dk.push_back(curvature_jet(*curve.profile, s).dk);
      dtau.push_back(torsion ? torsion_jet(*curve.profile, s).dtau : 0.0);
    }
  } else {
    dk = node_derivative(curve, curve.k);
    dtau = node_derivative(curve, curve.tau);
  }
  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = curve.k[i], tau = curve.tau[i];
    const double kp2 = std::pow(k, p - 2);
    const double sum = k * k + tau * tau;
    f[i] = (p - 1) * kp2 * sum * sum + (dk[i] * dk[i] + dtau[i] * dtau[i]) * kp2 +
           (p - 1) * K * K * kp2 - (2 * p + 2) * K * std::pow(k, p) + (2 - 2 * p) * K * tau * tau * kp2;
  }
  return report(simpson(f, curve.step()), HessianMethod::ClosedForm3D, p, curve);
}

StabilityReport hessian_half_2d(const DiscreteCurve& curve) {
  if (curve.space.dim() != 2) throw UnsupportedDimension("hessian_half_2d needs a surface");
  const HalfJet j = profile_jet(curve, false);
  const double K = curve.space.curvature();
  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = j.k[i], dk = j.dk[i];
    f[i] = -0.5 * std::pow(k, 2.5) + dk * dk * std::pow(k, -1.5) - 0.5 * K * K * std::pow(k, -1.5) -
           3 * K * std::sqrt(k);
  }
  return report(simpson(f, curve.step()), HessianMethod::ClosedFormHalf2D, 0.5, curve);
}

StabilityReport hessian_half_3d(const DiscreteCurve& curve) {
  if (curve.space.dim() != 3) throw UnsupportedDimension("hessian_half_3d needs a 3-dimensional space");
  const HalfJet j = profile_jet(curve, true);
  const double K = curve.space.curvature();
  const double a = j.tau.front() / j.k.front();
  const double b = 1 + a * a;
  std::vector<double> f(curve.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = j.k[i], dk = j.dk[i];
    f[i] = -0.5 * b * b * std::pow(k, 2.5) + b * dk * dk * std::pow(k, -1.5) -
           0.5 * K * K * std::pow(k, -1.5) - 3 * K * std::sqrt(k) + a * a * K * std::sqrt(k);
  }
  return report(simpson(f, curve.step()), HessianMethod::ClosedFormHalf3D, 0.5, curve);
}

double hessian_p_ne_half(double k0, int K, double length, double p, double tau0) {
  check_exponent(p);
  if (p == 0.5) throw DomainError("hessian_p_ne_half is the p != 1/2 closed form");
  if (!(length >= 0)) throw DomainError("length must be non-negative");
  if (!(k0 > 0) || std::abs(k0 * k0 + tau0 * tau0 - K) > default_tolerances().relation)
    throw NotCriticalError("constant curve is critical only when k0 > 0 and k0^2 + tau0^2 = K");
  return -4.0 * K * length * std::pow(k0, p);
}

StabilityReport hessian_fd(const DiscreteCurve& curve, const VariationField& field, double p,
                           const FdOptions& options) {
  check_exponent(p);
  check_variation(curve, field);
  if (!(options.t_step > 0)) throw DomainError("t_step must be positive");
  const SpaceForm& space = curve.space;
  const double h = curve.step();

  auto energy_at = [&](double t) {
    std::vector<Vec> pts(curve.size());
    for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = space.exp(curve.points[i], t * field.eta[i]);
    const EnergyResult r = energy_p_biharmonic(space, pts, h, curve.closed, p);
    if (r.near_geodesic)
      throw NearGeodesicError("varied curve at t = " + std::to_string(t) + " is nearly geodesic");
    return r.value;
  };
  const double e0 = energy_at(0.0);
  auto second = [&](double t) { return (energy_at(t) - 2 * e0 + energy_at(-t)) / (t * t); };

  double value = second(options.t_step);
  if (options.richardson) value = (4 * second(0.5 * options.t_step) - value) / 3;
  StabilityReport r = report(value, HessianMethod::FiniteDifference, p, curve);
  r.t_step = options.t_step;
  return r;
}

}  // namespace pbcurves
