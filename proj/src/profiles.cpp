#include "pbcurves/profiles.hpp"

#include <array>
#include <cmath>
#include <set>

#include "pbcurves/config.hpp"
#include "pbcurves/errors.hpp"

namespace pbcurves {

namespace {

// k = num / den with both factors differentiated by hand.
struct Quotient {
  double num, dnum, ddnum;
  double den, dden, ddden;
};

double required(const CurvatureProfile& profile, const char* name) {
  auto it = profile.constants.find(name);
  if (it == profile.constants.end())
    throw DomainError(to_string(profile.family) + " profile needs constant " + name);
  return it->second;
}

bool is_3d(Family family) {
  return family == Family::Flat3D || family == Family::Sphere3D || family == Family::Hyperbolic3D;
}

double sphere_root(double radicand) {
  // validate() admits radicands down to -1e-12 so the degenerate constant case
  // survives rounding in b2^2 - 4 - 4 b1^2.
  return std::sqrt(std::max(0.0, radicand));
}

Quotient quotient(const CurvatureProfile& profile, double s) {
  const auto c = [&](const char* name) { return profile.constant(name); };
  switch (profile.family) {
    case Family::Flat2D: {
      const double c1 = required(profile, "c1");
      const double u = c("c2") + s;
      return {c1, 0, 0, c1 * c1 * u * u + 1.0, 2 * c1 * c1 * u, 2 * c1 * c1};
    }
    case Family::Sphere2D: {
      const double c1 = required(profile, "c1");
      const double shift = profile.variant == ProfileVariant::SphereRootTypo ? 1.0 : 4.0;
      const double R = sphere_root(c1 * c1 - shift);
      const double u = c("c3") + s;
      const double sn = std::sin(2 * u), cs = std::cos(2 * u);
      return {2, 0, 0, c1 + R * sn, 2 * R * cs, -4 * R * sn};
    }
    case Family::Hyperbolic2D: {
      const double c1 = required(profile, "c1");
      const double E = std::exp(2 * (c("c4") + s));
      return {4 * E,          8 * E,  16 * E, (c1 - E) * (c1 - E) + 4, 4 * E * E - 4 * c1 * E,
              16 * E * E - 8 * c1 * E};
    }
    case Family::Flat3D: {
      const double b1 = required(profile, "b1");
      const double b4 = required(profile, "b4");
      const double u = s - c("b5");
      return {b4, 0, 0, b4 * b4 * u * u + 1 + b1 * b1, 2 * b4 * b4 * u, 2 * b4 * b4};
    }
    case Family::Sphere3D: {
      const double b1 = required(profile, "b1");
      const double b2 = required(profile, "b2");
      const double R = sphere_root(b2 * b2 - 4 - 4 * b1 * b1);
      const double u = s + c("b3");
      const double sn = std::sin(2 * u), cs = std::cos(2 * u);
      return {2, 0, 0, b2 + R * sn, 2 * R * cs, -4 * R * sn};
    }
    case Family::Hyperbolic3D: {
      const double b1 = required(profile, "b1");
      const double b6 = required(profile, "b6");
      const double u = c("b7") + s;
      const double F = std::exp(-2 * u);
      const double sign = profile.variant == ProfileVariant::HyperbolicExponentFlip ? 1.0 : -1.0;
      const double G = std::exp(sign * 2 * u);
      const double dG = sign * 2 * G, ddG = 4 * G;
      const double a = b6 + G;
      return {4 * F, -8 * F, 16 * F, a * a + 4 + 4 * b1 * b1, 2 * a * dG, 2 * dG * dG + 2 * a * ddG};
    }
    case Family::ConstantK:
      return {required(profile, "k0"), 0, 0, 1, 0, 0};
  }
  return {0, 0, 0, 1, 0, 0};
}

const std::array<std::pair<Family, const char*>, 7> kFamilyNames{{
    {Family::Flat2D, "flat2d"},
    {Family::Sphere2D, "sphere2d"},
    {Family::Hyperbolic2D, "hyperbolic2d"},
    {Family::Flat3D, "flat3d"},
    {Family::Sphere3D, "sphere3d"},
    {Family::Hyperbolic3D, "hyperbolic3d"},
    {Family::ConstantK, "constk"},
}};

const std::array<std::pair<ProfileVariant, const char*>, 4> kVariantNames{{
    {ProfileVariant::Canonical, "canonical"},
    {ProfileVariant::SphereRootTypo, "sphere-root-typo"},
    {ProfileVariant::HyperbolicExponentFlip, "hyperbolic-exponent-flip"},
    {ProfileVariant::TorsionReciprocal, "torsion-reciprocal"},
}};

std::set<std::string> allowed_constants(Family family) {
  switch (family) {
    case Family::Flat2D: return {"c1", "c2"};
    case Family::Sphere2D: return {"c1", "c3"};
    case Family::Hyperbolic2D: return {"c1", "c4"};
    case Family::Flat3D: return {"b1", "b4", "b5"};
    case Family::Sphere3D: return {"b1", "b2", "b3"};
    case Family::Hyperbolic3D: return {"b1", "b6", "b7"};
    case Family::ConstantK: return {"k0", "tau0", "c1"};
  }
  return {};
}

}  // namespace

double CurvatureProfile::constant(std::string_view name, double fallback) const {
  auto it = constants.find(std::string(name));
  return it == constants.end() ? fallback : it->second;
}

CurvatureProfile CurvatureProfile::with(std::string_view name, double value) const {
  CurvatureProfile out = *this;
  out.constants[std::string(name)] = value;
  return out;
}

std::string to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames)
    if (f == family) return name;
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (const auto& [f, n] : kFamilyNames)
    if (name == n) return f;
  return std::nullopt;
}

std::string to_string(ProfileVariant variant) {
  for (const auto& [v, name] : kVariantNames)
    if (v == variant) return name;
  return "unknown";
}

std::optional<ProfileVariant> parse_variant(std::string_view name) {
  for (const auto& [v, n] : kVariantNames)
    if (name == n) return v;
  return std::nullopt;
}

std::optional<int> family_dimension(Family family) {
  if (family == Family::ConstantK) return std::nullopt;
  return is_3d(family) ? 3 : 2;
}

std::optional<int> family_curvature(Family family) {
  switch (family) {
    case Family::Flat2D:
    case Family::Flat3D: return 0;
    case Family::Sphere2D:
    case Family::Sphere3D: return 1;
    case Family::Hyperbolic2D:
    case Family::Hyperbolic3D: return -1;
    case Family::ConstantK: return std::nullopt;
  }
  return std::nullopt;
}

void validate(const CurvatureProfile& profile) {
  const std::string fam = to_string(profile.family);
  if (!(profile.p > 0) || !std::isfinite(profile.p))
    throw DomainError("exponent p must be positive and finite");

  const auto allowed = allowed_constants(profile.family);
  for (const auto& [name, value] : profile.constants) {
    if (!allowed.count(name)) throw DomainError(fam + " profile has no constant '" + name + "'");
    if (!std::isfinite(value)) throw DomainError(fam + " constant '" + name + "' is not finite");
  }

  switch (profile.variant) {
    case ProfileVariant::Canonical: break;
    case ProfileVariant::SphereRootTypo:
      if (profile.family != Family::Sphere2D)
        throw DomainError("variant sphere-root-typo applies to sphere2d only");
      break;
    case ProfileVariant::HyperbolicExponentFlip:
      if (profile.family != Family::Hyperbolic3D)
        throw DomainError("variant hyperbolic-exponent-flip applies to hyperbolic3d only");
      break;
    case ProfileVariant::TorsionReciprocal:
      if (!is_3d(profile.family))
        throw DomainError("variant torsion-reciprocal applies to three-dimensional families only");
      break;
  }

  switch (profile.family) {
    case Family::Flat2D:
      if (!(required(profile, "c1") > 0)) throw DomainError("flat2d requires c1 > 0");
      break;
    case Family::Sphere2D: {
      const double c1 = required(profile, "c1");
      const double floor = profile.variant == ProfileVariant::SphereRootTypo ? 1.0 : 2.0;
      if (!(c1 >= floor))
        throw DomainError(floor == 2.0 ? "sphere2d requires c1 >= 2" : "sphere2d typo variant requires c1 >= 1");
      break;
    }
    case Family::Hyperbolic2D: required(profile, "c1"); break;
    case Family::Flat3D:
      if (required(profile, "b1") == 0) throw DomainError("flat3d requires b1 != 0");
      if (!(required(profile, "b4") > 0)) throw DomainError("flat3d requires b4 > 0");
      break;
    case Family::Sphere3D: {
      const double b1 = required(profile, "b1");
      const double b2 = required(profile, "b2");
      if (b1 == 0) throw DomainError("sphere3d requires b1 != 0");
      if (!(b2 > 0) || b2 * b2 - 4 - 4 * b1 * b1 < -1e-12)
        throw DomainError("sphere3d requires b2 > 0 and b2^2 >= 4 + 4 b1^2");
      break;
    }
    case Family::Hyperbolic3D:
      if (required(profile, "b1") == 0) throw DomainError("hyperbolic3d requires b1 != 0");
      required(profile, "b6");
      break;
    case Family::ConstantK: required(profile, "k0"); break;
  }
}

CurvatureJet curvature_jet(const CurvatureProfile& profile, double s) {
  const Quotient q = quotient(profile, s);
  if (std::abs(q.den) < default_tolerances().pole || !std::isfinite(q.den))
    throw PoleError(to_string(profile.family) + " profile has a pole at s = " + std::to_string(s));
  const double D = q.den;
  const double k = q.num / D;
  const double cross = q.dnum * D - q.num * q.dden;
  const double dk = cross / (D * D);
  const double ddk = (q.ddnum * D - q.num * q.ddden) / (D * D) - 2 * q.dden * cross / (D * D * D);
  return {k, dk, ddk};
}

TorsionJet torsion_jet(const CurvatureProfile& profile, double s) {
  if (profile.family == Family::ConstantK) return {profile.constant("tau0"), 0};
  if (!is_3d(profile.family))
    throw UnsupportedDimension(to_string(profile.family) + " is a planar family without torsion");
  const CurvatureJet j = curvature_jet(profile, s);
  const double b1 = required(profile, "b1");
  const double factor = profile.variant == ProfileVariant::TorsionReciprocal ? 1.0 / b1 : b1;
  return {factor * j.k, factor * j.dk};
}

double eval_k(const CurvatureProfile& profile, double s) { return curvature_jet(profile, s).k; }

double eval_tau(const CurvatureProfile& profile, double s) { return torsion_jet(profile, s).tau; }

double integration_constant(const CurvatureProfile& profile) {
  switch (profile.family) {
    case Family::Flat2D:
    case Family::Sphere2D:
    case Family::Hyperbolic2D: return required(profile, "c1");
    case Family::Flat3D: return required(profile, "b4");
    case Family::Sphere3D: return required(profile, "b2");
    case Family::Hyperbolic3D: return -required(profile, "b6");
    case Family::ConstantK: return profile.constant("c1");
  }
  return 0;
}

double residual_surface(const CurvatureProfile& profile, double s, int K) {
  const CurvatureJet j = curvature_jet(profile, s);
  return 0.75 * j.dk * j.dk - 0.5 * j.ddk * j.k - j.k * j.k * j.k * j.k + K * j.k * j.k;
}

double residual_h(const CurvatureProfile& profile, double s, int K) {
  const CurvatureJet j = curvature_jet(profile, s);
  if (!(j.k > 0)) throw DomainError("residual_h needs k > 0 (h = 1/(2k))");
  const double h = 0.5 / j.k;
  const double dh = -0.5 * j.dk / (j.k * j.k);
  double b1_sq = 0;
  if (is_3d(profile.family)) {
    const double b1 = required(profile, "b1");
    b1_sq = b1 * b1;
  } else if (profile.family == Family::ConstantK) {
    const double ratio = profile.constant("tau0") / j.k;
    b1_sq = ratio * ratio;
  }
  const double c = integration_constant(profile);
  return dh * dh + 4 * K * h * h - 2 * c * h + 1 + b1_sq;
}

std::pair<double, double> residual_3d(const CurvatureProfile& profile, double s, int K) {
  const CurvatureJet j = curvature_jet(profile, s);
  const TorsionJet t = torsion_jet(profile, s);
  const double k2 = j.k * j.k;
  const double first = 0.75 * j.dk * j.dk - 0.5 * j.k * j.ddk - k2 * k2 - t.tau * t.tau * k2 + K * k2;
  const double second = -j.dk * t.tau + j.k * t.dtau;
  return {first, second};
}

std::string to_string(Feasibility verdict) {
  switch (verdict) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::GeodesicOnly: return "geodesic-only";
    case Feasibility::Infeasible: return "infeasible";
    case Feasibility::Geodesic: return "geodesic";
  }
  return "unknown";
}

Feasibility classify_biharmonic_const(double k0, double tau0, int K) {
  if (!(k0 >= 0)) throw DomainError("classify_biharmonic_const needs k0 >= 0");
  if (k0 == 0) return Feasibility::Geodesic;
  if (K <= 0) return Feasibility::GeodesicOnly;
  return std::abs(k0 * k0 + tau0 * tau0 - K) <= default_tolerances().relation ? Feasibility::Feasible
                                                                               : Feasibility::Infeasible;
}

}  // namespace pbcurves
