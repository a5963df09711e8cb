#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace pbcurves {

/// Closed-form curvature families of proper 1/2-biharmonic curves, plus the
/// constant-curvature (and constant-torsion) case.
enum class Family { Flat2D, Sphere2D, Hyperbolic2D, Flat3D, Sphere3D, Hyperbolic3D, ConstantK };

/// Alternative readings of the closed forms. Only Canonical solves the
/// governing equations; the others exist so the residual suite can show that
/// they do not.
enum class ProfileVariant {
  Canonical,
  SphereRootTypo,          ///< Sphere2D with sqrt(c1^2 - 1) in place of sqrt(c1^2 - 4)
  HyperbolicExponentFlip,  ///< Hyperbolic3D with e^{+2(b7+s)} in the denominator
  TorsionReciprocal,       ///< 3D families with tau = k / b1 instead of tau = b1 k
};

/// One member of a curvature family.
///
/// Constants by family (missing shift constants default to 0):
///   Flat2D        k = c1 / (c1^2 (c2+s)^2 + 1)
///   Sphere2D      k = 2 / (c1 + sqrt(c1^2-4) sin 2(c3+s))
///   Hyperbolic2D  k = 4 e^{2(c4+s)} / ((c1 - e^{2(c4+s)})^2 + 4)
///   Flat3D        k = b4 / (b4^2 (s-b5)^2 + 1 + b1^2)
///   Sphere3D      k = 2 / (b2 + sqrt(b2^2-4-4b1^2) sin 2(s+b3))
///   Hyperbolic3D  k = 4 e^{-2(b7+s)} / ((b6 + e^{-2(b7+s)})^2 + 4 + 4b1^2)
///   ConstantK     k = k0, tau = tau0; optional c1 enters residual_h only
/// On the three-dimensional families the torsion is tau = b1 k.
struct CurvatureProfile {
  Family family = Family::ConstantK;
  std::map<std::string, double> constants;
  double p = 0.5;
  ProfileVariant variant = ProfileVariant::Canonical;

  double constant(std::string_view name, double fallback = 0.0) const;
  CurvatureProfile with(std::string_view name, double value) const;
};

/// k and its first two arclength derivatives.
struct CurvatureJet {
  double k = 0, dk = 0, ddk = 0;
};

struct TorsionJet {
  double tau = 0, dtau = 0;
};

std::string to_string(Family family);
std::optional<Family> parse_family(std::string_view name);
std::string to_string(ProfileVariant variant);
std::optional<ProfileVariant> parse_variant(std::string_view name);

/// 2 or 3 for the closed-form families, nullopt for ConstantK.
std::optional<int> family_dimension(Family family);
/// The space-form curvature a closed-form family solves; nullopt for ConstantK.
std::optional<int> family_curvature(Family family);

/// Checks the family invariants (required constants present and finite,
/// c1 >= 2, b2^2 >= 4 + 4 b1^2, b1 != 0, p > 0, variant/family match).
/// Throws DomainError with a message naming the violated condition.
void validate(const CurvatureProfile& profile);

/// Analytic k, k', k''. Throws PoleError when the closed-form denominator
/// vanishes to within the pole tolerance.
CurvatureJet curvature_jet(const CurvatureProfile& profile, double s);
TorsionJet torsion_jet(const CurvatureProfile& profile, double s);

double eval_k(const CurvatureProfile& profile, double s);
/// Torsion; UnsupportedDimension on two-dimensional families.
double eval_tau(const CurvatureProfile& profile, double s);

/// Integration constant of the first integral h'^2 + 4Kh^2 - 2ch + 1 + b1^2 = 0
/// (c1 on 2D families, b2 on 3D families; b2 = b4 for Flat3D and b2 = -b6 for
/// Hyperbolic3D).
double integration_constant(const CurvatureProfile& profile);

/// (3/4) k'^2 - (1/2) k'' k - k^4 + K k^2.
double residual_surface(const CurvatureProfile& profile, double s, int K);

/// h'^2 + 4K h^2 - 2c h + 1 + b1^2 with h = 1/(2k) (b1 = 0 on 2D families).
/// DomainError when k <= 0.
double residual_h(const CurvatureProfile& profile, double s, int K);

/// Both equations of the p = 1/2 Frenet system in a 3D space form:
/// ((3/4) k'^2 - (1/2) k k'' - k^4 - tau^2 k^2 + K k^2,  -k' tau + k tau').
std::pair<double, double> residual_3d(const CurvatureProfile& profile, double s, int K);

enum class Feasibility {
  Feasible,      ///< k0 > 0 and k0^2 + tau0^2 = K
  GeodesicOnly,  ///< K <= 0: only geodesics are p-biharmonic
  Infeasible,    ///< K > 0 but the relation fails
  Geodesic,      ///< k0 = 0 requested
};

std::string to_string(Feasibility verdict);

/// Classifies a constant (k0, tau0) pair as a p-biharmonic curve (p != 1/2)
/// in a space form of curvature K.
Feasibility classify_biharmonic_const(double k0, double tau0, int K);

}  // namespace pbcurves
