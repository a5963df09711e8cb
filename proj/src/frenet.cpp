#include "pbcurves/frenet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pbcurves/config.hpp"
#include "pbcurves/errors.hpp"
#include "pbcurves/stencil.hpp"

namespace pbcurves {

namespace {

struct State {
  Vec x;
  std::array<Vec, 3> F;
};

State axpy(const State& y, double a, const State& d, int m) {
  State out{y.x + a * d.x, {}};
  for (int j = 0; j < m; ++j) out.F[j] = y.F[j] + a * d.F[j];
  return out;
}

State rhs(const SpaceForm& space, const State& y, FrenetRates r, int m) {
  const int K = space.curvature();
  const Vec& T = y.F[0];
  const Vec& N = y.F[1];
  State d{T, {}};
  d.F[0] = r.k * N - K * space.dot(T, T) * y.x;
  d.F[1] = -r.k * T - K * space.dot(N, T) * y.x;
  if (m == 3) {
    const Vec& B = y.F[2];
    d.F[1] += r.tau * B;
    d.F[2] = -r.tau * N - K * space.dot(B, T) * y.x;
  }
  return d;
}

// Modified Gram-Schmidt in the tangent space at x.
void orthonormalize(const SpaceForm& space, const Vec& x, std::array<Vec, 3>& F, int m) {
  for (int j = 0; j < m; ++j) {
    Vec v = space.complete_tangent(x, F[j]);
    for (int i = 0; i < j; ++i) v -= space.dot(v, F[i]) * F[i];
    F[j] = v / space.norm(v);
  }
}

std::vector<Vec> complete_initial_frame(const SpaceForm& space, const Vec& x,
                                        const std::vector<Vec>& frame0) {
  const auto& tol = default_tolerances();
  const int dim = space.dim();
  if (frame0.empty() || static_cast<int>(frame0.size()) > dim)
    throw DomainError("initial frame must hold between 1 and " + std::to_string(dim) + " vectors");
  std::vector<Vec> F = frame0;
  for (const Vec& v : F)
    if (!space.is_tangent(x, v, tol.frame))
      throw DomainError("initial frame vector is not tangent at the start point");
  if (dim == 2 && F.size() == 1) F.push_back(space.rotate(x, F[0]));
  if (dim == 3 && F.size() == 1) {
    for (int axis = 0; axis < space.ambient_dim(); ++axis) {
      Vec e = space.complete_tangent(x, Vec::Unit(space.ambient_dim(), axis));
      e -= space.dot(e, F[0]) * F[0];
      if (space.norm(e) > 0.5) {
        F.push_back(e / space.norm(e));
        break;
      }
    }
  }
  if (dim == 3 && F.size() == 2) F.push_back(space.complete_frame(x, F[0], F[1]));
  for (std::size_t a = 0; a < F.size(); ++a)
    for (std::size_t b = a; b < F.size(); ++b) {
      const double target = a == b ? 1.0 : 0.0;
      if (std::abs(space.dot(F[a], F[b]) - target) > tol.frame)
        throw DomainError("initial frame is not orthonormal");
    }
  return F;
}

}  // namespace

double DiscreteCurve::step() const {
  return s.size() < 2 ? 0.0 : (s.back() - s.front()) / static_cast<double>(s.size() - 1);
}

std::vector<Vec> DiscreteCurve::frame(std::size_t i) const {
  std::vector<Vec> F{T.at(i), N.at(i)};
  if (!B.empty()) F.push_back(B.at(i));
  return F;
}

DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureFn& rates, const Vec& start,
                               const std::vector<Vec>& frame0, std::pair<double, double> span,
                               const FrenetOptions& options) {
  const auto& tol = default_tolerances();
  if (!(options.h > 0) || !std::isfinite(options.h)) throw DomainError("step h must be positive");
  const auto [s0, s1] = span;
  if (!(s1 > s0) || !std::isfinite(s0) || !std::isfinite(s1))
    throw DomainError("span must be a finite interval with s1 > s0");
  if (start.size() != space.ambient_dim() || !start.allFinite() || space.constraint_defect(start) > 1e-10)
    throw DomainError("start point does not lie on " + space.name());

  const int m = space.dim();
  State y{space.retract(start), {}};
  const std::vector<Vec> F0 = complete_initial_frame(space, y.x, frame0);
  for (int j = 0; j < m; ++j) y.F[j] = F0[j];

  const auto n = static_cast<std::size_t>(std::max(1.0, std::round((s1 - s0) / options.h)));
  const double h = (s1 - s0) / static_cast<double>(n);

  DiscreteCurve c;
  c.space = space;
  c.s.reserve(n + 1);
  auto record = [&](double s, FrenetRates r) {
    c.s.push_back(s);
    c.points.push_back(y.x);
    c.T.push_back(y.F[0]);
    c.N.push_back(y.F[1]);
    c.k.push_back(r.k);
    if (m == 3) {
      c.B.push_back(y.F[2]);
      c.tau.push_back(r.tau);
    }
  };

  FrenetRates r0 = rates(s0);
  record(s0, r0);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = s0 + static_cast<double>(i) * h;
    const double s_next = i + 1 == n ? s1 : s0 + static_cast<double>(i + 1) * h;
    const FrenetRates rm = rates(s + 0.5 * h);
    const FrenetRates r1 = rates(s_next);
    const State k1 = rhs(space, y, r0, m);
    const State k2 = rhs(space, axpy(y, 0.5 * h, k1, m), rm, m);
    const State k3 = rhs(space, axpy(y, 0.5 * h, k2, m), rm, m);
    const State k4 = rhs(space, axpy(y, h, k3, m), r1, m);
    State next = y;
    next.x += h / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x);
    for (int j = 0; j < m; ++j) next.F[j] += h / 6 * (k1.F[j] + 2 * k2.F[j] + 2 * k3.F[j] + k4.F[j]);
    if (!next.x.allFinite() || space.constraint_defect(next.x) > tol.step_drift)
      throw IntegrationError("constraint drift above " + std::to_string(tol.step_drift) +
                             " in the step ending at s = " + std::to_string(s_next));
    next.x = space.retract(next.x);
    orthonormalize(space, next.x, next.F, m);
    y = next;
    r0 = r1;
    record(s_next, r1);
  }

  if (options.closure_tol) {
    c.closure_tol = *options.closure_tol;
    c.closed = endpoint_gap(c) <= c.closure_tol;
  }
  return c;
}

DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureProfile& profile,
                               const Vec& start, const std::vector<Vec>& frame0,
                               std::pair<double, double> span, const FrenetOptions& options) {
  validate(profile);
  const auto fam_dim = family_dimension(profile.family);
  if (fam_dim && *fam_dim > space.dim())
    throw UnsupportedDimension(to_string(profile.family) + " needs a three-dimensional space");
  const bool has_torsion = space.dim() == 3 && (fam_dim == 3 || profile.family == Family::ConstantK);
  if (space.dim() == 2 && profile.family == Family::ConstantK && profile.constant("tau0") != 0)
    throw UnsupportedDimension("torsion tau0 requires a three-dimensional space");
  CurvatureFn rates = [&profile, has_torsion](double s) {
    return FrenetRates{eval_k(profile, s), has_torsion ? eval_tau(profile, s) : 0.0};
  };
  DiscreteCurve c = integrate_frenet(space, rates, start, frame0, span, options);
  c.profile = profile;
  return c;
}

DiscreteCurve integrate_frenet(const SpaceForm& space, const CurvatureProfile& profile,
                               std::pair<double, double> span, const FrenetOptions& options) {
  return integrate_frenet(space, profile, space.origin(), space.canonical_frame(), span, options);
}

RecoveredCurvature recompute_curvature(const DiscreteCurve& curve) {
  const std::size_t n = curve.size();
  if (n < 5) throw DomainError("recompute_curvature needs at least 5 nodes");
  const SpaceForm& space = curve.space;
  const double h = curve.step();
  const bool periodic = curve.closed;
  const auto d1 = differentiate(curve.points, h, 1, 4, periodic);
  const auto d2 = differentiate(curve.points, h, 2, 4, periodic);

  RecoveredCurvature out;
  out.k.resize(n);
  std::vector<Vec> normals(n), tangents(n);
  std::vector<double> speed(n), sign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec& x = curve.points[i];
    const Vec v = space.project(x, d1[i]);
    speed[i] = space.norm(v);
    tangents[i] = v / speed[i];
    Vec a = space.project(x, d2[i]);
    a -= space.dot(a, tangents[i]) * tangents[i];
    if (i < curve.T.size() && i < curve.N.size())
      sign[i] = space.orientation(x, curve.frame(i)) < 0 ? -1.0 : 1.0;
    if (space.dim() == 2) {
      out.k[i] = sign[i] * space.dot(a, space.rotate(x, tangents[i])) / (speed[i] * speed[i]);
    } else {
      const double an = space.norm(a);
      out.k[i] = an / (speed[i] * speed[i]);
      normals[i] = an > 0 ? Vec(a / an) : (i < curve.N.size() ? curve.N[i] : a);
    }
  }
  if (space.dim() == 3) {
    const auto dn = differentiate(normals, h, 1, 4, periodic);
    out.tau.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec& x = curve.points[i];
      const Vec b = sign[i] * space.complete_frame(x, tangents[i], normals[i]);
      out.tau[i] = space.dot(space.project(x, dn[i]), b) / speed[i];
    }
  }
  return out;
}

double endpoint_gap(const DiscreteCurve& curve) {
  if (curve.size() < 2) return 0.0;
  const std::size_t last = curve.size() - 1;
  double gap = (curve.points[last] - curve.points[0]).norm();
  for (const auto* field : {&curve.T, &curve.N, &curve.B})
    if (field->size() == curve.size()) gap = std::max(gap, ((*field)[last] - (*field)[0]).norm());
  return gap;
}

CurveDiagnostics curve_diagnostics(const DiscreteCurve& curve) {
  const SpaceForm& space = curve.space;
  CurveDiagnostics d;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    d.constraint_defect = std::max(d.constraint_defect, space.constraint_defect(curve.points[i]));
    if (i < curve.T.size()) d.arclength_defect = std::max(d.arclength_defect, std::abs(space.norm(curve.T[i]) - 1.0));
    if (i >= curve.T.size() || i >= curve.N.size()) continue;
    const auto F = curve.frame(i);
    for (std::size_t a = 0; a < F.size(); ++a) {
      if (a > 0) d.frame_defect = std::max(d.frame_defect, std::abs(space.norm(F[a]) - 1.0));
      for (std::size_t b = a + 1; b < F.size(); ++b)
        d.frame_defect = std::max(d.frame_defect, std::abs(space.dot(F[a], F[b])));
    }
  }
  d.closure_defect = curve.closed ? endpoint_gap(curve) : std::numeric_limits<double>::infinity();
  return d;
}

DiscreteCurve subsample(const DiscreteCurve& curve, std::size_t stride) {
  if (stride == 0) throw DomainError("subsample stride must be positive");
  DiscreteCurve out;
  out.space = curve.space;
  out.profile = curve.profile;
  out.closure_tol = curve.closure_tol;
  const std::size_t n = curve.size();
  out.closed = curve.closed && n > 0 && (n - 1) % stride == 0;
  auto pick = [&](const auto& src, auto& dst) {
    if (src.size() != n) return;
    for (std::size_t i = 0; i < n; i += stride) dst.push_back(src[i]);
  };
  pick(curve.s, out.s);
  pick(curve.points, out.points);
  pick(curve.T, out.T);
  pick(curve.N, out.N);
  pick(curve.B, out.B);
  pick(curve.k, out.k);
  pick(curve.tau, out.tau);
  return out;
}

}  // namespace pbcurves
