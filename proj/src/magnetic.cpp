#include "pbcurves/magnetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pbcurves/config.hpp"
#include "pbcurves/energy.hpp"
#include "pbcurves/errors.hpp"

namespace pbcurves {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double bilinear(const SampledField& f, double u, double v) {
  if (f.nu < 2 || f.nv < 2 || f.values.size() != f.nu * f.nv)
    throw DomainError("sampled field needs at least a 2x2 grid with nu*nv values");
  if (u < f.u0 || u > f.u1 || v < f.v0 || v > f.v1)
    throw DomainError("position (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") lies outside the sampled field");
  const double gu = (u - f.u0) / (f.u1 - f.u0) * static_cast<double>(f.nu - 1);
  const double gv = (v - f.v0) / (f.v1 - f.v0) * static_cast<double>(f.nv - 1);
  const auto iu = std::min(static_cast<std::size_t>(gu), f.nu - 2);
  const auto iv = std::min(static_cast<std::size_t>(gv), f.nv - 2);
  const double a = gu - static_cast<double>(iu), b = gv - static_cast<double>(iv);
  auto at = [&](std::size_t i, std::size_t j) { return f.values[i * f.nv + j]; };
  return (1 - a) * (1 - b) * at(iu, iv) + a * (1 - b) * at(iu + 1, iv) + (1 - a) * b * at(iu, iv + 1) +
         a * b * at(iu + 1, iv + 1);
}

struct Phase {
  Vec x, v;
};

Phase advance(const MagneticProblem& pb, const Phase& y, double s, double dt) {
  const SpaceForm& space = pb.space;
  const int K = space.curvature();
  auto f = [&](const Phase& z, double t) {
    const double k = prescribed_curvature(pb, z.x, t);
    return Phase{z.v, k * space.rotate(z.x, z.v) - K * space.tangent_dot(z.x, z.v, z.v) * z.x};
  };
  auto plus = [](const Phase& a, double c, const Phase& d) { return Phase{a.x + c * d.x, a.v + c * d.v}; };
  const Phase k1 = f(y, s);
  const Phase k2 = f(plus(y, 0.5 * dt, k1), s + 0.5 * dt);
  const Phase k3 = f(plus(y, 0.5 * dt, k2), s + 0.5 * dt);
  const Phase k4 = f(plus(y, dt, k3), s + dt);
  Phase next{y.x + dt / 6 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
             y.v + dt / 6 * (k1.v + 2 * k2.v + 2 * k3.v + k4.v)};
  if (!next.x.allFinite() || space.constraint_defect(next.x) > default_tolerances().step_drift)
    throw IntegrationError("constraint drift too large in magnetic step at s = " + std::to_string(s));
  next.x = space.retract(next.x);
  next.v = space.complete_tangent(next.x, next.v);
  return next;
}

double phase_defect(const Phase& a, const Phase& b) { return (a.x - b.x).norm() + (a.v - b.v).norm(); }

Vec unit_tangent(const SpaceForm& space, const Vec& x) {
  for (int axis = 0; axis < space.ambient_dim(); ++axis) {
    Vec e = space.complete_tangent(x, Vec::Unit(space.ambient_dim(), axis));
    if (space.norm(e) > 0.3) return e / space.norm(e);
  }
  return Vec::Unit(space.ambient_dim(), 0);
}

}  // namespace

std::pair<double, double> chart_coordinates(const SpaceForm& space, const Vec& x) {
  if (space.dim() != 2) throw UnsupportedDimension("magnetic problems live on surfaces");
  if (space.model() == Model::RoundSphere)
    return {std::atan2(x[1], x[0]), std::asin(std::clamp(x[2], -1.0, 1.0))};
  return {x[0], x[1]};
}

double prescribed_curvature(const MagneticProblem& problem, const Vec& x, double s) {
  return std::visit(overloaded{
                        [](const ConstantField& f) { return f.k0; },
                        [s](const ArclengthField& f) { return eval_k(f.profile, s); },
                        [&](const SampledField& f) {
                          const auto [u, v] = chart_coordinates(problem.space, x);
                          return bilinear(f, u, v);
                        },
                    },
                    problem.source);
}

DiscreteCurve integrate_magnetic(const MagneticProblem& problem, const Vec& start, const Vec& v0,
                                 double length, const MagneticOptions& options) {
  const SpaceForm& space = problem.space;
  if (space.dim() != 2) throw UnsupportedDimension("magnetic geodesics are integrated on surfaces");
  if (!(options.h > 0)) throw DomainError("step h must be positive");
  if (!(length > 0) || !std::isfinite(length)) throw DomainError("length must be positive and finite");
  if (start.size() != space.ambient_dim() || space.constraint_defect(start) > 1e-10)
    throw DomainError("start point does not lie on " + space.name());
  if (std::holds_alternative<ArclengthField>(problem.source))
    validate(std::get<ArclengthField>(problem.source).profile);
  Phase y{space.retract(start), v0};
  if (!space.is_tangent(y.x, v0, default_tolerances().tangent) ||
      std::abs(space.norm(v0) - 1.0) > default_tolerances().tangent)
    throw DomainError("initial velocity must be a unit tangent vector");

  const auto n = static_cast<std::size_t>(std::max(1.0, std::round(length / options.h)));
  const double h = length / static_cast<double>(n);
  DiscreteCurve c;
  c.space = space;
  auto record = [&](double s) {
    c.s.push_back(s);
    c.points.push_back(y.x);
    c.T.push_back(y.v);
    c.N.push_back(space.rotate(y.x, y.v) / space.tangent_norm(y.x, y.v));
    c.k.push_back(prescribed_curvature(problem, y.x, s));
  };
  record(0.0);
  const Vec origin = y.x;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = static_cast<double>(i) * h;
    y = advance(problem, y, s, h);
    record(i + 1 == n ? length : static_cast<double>(i + 1) * h);
    if (space.model() == Model::Hyperboloid && space.distance(origin, y.x) > options.escape_distance)
      break;
  }
  return c;
}

double speed_drift(const DiscreteCurve& curve) {
  double worst = 0;
  for (std::size_t i = 0; i < curve.T.size(); ++i)
    worst = std::max(worst, std::abs(curve.space.tangent_norm(curve.points[i], curve.T[i]) - 1.0));
  return worst;
}

std::vector<InitialCondition> default_grid(const SpaceForm& space, int n) {
  if (space.dim() != 2) throw UnsupportedDimension("magnetic problems live on surfaces");
  if (n < 1) throw DomainError("grid size must be positive");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<InitialCondition> out;
  for (int a = 0; a < n; ++a) {
    const double phi = golden * a;
    Vec x;
    if (space.model() == Model::RoundSphere) {
      const double z = 1.0 - (2.0 * a + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      x = make_vec({r * std::cos(phi), r * std::sin(phi), z});
    } else {
      const double rho = std::sqrt((a + 0.5) / n);
      Vec v = Vec::Zero(space.ambient_dim());
      v[0] = rho * std::cos(phi);
      v[1] = rho * std::sin(phi);
      x = space.exp(space.origin(), v);
    }
    const Vec e = unit_tangent(space, x);
    const Vec f = space.rotate(x, e);
    for (int b = 0; b < n; ++b) {
      const double t = 2 * std::numbers::pi * b / n;
      out.push_back({x, std::cos(t) * e + std::sin(t) * f});
    }
  }
  return out;
}

std::vector<ClosedCandidate> shoot_closed(const MagneticProblem& problem,
                                          const std::vector<InitialCondition>& grid,
                                          const ShootOptions& options) {
  const SpaceForm& space = problem.space;
  std::vector<ClosedCandidate> out;
  MagneticOptions mopt{options.h, options.escape_distance};

  for (const InitialCondition& ic : grid) {
    const DiscreteCurve c = integrate_magnetic(problem, ic.point, ic.direction, options.max_length, mopt);
    const Phase home{c.points.front(), c.T.front()};
    const std::size_t n = c.size();
    std::vector<double> D(n);
    for (std::size_t i = 0; i < n; ++i) D[i] = phase_defect({c.points[i], c.T[i]}, home);

    auto defect_at = [&](double s) {
      auto j = static_cast<std::size_t>(std::floor((s - c.s.front()) / c.step()));
      j = std::min(j, n - 2);
      const double dt = s - c.s[j];
      if (dt == 0) return D[j];
      return phase_defect(advance(problem, {c.points[j], c.T[j]}, c.s[j], dt), home);
    };

    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (c.s[i] < options.min_length || D[i] > D[i - 1] || D[i] > D[i + 1]) continue;
      // Golden-section search on [s_{i-1}, s_{i+1}].
      const double ratio = (std::sqrt(5.0) - 1) / 2;
      double a = c.s[i - 1], b = c.s[i + 1];
      double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
      double f1 = defect_at(x1), f2 = defect_at(x2);
      while (b - a > 1e-13 * std::max(1.0, b)) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - ratio * (b - a);
          f1 = defect_at(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + ratio * (b - a);
          f2 = defect_at(x2);
        }
      }
      const double L = 0.5 * (a + b);
      const double defect = defect_at(L);
      if (defect >= options.tol) continue;

      ClosedCandidate cand;
      cand.start = ic;
      cand.length = L;
      cand.defect = defect;
      const std::size_t j = std::min(static_cast<std::size_t>(std::floor(L / c.step())), n - 1);
      std::vector<double> kk(c.k.begin(), c.k.begin() + static_cast<std::ptrdiff_t>(j + 1));
      cand.curvature_integral = simpson(kk, c.step()) + (L - c.s[j]) * c.k[j];
      if (j + 1 >= 9) {
        DiscreteCurve head = subsample(c, 1);
        for (auto* field : {&head.s, &head.k}) field->resize(j + 1);
        for (auto* field : {&head.points, &head.T, &head.N}) field->resize(j + 1);
        const RecoveredCurvature rec = recompute_curvature(head);
        for (std::size_t q = 2; q + 2 <= j; ++q)
          cand.curvature_residual = std::max(cand.curvature_residual, std::abs(rec.k[q] - head.k[q]));
      }
      if (const auto* arc = std::get_if<ArclengthField>(&problem.source))
        for (std::size_t q = 0; q <= j; ++q)
          cand.profile_residual = std::max(cand.profile_residual,
                                           std::abs(residual_surface(arc->profile, c.s[q], space.curvature())));

      bool merged = false;
      for (ClosedCandidate& prev : out) {
        if (std::abs(prev.length - L) <= 1e-5 * std::max(1.0, L) &&
            std::abs(prev.curvature_integral - cand.curvature_integral) <=
                1e-5 * std::max(1.0, std::abs(cand.curvature_integral))) {
          ++prev.multiplicity;
          merged = true;
          break;
        }
      }
      if (!merged) out.push_back(cand);
      break;
    }
  }
  return out;
}

}  // namespace pbcurves
