#include "pbcurves/energy.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Dense>

#include "pbcurves/config.hpp"
#include "pbcurves/errors.hpp"
#include "pbcurves/stencil.hpp"

namespace pbcurves {

namespace {

void check_exponent(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw DomainError("exponent p must be positive and finite");
}

// Node access for the residual stencils. A closed curve is continued past
// its seam by the rigid motion taking the frame at the first node to the
// frame at the last one, so wrapped stencils do not see the closure gap.
struct Grid {
  static constexpr std::ptrdiff_t kPad = 4;
  std::ptrdiff_t n, m;
  bool closed;
  double h;
  std::vector<Vec> ext;  // points at indices -kPad .. n-1+kPad when closed

  explicit Grid(const DiscreteCurve& c)
      : n(static_cast<std::ptrdiff_t>(c.size())),
        m(c.closed ? n - 1 : n),
        closed(c.closed),
        h(c.step()) {
    if (!closed || m < 5) return;
    const std::size_t last = c.size() - 1;
    const int a = c.space.ambient_dim();
    const bool flat = c.space.model() == Model::Flat;
    Eigen::MatrixXd F0(a, a), F1(a, a);
    const auto f0 = c.frame(0), f1 = c.frame(last);
    for (int j = 0; j < c.space.dim(); ++j) {
      F0.col(j) = f0[static_cast<std::size_t>(j)];
      F1.col(j) = f1[static_cast<std::size_t>(j)];
    }
    if (!flat) {
      F0.col(a - 1) = c.points.front();
      F1.col(a - 1) = c.points.back();
    }
    const Eigen::MatrixXd M = F1 * F0.inverse();
    const Eigen::MatrixXd Minv = F0 * F1.inverse();
    auto forward = [&](const Vec& x) -> Vec {
      if (flat) return c.points.back() + M * (x - c.points.front());
      return M * x;
    };
    auto backward = [&](const Vec& x) -> Vec {
      if (flat) return c.points.front() + Minv * (x - c.points.back());
      return Minv * x;
    };
    ext.reserve(static_cast<std::size_t>(m + 2 * kPad));
    for (std::ptrdiff_t i = -kPad; i < m + kPad; ++i) {
      if (i < 0)
        ext.push_back(backward(c.points[static_cast<std::size_t>(i + m)]));
      else if (i >= m)
        ext.push_back(forward(c.points[static_cast<std::size_t>(i - m)]));
      else
        ext.push_back(c.points[static_cast<std::size_t>(i)]);
    }
  }

  const Vec& point(const DiscreteCurve& c, std::ptrdiff_t i) const {
    if (!closed) return c.points[static_cast<std::size_t>(i)];
    return ext[static_cast<std::size_t>(i + kPad)];
  }

  // Nodes where a stencil reaching `reach` neighbours on each side is defined.
  std::pair<std::ptrdiff_t, std::ptrdiff_t> range(std::ptrdiff_t reach) const {
    if (closed) return {reach - kPad, m - 1 + kPad - reach};
    return {reach, n - 1 - reach};
  }

  std::vector<std::size_t> report_nodes() const {
    std::vector<std::size_t> out;
    const auto lo = closed ? 0 : kPad;
    const auto hi = closed ? m - 1 : n - 1 - kPad;
    for (auto i = lo; i <= hi; ++i) out.push_back(static_cast<std::size_t>(i));
    return out;
  }
};

// Values indexed like Grid nodes, including the padding of closed curves.
template <class T>
struct Padded {
  std::ptrdiff_t offset;
  std::vector<T> data;
  Padded(const Grid& g, T fill) : offset(g.closed ? Grid::kPad : 0), data(static_cast<std::size_t>(g.m + 2 * offset), fill) {}
  T& operator[](std::ptrdiff_t i) { return data[static_cast<std::size_t>(i + offset)]; }
  const T& operator[](std::ptrdiff_t i) const { return data[static_cast<std::size_t>(i + offset)]; }
};

// Second differences (including the one-sided end stencils) of points of size
// `scale` carry round-off below this; smaller tensions are indistinguishable from zero.
double tension_floor(const std::vector<Vec>& points, double h) {
  double scale = 1;
  for (const Vec& x : points) scale = std::max(scale, x.cwiseAbs().maxCoeff());
  return 256 * std::numeric_limits<double>::epsilon() * scale / (h * h);
}

void check_nodes(const Grid& g) {
  if (g.closed ? g.m < 5 : g.n < 9)
    throw DomainError("residual evaluation needs at least 9 nodes (5 on a closed curve)");
}

// Second-order projected tension and velocity at node i.
struct LocalJet {
  Vec velocity, tension;
};

LocalJet local_jet(const DiscreteCurve& c, const Grid& g, std::ptrdiff_t i) {
  const SpaceForm& space = c.space;
  const Vec& x = g.point(c, i);
  const Vec& xp = g.point(c, i + 1);
  const Vec& xm = g.point(c, i - 1);
  return {space.project(x, (xp - xm) / (2 * g.h)), space.project(x, (xp - 2 * x + xm) / (g.h * g.h))};
}

struct ResidualParts {
  ResidualField field;
  std::vector<Vec> velocity;  // per reported node
  Padded<double> k;           // NaN where undefined
};

ResidualParts residual_parts(const DiscreteCurve& c, const Grid& g, double p) {
  check_exponent(p);
  check_nodes(g);
  const SpaceForm& space = c.space;
  const int K = space.curvature();
  const double kmin = default_tolerances().near_geodesic;

  ResidualParts out{{}, {}, Padded<double>(g, std::numeric_limits<double>::quiet_NaN())};
  Padded<Vec> V(g, Vec()), vel(g, Vec());
  const auto [lo, hi] = g.range(3);
  for (auto i = lo; i <= hi; ++i) {
    const LocalJet jet = local_jet(c, g, i);
    const double k = space.norm(jet.tension);
    if (p < 2 && k < kmin) {
      const double s = c.s.front() + static_cast<double>(i) * g.h;
      throw NearGeodesicError("geodesic curvature " + std::to_string(k) + " below " +
                              std::to_string(kmin) + " at s = " + std::to_string(s) + " with p < 2");
    }
    out.k[i] = k;
    vel[i] = jet.velocity;
    V[i] = (p == 2 ? 1.0 : std::pow(k, p - 2)) * jet.tension;
  }

  out.field.nodes = g.report_nodes();
  for (std::size_t node : out.field.nodes) {
    const auto i = static_cast<std::ptrdiff_t>(node);
    const Vec& x = c.points[node];
    const Vec& v = vel[i];
    const Vec second = (V[i + 1] - 2 * V[i] + V[i - 1]) / (g.h * g.h);
    Vec W = space.project(x, second) + K * space.dot(V[i], v) * v - space.curvature_op(v, V[i], v);
    out.field.max_norm = std::max(out.field.max_norm, space.norm(W));
    out.field.values.push_back(std::move(W));
    out.velocity.push_back(v);
  }
  return out;
}

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

Complex lagrangian(const CVec& q, const CVec& q1, const CVec& q2, double p) {
  (void)q;
  (void)q1;
  Complex sq = 0;
  for (const Complex& z : q2) sq += z * z;
  if (sq == Complex(0)) return 0;
  return std::pow(sq, p / 2) / p;
}

// Complex-step gradient of the Lagrangian with respect to slot 0, 1 or 2.
Vec partial(const Vec& q, const Vec& q1, const Vec& q2, int slot, double p) {
  const double eps = 1e-30;
  const auto dim = q.size();
  if (slot == 2 && q2.norm() == 0.0) return Vec::Zero(dim);
  auto lift = [](const Vec& v) {
    CVec out(static_cast<std::size_t>(v.size()));
    for (Eigen::Index j = 0; j < v.size(); ++j) out[static_cast<std::size_t>(j)] = v[j];
    return out;
  };
  Vec g(dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CVec a = lift(q), b = lift(q1), c = lift(q2);
    CVec& target = slot == 0 ? a : (slot == 1 ? b : c);
    target[static_cast<std::size_t>(j)] += Complex(0, eps);
    g[j] = lagrangian(a, b, c, p).imag() / eps;
  }
  return g;
}

}  // namespace

double simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.empty() ? 0 : f.size() - 1;
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * h * (f[0] + f[1]);
  auto composite = [&](std::size_t a, std::size_t b) {
    double sum = f[a] + f[b];
    for (std::size_t i = a + 1; i < b; ++i) sum += (i - a) % 2 ? 4 * f[i] : 2 * f[i];
    return sum * h / 3;
  };
  auto three_eighths = [&](std::size_t a) {
    return 3 * h / 8 * (f[a] + 3 * f[a + 1] + 3 * f[a + 2] + f[a + 3]);
  };
  if (n % 2 == 0) return composite(0, n);
  const double tail = (n > 3 ? composite(0, n - 3) : 0.0) + three_eighths(n - 3);
  const double head = three_eighths(0) + (n > 3 ? composite(3, n) : 0.0);
  return 0.5 * (tail + head);
}

EnergyResult energy_p_biharmonic(const SpaceForm& space, const std::vector<Vec>& points, double h,
                                 bool closed, double p) {
  check_exponent(p);
  if (points.size() < 5) throw DomainError("energy needs at least 5 nodes");
  const auto d2 = differentiate(points, h, 2, 4, closed);
  const double floor = tension_floor(points, h);
  std::vector<double> f(points.size());
  EnergyResult r;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double t = space.norm(space.project(points[i], d2[i]));
    if (t < floor) t = 0;
    if (p < 2 && t < 1e-12) r.near_geodesic = true;
    f[i] = std::pow(t, p) / p;
  }
  r.value = simpson(f, h);
  return r;
}

EnergyResult energy_p_biharmonic(const DiscreteCurve& curve, double p) {
  return energy_p_biharmonic(curve.space, curve.points, curve.step(), curve.closed, p);
}

EnergyResult energy_p_elastic(const DiscreteCurve& curve, double p) {
  check_exponent(p);
  EnergyResult r;
  std::vector<double> f(curve.k.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double k = std::abs(curve.k[i]);
    if (p < 2 && k < 1e-12) r.near_geodesic = true;
    f[i] = std::pow(k, p) / p;
  }
  r.value = simpson(f, curve.step());
  return r;
}

double energy_blaschke(const DiscreteCurve& curve, double mu) {
  std::vector<double> f(curve.k.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double radicand = curve.k[i] + mu;
    if (radicand < 0)
      throw DomainError("k + mu is negative at s = " + std::to_string(curve.s[i]));
    f[i] = std::sqrt(radicand);
  }
  return simpson(f, curve.step());
}

ResidualField el_residual(const DiscreteCurve& curve, double p) {
  return residual_parts(curve, Grid(curve), p).field;
}

ResidualField el_residual_lagrangian(const DiscreteCurve& curve, double p) {
  check_exponent(p);
  if (curve.space.model() != Model::Flat)
    throw UnsupportedSpace("the coordinate Lagrangian form needs flat space, got " + curve.space.name());
  const Grid g(curve);
  check_nodes(g);
  const double h = g.h;
  auto x = [&](std::ptrdiff_t i) -> const Vec& { return g.point(curve, i); };
  const double floor = tension_floor(curve.points, h);

  Padded<Vec> q1(g, Vec()), P0(g, Vec()), P1(g, Vec()), P2(g, Vec()), dP2(g, Vec());
  {
    const auto [lo, hi] = g.range(1);
    for (auto i = lo; i <= hi; ++i) q1[i] = (x(i + 1) - x(i - 1)) / (2 * h);
  }
  {
    const auto [lo, hi] = g.range(2);
    for (auto i = lo; i <= hi; ++i) {
      Vec q2 = (q1[i + 1] - q1[i - 1]) / (2 * h);
      if (q2.norm() < floor) q2.setZero();
      P0[i] = partial(x(i), q1[i], q2, 0, p);
      P1[i] = partial(x(i), q1[i], q2, 1, p);
      P2[i] = partial(x(i), q1[i], q2, 2, p);
    }
  }
  {
    const auto [lo, hi] = g.range(3);
    for (auto i = lo; i <= hi; ++i) dP2[i] = (P2[i + 1] - P2[i - 1]) / (2 * h);
  }
  ResidualField out;
  out.nodes = g.report_nodes();
  for (std::size_t node : out.nodes) {
    const auto i = static_cast<std::ptrdiff_t>(node);
    const Vec ddP2 = (dP2[i + 1] - dP2[i - 1]) / (2 * h);
    const Vec dP1 = (P1[i + 1] - P1[i - 1]) / (2 * h);
    Vec r = ddP2 - dP1 + P0[i];
    out.max_norm = std::max(out.max_norm, r.norm());
    out.values.push_back(std::move(r));
  }
  return out;
}

TangentialCheck tangential_identity_check(const DiscreteCurve& curve, double p) {
  const Grid g(curve);
  const ResidualParts parts = residual_parts(curve, g, p);
  const SpaceForm& space = curve.space;
  TangentialCheck out;
  for (std::size_t r = 0; r < parts.field.nodes.size(); ++r) {
    const auto i = static_cast<std::ptrdiff_t>(parts.field.nodes[r]);
    const double tangential = space.dot(parts.field.values[r], parts.velocity[r]);
    const double dkp = (std::pow(parts.k[i + 1], p) - std::pow(parts.k[i - 1], p)) / (2 * g.h);
    const double predicted = (-2 + 1 / p) * dkp;
    out.max_tangential = std::max(out.max_tangential, std::abs(tangential));
    out.max_predicted = std::max(out.max_predicted, std::abs(predicted));
    out.max_discrepancy = std::max(out.max_discrepancy, std::abs(tangential - predicted));
  }
  return out;
}

}  // namespace pbcurves
