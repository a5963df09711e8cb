#include "pbcurves/spaceform.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "pbcurves/errors.hpp"

namespace pbcurves {

namespace {

bool same_base(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  return (a - b).norm() <= 1e-12 * std::max(1.0, a.norm());
}

Vec cross3(const Vec& a, const Vec& b) {
  Vec c(3);
  c << a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0];
  return c;
}

}  // namespace

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

SpaceForm::SpaceForm(int dim, int curvature) : dim_(dim), curvature_(curvature) {
  if (dim != 2 && dim != 3)
    throw UnsupportedDimension("space forms are available in dimension 2 and 3, got " +
                               std::to_string(dim));
  switch (curvature) {
    case 0: model_ = Model::Flat; break;
    case 1: model_ = Model::RoundSphere; break;
    case -1: model_ = Model::Hyperboloid; break;
    default:
      throw DomainError("curvature must be -1, 0 or 1, got " + std::to_string(curvature));
  }
}

SpaceForm SpaceForm::parse(std::string_view name) {
  if (name.size() != 2 || (name[1] != '2' && name[1] != '3'))
    throw DomainError("unknown space '" + std::string(name) + "' (expected r2, s2, h2, r3, s3, h3)");
  const int dim = name[1] - '0';
  switch (name[0]) {
    case 'r': return SpaceForm(dim, 0);
    case 's': return SpaceForm(dim, 1);
    case 'h': return SpaceForm(dim, -1);
    default: break;
  }
  throw DomainError("unknown space '" + std::string(name) + "' (expected r2, s2, h2, r3, s3, h3)");
}

std::string SpaceForm::name() const {
  const char prefix = model_ == Model::Flat ? 'r' : (model_ == Model::RoundSphere ? 's' : 'h');
  return std::string(1, prefix) + std::to_string(dim_);
}

double SpaceForm::dot(const Vec& a, const Vec& b) const {
  if (model_ != Model::Hyperboloid) return a.dot(b);
  const Eigen::Index n = a.size() - 1;
  return a.head(n).dot(b.head(n)) - a[n] * b[n];
}

double SpaceForm::norm(const Vec& v) const { return std::sqrt(std::max(0.0, dot(v, v))); }

double SpaceForm::tangent_dot(const Vec& x, const Vec& a, const Vec& b) const {
  if (model_ != Model::Hyperboloid) return a.dot(b);
  // With a_t = <a_s, x_s> / x_t the form splits into the part orthogonal to
  // x_s and a radial part scaled by 1 / x_t^2.
  const Eigen::Index n = x.size() - 1;
  const double rho = x.head(n).norm();
  if (rho == 0.0) return a.head(n).dot(b.head(n));
  const Vec u = x.head(n) / rho;
  const double ar = a.head(n).dot(u), br = b.head(n).dot(u);
  return (a.head(n) - ar * u).dot(b.head(n) - br * u) + ar * br / (x[n] * x[n]);
}

double SpaceForm::tangent_norm(const Vec& x, const Vec& v) const {
  return std::sqrt(std::max(0.0, tangent_dot(x, v, v)));
}

Vec SpaceForm::project(const Vec& x, const Vec& w) const {
  if (model_ == Model::Flat) return w;
  // <x,x> = K on both curved models, so the normal part is K <w,x> x.
  return w - curvature_ * dot(w, x) * x;
}

Vec SpaceForm::complete_tangent(const Vec& x, const Vec& w) const {
  if (model_ != Model::Hyperboloid) return project(x, w);
  const Eigen::Index n = w.size() - 1;
  Vec out = w;
  out[n] = w.head(n).dot(x.head(n)) / x[n];
  return out;
}

Vec SpaceForm::retract(const Vec& x) const {
  switch (model_) {
    case Model::Flat: return x;
    case Model::RoundSphere: return x / x.norm();
    case Model::Hyperboloid: {
      const Eigen::Index n = x.size() - 1;
      Vec out = x;
      out[n] = std::sqrt(1.0 + x.head(n).squaredNorm());
      return out;
    }
  }
  return x;
}

double SpaceForm::constraint_defect(const Vec& x) const {
  switch (model_) {
    case Model::Flat: return 0.0;
    case Model::RoundSphere: return std::abs(x.squaredNorm() - 1.0);
    case Model::Hyperboloid: {
      const double d = std::abs(dot(x, x) + 1.0) / std::max(1.0, x.squaredNorm());
      return x[x.size() - 1] > 0 ? d : d + 1.0;
    }
  }
  return 0.0;
}

Vec SpaceForm::exp(const Vec& x, const Vec& v) const {
  if (model_ == Model::Flat) return x + v;
  const double n = norm(v);
  if (n < 1e-300) return x;
  if (model_ == Model::RoundSphere) return retract(std::cos(n) * x + (std::sin(n) / n) * v);
  return retract(std::cosh(n) * x + (std::sinh(n) / n) * v);
}

double SpaceForm::distance(const Vec& a, const Vec& b) const {
  switch (model_) {
    case Model::Flat: return (a - b).norm();
    case Model::RoundSphere: return 2.0 * std::asin(std::min(1.0, 0.5 * (a - b).norm()));
    case Model::Hyperboloid: {
      const double c = -dot(a, b);
      if (c > 2.0) return std::acosh(c);
      return 2.0 * std::asinh(0.5 * norm(a - b));
    }
  }
  return 0.0;
}

Vec SpaceForm::curvature_op(const Vec& X, const Vec& Y, const Vec& Z) const {
  return curvature_ * (dot(Z, Y) * X - dot(Z, X) * Y);
}

Vec SpaceForm::rotate(const Vec& x, const Vec& v) const {
  if (dim_ != 2) throw UnsupportedDimension("rotate_J is defined on surfaces only");
  switch (model_) {
    case Model::Flat: return make_vec({-v[1], v[0]});
    case Model::RoundSphere: return cross3(x, v);
    case Model::Hyperboloid: {
      Vec c = cross3(x, v);
      c[2] = -c[2];
      return c;
    }
  }
  return v;
}

double SpaceForm::orientation(const Vec& x, const std::vector<Vec>& frame) const {
  const int n = ambient_dim();
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < dim_; ++j) m.col(j) = frame.at(static_cast<std::size_t>(j));
  if (model_ != Model::Flat) m.col(dim_) = x;
  return m.determinant();
}

Vec SpaceForm::complete_frame(const Vec& x, const Vec& T, const Vec& N) const {
  if (dim_ != 3) throw UnsupportedDimension("binormal is defined in dimension 3 only");
  if (model_ == Model::Flat) return cross3(T, N);
  // c_j = det[T, N, e_j, x]; c is Euclidean-orthogonal to T, N and x.
  Vec c(4);
  Eigen::Matrix4d m;
  m.col(0) = T;
  m.col(1) = N;
  m.col(3) = x;
  for (int j = 0; j < 4; ++j) {
    m.col(2) = Eigen::Vector4d::Unit(j);
    c[j] = m.determinant();
  }
  if (model_ == Model::Hyperboloid) c[3] = -c[3];
  return c / norm(c);
}

Vec SpaceForm::origin() const {
  Vec x = Vec::Zero(ambient_dim());
  if (model_ != Model::Flat) x[dim_] = 1.0;
  return x;
}

std::vector<Vec> SpaceForm::canonical_frame() const {
  std::vector<Vec> frame;
  for (int j = 0; j < dim_; ++j) frame.push_back(Vec::Unit(ambient_dim(), j));
  return frame;
}

bool SpaceForm::is_point(const Vec& x, double tol) const {
  return x.size() == ambient_dim() && x.allFinite() && constraint_defect(x) <= tol;
}

bool SpaceForm::is_tangent(const Vec& x, const Vec& v, double tol) const {
  if (v.size() != ambient_dim() || !v.allFinite()) return false;
  if (model_ == Model::Flat) return true;
  return std::abs(dot(v, x)) <= tol * std::max(1.0, v.norm() * x.norm());
}

double metric(const SpaceForm& space, const Point& P, const TangentVector& u,
              const TangentVector& v) {
  if (!same_base(u.base, P.coords) || !same_base(v.base, P.coords))
    throw DomainError("metric: tangent vectors are not based at the given point");
  return space.dot(u.comps, v.comps);
}

TangentVector project_to_tangent(const SpaceForm& space, const Point& P, const Vec& w) {
  if (w.size() != space.ambient_dim()) throw DomainError("project_to_tangent: wrong ambient size");
  return {P.coords, space.project(P.coords, w)};
}

Point exp_map(const SpaceForm& space, const Point& P, const TangentVector& v) {
  if (!same_base(v.base, P.coords)) throw DomainError("exp_map: tangent vector based elsewhere");
  return {space.exp(P.coords, v.comps)};
}

TangentVector curvature_op(const SpaceForm& space, const TangentVector& X,
                           const TangentVector& Y, const TangentVector& Z) {
  if (!same_base(X.base, Y.base) || !same_base(X.base, Z.base))
    throw DomainError("curvature_op: arguments based at different points");
  return {X.base, space.curvature_op(X.comps, Y.comps, Z.comps)};
}

TangentVector rotate_J(const SpaceForm& space, const Point& P, const TangentVector& v) {
  if (space.dim() != 2) throw UnsupportedDimension("rotate_J is defined on surfaces only");
  if (!same_base(v.base, P.coords)) throw DomainError("rotate_J: tangent vector based elsewhere");
  return {P.coords, space.rotate(P.coords, v.comps)};
}

}  // namespace pbcurves
