#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace pbcurves {

/// Ambient coordinate vector. At most four components (S^3 and H^3 live in
/// R^4), so storage is inline.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

enum class Model { Flat, RoundSphere, Hyperboloid };

/// A point of the model, stored in ambient coordinates.
struct Point {
  Vec coords;
};

/// A vector tangent to the model at `base`.
struct TangentVector {
  Vec base;
  Vec comps;
};

/// Constant-curvature model space of dimension 2 or 3.
///
///   K =  0   R^dim with the Euclidean product
///   K = +1   unit sphere in R^{dim+1}
///   K = -1   upper sheet <x,x> = -1 of Minkowski R^{dim,1}; the last
///            coordinate is timelike
///
/// The covariant derivative of a tangent field X along a curve x(s) is the
/// tangential part of dX/ds, and the ambient derivative satisfies
/// dX/ds = nabla X - K <X, x'> x for every model.
class SpaceForm {
 public:
  SpaceForm(int dim, int curvature);

  /// Parses "r2", "s2", "h2", "r3", "s3", "h3".
  static SpaceForm parse(std::string_view name);

  int dim() const { return dim_; }
  int curvature() const { return curvature_; }
  Model model() const { return model_; }
  int ambient_dim() const { return model_ == Model::Flat ? dim_ : dim_ + 1; }
  std::string name() const;

  bool operator==(const SpaceForm& o) const = default;

  /// Ambient bilinear form: Euclidean, or Minkowski (+,...,+,-) on the hyperboloid.
  double dot(const Vec& a, const Vec& b) const;
  double norm(const Vec& v) const;

  /// Inner product of two vectors tangent at x. On the hyperboloid it avoids
  /// the cancellation of the Minkowski form far from the apex; elsewhere it is
  /// dot().
  double tangent_dot(const Vec& x, const Vec& a, const Vec& b) const;
  double tangent_norm(const Vec& x, const Vec& v) const;

  /// Orthogonal projection of an ambient vector onto T_x.
  Vec project(const Vec& x, const Vec& w) const;

  /// Projection onto T_x that stays well conditioned far from the origin of
  /// the hyperboloid (solves the tangency condition for the timelike
  /// component). Identical to project() on the other models.
  Vec complete_tangent(const Vec& x, const Vec& w) const;

  /// Maps an ambient point back onto the model.
  Vec retract(const Vec& x) const;

  /// Constraint violation of an ambient point: ||x|^2 - 1| on the sphere,
  /// |<x,x> + 1| / max(1, |x|^2) on the hyperboloid, 0 in flat space.
  double constraint_defect(const Vec& x) const;

  Vec exp(const Vec& x, const Vec& v) const;
  double distance(const Vec& a, const Vec& b) const;

  /// R(X,Y)Z = K (<Z,Y> X - <Z,X> Y).
  Vec curvature_op(const Vec& X, const Vec& Y, const Vec& Z) const;

  /// Rotation by pi/2 in T_x (dim 2 only). Counterclockwise in R^2, x cross v
  /// on S^2 (outward normal), and the Minkowski cross product on H^2.
  Vec rotate(const Vec& x, const Vec& v) const;

  /// Signed volume of (F_1, ..., F_dim[, x]) in ambient coordinates. The
  /// canonical frame has orientation +1.
  double orientation(const Vec& x, const std::vector<Vec>& frame) const;

  /// Unit vector completing (T, N) to an oriented frame at x (dim 3 only).
  Vec complete_frame(const Vec& x, const Vec& T, const Vec& N) const;

  /// Base point used when no start point is given: origin, north pole, or
  /// apex of the hyperboloid.
  Vec origin() const;

  /// Canonical orthonormal frame at origin(): the first dim ambient axes.
  std::vector<Vec> canonical_frame() const;

  bool is_point(const Vec& x, double tol) const;
  bool is_tangent(const Vec& x, const Vec& v, double tol) const;

 private:
  int dim_;
  int curvature_;
  Model model_;
};

// Typed operations. They validate base points and raise DomainError on
// mismatch.

double metric(const SpaceForm& space, const Point& P, const TangentVector& u,
              const TangentVector& v);
TangentVector project_to_tangent(const SpaceForm& space, const Point& P, const Vec& w);
Point exp_map(const SpaceForm& space, const Point& P, const TangentVector& v);
TangentVector curvature_op(const SpaceForm& space, const TangentVector& X,
                           const TangentVector& Y, const TangentVector& Z);
TangentVector rotate_J(const SpaceForm& space, const Point& P, const TangentVector& v);

Vec make_vec(std::initializer_list<double> values);

}  // namespace pbcurves
