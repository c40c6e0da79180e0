#pragma once

// Matrix Lie groups G ⊂ R^{n×n} with their algebras g realized as a linear
// subspace of n×n matrices spanned by an explicit basis.
//
// All projections onto g are orthogonal with respect to the trace inner
// product <X, Y> = tr(X^T Y) and are computed by solving against the Gram
// matrix of the basis, so non-orthonormal bases project exactly.

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <Eigen/LU>

#include <cstddef>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqobs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands belong to different groups.
class DescriptorMismatch : public Error {
 public:
  using Error::Error;
};

/// A group element left the manifold beyond the configured tolerance.
class ManifoldError : public Error {
 public:
  using Error::Error;
};

/// A matrix that should lie in g does not, or the basis is degenerate.
class AlgebraError : public Error {
 public:
  using Error::Error;
};

/// Which membership test `constraint_residual` applies.
enum class Constraint {
  kNone,               // any invertible matrix
  kSpecialOrthogonal,  // R^T R = I, det R = 1
  kSpecialEuclidean,   // [R p; 0 1] with R special orthogonal
};

/// Residuals below `warn` are silent, between `warn` and `fail` are counted
/// (see manifold_warning_count), above `fail` throw ManifoldError.
struct ManifoldTolerance {
  double warn = 1e-9;
  double fail = 1e-6;
};

class GroupDescriptor {
 public:
  GroupDescriptor(std::string name, int n, std::vector<Matrix> basis,
                  Constraint constraint, ManifoldTolerance tolerance = {});

  const std::string& name() const { return name_; }
  int n() const { return n_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Matrix>& basis() const { return basis_; }
  const Matrix& basis(int i) const { return basis_[static_cast<std::size_t>(i)]; }
  const Matrix& gram() const { return gram_; }
  Constraint constraint() const { return constraint_; }
  const ManifoldTolerance& tolerance() const { return tolerance_; }

  /// Coordinates of the orthogonal projection of m onto g.
  Vector coords(const Matrix& m) const;
  Matrix from_coords(const Vector& c) const;
  Matrix project(const Matrix& m) const { return from_coords(coords(m)); }
  /// ||m - pr_g(m)||_F
  double algebra_residual(const Matrix& m) const;
  double constraint_residual(const Matrix& m) const;

  /// Same algebra and constraint (tolerances may differ).
  bool same_group(const GroupDescriptor& other) const;

 private:
  std::string name_;
  int n_;
  std::vector<Matrix> basis_;
  Matrix gram_;
  Eigen::LLT<Matrix> gram_llt_;
  Constraint constraint_;
  ManifoldTolerance tolerance_;
};

using GroupPtr = std::shared_ptr<const GroupDescriptor>;

/// Copy of `group` with a different manifold tolerance.
GroupPtr with_tolerance(const GroupPtr& group, ManifoldTolerance tolerance);

/// Number of residuals seen between the warn and fail thresholds.
std::size_t manifold_warning_count();

// Built-in groups. Basis orderings:
//   so(3): (skew_x, skew_y, skew_z)
//   se(2): (rotation generator, e_x translation, e_y translation)
//   se(3): (skew_x, skew_y, skew_z, e_x, e_y, e_z)
GroupPtr make_so3();
GroupPtr make_se2();
GroupPtr make_se3();
/// Lookup by "se2", "so3" or "se3"; throws Error on unknown names.
GroupPtr make_group(const std::string& name);
std::vector<std::string> registered_groups();

class GroupElement {
 public:
  /// Validates the manifold constraint against the group's tolerance.
  GroupElement(GroupPtr group, Matrix mat);

  static GroupElement identity(GroupPtr group);

  const GroupPtr& group() const { return group_; }
  const Matrix& mat() const { return mat_; }
  double residual() const { return group_->constraint_residual(mat_); }

 private:
  GroupPtr group_;
  Matrix mat_;
};

class AlgebraElement {
 public:
  /// Checks that mat lies in g (relative residual 1e-10).
  AlgebraElement(GroupPtr group, Matrix mat);

  static AlgebraElement zero(GroupPtr group);
  static AlgebraElement from_coords(GroupPtr group, const Vector& coords);
  /// Orthogonal projection; never throws on finite input.
  static AlgebraElement projected(GroupPtr group, const Matrix& mat);

  const GroupPtr& group() const { return group_; }
  const Matrix& mat() const { return mat_; }
  Vector coords() const { return group_->coords(mat_); }
  double norm() const { return mat_.norm(); }

  AlgebraElement operator-() const;
  AlgebraElement& operator+=(const AlgebraElement& rhs);
  AlgebraElement& operator-=(const AlgebraElement& rhs);
  AlgebraElement& operator*=(double s);

 private:
  struct Trusted {};
  AlgebraElement(GroupPtr group, Matrix mat, Trusted);

  GroupPtr group_;
  Matrix mat_;
};

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs);
AlgebraElement operator*(double s, AlgebraElement w);
AlgebraElement operator*(AlgebraElement w, double s);

void require_same_group(const GroupPtr& a, const GroupPtr& b);

GroupElement compose(const GroupElement& g1, const GroupElement& g2);
GroupElement inverse(const GroupElement& g);
GroupElement exp(const AlgebraElement& w);
/// Ad_A w = A w A^{-1}
AlgebraElement adjoint(const GroupElement& a, const AlgebraElement& w);
/// Matrix commutator w1 w2 - w2 w1.
AlgebraElement bracket(const AlgebraElement& w1, const AlgebraElement& w2);
AlgebraElement project_to_algebra(const GroupPtr& group, const Matrix& m);
double constraint_residual(const GroupPtr& group, const Matrix& m);
AlgebraElement coords_to_matrix(const GroupPtr& group, const Vector& c);
Vector matrix_to_coords(const AlgebraElement& w);

/// tr(X^T Y)
double trace_inner(const Matrix& x, const Matrix& y);

/// Matrix exponential by scaling and squaring of a degree-18 Taylor polynomial.
Matrix expm(const Matrix& m);

/// d×d matrix of ad_w in basis coordinates: column j holds coords([w, B_j]).
Matrix ad_matrix(const AlgebraElement& w);

/// Coordinates drawn uniform in [lo, hi].
AlgebraElement random_algebra(const GroupPtr& group, std::mt19937_64& rng,
                              double lo = -1.0, double hi = 1.0);
/// exp of random_algebra.
GroupElement random_group(const GroupPtr& group, std::mt19937_64& rng);

}  // namespace eqobs
