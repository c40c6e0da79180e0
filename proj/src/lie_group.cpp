#include "eqobs/lie_group.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

namespace eqobs {

namespace {

std::atomic<std::size_t> g_manifold_warnings{0};

constexpr double kAlgebraRelTol = 1e-10;
constexpr double kClosureTol = 1e-10;

// Spectral distance to the nearest rotation: max |sigma_i - 1|. Reflections
// are at distance >= 2 from SO(k), so they are reported as such.
double rotation_residual(const Matrix& r) {
  const Eigen::JacobiSVD<Matrix> svd(r);
  const Vector sigma = svd.singularValues();
  const double dist = (sigma.array() - 1.0).abs().maxCoeff();
  return r.determinant() > 0.0 ? dist : dist + 2.0;
}

}  // namespace

GroupDescriptor::GroupDescriptor(std::string name, int n, std::vector<Matrix> basis,
                                 Constraint constraint, ManifoldTolerance tolerance)
    : name_(std::move(name)),
      n_(n),
      basis_(std::move(basis)),
      constraint_(constraint),
      tolerance_(tolerance) {
  if (n_ <= 0) throw AlgebraError("group '" + name_ + "': n must be positive");
  if (basis_.empty()) throw AlgebraError("group '" + name_ + "': empty basis");
  for (const auto& b : basis_) {
    if (b.rows() != n_ || b.cols() != n_) {
      throw AlgebraError("group '" + name_ + "': basis matrix has wrong shape");
    }
    if (!b.allFinite()) throw AlgebraError("group '" + name_ + "': non-finite basis");
  }
  const int d = dim();
  gram_.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) gram_(i, j) = trace_inner(basis_[i], basis_[j]);
  }
  gram_llt_.compute(gram_);
  if (gram_llt_.info() != Eigen::Success) {
    throw AlgebraError("group '" + name_ + "': basis is linearly dependent");
  }
  // Smallest pivot relative to the largest diagonal entry guards against
  // numerically dependent bases that LLT still accepts.
  const Vector diag = Matrix(gram_llt_.matrixL()).diagonal();
  if (diag.minCoeff() <= 1e-12 * std::sqrt(gram_.diagonal().maxCoeff())) {
    throw AlgebraError("group '" + name_ + "': basis is numerically dependent");
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const Matrix c = basis_[i] * basis_[j] - basis_[j] * basis_[i];
      if (algebra_residual(c) > kClosureTol * std::max(1.0, c.norm())) {
        std::ostringstream os;
        os << "group '" << name_ << "': basis not closed under bracket (" << i << ", " << j
           << ")";
        throw AlgebraError(os.str());
      }
    }
  }
}

Vector GroupDescriptor::coords(const Matrix& m) const {
  const int d = dim();
  Vector rhs(d);
  for (int i = 0; i < d; ++i) rhs[i] = trace_inner(basis_[i], m);
  return gram_llt_.solve(rhs);
}

Matrix GroupDescriptor::from_coords(const Vector& c) const {
  Matrix m = Matrix::Zero(n_, n_);
  for (int i = 0; i < dim(); ++i) m.noalias() += c[i] * basis_[i];
  return m;
}

double GroupDescriptor::algebra_residual(const Matrix& m) const {
  return (m - project(m)).norm();
}

double GroupDescriptor::constraint_residual(const Matrix& m) const {
  if (m.rows() != n_ || m.cols() != n_) return std::numeric_limits<double>::infinity();
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  switch (constraint_) {
    case Constraint::kNone:
      return 0.0;
    case Constraint::kSpecialOrthogonal:
      return rotation_residual(m);
    case Constraint::kSpecialEuclidean: {
      const int k = n_ - 1;
      Vector bottom = m.row(k).transpose();
      bottom[k] -= 1.0;
      return rotation_residual(m.topLeftCorner(k, k)) + bottom.norm();
    }
  }
  return 0.0;
}

bool GroupDescriptor::same_group(const GroupDescriptor& other) const {
  if (this == &other) return true;
  if (name_ != other.name_ || n_ != other.n_ || dim() != other.dim() ||
      constraint_ != other.constraint_) {
    return false;
  }
  for (int i = 0; i < dim(); ++i) {
    if (basis_[i] != other.basis_[i]) return false;
  }
  return true;
}

GroupPtr with_tolerance(const GroupPtr& group, ManifoldTolerance tolerance) {
  return std::make_shared<const GroupDescriptor>(group->name(), group->n(), group->basis(),
                                                 group->constraint(), tolerance);
}

std::size_t manifold_warning_count() { return g_manifold_warnings.load(); }

void require_same_group(const GroupPtr& a, const GroupPtr& b) {
  if (a == b) return;
  if (!a || !b || !a->same_group(*b)) {
    throw DescriptorMismatch("descriptor mismatch: '" + (a ? a->name() : "null") + "' vs '" +
                             (b ? b->name() : "null") + "'");
  }
}

// -- GroupElement ------------------------------------------------------------

GroupElement::GroupElement(GroupPtr group, Matrix mat) : group_(std::move(group)), mat_(std::move(mat)) {
  if (!group_) throw Error("group element without descriptor");
  if (mat_.rows() != group_->n() || mat_.cols() != group_->n()) {
    throw ManifoldError("group element of '" + group_->name() + "' has wrong shape");
  }
  const double r = group_->constraint_residual(mat_);
  const auto& tol = group_->tolerance();
  if (!(r <= tol.fail)) {
    std::ostringstream os;
    os << "off-manifold element of '" << group_->name() << "': residual " << r << " > "
       << tol.fail;
    throw ManifoldError(os.str());
  }
  if (r > tol.warn) g_manifold_warnings.fetch_add(1, std::memory_order_relaxed);
  if (group_->constraint() == Constraint::kNone) {
    const double det = mat_.determinant();
    if (!std::isfinite(det) || det == 0.0) {
      throw ManifoldError("singular element of '" + group_->name() + "'");
    }
  }
}

GroupElement GroupElement::identity(GroupPtr group) {
  const int n = group->n();
  return GroupElement(std::move(group), Matrix::Identity(n, n));
}

// -- AlgebraElement ----------------------------------------------------------

AlgebraElement::AlgebraElement(GroupPtr group, Matrix mat)
    : group_(std::move(group)), mat_(std::move(mat)) {
  if (!group_) throw Error("algebra element without descriptor");
  if (mat_.rows() != group_->n() || mat_.cols() != group_->n()) {
    throw AlgebraError("algebra element of '" + group_->name() + "' has wrong shape");
  }
  if (!mat_.allFinite()) throw AlgebraError("non-finite algebra element");
  const double r = group_->algebra_residual(mat_);
  if (r > kAlgebraRelTol * std::max(1.0, mat_.norm())) {
    std::ostringstream os;
    os << "matrix is not in the algebra of '" << group_->name() << "' (residual " << r << ")";
    throw AlgebraError(os.str());
  }
}

AlgebraElement::AlgebraElement(GroupPtr group, Matrix mat, Trusted)
    : group_(std::move(group)), mat_(std::move(mat)) {}

AlgebraElement AlgebraElement::zero(GroupPtr group) {
  const int n = group->n();
  return AlgebraElement(std::move(group), Matrix::Zero(n, n), Trusted{});
}

AlgebraElement AlgebraElement::from_coords(GroupPtr group, const Vector& coords) {
  if (coords.size() != group->dim()) {
    throw AlgebraError("coordinate vector has wrong length for '" + group->name() + "'");
  }
  Matrix m = group->from_coords(coords);
  return AlgebraElement(std::move(group), std::move(m), Trusted{});
}

AlgebraElement AlgebraElement::projected(GroupPtr group, const Matrix& mat) {
  Matrix m = group->project(mat);
  return AlgebraElement(std::move(group), std::move(m), Trusted{});
}

AlgebraElement AlgebraElement::operator-() const {
  return AlgebraElement(group_, -mat_, Trusted{});
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& rhs) {
  require_same_group(group_, rhs.group_);
  mat_ += rhs.mat_;
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& rhs) {
  require_same_group(group_, rhs.group_);
  mat_ -= rhs.mat_;
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(double s) {
  mat_ *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs += rhs; }
AlgebraElement operator-(AlgebraElement lhs, const AlgebraElement& rhs) { return lhs -= rhs; }
AlgebraElement operator*(double s, AlgebraElement w) { return w *= s; }
AlgebraElement operator*(AlgebraElement w, double s) { return w *= s; }

// -- operations --------------------------------------------------------------

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
  require_same_group(g1.group(), g2.group());
  return GroupElement(g1.group(), g1.mat() * g2.mat());
}

GroupElement inverse(const GroupElement& g) {
  Eigen::FullPivLU<Matrix> lu(g.mat());
  if (!lu.isInvertible()) throw ManifoldError("singular group element in inverse()");
  return GroupElement(g.group(), lu.inverse());
}

GroupElement exp(const AlgebraElement& w) { return GroupElement(w.group(), expm(w.mat())); }

AlgebraElement adjoint(const GroupElement& a, const AlgebraElement& w) {
  require_same_group(a.group(), w.group());
  const Matrix conj = a.mat() * w.mat() * a.mat().inverse();
  const auto& group = w.group();
  // Off-manifold drift in `a` (permitted up to the fail tolerance) leaks a
  // proportional amount out of g; the result is projected back.
  const double allowed =
      std::max(kAlgebraRelTol, a.group()->tolerance().fail) * std::max(1.0, conj.norm());
  AlgebraElement out = AlgebraElement::projected(group, conj);
  if ((conj - out.mat()).norm() > allowed) {
    throw AlgebraError("Ad_A w left the algebra of '" + group->name() + "'");
  }
  return out;
}

AlgebraElement bracket(const AlgebraElement& w1, const AlgebraElement& w2) {
  require_same_group(w1.group(), w2.group());
  return AlgebraElement::projected(w1.group(), w1.mat() * w2.mat() - w2.mat() * w1.mat());
}

AlgebraElement project_to_algebra(const GroupPtr& group, const Matrix& m) {
  return AlgebraElement::projected(group, m);
}

double constraint_residual(const GroupPtr& group, const Matrix& m) {
  return group->constraint_residual(m);
}

AlgebraElement coords_to_matrix(const GroupPtr& group, const Vector& c) {
  return AlgebraElement::from_coords(group, c);
}

Vector matrix_to_coords(const AlgebraElement& w) { return w.coords(); }

double trace_inner(const Matrix& x, const Matrix& y) { return x.cwiseProduct(y).sum(); }

Matrix expm(const Matrix& m) {
  const auto n = m.rows();
  const double norm = m.lpNorm<1>();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  const Matrix scaled = m / std::ldexp(1.0, squarings);

  // Horner evaluation of sum_{k=0}^{18} X^k / k!
  constexpr int kOrder = 18;
  Matrix result = Matrix::Identity(n, n);
  for (int k = kOrder; k >= 1; --k) {
    result = Matrix::Identity(n, n) + (scaled * result) / static_cast<double>(k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

Matrix ad_matrix(const AlgebraElement& w) {
  const auto& group = w.group();
  const int d = group->dim();
  Matrix k(d, d);
  for (int j = 0; j < d; ++j) {
    const Matrix& b = group->basis(j);
    k.col(j) = group->coords(w.mat() * b - b * w.mat());
  }
  return k;
}

AlgebraElement random_algebra(const GroupPtr& group, std::mt19937_64& rng, double lo,
                              double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector c(group->dim());
  for (int i = 0; i < c.size(); ++i) c[i] = dist(rng);
  return AlgebraElement::from_coords(group, c);
}

GroupElement random_group(const GroupPtr& group, std::mt19937_64& rng) {
  return exp(random_algebra(group, rng));
}

}  // namespace eqobs
