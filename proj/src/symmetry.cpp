#include "eqobs/symmetry.hpp"

namespace eqobs {

InputVelocity InputVelocity::zero(const GroupPtr& group) {
  return {AlgebraElement::zero(group), AlgebraElement::zero(group)};
}

InputVelocity InputVelocity::measured(const AlgebraElement& w) {
  return {AlgebraElement::zero(w.group()), w};
}

SymmetryElement SymmetryElement::identity(const GroupPtr& group) {
  return {GroupElement::identity(group), AlgebraElement::zero(group)};
}

SymmetryVelocity SymmetryVelocity::zero(const GroupPtr& group) {
  return {AlgebraElement::zero(group), AlgebraElement::zero(group)};
}

SymmetryElement sdp_compose(const SymmetryElement& x, const SymmetryElement& y) {
  return {compose(x.A, y.A), x.a + adjoint(x.A, y.a)};
}

SymmetryElement sdp_inverse(const SymmetryElement& x) {
  GroupElement a_inv = inverse(x.A);
  AlgebraElement b = -adjoint(a_inv, x.a);
  return {std::move(a_inv), std::move(b)};
}

SymmetryTangent dL(const SymmetryElement& x, const SymmetryVelocity& v) {
  require_same_group(x.group(), v.w1.group());
  return {x.A.mat() * v.w1.mat(), adjoint(x.A, v.w2)};
}

SymmetryVelocity sdp_adjoint(const SymmetryElement& x, const SymmetryVelocity& v) {
  AlgebraElement first = adjoint(x.A, v.w1);
  AlgebraElement second = adjoint(x.A, v.w2) - bracket(first, x.a);
  return {std::move(first), std::move(second)};
}

SymmetryElement sdp_exp(const SymmetryVelocity& v) {
  const auto& group = v.w1.group();
  const int d = group->dim();
  // Top-right block of exp([[K, I], [0, 0]]) is ∫_0^1 exp(sK) ds for K = ad_{w1}.
  Matrix block = Matrix::Zero(2 * d, 2 * d);
  block.topLeftCorner(d, d) = ad_matrix(v.w1);
  block.topRightCorner(d, d) = Matrix::Identity(d, d);
  const Matrix integral = expm(block).topRightCorner(d, d);
  return {exp(v.w1), AlgebraElement::from_coords(group, integral * v.w2.coords())};
}

State state_action(const SymmetryElement& x, const State& xi) {
  const GroupElement a_inv = inverse(x.A);
  return {compose(xi.P, x.A), adjoint(a_inv, xi.V - x.a)};
}

InputVelocity input_action(const SymmetryElement& x, const InputVelocity& u) {
  const GroupElement a_inv = inverse(x.A);
  return {adjoint(a_inv, u.U1 + x.a), adjoint(a_inv, u.U2)};
}

SymmetryElement transitive_solve(const State& xi, const State& target) {
  GroupElement a = compose(inverse(xi.P), target.P);
  AlgebraElement b = xi.V - adjoint(a, target.V);
  return {std::move(a), std::move(b)};
}

}  // namespace eqobs
