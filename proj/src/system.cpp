#include "eqobs/system.hpp"

#include <cmath>

namespace eqobs {

StateTangent dynamics(const State& xi, const InputVelocity& u) {
  return {xi.V + u.U1, u.U2};
}

GroupElement output(const State& xi) { return xi.P; }

SymmetryVelocity lift(const State& xi, const InputVelocity& u) {
  return {xi.V + u.U1, bracket(xi.V, u.U1) - u.U2};
}

StateTangent dphi_at_identity(const State& xi, const SymmetryVelocity& v) {
  return {v.w1, -bracket(v.w1, xi.V) - v.w2};
}

StateTangent push_forward(const SymmetryElement& x, const StateTangent& tangent) {
  const GroupElement a_inv = inverse(x.A);
  return {adjoint(a_inv, tangent.dP_body), adjoint(a_inv, tangent.dV)};
}

SymmetryVelocity lifted_dynamics(const SymmetryElement& x, const OriginPoint& origin,
                                 const InputVelocity& u) {
  return lift(state_action(x, origin.as_state()), u);
}

SymmetryTangent lifted_dynamics_explicit(const SymmetryElement& x, const OriginPoint& origin,
                                         const InputVelocity& u) {
  const GroupElement a_inv = inverse(x.A);
  const AlgebraElement v = adjoint(a_inv, origin.V0 - x.a);
  Matrix a_dot = x.A.mat() * (v + u.U1).mat();
  AlgebraElement b_dot = adjoint(x.A, bracket(v, u.U1) - u.U2);
  return {std::move(a_dot), std::move(b_dot)};
}

InputVelocity input_action_without_shift(const SymmetryElement& x, const InputVelocity& u) {
  const GroupElement a_inv = inverse(x.A);
  return {adjoint(a_inv, u.U1), adjoint(a_inv, u.U2)};
}

double equivariance_residual(const SymmetryElement& x, const State& xi, const InputVelocity& u,
                             const InputAction& psi) {
  const StateTangent pushed = push_forward(x, dynamics(xi, u));
  const InputVelocity u_moved = psi ? psi(x, u) : input_action(x, u);
  const StateTangent direct = dynamics(state_action(x, xi), u_moved);
  return tangent_distance(pushed, direct);
}

double lift_equivariance_residual(const SymmetryElement& x, const State& xi,
                                  const InputVelocity& u) {
  const SymmetryVelocity lhs = sdp_adjoint(x, lift(xi, u));
  const SymmetryElement x_inv = sdp_inverse(x);
  const SymmetryVelocity rhs = lift(state_action(x_inv, xi), input_action(x_inv, u));
  return velocity_distance(lhs, rhs);
}

double tangent_distance(const StateTangent& lhs, const StateTangent& rhs) {
  const double p = (lhs.dP_body.mat() - rhs.dP_body.mat()).squaredNorm();
  const double v = (lhs.dV.mat() - rhs.dV.mat()).squaredNorm();
  return std::sqrt(p + v);
}

double velocity_distance(const SymmetryVelocity& lhs, const SymmetryVelocity& rhs) {
  const double a = (lhs.w1.mat() - rhs.w1.mat()).squaredNorm();
  const double b = (lhs.w2.mat() - rhs.w2.mat()).squaredNorm();
  return std::sqrt(a + b);
}

double state_distance(const State& lhs, const State& rhs) {
  const double p = (lhs.P.mat() - rhs.P.mat()).squaredNorm();
  const double v = (lhs.V.mat() - rhs.V.mat()).squaredNorm();
  return std::sqrt(p + v);
}

}  // namespace eqobs
