#pragma once

// Second-order kinematics on TG
//   Ṗ = P (V + U1),   V̇ = U2,
// the equivariant lift onto g⋉g, and the lifted kinematics on G⋉g.

#include <functional>

#include "eqobs/symmetry.hpp"

namespace eqobs {

/// Fixed reference state ξ° parameterizing TG through the state action.
struct OriginPoint {
  GroupElement P0;
  AlgebraElement V0;

  State as_state() const { return {P0, V0}; }
  static OriginPoint from_state(const State& xi) { return {xi.P, xi.V}; }
};

/// Tangent to TG at `at`, left-trivialized: the P-velocity is P·dP_body.
struct StateTangent {
  AlgebraElement dP_body;
  AlgebraElement dV;
};

StateTangent dynamics(const State& xi, const InputVelocity& u);
/// Full configuration measurement y = P.
GroupElement output(const State& xi);
/// Λ(ξ, U) = (V + U1, [V, U1] - U2).
SymmetryVelocity lift(const State& xi, const InputVelocity& u);
/// Differential of v ↦ φ(v, ξ) at the identity: (w1, -[w1, V] - w2).
StateTangent dphi_at_identity(const State& xi, const SymmetryVelocity& v);
/// Pushforward of a tangent at ξ under φ_X: (Ad_{A^{-1}} Γ, Ad_{A^{-1}} S).
StateTangent push_forward(const SymmetryElement& x, const StateTangent& tangent);

/// Left-trivialized velocity of the lifted system at X: Λ(φ(X, ξ°), U).
SymmetryVelocity lifted_dynamics(const SymmetryElement& x, const OriginPoint& origin,
                                 const InputVelocity& u);
/// Same quantity written out term by term as raw (Ȧ, ȧ):
///   Ȧ = A (Ad_{A^{-1}}(V° - a) + U1),  ȧ = Ad_A([Ad_{A^{-1}}(V° - a), U1] - U2).
SymmetryTangent lifted_dynamics_explicit(const SymmetryElement& x, const OriginPoint& origin,
                                         const InputVelocity& u);

using InputAction = std::function<InputVelocity(const SymmetryElement&, const InputVelocity&)>;

/// ||dφ_X f(ξ, U) - f(φ_X ξ, ψ_X U)||; `psi` defaults to input_action and can
/// be replaced to probe variants of the input action.
double equivariance_residual(const SymmetryElement& x, const State& xi, const InputVelocity& u,
                             const InputAction& psi = {});
/// ||Ad_X Λ(ξ, U) - Λ(φ_{X^{-1}} ξ, ψ_{X^{-1}} U)||
double lift_equivariance_residual(const SymmetryElement& x, const State& xi,
                                  const InputVelocity& u);

/// ψ without the +a shift: (Ad_{A^{-1}} U1, Ad_{A^{-1}} U2). Not an
/// equivariance-preserving action; used by mutation checks.
InputVelocity input_action_without_shift(const SymmetryElement& x, const InputVelocity& u);

/// Frobenius distance between two tangents (both components).
double tangent_distance(const StateTangent& lhs, const StateTangent& rhs);
double velocity_distance(const SymmetryVelocity& lhs, const SymmetryVelocity& rhs);
double state_distance(const State& lhs, const State& rhs);

}  // namespace eqobs
