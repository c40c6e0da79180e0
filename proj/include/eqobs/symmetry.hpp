#pragma once

// The semi-direct product symmetry group G⋉g, with multiplication
//   (A, a)·(B, b) = (AB, a + Ad_A b),
// and its right actions on the state space TG ≅ G×g and on the input
// space g×g.

#include "eqobs/lie_group.hpp"

namespace eqobs {

/// ξ = (P, V): configuration and left-trivialized velocity.
struct State {
  GroupElement P;
  AlgebraElement V;
};

/// U = (U1, U2): first-order (virtual) velocity and second-order input.
/// Measured operation uses (0, W).
struct InputVelocity {
  AlgebraElement U1;
  AlgebraElement U2;

  static InputVelocity zero(const GroupPtr& group);
  static InputVelocity measured(const AlgebraElement& w);
};

struct SymmetryElement {
  GroupElement A;
  AlgebraElement a;

  static SymmetryElement identity(const GroupPtr& group);
  const GroupPtr& group() const { return A.group(); }
};

/// Element (w1, w2) of the symmetry algebra g⋉g.
struct SymmetryVelocity {
  AlgebraElement w1;
  AlgebraElement w2;

  static SymmetryVelocity zero(const GroupPtr& group);
};

/// Tangent vector at (A, a) in raw matrix form: (dA, da).
struct SymmetryTangent {
  Matrix dA;
  AlgebraElement da;
};

SymmetryElement sdp_compose(const SymmetryElement& x, const SymmetryElement& y);
SymmetryElement sdp_inverse(const SymmetryElement& x);
/// Left translation differential at the identity: (A w1, Ad_A w2).
SymmetryTangent dL(const SymmetryElement& x, const SymmetryVelocity& v);
/// Ad_(A,a)(w1, w2) = (Ad_A w1, Ad_A w2 - [Ad_A w1, a]).
SymmetryVelocity sdp_adjoint(const SymmetryElement& x, const SymmetryVelocity& v);
/// One-parameter subgroup: (exp w1, ∫_0^1 Ad_{exp(s w1)} w2 ds).
SymmetryElement sdp_exp(const SymmetryVelocity& v);

/// φ((A, a), (P, V)) = (P A, Ad_{A^{-1}}(V - a)).
State state_action(const SymmetryElement& x, const State& xi);
/// ψ((A, a), (U1, U2)) = (Ad_{A^{-1}}(U1 + a), Ad_{A^{-1}} U2).
InputVelocity input_action(const SymmetryElement& x, const InputVelocity& u);
/// The element X with state_action(X, xi) == target.
SymmetryElement transitive_solve(const State& xi, const State& target);

}  // namespace eqobs
