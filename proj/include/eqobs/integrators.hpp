#pragma once

// Time steppers. Euler updates every matrix component additively and lets
// group components drift off the manifold; the exp stepper moves along
// one-parameter subgroups of G⋉g and stays on the manifold to roundoff.
// heun is the second-order variant of exp: the step uses the mean of the body
// velocities at the start and at the exp-predicted end point.

#include <string>

#include "eqobs/system.hpp"

namespace eqobs {

enum class Integrator { kEuler, kExp, kHeun };

Integrator parse_integrator(const std::string& name);
std::string to_string(Integrator integrator);

/// x + dt·ẋ for any vector-space value.
template <class T>
T euler_update(const T& x, const T& xdot, double dt) {
  return x + dt * xdot;
}

/// P ← P + dt·P·dP_body, V ← V + dt·dV.
State euler_step(const State& xi, const StateTangent& f, double dt);
/// A ← A + dt·dA, a ← a + dt·da.
SymmetryElement euler_step(const SymmetryElement& x, const SymmetryTangent& dx, double dt);

/// A ← A·exp(dt·w).
GroupElement exp_step(const GroupElement& a, const AlgebraElement& body, double dt);
/// X ← X·exp(dt·v) in G⋉g, with v left-trivialized.
SymmetryElement exp_step(const SymmetryElement& x, const SymmetryVelocity& body, double dt);
/// ξ ← φ(exp(dt·v), ξ), where v is a lift of the state velocity at ξ.
State exp_step(const State& xi, const SymmetryVelocity& lifted, double dt);

/// (v + w) / 2
SymmetryVelocity mean_velocity(const SymmetryVelocity& v, const SymmetryVelocity& w);

}  // namespace eqobs
