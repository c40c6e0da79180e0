#pragma once

// Observer on the symmetry group G⋉g. The internal model is a copy of the
// lifted kinematics; the innovation (Δ1, Δ2) is driven by the configuration
// measurement y = P only.

#include "eqobs/system.hpp"

namespace eqobs {

struct Gains {
  double k1 = 1.0;
  double k2 = 1.0;
};

/// Throws Error unless both gains are positive and finite.
void validate(const Gains& gains);

struct ObserverState {
  GroupElement Ahat;
  AlgebraElement ahat;
  OriginPoint origin;
  Gains gains;

  SymmetryElement xhat() const { return {Ahat, ahat}; }
  static ObserverState make(const SymmetryElement& xhat, const OriginPoint& origin,
                            const Gains& gains);
};

/// E = X̂ X^{-1} = (Ã, ã).
struct GroupError {
  GroupElement Atilde;
  AlgebraElement atilde;
};

struct Innovation {
  AlgebraElement d1;
  AlgebraElement d2;

  static Innovation zero(const GroupPtr& group);
};

/// Velocity estimate, true velocity and their difference Ṽ = V̂ - V.
struct DiagnosticError {
  AlgebraElement Vhat;
  AlgebraElement Vtrue;
  AlgebraElement Vtilde;
};

/// Ã = Â A^{-1}, ã = â - Ad_Ã a.
GroupError group_error(const ObserverState& obs, const SymmetryElement& x_true);

/// Innovation from the measured configuration. The lifted configuration is
/// recovered as A = P°^{-1} y, so Ã = Â (P°^{-1} y)^{-1}.
Innovation innovation(const ObserverState& obs, const GroupElement& y);
/// Innovation for a known Ã.
///   Δ1 = -k1 pr((I - Ã) Ã^T)
///   Δ2 = Ad_Â pr([V̂, Ad_{Â^{-1}} Δ1] + k2 Â^T (I - Ã) Ã^T Â^{-T})
Innovation innovation_from_error(const ObserverState& obs, const GroupElement& atilde);

/// Raw observer velocity (dÂ, dâ):
///   dÂ = Â (Ad_{Â^{-1}}(V° - â) + U1) - Δ1 Â
///   dâ = Ad_Â([Ad_{Â^{-1}}(V° - â), U1] - U2) - Δ2
SymmetryTangent observer_dynamics(const ObserverState& obs, const InputVelocity& u,
                                  const Innovation& delta);
/// The same velocity, left-trivialized: (Â^{-1} dÂ, Ad_{Â^{-1}} dâ).
SymmetryVelocity observer_body_velocity(const ObserverState& obs, const InputVelocity& u,
                                        const Innovation& delta);

/// V̂ = Ad_{Â^{-1}}(V° - â), V = Ad_{A^{-1}}(V° - a).
DiagnosticError diagnostic_error(const ObserverState& obs, const SymmetryElement& x_true);

/// Raw error velocity (dÃ, dã):
///   dÃ = (Ad_Â Ṽ - Δ1) Ã
///   dã = Ad_Â [Ṽ, U1] + [Ad_Ã a, Ad_Â Ṽ - Δ1] - Δ2
SymmetryTangent error_dynamics(const GroupError& err, const ObserverState& obs,
                               const SymmetryElement& x_true, const InputVelocity& u,
                               const Innovation& delta);

/// ½ tr((I - Ã)(I - Ã)^T) + ||Ṽ||_F² / (2 k2)
double lyapunov(const GroupError& err, const DiagnosticError& diag, double k2);
/// -k1 ||pr((I - Ã) Ã^T)||_F²
double lyapunov_rate(const GroupError& err, double k1);

/// ξ̂ = φ(X̂, ξ°) = (P° Â, Ad_{Â^{-1}}(V° - â)).
State estimate(const ObserverState& obs);

}  // namespace eqobs
