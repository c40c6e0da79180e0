#include "eqobs/observer.hpp"

#include <cmath>

namespace eqobs {

namespace {

Matrix identity_like(const Matrix& m) { return Matrix::Identity(m.rows(), m.cols()); }

// (I - Ã) Ã^T
Matrix error_direction(const Matrix& atilde) {
  return (identity_like(atilde) - atilde) * atilde.transpose();
}

AlgebraElement velocity_estimate(const ObserverState& obs, const GroupElement& ahat_inv) {
  return adjoint(ahat_inv, obs.origin.V0 - obs.ahat);
}

}  // namespace

void validate(const Gains& gains) {
  if (!(gains.k1 > 0.0) || !(gains.k2 > 0.0) || !std::isfinite(gains.k1) ||
      !std::isfinite(gains.k2)) {
    throw Error("observer gains must be positive and finite");
  }
}

ObserverState ObserverState::make(const SymmetryElement& xhat, const OriginPoint& origin,
                                  const Gains& gains) {
  validate(gains);
  require_same_group(xhat.group(), origin.P0.group());
  return {xhat.A, xhat.a, origin, gains};
}

Innovation Innovation::zero(const GroupPtr& group) {
  return {AlgebraElement::zero(group), AlgebraElement::zero(group)};
}

GroupError group_error(const ObserverState& obs, const SymmetryElement& x_true) {
  GroupElement atilde = compose(obs.Ahat, inverse(x_true.A));
  AlgebraElement a = obs.ahat - adjoint(atilde, x_true.a);
  return {std::move(atilde), std::move(a)};
}

Innovation innovation(const ObserverState& obs, const GroupElement& y) {
  const GroupElement a_meas = compose(inverse(obs.origin.P0), y);
  return innovation_from_error(obs, compose(obs.Ahat, inverse(a_meas)));
}

Innovation innovation_from_error(const ObserverState& obs, const GroupElement& atilde) {
  const auto& group = obs.Ahat.group();
  const Matrix dir = error_direction(atilde.mat());
  AlgebraElement d1 = -obs.gains.k1 * project_to_algebra(group, dir);

  const GroupElement ahat_inv = inverse(obs.Ahat);
  const AlgebraElement vhat = velocity_estimate(obs, ahat_inv);
  const Matrix& ahat = obs.Ahat.mat();
  const Matrix pulled = ahat.transpose() * dir * ahat_inv.mat().transpose();
  const Matrix inner = bracket(vhat, adjoint(ahat_inv, d1)).mat() + obs.gains.k2 * pulled;
  AlgebraElement d2 = adjoint(obs.Ahat, project_to_algebra(group, inner));
  return {std::move(d1), std::move(d2)};
}

SymmetryTangent observer_dynamics(const ObserverState& obs, const InputVelocity& u,
                                  const Innovation& delta) {
  const GroupElement ahat_inv = inverse(obs.Ahat);
  const AlgebraElement vhat = velocity_estimate(obs, ahat_inv);
  const Matrix& ahat = obs.Ahat.mat();
  Matrix d_ahat = ahat * (vhat + u.U1).mat() - delta.d1.mat() * ahat;
  AlgebraElement d_a = adjoint(obs.Ahat, bracket(vhat, u.U1) - u.U2) - delta.d2;
  return {std::move(d_ahat), std::move(d_a)};
}

SymmetryVelocity observer_body_velocity(const ObserverState& obs, const InputVelocity& u,
                                        const Innovation& delta) {
  const GroupElement ahat_inv = inverse(obs.Ahat);
  const AlgebraElement vhat = velocity_estimate(obs, ahat_inv);
  AlgebraElement w1 = vhat + u.U1 - adjoint(ahat_inv, delta.d1);
  AlgebraElement w2 = bracket(vhat, u.U1) - u.U2 - adjoint(ahat_inv, delta.d2);
  return {std::move(w1), std::move(w2)};
}

DiagnosticError diagnostic_error(const ObserverState& obs, const SymmetryElement& x_true) {
  AlgebraElement vhat = velocity_estimate(obs, inverse(obs.Ahat));
  AlgebraElement vtrue = adjoint(inverse(x_true.A), obs.origin.V0 - x_true.a);
  AlgebraElement vtilde = vhat - vtrue;
  return {std::move(vhat), std::move(vtrue), std::move(vtilde)};
}

SymmetryTangent error_dynamics(const GroupError& err, const ObserverState& obs,
                               const SymmetryElement& x_true, const InputVelocity& u,
                               const Innovation& delta) {
  const DiagnosticError diag = diagnostic_error(obs, x_true);
  const AlgebraElement rotated = adjoint(obs.Ahat, diag.Vtilde) - delta.d1;
  Matrix d_atilde = rotated.mat() * err.Atilde.mat();
  AlgebraElement d_a = adjoint(obs.Ahat, bracket(diag.Vtilde, u.U1)) +
                       bracket(adjoint(err.Atilde, x_true.a), rotated) - delta.d2;
  return {std::move(d_atilde), std::move(d_a)};
}

double lyapunov(const GroupError& err, const DiagnosticError& diag, double k2) {
  if (!(k2 > 0.0)) throw Error("lyapunov: k2 must be positive");
  const Matrix& at = err.Atilde.mat();
  const Matrix diff = identity_like(at) - at;
  return 0.5 * (diff * diff.transpose()).trace() + diag.Vtilde.mat().squaredNorm() / (2.0 * k2);
}

double lyapunov_rate(const GroupError& err, double k1) {
  if (!(k1 > 0.0)) throw Error("lyapunov_rate: k1 must be positive");
  const auto& group = err.Atilde.group();
  return -k1 * project_to_algebra(group, error_direction(err.Atilde.mat())).mat().squaredNorm();
}

State estimate(const ObserverState& obs) {
  return state_action(obs.xhat(), obs.origin.as_state());
}

}  // namespace eqobs
