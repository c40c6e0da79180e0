#include "eqobs/integrators.hpp"

namespace eqobs {

namespace {

void require_positive_step(double dt) {
  if (!(dt > 0.0)) throw Error("time step must be positive");
}

}  // namespace

Integrator parse_integrator(const std::string& name) {
  if (name == "euler") return Integrator::kEuler;
  if (name == "exp") return Integrator::kExp;
  if (name == "heun") return Integrator::kHeun;
  throw Error("unknown integrator '" + name + "' (expected euler, exp or heun)");
}

std::string to_string(Integrator integrator) {
  switch (integrator) {
    case Integrator::kEuler:
      return "euler";
    case Integrator::kExp:
      return "exp";
    case Integrator::kHeun:
      return "heun";
  }
  return "euler";
}

SymmetryVelocity mean_velocity(const SymmetryVelocity& v, const SymmetryVelocity& w) {
  return {0.5 * (v.w1 + w.w1), 0.5 * (v.w2 + w.w2)};
}

State euler_step(const State& xi, const StateTangent& f, double dt) {
  require_positive_step(dt);
  const Matrix& p = xi.P.mat();
  return {GroupElement(xi.P.group(), p + dt * (p * f.dP_body.mat())),
          euler_update(xi.V, f.dV, dt)};
}

SymmetryElement euler_step(const SymmetryElement& x, const SymmetryTangent& dx, double dt) {
  require_positive_step(dt);
  return {GroupElement(x.A.group(), x.A.mat() + dt * dx.dA), euler_update(x.a, dx.da, dt)};
}

GroupElement exp_step(const GroupElement& a, const AlgebraElement& body, double dt) {
  require_positive_step(dt);
  return compose(a, exp(dt * body));
}

SymmetryElement exp_step(const SymmetryElement& x, const SymmetryVelocity& body, double dt) {
  require_positive_step(dt);
  return sdp_compose(x, sdp_exp({dt * body.w1, dt * body.w2}));
}

State exp_step(const State& xi, const SymmetryVelocity& lifted, double dt) {
  require_positive_step(dt);
  return state_action(sdp_exp({dt * lifted.w1, dt * lifted.w2}), xi);
}

}  // namespace eqobs
