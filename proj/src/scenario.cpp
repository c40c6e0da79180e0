#include "eqobs/scenario.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "eqobs/serialization.hpp"

namespace eqobs {

namespace {

Matrix planar_pose(double theta, double x, double y) {
  Matrix p = Matrix::Identity(3, 3);
  p(0, 0) = std::cos(theta);
  p(0, 1) = -std::sin(theta);
  p(1, 0) = std::sin(theta);
  p(1, 1) = std::cos(theta);
  p(0, 2) = x;
  p(1, 2) = y;
  return p;
}

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

OriginPoint resolve_origin(const ScenarioConfig& cfg, const GroupPtr& group) {
  const int n = group->n();
  return {GroupElement(group, cfg.origin_P.value_or(Matrix::Identity(n, n))),
          AlgebraElement::from_coords(group, cfg.origin_V.value_or(Vector::Zero(group->dim())))};
}

State resolve_true_init(const ScenarioConfig& cfg, const GroupPtr& group) {
  State fallback = cfg.input.kind == InputKind::kHovercraftLissajous
                       ? lissajous_input(0.0, group).state
                       : State{GroupElement::identity(group), AlgebraElement::zero(group)};
  if (cfg.true_P) fallback.P = GroupElement(group, *cfg.true_P);
  if (cfg.true_V) fallback.V = AlgebraElement::from_coords(group, *cfg.true_V);
  return fallback;
}

SymmetryElement resolve_observer_init(const ScenarioConfig& cfg, const GroupPtr& group,
                                      const OriginPoint& origin, const State& truth) {
  const ObserverInit& init = cfg.observer_init;
  switch (init.kind) {
    case ObserverInitKind::kZeroError:
      return transitive_solve(origin.as_state(), truth);
    case ObserverInitKind::kRandom: {
      std::mt19937_64 rng(cfg.seed);
      const AlgebraElement r1 = random_algebra(group, rng);
      const AlgebraElement r2 = random_algebra(group, rng);
      const SymmetryElement offset{exp(init.random_scale * r1), init.random_scale * r2};
      return sdp_compose(transitive_solve(origin.as_state(), truth), offset);
    }
    case ObserverInitKind::kExplicit:
      break;
  }
  const int n = group->n();
  return {GroupElement(group, init.Ahat.value_or(Matrix::Identity(n, n))),
          AlgebraElement::from_coords(group, init.ahat.value_or(Vector::Zero(group->dim())))};
}

TrajectoryRecord make_record(double t, const State& truth, const SymmetryElement& lifted,
                             const ObserverState& obs) {
  const State origin = obs.origin.as_state();
  const SymmetryElement x_true = transitive_solve(origin, truth);
  const GroupError err = group_error(obs, x_true);
  const DiagnosticError diag = diagnostic_error(obs, x_true);
  const State est = estimate(obs);

  TrajectoryRecord r;
  r.t = t;
  r.true_P = truth.P.mat();
  r.true_V = truth.V.coords();
  r.est_P = est.P.mat();
  r.est_V = est.V.coords();
  r.lyapunov = lyapunov(err, diag, obs.gains.k2);
  r.lyapunov_rate = lyapunov_rate(err, obs.gains.k1);
  const Matrix& at = err.Atilde.mat();
  r.err_A_norm = (Matrix::Identity(at.rows(), at.cols()) - at).norm();
  r.err_a_norm = err.atilde.norm();
  r.residual_true = truth.P.residual();
  r.residual_observer = obs.Ahat.residual();
  r.residual_lifted = lifted.A.residual();
  r.lift_deviation = state_distance(state_action(lifted, origin), truth);
  r.A_norm = x_true.A.mat().norm();
  r.A_inv_norm = x_true.A.mat().inverse().norm();
  return r;
}

void require_finite(const State& xi, const SymmetryElement& lifted, const ObserverState& obs,
                    long step) {
  if (!xi.P.mat().allFinite() || !xi.V.mat().allFinite() || !lifted.A.mat().allFinite() ||
      !lifted.a.mat().allFinite() || !obs.Ahat.mat().allFinite() ||
      !obs.ahat.mat().allFinite()) {
    throw SimulationError("non-finite state at step " + std::to_string(step), step);
  }
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  const GroupPtr group = resolve_group(cfg.group);
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw Error("config: dt must be positive");
  if (!(cfg.duration >= 0.0) || !std::isfinite(cfg.duration)) {
    throw Error("config: duration must be non-negative");
  }
  if (cfg.log_every < 1) throw Error("config: log_every must be >= 1");
  if (!(cfg.max_constraint_residual > 0.0)) {
    throw Error("config: max_constraint_residual must be positive");
  }
  validate(cfg.gains);
  if (cfg.input.kind == InputKind::kHovercraftLissajous && cfg.group != "se2") {
    throw Error("config: hovercraft_lissajous input requires group se2");
  }
  if (cfg.input.kind == InputKind::kConstant &&
      (cfg.input.U1.size() != group->dim() || cfg.input.U2.size() != group->dim())) {
    throw Error("config: constant input coordinates must have length " +
                std::to_string(group->dim()));
  }
  // Constructing the initial values runs the default manifold checks.
  const OriginPoint origin = resolve_origin(cfg, group);
  const State truth = resolve_true_init(cfg, group);
  (void)resolve_observer_init(cfg, group, origin, truth);
}

LissajousSample lissajous_input(double t, const GroupPtr& se2) {
  if (se2->name() != "se2") throw Error("lissajous_input requires se2");
  const double c = std::cos(t);
  const double s = std::sin(t);
  // Heading θ = t, so θ̇ = 1, θ̈ = 0.
  const Eigen::Vector2d pdot(std::cos(t), 2.0 * std::cos(2.0 * t));
  const Eigen::Vector2d pddot(-std::sin(t), -4.0 * std::sin(2.0 * t));
  Eigen::Matrix2d rt;
  rt << c, s, -s, c;
  Eigen::Matrix2d j;
  j << 0.0, -1.0, 1.0, 0.0;
  const Eigen::Vector2d v_lin = rt * pdot;
  const Eigen::Vector2d u_lin = rt * pddot - j * v_lin;

  State state{GroupElement(se2, planar_pose(t, std::sin(t), std::sin(2.0 * t))),
              AlgebraElement::from_coords(se2, vec3(1.0, v_lin.x(), v_lin.y()))};
  InputVelocity input{AlgebraElement::zero(se2),
                      AlgebraElement::from_coords(se2, vec3(0.0, u_lin.x(), u_lin.y()))};
  return {std::move(state), std::move(input)};
}

InputVelocity scenario_input(const InputSource& source, double t, const GroupPtr& group) {
  switch (source.kind) {
    case InputKind::kHovercraftLissajous:
      return lissajous_input(t, group).input;
    case InputKind::kConstant:
      return {AlgebraElement::from_coords(group, source.U1),
              AlgebraElement::from_coords(group, source.U2)};
    case InputKind::kZero:
      break;
  }
  return InputVelocity::zero(group);
}

std::vector<TrajectoryRecord> run_scenario(const ScenarioConfig& cfg) {
  validate(cfg);
  const GroupPtr strict = resolve_group(cfg.group);
  const OriginPoint origin0 = resolve_origin(cfg, strict);
  const State truth0 = resolve_true_init(cfg, strict);
  const SymmetryElement xhat0 = resolve_observer_init(cfg, strict, origin0, truth0);

  // Integrated elements are checked against the run's abort threshold
  // instead of the default manifold tolerance.
  const GroupPtr group = with_tolerance(
      strict, {std::min(ManifoldTolerance{}.warn, cfg.max_constraint_residual),
               cfg.max_constraint_residual});
  auto rebind = [&](const GroupElement& g) { return GroupElement(group, g.mat()); };
  auto rebind_alg = [&](const AlgebraElement& w) { return AlgebraElement::from_coords(group, w.coords()); };

  const OriginPoint origin{rebind(origin0.P0), rebind_alg(origin0.V0)};
  State truth{rebind(truth0.P), rebind_alg(truth0.V)};
  SymmetryElement lifted = transitive_solve(origin.as_state(), truth);
  ObserverState obs =
      ObserverState::make({rebind(xhat0.A), rebind_alg(xhat0.a)}, origin, cfg.gains);

  const long steps = std::lround(cfg.duration / cfg.dt);
  std::vector<TrajectoryRecord> records;
  records.reserve(static_cast<std::size_t>(steps / cfg.log_every + 2));

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (k % cfg.log_every == 0 || k == steps) {
      records.push_back(make_record(t, truth, lifted, obs));
    }
    if (k == steps) break;

    try {
      const InputVelocity u = scenario_input(cfg.input, t, group);
      const Innovation delta = innovation(obs, output(truth));
      SymmetryElement xhat = obs.xhat();
      if (cfg.integrator == Integrator::kEuler) {
        xhat = euler_step(xhat, observer_dynamics(obs, u, delta), cfg.dt);
        lifted = euler_step(lifted, dL(lifted, lifted_dynamics(lifted, origin, u)), cfg.dt);
        truth = euler_step(truth, dynamics(truth, u), cfg.dt);
      } else if (cfg.integrator == Integrator::kExp) {
        xhat = exp_step(xhat, observer_body_velocity(obs, u, delta), cfg.dt);
        lifted = exp_step(lifted, lifted_dynamics(lifted, origin, u), cfg.dt);
        truth = exp_step(truth, lift(truth, u), cfg.dt);
      } else {
        const SymmetryVelocity k_obs = observer_body_velocity(obs, u, delta);
        const SymmetryVelocity k_lift = lifted_dynamics(lifted, origin, u);
        const SymmetryVelocity k_true = lift(truth, u);
        // predictor
        const SymmetryElement xhat_p = exp_step(xhat, k_obs, cfg.dt);
        ObserverState obs_p = obs;
        obs_p.Ahat = xhat_p.A;
        obs_p.ahat = xhat_p.a;
        const State truth_p = exp_step(truth, k_true, cfg.dt);
        const SymmetryElement lifted_p = exp_step(lifted, k_lift, cfg.dt);
        const InputVelocity u_p = scenario_input(cfg.input, t + cfg.dt, group);
        const Innovation delta_p = innovation(obs_p, output(truth_p));
        // corrector
        xhat = exp_step(xhat, mean_velocity(k_obs, observer_body_velocity(obs_p, u_p, delta_p)),
                        cfg.dt);
        lifted = exp_step(lifted, mean_velocity(k_lift, lifted_dynamics(lifted_p, origin, u_p)),
                          cfg.dt);
        truth = exp_step(truth, mean_velocity(k_true, lift(truth_p, u_p)), cfg.dt);
      }
      obs.Ahat = std::move(xhat.A);
      obs.ahat = std::move(xhat.a);
    } catch (const ManifoldError& e) {
      std::ostringstream os;
      os << "aborted at step " << k << " (t = " << t << "): " << e.what();
      throw SimulationError(os.str(), k);
    } catch (const AlgebraError& e) {
      std::ostringstream os;
      os << "aborted at step " << k << " (t = " << t << "): " << e.what();
      throw SimulationError(os.str(), k);
    }
    require_finite(truth, lifted, obs, k);
  }
  return records;
}

double log_lyapunov_slope(const std::vector<TrajectoryRecord>& records, double t0, double t1) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : records) {
    if (r.t < t0 || r.t > t1 || !(r.lyapunov > 0.0)) continue;
    const double y = std::log10(r.lyapunov);
    n += 1;
    sx += r.t;
    sy += y;
    sxx += r.t * r.t;
    sxy += r.t * y;
  }
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (n * sxy - sx * sy) / denom;
}

ScenarioSummary summarize(const std::vector<TrajectoryRecord>& records) {
  ScenarioSummary s;
  s.records = records.size();
  if (records.empty()) return s;
  s.initial_lyapunov = records.front().lyapunov;
  s.final_lyapunov = records.back().lyapunov;
  s.final_err_A_norm = records.back().err_A_norm;
  s.final_err_a_norm = records.back().err_a_norm;
  s.max_lyapunov_rate = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    s.max_lyapunov_rate = std::max(s.max_lyapunov_rate, r.lyapunov_rate);
    s.max_constraint_residual = std::max(
        {s.max_constraint_residual, r.residual_true, r.residual_observer, r.residual_lifted});
    s.max_lift_deviation = std::max(s.max_lift_deviation, r.lift_deviation);
  }
  s.log_lyapunov_slope = log_lyapunov_slope(records, 1.0, records.back().t);
  return s;
}

namespace {

SweepEntry run_sweep_entry(const ScenarioConfig& base, double k1, double k2) {
  SweepEntry entry;
  entry.k1 = k1;
  entry.k2 = k2;
  ScenarioConfig cfg = base;
  cfg.gains = {k1, k2};
  entry.config_hash = config_hash(cfg);
  try {
    entry.records = run_scenario(cfg);
    entry.summary = summarize(entry.records);
  } catch (const std::exception& e) {
    entry.error = e.what();
  }
  return entry;
}

}  // namespace

std::vector<SweepEntry> run_sweep(const ScenarioConfig& base, const std::vector<double>& k1s,
                                  const std::vector<double>& k2s) {
  const long total = static_cast<long>(k1s.size() * k2s.size());
  std::vector<SweepEntry> entries(static_cast<std::size_t>(total));
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < total; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    entries[idx] = run_sweep_entry(base, k1s[idx / k2s.size()], k2s[idx % k2s.size()]);
  }
  return entries;
}

std::vector<SweepEntry> run_sweep_serial(const ScenarioConfig& base,
                                         const std::vector<double>& k1s,
                                         const std::vector<double>& k2s) {
  std::vector<SweepEntry> entries;
  entries.reserve(k1s.size() * k2s.size());
  for (double k1 : k1s) {
    for (double k2 : k2s) entries.push_back(run_sweep_entry(base, k1, k2));
  }
  return entries;
}

}  // namespace eqobs
