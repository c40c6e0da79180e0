#pragma once

// Scenario runner: integrates the true system, the lifted system and the
// observer side by side and records diagnostics against ground truth.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqobs/integrators.hpp"
#include "eqobs/observer.hpp"

namespace eqobs {

enum class InputKind { kHovercraftLissajous, kConstant, kZero };

struct InputSource {
  InputKind kind = InputKind::kHovercraftLissajous;
  Vector U1;  // coordinates, used by kConstant
  Vector U2;
};

enum class ObserverInitKind {
  kExplicit,   // Ahat / ahat given
  kZeroError,  // X̂(0) = transitive_solve(ξ°, ξ(0))
  kRandom,     // X̂(0) = transitive_solve(ξ°, ξ(0))·(exp(s·r1), s·r2), r uniform in [-1, 1]
};

struct ObserverInit {
  ObserverInitKind kind = ObserverInitKind::kExplicit;
  std::optional<Matrix> Ahat;  // identity when absent
  std::optional<Vector> ahat;  // zero when absent
  double random_scale = 0.1;
};

struct ScenarioConfig {
  std::string group = "se2";
  double dt = 1e-3;
  double duration = 15.0;
  Integrator integrator = Integrator::kEuler;
  Gains gains;
  std::optional<Matrix> origin_P;  // identity when absent
  std::optional<Vector> origin_V;  // zero when absent
  // When absent: the Lissajous state at t = 0 for the hovercraft input,
  // otherwise (I, 0).
  std::optional<Matrix> true_P;
  std::optional<Vector> true_V;
  ObserverInit observer_init;
  InputSource input;
  std::uint64_t seed = 0;
  int log_every = 1;
  /// Abort threshold on the constraint residual of any integrated group element.
  double max_constraint_residual = 1e-2;
};

/// Throws Error on invalid fields (dt, duration, gains, log_every, shapes,
/// matrices failing the group's default constraint check).
void validate(const ScenarioConfig& cfg);

struct TrajectoryRecord {
  double t = 0.0;
  Matrix true_P;
  Vector true_V;
  Matrix est_P;
  Vector est_V;
  double lyapunov = 0.0;
  double lyapunov_rate = 0.0;
  double err_A_norm = 0.0;  // ||I - Ã||_F
  double err_a_norm = 0.0;  // ||ã||_F
  double residual_true = 0.0;
  double residual_observer = 0.0;
  double residual_lifted = 0.0;
  /// ||φ(X, ξ°) - ξ|| for the separately integrated lifted state X.
  double lift_deviation = 0.0;
  double A_norm = 0.0;      // ||A||_F of the true lifted configuration
  double A_inv_norm = 0.0;  // ||A^{-1}||_F
};

/// Aborted run; `step` is the index of the step that failed.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, long step) : Error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Hovercraft on the Lissajous curve (sin t, sin 2t) with heading θ(t) = t.
struct LissajousSample {
  State state;
  InputVelocity input;
};
LissajousSample lissajous_input(double t, const GroupPtr& se2);

/// Input at time t for a configured source.
InputVelocity scenario_input(const InputSource& source, double t, const GroupPtr& group);

std::vector<TrajectoryRecord> run_scenario(const ScenarioConfig& cfg);

struct ScenarioSummary {
  std::size_t records = 0;
  double initial_lyapunov = 0.0;
  double final_lyapunov = 0.0;
  double final_err_A_norm = 0.0;
  double final_err_a_norm = 0.0;
  double max_lyapunov_rate = 0.0;
  double max_constraint_residual = 0.0;
  double max_lift_deviation = 0.0;
  /// Least-squares slope of log10 L(t) over t >= 1 s (NaN when undefined).
  double log_lyapunov_slope = 0.0;
};

ScenarioSummary summarize(const std::vector<TrajectoryRecord>& records);

/// Least-squares slope of log10(L) against t over records with t in [t0, t1]
/// and L > 0.
double log_lyapunov_slope(const std::vector<TrajectoryRecord>& records, double t0, double t1);

struct SweepEntry {
  double k1 = 0.0;
  double k2 = 0.0;
  std::string config_hash;
  ScenarioSummary summary;
  std::vector<TrajectoryRecord> records;
  std::string error;  // non-empty when the run aborted
};

/// Runs the k1 × k2 grid. The parallel version distributes runs over OpenMP
/// threads; entries come back in grid order either way.
std::vector<SweepEntry> run_sweep(const ScenarioConfig& base, const std::vector<double>& k1s,
                                  const std::vector<double>& k2s);
std::vector<SweepEntry> run_sweep_serial(const ScenarioConfig& base,
                                         const std::vector<double>& k1s,
                                         const std::vector<double>& k2s);

}  // namespace eqobs
