#include "eqobs/verify.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <sstream>

#include "eqobs/observer.hpp"
#include "eqobs/serialization.hpp"

namespace eqobs {

namespace {

enum Check : std::size_t {
  kGroupAssociativity,
  kGroupIdentity,
  kGroupInverse,
  kAdjointBracket,
  kAdjointComposition,
  kProjectionIdempotent,
  kProjectionSelfAdjoint,
  kJacobi,
  kSdpAssociativity,
  kSdpIdentity,
  kSdpInverse,
  kSdpAdjointFd,
  kSdpAdjointHomomorphism,
  kDlFd,
  kStateActionLaw,
  kInputActionLaw,
  kTransitiveSolve,
  kEquivariance,
  kLiftCondition,
  kDphiFd,
  kLiftEquivariance,
  kLiftedDynamicsDual,
  kInternalModel,
  kInnovationMembership,
  kLyapunovRateSign,
  kLyapunovRateIdentity,
  kCheckCount,
};

constexpr double kFdStep = 1e-6;
constexpr double kLyapunovFdStep = 1e-5;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double dist(const Matrix& a, const Matrix& b) { return (a - b).norm(); }

double dist(const SymmetryElement& x, const SymmetryElement& y) {
  return std::hypot(dist(x.A.mat(), y.A.mat()), dist(x.a.mat(), y.a.mat()));
}

double dist(const InputVelocity& u, const InputVelocity& v) {
  return std::hypot(dist(u.U1.mat(), v.U1.mat()), dist(u.U2.mat(), v.U2.mat()));
}

double dist(const SymmetryTangent& s, const SymmetryTangent& t) {
  return std::hypot(dist(s.dA, t.dA), dist(s.da.mat(), t.da.mat()));
}

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  }
  return m;
}

SymmetryElement random_sdp(const GroupPtr& g, std::mt19937_64& rng) {
  GroupElement a = random_group(g, rng);
  return {std::move(a), random_algebra(g, rng)};
}

// L along the straight line (ξ, X̂) + h (ξ̇, X̂̇); the loose descriptor admits
// the O(h²) departure from the manifold.
double lyapunov_along(const GroupPtr& loose, const State& xi, const InputVelocity& u,
                      const ObserverState& obs, const SymmetryTangent& obs_dot, double h) {
  const Matrix& p = xi.P.mat();
  const State moved{GroupElement(loose, p + h * p * (xi.V + u.U1).mat()), xi.V + h * u.U2};
  ObserverState obs_h = obs;
  obs_h.Ahat = GroupElement(loose, obs.Ahat.mat() + h * obs_dot.dA);
  obs_h.ahat = obs.ahat + h * obs_dot.da;
  const SymmetryElement x_true = transitive_solve(obs.origin.as_state(), moved);
  return lyapunov(group_error(obs_h, x_true), diagnostic_error(obs_h, x_true), obs.gains.k2);
}

}  // namespace

std::vector<CheckResult> verify_checks() {
  std::vector<CheckResult> c(kCheckCount);
  auto set = [&c](Check k, const char* name, double tol) { c[k] = {name, 0.0, tol}; };
  set(kGroupAssociativity, "group_associativity", 1e-10);
  set(kGroupIdentity, "group_identity", 1e-10);
  set(kGroupInverse, "group_inverse", 1e-10);
  set(kAdjointBracket, "adjoint_bracket_homomorphism", 1e-9);
  set(kAdjointComposition, "adjoint_composition", 1e-9);
  set(kProjectionIdempotent, "projection_idempotent", 1e-10);
  set(kProjectionSelfAdjoint, "projection_self_adjoint", 1e-10);
  set(kJacobi, "jacobi_identity", 1e-10);
  set(kSdpAssociativity, "sdp_associativity", 1e-10);
  set(kSdpIdentity, "sdp_identity", 1e-10);
  set(kSdpInverse, "sdp_inverse", 1e-10);
  set(kSdpAdjointFd, "sdp_adjoint_vs_fd", 1e-5);
  set(kSdpAdjointHomomorphism, "sdp_adjoint_homomorphism", 1e-9);
  set(kDlFd, "dL_vs_fd", 1e-5);
  set(kStateActionLaw, "state_action_law", 1e-10);
  set(kInputActionLaw, "input_action_law", 1e-10);
  set(kTransitiveSolve, "transitive_solve", 1e-10);
  set(kEquivariance, "equivariance", 1e-10);
  set(kLiftCondition, "lift_condition", 1e-11);
  set(kDphiFd, "dphi_vs_fd", 1e-5);
  set(kLiftEquivariance, "lift_equivariance", 1e-10);
  set(kLiftedDynamicsDual, "lifted_dynamics_dual", 1e-11);
  set(kInternalModel, "internal_model", 1e-12);
  set(kInnovationMembership, "innovation_membership", 1e-10);
  set(kLyapunovRateSign, "lyapunov_rate_nonpositive", 0.0);
  set(kLyapunovRateIdentity, "lyapunov_rate_identity", 1e-5);
  return c;
}

std::vector<double> verify_case(const GroupPtr& g, std::uint64_t seed, int index,
                                bool corrupt_input_action) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(index))));
  std::vector<double> r(kCheckCount, 0.0);
  const GroupPtr loose = with_tolerance(g, {1e-6, 1e-6});

  const GroupElement g1 = random_group(g, rng);
  const GroupElement g2 = random_group(g, rng);
  const GroupElement g3 = random_group(g, rng);
  const GroupElement id = GroupElement::identity(g);
  const AlgebraElement w1 = random_algebra(g, rng);
  const AlgebraElement w2 = random_algebra(g, rng);
  const AlgebraElement w3 = random_algebra(g, rng);

  // Lie-core laws.
  r[kGroupAssociativity] = dist(compose(compose(g1, g2), g3).mat(),
                                compose(g1, compose(g2, g3)).mat());
  r[kGroupIdentity] = std::max(dist(compose(id, g1).mat(), g1.mat()),
                               dist(compose(g1, id).mat(), g1.mat()));
  r[kGroupInverse] = std::max(dist(compose(g1, inverse(g1)).mat(), id.mat()),
                              dist(compose(inverse(g1), g1).mat(), id.mat()));
  r[kAdjointBracket] = dist(adjoint(g1, bracket(w1, w2)).mat(),
                            bracket(adjoint(g1, w1), adjoint(g1, w2)).mat());
  r[kAdjointComposition] = dist(adjoint(compose(g1, g2), w1).mat(),
                                adjoint(g1, adjoint(g2, w1)).mat());
  const Matrix m = random_matrix(g->n(), rng);
  const Matrix n = random_matrix(g->n(), rng);
  const Matrix pm = g->project(m);
  const Matrix pn = g->project(n);
  r[kProjectionIdempotent] = std::max(dist(g->project(pm), pm), dist(g->project(w1.mat()), w1.mat()));
  r[kProjectionSelfAdjoint] = std::abs(trace_inner(pm, n) - trace_inner(m, pn));
  r[kJacobi] = (bracket(w1, bracket(w2, w3)) + bracket(w2, bracket(w3, w1)) +
                bracket(w3, bracket(w1, w2)))
                   .norm();

  // Symmetry group.
  const SymmetryElement x = random_sdp(g, rng);
  const SymmetryElement y = random_sdp(g, rng);
  const SymmetryElement z = random_sdp(g, rng);
  const SymmetryElement e = SymmetryElement::identity(g);
  r[kSdpAssociativity] = dist(sdp_compose(sdp_compose(x, y), z), sdp_compose(x, sdp_compose(y, z)));
  r[kSdpIdentity] = std::max(dist(sdp_compose(e, x), x), dist(sdp_compose(x, e), x));
  r[kSdpInverse] = std::max(dist(sdp_compose(x, sdp_inverse(x)), e),
                            dist(sdp_compose(sdp_inverse(x), x), e));

  const SymmetryVelocity v{random_algebra(g, rng), random_algebra(g, rng)};
  {
    // d/dt X·(exp(t w1), t w2)·X^{-1} at t = 0 is Ad_X (w1, w2).
    const SymmetryElement x_inv = sdp_inverse(x);
    auto conj = [&](double t) {
      return sdp_compose(sdp_compose(x, {exp(t * v.w1), t * v.w2}), x_inv);
    };
    const SymmetryElement plus = conj(kFdStep);
    const SymmetryElement minus = conj(-kFdStep);
    const SymmetryVelocity ad = sdp_adjoint(x, v);
    r[kSdpAdjointFd] =
        std::hypot(dist((plus.A.mat() - minus.A.mat()) / (2 * kFdStep), ad.w1.mat()),
                   dist((plus.a.mat() - minus.a.mat()) / (2 * kFdStep), ad.w2.mat()));

    auto left = [&](double t) { return sdp_compose(x, {exp(t * v.w1), t * v.w2}); };
    const SymmetryElement lp = left(kFdStep);
    const SymmetryElement lm = left(-kFdStep);
    const SymmetryTangent tangent = dL(x, v);
    r[kDlFd] = std::hypot(dist((lp.A.mat() - lm.A.mat()) / (2 * kFdStep), tangent.dA),
                          dist((lp.a.mat() - lm.a.mat()) / (2 * kFdStep), tangent.da.mat()));
  }
  r[kSdpAdjointHomomorphism] =
      velocity_distance(sdp_adjoint(sdp_compose(x, y), v), sdp_adjoint(x, sdp_adjoint(y, v)));

  // Actions, equivariance and the lift.
  const State xi{random_group(g, rng), random_algebra(g, rng)};
  const State target{random_group(g, rng), random_algebra(g, rng)};
  const InputVelocity u{random_algebra(g, rng), random_algebra(g, rng)};
  r[kStateActionLaw] = state_distance(state_action(x, state_action(y, xi)),
                                      state_action(sdp_compose(y, x), xi));
  r[kInputActionLaw] = dist(input_action(x, input_action(y, u)), input_action(sdp_compose(y, x), u));
  r[kTransitiveSolve] = state_distance(state_action(transitive_solve(xi, target), xi), target);
  r[kEquivariance] = corrupt_input_action
                         ? equivariance_residual(x, xi, u, input_action_without_shift)
                         : equivariance_residual(x, xi, u);
  r[kLiftCondition] = tangent_distance(dphi_at_identity(xi, lift(xi, u)), dynamics(xi, u));
  {
    auto curve = [&](double t) { return state_action({exp(t * v.w1), t * v.w2}, xi); };
    const State sp = curve(kFdStep);
    const State sm = curve(-kFdStep);
    const StateTangent analytic = dphi_at_identity(xi, v);
    // Left-trivialize the P-derivative: P^{-1} dP.
    const Matrix dp = xi.P.mat().inverse() * (sp.P.mat() - sm.P.mat()) / (2 * kFdStep);
    r[kDphiFd] = std::hypot(dist(dp, analytic.dP_body.mat()),
                            dist((sp.V.mat() - sm.V.mat()) / (2 * kFdStep), analytic.dV.mat()));
  }
  r[kLiftEquivariance] = lift_equivariance_residual(x, xi, u);

  const OriginPoint origin{random_group(g, rng), random_algebra(g, rng)};
  r[kLiftedDynamicsDual] =
      dist(dL(x, lifted_dynamics(x, origin, u)), lifted_dynamics_explicit(x, origin, u));

  // Observer.
  std::uniform_real_distribution<double> gain(0.2, 5.0);
  const ObserverState obs = ObserverState::make(y, origin, {gain(rng), gain(rng)});
  r[kInternalModel] = dist(observer_dynamics(obs, u, Innovation::zero(g)),
                           dL(obs.xhat(), lifted_dynamics(obs.xhat(), origin, u)));
  const Innovation delta = innovation(obs, output(xi));
  r[kInnovationMembership] =
      std::max(g->algebra_residual(delta.d1.mat()), g->algebra_residual(delta.d2.mat()));

  const SymmetryElement x_true = transitive_solve(origin.as_state(), xi);
  const GroupError err = group_error(obs, x_true);
  const double rate = lyapunov_rate(err, obs.gains.k1);
  r[kLyapunovRateSign] = std::max(rate, 0.0);
  const SymmetryTangent obs_dot = observer_dynamics(obs, u, delta);
  const double fd = (lyapunov_along(loose, xi, u, obs, obs_dot, kLyapunovFdStep) -
                     lyapunov_along(loose, xi, u, obs, obs_dot, -kLyapunovFdStep)) /
                    (2 * kLyapunovFdStep);
  r[kLyapunovRateIdentity] = std::abs(fd - rate) / std::max(1.0, std::abs(rate));
  return r;
}

bool VerifyReport::passed() const {
  if (failed_cases > 0) return false;
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

const CheckResult& VerifyReport::check(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw Error("no check named '" + name + "'");
}

namespace {

VerifyReport run_suite(const VerifyOptions& options, bool parallel) {
  if (options.cases < 1) throw Error("verify: cases must be >= 1");
  const GroupPtr g = resolve_group(options.group);
  VerifyReport report;
  report.group = options.group;
  report.cases = options.cases;
  report.checks = verify_checks();

  std::vector<double> maxima(kCheckCount, 0.0);
  int failed = 0;
  int first_failed_index = std::numeric_limits<int>::max();
  std::string first_failure;

#pragma omp parallel if (parallel)
  {
    std::vector<double> local(kCheckCount, 0.0);
    int local_failed = 0;
    int local_first = std::numeric_limits<int>::max();
    std::string local_msg;
#pragma omp for schedule(static)
    for (int i = 0; i < options.cases; ++i) {
      try {
        const auto r = verify_case(g, options.seed, i, options.corrupt_input_action);
        for (std::size_t k = 0; k < kCheckCount; ++k) {
          // NaN must register as a failure.
          local[k] = std::isnan(r[k]) ? std::numeric_limits<double>::infinity()
                                      : std::max(local[k], r[k]);
        }
      } catch (const std::exception& e) {
        ++local_failed;
        if (i < local_first) {
          local_first = i;
          local_msg = "case " + std::to_string(i) + ": " + e.what();
        }
      }
    }
#pragma omp critical(eqobs_verify_merge)
    {
      for (std::size_t k = 0; k < kCheckCount; ++k) maxima[k] = std::max(maxima[k], local[k]);
      failed += local_failed;
      if (local_first < first_failed_index) {
        first_failed_index = local_first;
        first_failure = local_msg;
      }
    }
  }

  for (std::size_t k = 0; k < kCheckCount; ++k) report.checks[k].max_residual = maxima[k];
  report.failed_cases = failed;
  report.first_failure = first_failure;
  return report;
}

}  // namespace

VerifyReport verify_suite(const VerifyOptions& options) { return run_suite(options, true); }

VerifyReport verify_suite_serial(const VerifyOptions& options) {
  return run_suite(options, false);
}

std::string format_report(const VerifyReport& report) {
  std::ostringstream os;
  os << "group " << report.group << ", " << report.cases << " cases\n";
  for (const auto& c : report.checks) {
    char line[160];
    std::snprintf(line, sizeof(line), "  %-30s max %.3e  tol %.1e  %s\n", c.name.c_str(),
                  c.max_residual, c.tolerance, c.passed() ? "ok" : "FAIL");
    os << line;
  }
  if (report.failed_cases > 0) {
    os << "  " << report.failed_cases << " case(s) threw; first: " << report.first_failure << '\n';
  }
  os << (report.passed() ? "PASS" : "FAIL") << '\n';
  return os.str();
}

}  // namespace eqobs
