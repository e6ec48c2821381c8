#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "nemato/functionals.hpp"
#include "nemato/rng.hpp"

namespace nemato {

struct SolverConfig {
  double T = 1.0;
  int n_steps = 20;
  int max_sweeps = 6;          // alternating y/m sweeps per increment
  int max_inner_iters = 400;   // descent iterations per phase
  double grad_tol = 1e-9;      // gradient norm tolerance, scaled by energy
  double sweep_tol = 1e-12;    // stop sweeping below this improvement
  double huber_eps = 1e-4;     // dissipation smoothing (halved in last sweep)
  double backtrack = 0.5;
  double det_safeguard = 1e-2; // accepted steps keep min_det >= this * current
  int multistart = 0;          // extra perturbed restarts per increment
  std::optional<Box> confinement;
  int stability_competitors = 0;
  double stability_tol = 1e-8;  // scaled by energy
  bool polish_on_violation = false;
  std::uint64_t seed = 1;
};

// The minimization target: the direct energy E(t, (y, m)) for a static
// datum, or the auxiliary energy F(t, (u, m)) when the boundary datum moves
// in time (the state then holds the reference variables).
struct Problem {
  const Mesh* mesh;
  MaterialModel model;
  LoadSet loads;
  BoundaryDatum datum;
  bool auxiliary = false;
  std::optional<Box> confinement;

  EnergyBreakdown breakdown(double t, const State& s) const {
    return auxiliary ? aux_energy(t, s, model, loads, datum)
                     : total_energy(t, s, model, loads);
  }
  ExtReal energy(double t, const State& s) const { return breakdown(t, s).total(); }
};

struct StabilityReport {
  int competitors = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min over competitors of E(qhat)+D-E(q); >= -tol when stable
};

struct StepRecord {
  double t;
  State state;             // q_t in the deformed-variable formulation
  EnergyBreakdown energy;  // E(t, q_t)
  double step_dissipation = 0.0;
  double variation = 0.0;
  double power = 0.0;      // d_t E(t, q_t) + P(t, q_t)
  double aux_power = 0.0;  // d_t F(t, p_t); equals power for static data
  double min_det = 0.0;
  double pullback_gap = 0.0;  // |E(t, pullback(p)) - F(t, p)| on auxiliary runs
  bool descent_ok = true;     // E(t,q_k) + D(q_{k-1},q_k) <= E(t,q_{k-1})
  bool no_descent_warning = false;
  StabilityReport stability;
};

struct Trajectory {
  std::vector<StepRecord> steps;
  bool auxiliary_route = false;
  std::vector<State> internal_states;  // minimization variables (p_t on aux runs)

  std::vector<double> times() const;
};

// Gradient assembly (exposed for finite-difference verification).
std::vector<Vec> position_gradient(const Problem& pb, double t, const State& s);
std::vector<Vec> director_gradient(const Problem& pb, double t, const State& s,
                                   const DirectorField& m_prev, double huber_eps);

// Inner solvers. Deformation: backtracking Barzilai-Borwein descent on the
// free nodal positions (Lambda nodes pinned), each accepted step keeping
// min_det above the safeguard fraction of the incoming value. Director:
// projected gradient on the nodal sphere with per-step renormalisation;
// the L1 dissipation is Huber-smoothed inside the search but candidate
// iterates are ranked by the true objective.
State minimize_deformation(const Problem& pb, double t, State s, const SolverConfig& cfg);
State minimize_director(const Problem& pb, double t, State s, const DirectorField& m_prev,
                        double huber_eps, const SolverConfig& cfg);

// One incremental minimization of E(t_k, .) + D(q_prev, .) by alternating
// descent. Never returns a state worse than staying at q_prev; if no
// admissible descent is found the previous state is returned with a warning.
struct IncrementResult {
  State state;
  bool no_descent_warning = false;
};
IncrementResult incremental_step(const Problem& pb, double t, const State& q_prev,
                                 const SolverConfig& cfg, CounterRng& rng);

// Samples competitors (the previous state, global director flips, random
// admissible perturbations at three amplitudes) and checks the global
// stability inequality E(t,q) <= E(t,qhat) + D(q,qhat) + tol.
StabilityReport stability_check(const Problem& pb, double t, const State& q,
                                const State* q_prev, int n_competitors, double tol,
                                CounterRng& rng);

// Runs the quasistatic evolution: pre-relaxes the initial state at t = 0,
// then advances by incremental minimization on the uniform grid. For a
// time-dependent datum the auxiliary problem in (u, m) is solved and mapped
// back through the pull-back at every step, recording the identity gap.
Trajectory run_quasistatic(const Problem& pb, const State& initial, const SolverConfig& cfg);

// r_k = E(t_k,q_k) + Var(0,t_k) - E(0,q_0) - trapezoid of the power column.
std::vector<double> balance_residual(const Trajectory& tr);

}  // namespace nemato
