#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nemato/solver.hpp"

namespace nemato {

struct InequalityReport {
  std::string id;
  double constant = 0.0;  // estimated constant (ratio supremum)
  int samples = 0;
  std::vector<int> resolutions;
  double max_violation = 0.0;  // must stay <= 0 for hard inequalities
  std::uint64_t seed = 0;
  bool passed = true;
  std::vector<std::string> notes;
};

// Random P1 vector field: random Fourier modes at the given correlation
// length, overall amplitude as given. The standard sampler cycles three
// correlation lengths and log-uniform amplitudes in 1e-2..1e2, mixing in
// constant fields and fields vanishing on Lambda.
std::vector<Vec> sample_field(const Mesh& mesh, CounterRng& rng, double correlation_length,
                              double amplitude);

// Modular Poincare inequality with trace term:
//   int A(|v|) <= C_P ( int A(|Dv|) + int_Lambda A(|v|) ).
// C_P estimated as the ratio supremum over random fields.
InequalityReport poincare_estimate(const Mesh& mesh, const NFunction& A, int n_samples,
                                   CounterRng& rng);

// Modular trace inequality:
//   int_bdry A(|v|) <= C_tr ( int A(|Dv|) + int A(|v|) ).
InequalityReport trace_estimate(const Mesh& mesh, const NFunction& A, int n_samples,
                                CounterRng& rng);

struct PowerModulusResult {
  std::vector<double> h;
  std::vector<double> err;  // max over states of |forward quotient - power|
  double slope = 0.0;       // log-log regression slope over resolvable points
  bool monotone = true;     // errors decrease with h within the noise floor
  bool passed = true;
};

// Forward difference-quotient error of the energy in time against the
// analytic power, over a set of states with bounded energy. Uses the
// direct pair (E, d_t E) or the auxiliary pair (F, d_t F) per pb.auxiliary.
PowerModulusResult power_modulus_check(const Problem& pb, double t,
                                       const std::vector<State>& states,
                                       const std::vector<double>& h_grid);

// Sphere embedding inequality on the discretised circle (N = 2):
//   sup |v| <= C_em A1^{-1}( avg modular of tangential gradient + avg modular of v ).
InequalityReport sphere_embedding_check(const NFunction& A, int n_samples, CounterRng& rng,
                                        int n_vertices = 256);

// Constructive constants of the coercivity bounds.
struct CoercivityConstants {
  // direct (time-independent) branch
  double C_P = 0.0, C_tr = 0.0;
  double eps = 0.0;  // the Young-splitting parameter that halves c_W
  double K1 = 0.0, K2 = 0.0;
  // auxiliary (transformed) branch
  double m1 = 0.0, m2 = 0.0, m3 = 0.0;
  double K1_aux = 0.0, K2_aux = 0.0;
};

CoercivityConstants coercivity_constants(double t, const Mesh& mesh, const MaterialModel& model,
                                         const LoadSet& loads, const BoundaryDatum& datum,
                                         double C_P, double C_tr, const Box& field_domain);

// Verifies both coercivity bounds with the constructive constants on random
// admissible states:
//   E(t,q) >= K1 ( int {A(|Dy|) + Gamma(|adj Dy|) + gamma(det Dy)} + nematic ) - K2
// and the transformed bound for F with (Gamma-tilde, gamma-tilde) built from
// (m1, m2, m3). Reports the worst margin; zero violations expected.
InequalityReport coercivity_probe(double t, int n_states, const Mesh& mesh,
                                  const MaterialModel& model, const LoadSet& loads,
                                  const BoundaryDatum& datum, const CoercivityConstants& cc,
                                  CounterRng& rng);

}  // namespace nemato
