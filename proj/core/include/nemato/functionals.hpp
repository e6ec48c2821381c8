#pragma once

#include <array>
#include <optional>
#include <vector>

#include "nemato/extreal.hpp"
#include "nemato/fem.hpp"
#include "nemato/material.hpp"
#include "nemato/timefun.hpp"

namespace nemato {

// Time-parametrised bi-Lipschitz boundary datum, affine in space:
//   d_t(x) = A(t) x + b(t)
// with every entry piecewise-polynomial in t. The inverse and the time
// derivative are available in closed form; det A(t) > 0 is validated on a
// fine time grid over [0, T].
class BoundaryDatum {
 public:
  BoundaryDatum(std::array<PiecewisePoly, 4> a_entries, std::array<PiecewisePoly, 2> b_entries,
                double horizon);
  static BoundaryDatum identity(double horizon = 1.0);
  static BoundaryDatum static_affine(const Mat& A, const Vec& b, double horizon = 1.0);

  bool time_dependent() const { return time_dependent_; }
  double horizon() const { return horizon_; }

  Mat A(double t) const;
  Vec b(double t) const;
  Mat A_dot(double t, Side side = Side::Right) const;
  Vec b_dot(double t, Side side = Side::Right) const;

  Vec map(double t, const Vec& x) const { return A(t) * x + b(t); }
  Vec inverse_map(double t, const Vec& xi) const { return inverse(A(t)) * (xi - b(t)); }
  // d/dt d_t(x) = A'(t) x + b'(t)
  Vec velocity(double t, const Vec& x, Side side = Side::Right) const {
    return A_dot(t, side) * x + b_dot(t, side);
  }

  // Union of the entries' breakpoints (the non-differentiability set).
  const std::vector<double>& knots() const { return knots_; }
  bool is_knot(double t, double tol = 1e-12) const;

  // inf / sup of det A(t) over a fine grid on [0, T]; the constants m2, m3
  // of the transformed coercivity bound.
  double inf_det() const { return inf_det_; }
  double sup_det() const { return sup_det_; }
  // sup over t of |(cof A(t))^{-1}| (constant m1) and of |A(t)^{-1}|.
  double sup_inv_cof_norm() const { return sup_inv_cof_; }
  double sup_inv_norm() const { return sup_inv_; }
  double sup_norm() const { return sup_A_; }

 private:
  std::array<PiecewisePoly, 4> a_;
  std::array<PiecewisePoly, 2> b_;
  double horizon_;
  bool time_dependent_;
  std::vector<double> knots_;
  double inf_det_, sup_det_, sup_inv_cof_, sup_inv_, sup_A_;
};

// Closed-form load: affine spatial profile times a scalar piecewise
// polynomial in t.
struct SpaceProfile {
  Vec c{0.0, 0.0};
  Mat L{0.0, 0.0, 0.0, 0.0};
  Vec value(const Vec& x) const { return c + L * x; }
  static SpaceProfile constant(const Vec& v) { return SpaceProfile{v, Mat(2)}; }
};

struct Load {
  SpaceProfile space;
  PiecewisePoly time = PiecewisePoly::constant(0.0);

  Vec value(double t, const Vec& x) const { return time(t) * space.value(x); }
  Vec rate(double t, const Vec& x, Side side = Side::Right) const {
    return time.derivative(t, side) * space.value(x);
  }
  Mat gradient(double t) const { return time(t) * space.L; }
  bool is_zero() const { return time.is_constant() && time(0.0) == 0.0; }
};

// Body force f on Omega, surface force g on Sigma, external field h on the
// confinement region (h acts on the deformed configuration).
struct LoadSet {
  Load f, g, h;

  static LoadSet none() { return LoadSet{}; }
  std::vector<double> knots() const;
  bool is_knot(double t, double tol = 1e-12) const;
  bool static_in_time() const {
    return f.time.is_constant() && g.time.is_constant() && h.time.is_constant();
  }
};

struct EnergyBreakdown {
  ExtReal elastic = 0.0;
  ExtReal nematic = 0.0;
  double loads = 0.0;
  ExtReal total() const { return elastic + nematic - loads; }
};

// E(t, q) = I(q) - L(t, q):
//   elastic = sum_e |e| W(Dy_e, m(e));
//   nematic = sum_e |e| |Dm_e (Dy_e)^{-1}|^2 det Dy_e  (image Dirichlet
//             energy pulled back to the reference configuration);
//   loads   = int f.y + int_Sigma g.y + int (h(y)).m det Dy.
// Any element with det Dy <= 0 makes the elastic and nematic parts infinite.
EnergyBreakdown total_energy(double t, const State& q, const MaterialModel& model,
                             const LoadSet& loads);

// D(q, qhat) = int |m - mhat| dx on the shared reference mesh.
double dissipation(const State& q, const State& qhat);

// sum of step dissipations over the grid points <= t.
double variation(const std::vector<State>& states, const std::vector<double>& times, double t);

// Partial time derivative of E at fixed state:
//   -int df/dt . y - int_Sigma dg/dt . y - int (dh/dt (y)) . m det Dy.
double power_time_independent(double t, const State& q, const LoadSet& loads,
                              Side side = Side::Right);

// Nodal pull-back y = d_t o u with the stored director unchanged (the stored
// object is the composition with the deformation, which cancels d_t).
State pullback(double t, const State& p, const BoundaryDatum& datum,
               const std::optional<Box>& confinement = std::nullopt);
State pullback_inverse(double t, const State& q, const BoundaryDatum& datum,
                       const std::optional<Box>& confinement = std::nullopt);

// Auxiliary energy F(t, p) = J(t, p) - M(t, p) evaluated in the reference
// variables (u, m); elastic/nematic carry J^e/J^n, loads carries M.
EnergyBreakdown aux_energy(double t, const State& p, const MaterialModel& model,
                           const LoadSet& loads, const BoundaryDatum& datum);

// Power of the displacement loadings P(t, q). Consistent with the identity
// d_t E(t, q_t) + P(t, q_t) = d_t F(t, p_t) under q_t = pullback(t, p_t):
// the Kirchhoff-type and nematic transport terms enter with positive sign,
// the load-velocity terms (body, surface, field gradient + trace) negative.
double displacement_power(double t, const State& q, const MaterialModel& model,
                          const LoadSet& loads, const BoundaryDatum& datum,
                          Side side = Side::Right);

// d_t F(t, p): the five analytic time-derivative formulas of the auxiliary
// functionals evaluated on discrete fields.
double aux_power(double t, const State& p, const MaterialModel& model, const LoadSet& loads,
                 const BoundaryDatum& datum, Side side = Side::Right);

}  // namespace nemato
