#include "nemato/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nemato {

// ----------------------------------------------------------- BoundaryDatum

BoundaryDatum::BoundaryDatum(std::array<PiecewisePoly, 4> a_entries,
                             std::array<PiecewisePoly, 2> b_entries, double horizon)
    : a_(std::move(a_entries)), b_(std::move(b_entries)), horizon_(horizon) {
  if (!(horizon_ > 0.0)) throw std::invalid_argument("BoundaryDatum: horizon must be positive");
  time_dependent_ = false;
  for (const auto& p : a_)
    if (!p.is_constant()) time_dependent_ = true;
  for (const auto& p : b_)
    if (!p.is_constant()) time_dependent_ = true;

  std::set<double> ks;
  for (const auto& p : a_) ks.insert(p.knots().begin(), p.knots().end());
  for (const auto& p : b_) ks.insert(p.knots().begin(), p.knots().end());
  knots_.assign(ks.begin(), ks.end());

  inf_det_ = 1e300;
  sup_det_ = 0.0;
  sup_inv_cof_ = 0.0;
  sup_inv_ = 0.0;
  sup_A_ = 0.0;
  const int grid = 512;
  for (int i = 0; i <= grid; ++i) {
    const double t = horizon_ * i / grid;
    const Mat At = A(t);
    const double det = determinant(At);
    if (!(det > 0.0)) throw std::invalid_argument("BoundaryDatum: det A(t) <= 0 on [0, T]");
    inf_det_ = std::min(inf_det_, det);
    sup_det_ = std::max(sup_det_, det);
    sup_inv_cof_ = std::max(sup_inv_cof_, inverse(cofactor(At)).norm());
    sup_inv_ = std::max(sup_inv_, inverse(At).norm());
    sup_A_ = std::max(sup_A_, At.norm());
  }
}

BoundaryDatum BoundaryDatum::identity(double horizon) {
  return static_affine(Mat::identity(2), Vec(0.0, 0.0), horizon);
}

BoundaryDatum BoundaryDatum::static_affine(const Mat& A, const Vec& b, double horizon) {
  std::array<PiecewisePoly, 4> ae = {
      PiecewisePoly::constant(A(0, 0)), PiecewisePoly::constant(A(0, 1)),
      PiecewisePoly::constant(A(1, 0)), PiecewisePoly::constant(A(1, 1))};
  std::array<PiecewisePoly, 2> be = {PiecewisePoly::constant(b[0]),
                                     PiecewisePoly::constant(b[1])};
  return BoundaryDatum(std::move(ae), std::move(be), horizon);
}

Mat BoundaryDatum::A(double t) const { return Mat(a_[0](t), a_[1](t), a_[2](t), a_[3](t)); }
Vec BoundaryDatum::b(double t) const { return Vec(b_[0](t), b_[1](t)); }

Mat BoundaryDatum::A_dot(double t, Side side) const {
  return Mat(a_[0].derivative(t, side), a_[1].derivative(t, side), a_[2].derivative(t, side),
             a_[3].derivative(t, side));
}

Vec BoundaryDatum::b_dot(double t, Side side) const {
  return Vec(b_[0].derivative(t, side), b_[1].derivative(t, side));
}

bool BoundaryDatum::is_knot(double t, double tol) const {
  for (double k : knots_)
    if (std::abs(t - k) <= tol) return true;
  return false;
}

std::vector<double> LoadSet::knots() const {
  std::set<double> ks;
  for (const Load* l : {&f, &g, &h}) ks.insert(l->time.knots().begin(), l->time.knots().end());
  return {ks.begin(), ks.end()};
}

bool LoadSet::is_knot(double t, double tol) const {
  for (double k : knots())
    if (std::abs(t - k) <= tol) return true;
  return false;
}

// ------------------------------------------------------------------ energy

namespace {

// Shared core: energies evaluated from an effective deformation gradient per
// element and an effective deformed position per quadrature point. The
// direct route uses the state's own fields; the auxiliary route composes
// with the boundary datum analytically.
struct EffectiveState {
  const Mesh& mesh;
  const DirectorField& m;
  std::function<Mat(int)> grad;                              // effective Dy_e
  std::function<Vec(int, const std::array<double, 3>&)> pos; // effective y(x_q)
};

EnergyBreakdown energy_core(double t, const EffectiveState& es, const MaterialModel& model,
                            const LoadSet& loads) {
  EnergyBreakdown out;
  out.elastic = integrate_volume_ext(es.mesh, [&](int e) -> ExtReal {
    const Vec mc = es.m.unit_value(e, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    return elastic_density(model, es.grad(e), UnitVector::normalized(mc));
  });
  out.nematic = integrate_volume_ext(es.mesh, [&](int e) -> ExtReal {
    const Mat Dy = es.grad(e);
    if (determinant(Dy) <= 0.0) return ExtReal::infinity();
    return nematic_integrand(es.m.gradient(e), Dy);
  });

  double lw = 0.0;
  if (!loads.f.is_zero()) {
    lw += integrate_volume_q2(es.mesh, [&](int e, const Vec& x, const std::array<double, 3>& b) {
      return loads.f.value(t, x).dot(es.pos(e, b));
    });
  }
  // surface work is added by the callers (the P1 trace on Sigma edges only
  // needs the two edge nodes, and the two routes compose differently)
  if (!loads.h.is_zero() && out.elastic.finite()) {
    lw += integrate_volume_q2(es.mesh, [&](int e, const Vec&, const std::array<double, 3>& b) {
      const Mat Dy = es.grad(e);
      const Vec mq = es.m.unit_value(e, b[0], b[1], b[2]);
      return loads.h.value(t, es.pos(e, b)).dot(mq) * determinant(Dy);
    });
  }
  out.loads = lw;
  return out;
}

double surface_work(double t, const Mesh& mesh, const Load& g,
                    const std::function<Vec(const BoundaryEdge&, double)>& pos_edge) {
  if (g.is_zero()) return 0.0;
  return integrate_boundary_q2(mesh, BoundaryLabel::Sigma,
                               [&](const BoundaryEdge& be, const Vec& x, double s) {
                                 return g.value(t, x).dot(pos_edge(be, s));
                               });
}

}  // namespace

EnergyBreakdown total_energy(double t, const State& q, const MaterialModel& model,
                             const LoadSet& loads) {
  const Mesh& mesh = q.y.mesh();
  EffectiveState es{
      mesh, q.m, [&](int e) { return q.y.gradient(e); },
      [&](int e, const std::array<double, 3>& b) { return p1_value(mesh, q.y.positions(), e, b); }};
  EnergyBreakdown out = energy_core(t, es, model, loads);
  out.loads += surface_work(t, mesh, loads.g, [&](const BoundaryEdge& be, double s) {
    return (1.0 - s) * q.y.position(be.a) + s * q.y.position(be.b);
  });
  return out;
}

double dissipation(const State& q, const State& qhat) {
  if (&q.y.mesh() != &qhat.y.mesh())
    throw std::invalid_argument("dissipation: states on different meshes");
  const Mesh& mesh = q.y.mesh();
  return integrate_volume(mesh, [&](int e) {
    static const std::array<double, 3> c = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const Vec d = p1_value(mesh, q.m.directors(), e, c) - p1_value(mesh, qhat.m.directors(), e, c);
    return d.norm();
  });
}

double variation(const std::vector<State>& states, const std::vector<double>& times, double t) {
  if (states.size() != times.size() || states.empty())
    throw std::invalid_argument("variation: inconsistent trajectory");
  if (t < times.front() - 1e-12 || t > times.back() + 1e-12)
    throw std::domain_error("variation: t outside the trajectory interval");
  double var = 0.0;
  for (size_t i = 1; i < states.size() && times[i] <= t + 1e-12; ++i)
    var += dissipation(states[i], states[i - 1]);
  return var;
}

double power_time_independent(double t, const State& q, const LoadSet& loads, Side side) {
  const Mesh& mesh = q.y.mesh();
  double p = 0.0;
  if (!loads.f.time.is_constant()) {
    p -= integrate_volume_q2(mesh, [&](int e, const Vec& x, const std::array<double, 3>& b) {
      return loads.f.rate(t, x, side).dot(p1_value(mesh, q.y.positions(), e, b));
    });
  }
  if (!loads.g.time.is_constant()) {
    p -= integrate_boundary_q2(mesh, BoundaryLabel::Sigma,
                               [&](const BoundaryEdge& be, const Vec& x, double s) {
                                 const Vec yq = (1.0 - s) * q.y.position(be.a) + s * q.y.position(be.b);
                                 return loads.g.rate(t, x, side).dot(yq);
                               });
  }
  if (!loads.h.time.is_constant()) {
    p -= integrate_volume_q2(mesh, [&](int e, const Vec&, const std::array<double, 3>& b) {
      const double det = determinant(q.y.gradient(e));
      const Vec yq = p1_value(mesh, q.y.positions(), e, b);
      return loads.h.rate(t, yq, side).dot(q.m.unit_value(e, b[0], b[1], b[2])) * det;
    });
  }
  return p;
}

// --------------------------------------------------------------- pull-back

State pullback(double t, const State& p, const BoundaryDatum& datum,
               const std::optional<Box>& confinement) {
  const Mesh& mesh = p.y.mesh();
  std::vector<Vec> pos(static_cast<size_t>(mesh.num_nodes()));
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    pos[static_cast<size_t>(i)] = datum.map(t, p.y.position(i));
    if (confinement && !confinement->contains(pos[static_cast<size_t>(i)], 1e-12))
      throw std::runtime_error("pullback: image node outside the confinement box");
  }
  return State(DeformationField(mesh, std::move(pos)), p.m);
}

State pullback_inverse(double t, const State& q, const BoundaryDatum& datum,
                       const std::optional<Box>& confinement) {
  const Mesh& mesh = q.y.mesh();
  std::vector<Vec> pos(static_cast<size_t>(mesh.num_nodes()));
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    pos[static_cast<size_t>(i)] = datum.inverse_map(t, q.y.position(i));
    if (confinement && !confinement->contains(pos[static_cast<size_t>(i)], 1e-12))
      throw std::runtime_error("pullback_inverse: node outside the confinement box");
  }
  return State(DeformationField(mesh, std::move(pos)), q.m);
}

EnergyBreakdown aux_energy(double t, const State& p, const MaterialModel& model,
                           const LoadSet& loads, const BoundaryDatum& datum) {
  const Mesh& mesh = p.y.mesh();
  const Mat At = datum.A(t);
  EffectiveState es{mesh, p.m, [&](int e) { return At * p.y.gradient(e); },
                    [&](int e, const std::array<double, 3>& b) {
                      return datum.map(t, p1_value(mesh, p.y.positions(), e, b));
                    }};
  EnergyBreakdown out = energy_core(t, es, model, loads);
  out.loads += surface_work(t, mesh, loads.g, [&](const BoundaryEdge& be, double s) {
    return datum.map(t, (1.0 - s) * p.y.position(be.a) + s * p.y.position(be.b));
  });
  return out;
}

// ------------------------------------------------------------------- power

double displacement_power(double t, const State& q, const MaterialModel& model,
                          const LoadSet& loads, const BoundaryDatum& datum, Side side) {
  const Mesh& mesh = q.y.mesh();
  const Mat At = datum.A(t);
  const Mat Ainv = inverse(At);
  const Mat V = datum.A_dot(t, side) * Ainv;  // spatial gradient of the boundary velocity
  const Vec bt = datum.b(t);
  const Vec bdot = datum.b_dot(t, side);
  auto vel = [&](const Vec& xi) { return V * (xi - bt) + bdot; };  // d-dot o d^{-1}

  double p = 0.0;
  // Kirchhoff-type term
  p += integrate_volume(mesh, [&](int e) {
    const Mat Dy = q.y.gradient(e);
    const Vec mc = q.m.unit_value(e, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    return elastic_stress(model, Dy, UnitVector::normalized(mc)).ddot(V * Dy);
  });
  // nematic transport term
  p += integrate_volume(mesh, [&](int e) {
    const Mat Dy = q.y.gradient(e);
    const Mat Dn = q.m.gradient(e) * inverse(Dy);
    const Mat tensor = Dn.ddot(Dn) * Mat::identity(2) - 2.0 * (Dn.transposed() * Dn);
    return tensor.ddot(V) * determinant(Dy);
  });
  // load-velocity terms
  if (!loads.f.is_zero()) {
    p -= integrate_volume_q2(mesh, [&](int e, const Vec& x, const std::array<double, 3>& b) {
      return loads.f.value(t, x).dot(vel(p1_value(mesh, q.y.positions(), e, b)));
    });
  }
  if (!loads.g.is_zero()) {
    p -= integrate_boundary_q2(mesh, BoundaryLabel::Sigma,
                               [&](const BoundaryEdge& be, const Vec& x, double s) {
                                 const Vec yq = (1.0 - s) * q.y.position(be.a) + s * q.y.position(be.b);
                                 return loads.g.value(t, x).dot(vel(yq));
                               });
  }
  if (!loads.h.is_zero()) {
    const double trV = V.trace();
    p -= integrate_volume_q2(mesh, [&](int e, const Vec&, const std::array<double, 3>& b) {
      const double det = determinant(q.y.gradient(e));
      const Vec yq = p1_value(mesh, q.y.positions(), e, b);
      const Vec mq = q.m.unit_value(e, b[0], b[1], b[2]);
      const Vec grad_push = loads.h.gradient(t) * vel(yq);
      return (grad_push.dot(mq) + trV * loads.h.value(t, yq).dot(mq)) * det;
    });
  }
  return p;
}

double aux_power(double t, const State& p, const MaterialModel& model, const LoadSet& loads,
                 const BoundaryDatum& datum, Side side) {
  const Mesh& mesh = p.y.mesh();
  const Mat At = datum.A(t);
  const Mat Ainv = inverse(At);
  const Mat Adot = datum.A_dot(t, side);
  const Vec bdot = datum.b_dot(t, side);
  const double detA = determinant(At);
  const Mat V = Adot * Ainv;

  double out = 0.0;
  // d/dt J^e
  out += integrate_volume(mesh, [&](int e) {
    const Mat Du = p.y.gradient(e);
    const Vec mc = p.m.unit_value(e, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    const Mat stress = elastic_stress(model, At * Du, UnitVector::normalized(mc));
    return (stress * Du.transposed()).ddot(Adot);
  });
  // d/dt J^n
  out += integrate_volume(mesh, [&](int e) {
    const Mat Du = p.y.gradient(e);
    const Mat G = p.m.gradient(e) * inverse(Du) * Ainv;  // image-side director gradient
    const Mat tensor = G.ddot(G) * Mat::identity(2) - 2.0 * (G.transposed() * G);
    return tensor.ddot(V) * detA * determinant(Du);
  });
  // d/dt M^b
  if (!loads.f.is_zero()) {
    out -= integrate_volume_q2(mesh, [&](int e, const Vec& x, const std::array<double, 3>& b) {
      const Vec uq = p1_value(mesh, p.y.positions(), e, b);
      return loads.f.rate(t, x, side).dot(datum.map(t, uq)) +
             loads.f.value(t, x).dot(Adot * uq + bdot);
    });
  }
  // d/dt M^s
  if (!loads.g.is_zero()) {
    out -= integrate_boundary_q2(
        mesh, BoundaryLabel::Sigma, [&](const BoundaryEdge& be, const Vec& x, double s) {
          const Vec uq = (1.0 - s) * p.y.position(be.a) + s * p.y.position(be.b);
          return loads.g.rate(t, x, side).dot(datum.map(t, uq)) +
                 loads.g.value(t, x).dot(Adot * uq + bdot);
        });
  }
  // d/dt M^f (chain rule for the external field)
  if (!loads.h.is_zero()) {
    const double cof_rate = cofactor(At).ddot(Adot);  // d/dt det A
    out -= integrate_volume_q2(mesh, [&](int e, const Vec&, const std::array<double, 3>& b) {
      const double detDu = determinant(p.y.gradient(e));
      const Vec uq = p1_value(mesh, p.y.positions(), e, b);
      const Vec yq = datum.map(t, uq);
      const Vec mq = p.m.unit_value(e, b[0], b[1], b[2]);
      const Vec hdot = loads.h.rate(t, yq, side) + loads.h.gradient(t) * (Adot * uq + bdot);
      return hdot.dot(mq) * detA * detDu + cof_rate * loads.h.value(t, yq).dot(mq) * detDu;
    });
  }
  return out;
}

}  // namespace nemato
