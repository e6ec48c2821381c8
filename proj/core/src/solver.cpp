#include "nemato/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nemato {

namespace {

constexpr double kHuge = 1e300;

double huber(double r, double eps) {
  if (eps <= 0.0) return r;
  return r <= eps ? r * r / (2.0 * eps) : r - 0.5 * eps;
}
double huber_slope(double r, double eps) {
  if (eps <= 0.0) return 1.0;
  return r <= eps ? r / eps : 1.0;
}

// L1 distance between two nodal director fields at centroid resolution.
double director_l1(const Mesh& mesh, const std::vector<Vec>& m1, const std::vector<Vec>& m2) {
  static const std::array<double, 3> c = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return integrate_volume(mesh, [&](int e) {
    return (p1_value(mesh, m1, e, c) - p1_value(mesh, m2, e, c)).norm();
  });
}

double smoothed_dissipation(const Mesh& mesh, const std::vector<Vec>& m,
                            const std::vector<Vec>& m_prev, double eps) {
  static const std::array<double, 3> c = {1.0 / 3, 1.0 / 3, 1.0 / 3};
  return integrate_volume(mesh, [&](int e) {
    return huber((p1_value(mesh, m, e, c) - p1_value(mesh, m_prev, e, c)).norm(), eps);
  });
}

// d/dF of |G F^{-1}|^2 det F.
Mat nematic_f_derivative(const Mat& G, const Mat& F) {
  const Mat Finv = inverse(F);
  const Mat GF = G * Finv;
  return (-2.0 * determinant(F)) * (GF.transposed() * GF * Finv.transposed()) +
         GF.ddot(GF) * cofactor(F);
}

struct Composition {
  Mat A;       // datum gradient on the auxiliary route, identity otherwise
  Vec b;
  bool trivial;
};

Composition composition_at(const Problem& pb, double t) {
  if (!pb.auxiliary) return {Mat::identity(2), Vec(0.0, 0.0), true};
  return {pb.datum.A(t), pb.datum.b(t), false};
}

std::vector<char> free_node_mask(const Mesh& mesh) {
  std::vector<char> mask(static_cast<size_t>(mesh.num_nodes()), 1);
  for (int i : mesh.label_nodes(BoundaryLabel::Lambda)) mask[static_cast<size_t>(i)] = 0;
  return mask;
}

double grad_norm(const std::vector<Vec>& g) {
  double s = 0.0;
  for (const auto& v : g) s += v.dot(v);
  return std::sqrt(s);
}

}  // namespace

std::vector<double> Trajectory::times() const {
  std::vector<double> ts;
  ts.reserve(steps.size());
  for (const auto& s : steps) ts.push_back(s.t);
  return ts;
}

// ---------------------------------------------------------------- gradients

std::vector<Vec> position_gradient(const Problem& pb, double t, const State& s) {
  const Mesh& mesh = *pb.mesh;
  const Composition cp = composition_at(pb, t);
  const double detA = determinant(cp.A);
  std::vector<Vec> grad(static_cast<size_t>(mesh.num_nodes()), Vec(0.0, 0.0));

  // elastic + nematic (one-point rule, matching the energy)
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Mat Du = s.y.gradient(e);
    const Mat F = cp.trivial ? Du : cp.A * Du;
    const Vec zc = s.m.unit_value(e, 1.0 / 3, 1.0 / 3, 1.0 / 3);
    const Mat P = elastic_stress(pb.model, F, UnitVector::normalized(zc));
    const Mat M = nematic_f_derivative(s.m.gradient(e), F);
    Mat T = P + M;
    if (!cp.trivial) T = cp.A.transposed() * T;
    const double w = mesh.area(e);
    const auto& el = mesh.element(e);
    const auto& sg = mesh.shape_gradients(e);
    for (int v = 0; v < 3; ++v)
      grad[static_cast<size_t>(el[static_cast<size_t>(v)])] += w * (T * sg[static_cast<size_t>(v)]);
  }

  // load terms enter with negative sign (E = I - L)
  if (!pb.loads.f.is_zero()) {
    static const std::array<std::array<double, 3>, 3> pts = {
        {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const double w = mesh.area(e) / 3.0;
      const auto& el = mesh.element(e);
      for (const auto& bq : pts) {
        const Vec x = mesh.barycentric_point(e, bq[0], bq[1], bq[2]);
        Vec fv = pb.loads.f.value(t, x);
        if (!cp.trivial) fv = cp.A.transposed() * fv;
        for (int v = 0; v < 3; ++v)
          grad[static_cast<size_t>(el[static_cast<size_t>(v)])] -=
              (w * bq[static_cast<size_t>(v)]) * fv;
      }
    }
  }
  if (!pb.loads.g.is_zero()) {
    const double gq = 0.5 / std::sqrt(3.0);
    for (const auto& be : mesh.boundary()) {
      if (be.label != BoundaryLabel::Sigma) continue;
      for (double sq : {0.5 - gq, 0.5 + gq}) {
        const Vec x = (1.0 - sq) * mesh.node(be.a) + sq * mesh.node(be.b);
        Vec gv = pb.loads.g.value(t, x);
        if (!cp.trivial) gv = cp.A.transposed() * gv;
        const double w = 0.5 * be.length;
        grad[static_cast<size_t>(be.a)] -= (w * (1.0 - sq)) * gv;
        grad[static_cast<size_t>(be.b)] -= (w * sq) * gv;
      }
    }
  }
  if (!pb.loads.h.is_zero()) {
    static const std::array<std::array<double, 3>, 3> pts = {
        {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
    const Mat Lh = pb.loads.h.gradient(t);
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Mat Du = s.y.gradient(e);
      const double det = cp.trivial ? determinant(Du) : detA * determinant(Du);
      const Mat cofDu = cofactor(Du);
      const double w = mesh.area(e) / 3.0;
      const auto& el = mesh.element(e);
      const auto& sg = mesh.shape_gradients(e);
      for (const auto& bq : pts) {
        const Vec uq = p1_value(mesh, s.y.positions(), e, bq);
        const Vec yq = cp.trivial ? uq : cp.A * uq + cp.b;
        const Vec mq = s.m.unit_value(e, bq[0], bq[1], bq[2]);
        Vec point_grad = Lh.transposed() * mq;  // d(h(y).m)/dy
        if (!cp.trivial) point_grad = cp.A.transposed() * point_grad;
        const double hm = pb.loads.h.value(t, yq).dot(mq);
        const double det_pref = cp.trivial ? 1.0 : detA;
        for (int v = 0; v < 3; ++v) {
          const auto vi = static_cast<size_t>(el[static_cast<size_t>(v)]);
          grad[vi] -= (w * bq[static_cast<size_t>(v)] * det) * point_grad;
          grad[vi] -= (w * hm * det_pref) * (cofDu * sg[static_cast<size_t>(v)]);
        }
      }
    }
  }
  return grad;
}

std::vector<Vec> director_gradient(const Problem& pb, double t, const State& s,
                                   const DirectorField& m_prev, double huber_eps) {
  const Mesh& mesh = *pb.mesh;
  const Composition cp = composition_at(pb, t);
  const double detA = determinant(cp.A);
  const double zc_coupling = pb.model.mu - std::pow(pb.model.mu, -1.0 / (pb.model.dim - 1));
  std::vector<Vec> grad(static_cast<size_t>(mesh.num_nodes()), Vec(0.0, 0.0));
  static const std::array<double, 3> c3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};

  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Mat Du = s.y.gradient(e);
    const Mat F = cp.trivial ? Du : cp.A * Du;
    const Mat Finv = inverse(F);
    const double det = determinant(F);
    const double w = mesh.area(e);
    const auto& el = mesh.element(e);
    const auto& sg = mesh.shape_gradients(e);

    // nematic: 2 det Dm Finv Finv^T g_v
    const Mat DmFF = 2.0 * det * (s.m.gradient(e) * Finv * Finv.transposed());
    for (int v = 0; v < 3; ++v)
      grad[static_cast<size_t>(el[static_cast<size_t>(v)])] +=
          w * (DmFF * sg[static_cast<size_t>(v)]);

    // elastic dependence through the centroid director (vanishes at mu = 1)
    if (zc_coupling != 0.0) {
      const Vec raw = p1_value(mesh, s.m.directors(), e, c3);
      const double r = raw.norm();
      if (r > 1e-8) {
        const Vec z = (1.0 / r) * raw;
        const Vec dz = elastic_density_zgrad(pb.model, F, UnitVector::normalized(z));
        const Vec proj = dz - dz.dot(z) * z;  // normalisation chain
        for (int v = 0; v < 3; ++v)
          grad[static_cast<size_t>(el[static_cast<size_t>(v)])] += (w / (3.0 * r)) * proj;
      }
    }

    // smoothed dissipation at centroid resolution
    const Vec diff = p1_value(mesh, s.m.directors(), e, c3) - p1_value(mesh, m_prev.directors(), e, c3);
    const double r = diff.norm();
    if (r > 0.0) {
      const Vec d = (huber_slope(r, huber_eps) / r) * diff;
      for (int v = 0; v < 3; ++v)
        grad[static_cast<size_t>(el[static_cast<size_t>(v)])] += (w / 3.0) * d;
    }
  }

  // field work -int (h o y) . m det
  if (!pb.loads.h.is_zero()) {
    static const std::array<std::array<double, 3>, 3> pts = {
        {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const Mat Du = s.y.gradient(e);
      const double det = cp.trivial ? determinant(Du) : detA * determinant(Du);
      const double w = mesh.area(e) / 3.0;
      const auto& el = mesh.element(e);
      for (const auto& bq : pts) {
        const Vec raw = p1_value(mesh, s.m.directors(), e, bq);
        const double r = raw.norm();
        if (r < 1e-8) continue;
        const Vec mq = (1.0 / r) * raw;
        const Vec uq = p1_value(mesh, s.y.positions(), e, bq);
        const Vec yq = cp.trivial ? uq : cp.A * uq + cp.b;
        const Vec h = pb.loads.h.value(t, yq);
        const Vec proj = h - h.dot(mq) * mq;
        for (int v = 0; v < 3; ++v)
          grad[static_cast<size_t>(el[static_cast<size_t>(v)])] -=
              (w * det * bq[static_cast<size_t>(v)] / r) * proj;
      }
    }
  }
  return grad;
}

// ------------------------------------------------------------ inner solvers

State minimize_deformation(const Problem& pb, double t, State s, const SolverConfig& cfg) {
  const Mesh& mesh = *pb.mesh;
  const auto mask = free_node_mask(mesh);
  double energy = pb.energy(t, s).value_or(kHuge);
  const double scale = 1.0 + std::abs(energy);

  std::vector<Vec> g = position_gradient(pb, t, s);
  for (size_t i = 0; i < g.size(); ++i)
    if (!mask[i]) g[i] = Vec(0.0, 0.0);

  double tau = 0.1 / (1.0 + grad_norm(g));
  std::vector<Vec> x_prev, g_prev;

  for (int it = 0; it < cfg.max_inner_iters; ++it) {
    const double gn = grad_norm(g);
    if (gn <= cfg.grad_tol * scale) break;

    const double min_det_cur = s.y.min_det();
    bool accepted = false;
    double step = tau;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<Vec> cand = s.y.positions();
      for (size_t i = 0; i < cand.size(); ++i) {
        if (!mask[i]) continue;
        cand[i] -= step * g[i];
        if (pb.confinement) cand[i] = pb.confinement->clamp(cand[i]);
      }
      DeformationField yc = DeformationField::unchecked(mesh, std::move(cand));
      if (yc.min_det() >= cfg.det_safeguard * min_det_cur) {
        State sc(std::move(yc), s.m);
        const double ec = pb.energy(t, sc).value_or(kHuge);
        if (ec <= energy - 1e-4 * step * gn * gn) {
          x_prev = s.y.positions();
          g_prev = g;
          s = std::move(sc);
          energy = ec;
          accepted = true;
          break;
        }
      }
      step *= cfg.backtrack;
    }
    if (!accepted) break;

    g = position_gradient(pb, t, s);
    for (size_t i = 0; i < g.size(); ++i)
      if (!mask[i]) g[i] = Vec(0.0, 0.0);

    // Barzilai-Borwein step for the next iteration
    double sy = 0.0, ss = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      const Vec dx = s.y.position(static_cast<int>(i)) - x_prev[i];
      const Vec dg = g[i] - g_prev[i];
      ss += dx.dot(dx);
      sy += dx.dot(dg);
    }
    tau = (sy > 1e-300) ? std::clamp(ss / sy, 1e-12, 1e3) : step / cfg.backtrack;
  }
  return s;
}

State minimize_director(const Problem& pb, double t, State s, const DirectorField& m_prev,
                        double huber_eps, const SolverConfig& cfg) {
  const Mesh& mesh = *pb.mesh;
  auto smoothed = [&](const State& st) {
    return pb.energy(t, st).value_or(kHuge) +
           smoothed_dissipation(mesh, st.m.directors(), m_prev.directors(), huber_eps);
  };
  auto true_objective = [&](const State& st) {
    return pb.energy(t, st).value_or(kHuge) +
           director_l1(mesh, st.m.directors(), m_prev.directors());
  };

  double obj = smoothed(s);
  const double scale = 1.0 + std::abs(obj);
  State best = s;
  double best_true = true_objective(s);

  double tau = 0.1;
  for (int it = 0; it < cfg.max_inner_iters; ++it) {
    std::vector<Vec> g = director_gradient(pb, t, s, m_prev, huber_eps);
    // Riemannian projection onto the nodal tangent spaces
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      const Vec& m = s.m.director(i);
      auto& gi = g[static_cast<size_t>(i)];
      gi -= gi.dot(m) * m;
    }
    const double gn = grad_norm(g);
    if (gn <= cfg.grad_tol * scale) break;

    bool accepted = false;
    double step = tau;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<Vec> cand = s.m.directors();
      bool valid = true;
      for (size_t i = 0; i < cand.size(); ++i) {
        Vec v = cand[i] - step * g[i];
        const double r = v.norm();
        if (r < 1e-12) {
          valid = false;
          break;
        }
        cand[i] = (1.0 / r) * v;
      }
      if (valid) {
        State sc(s.y, DirectorField(mesh, std::move(cand)));
        const double oc = smoothed(sc);
        if (oc <= obj - 1e-4 * step * gn * gn) {
          s = std::move(sc);
          obj = oc;
          accepted = true;
          const double tc = true_objective(s);
          if (tc < best_true) {
            best_true = tc;
            best = s;
          }
          break;
        }
      }
      step *= cfg.backtrack;
    }
    if (!accepted) break;
    tau = std::min(step / cfg.backtrack, 1.0);
  }
  return best;
}

// --------------------------------------------------------- increment + run

IncrementResult incremental_step(const Problem& pb, double t, const State& q_prev,
                                 const SolverConfig& cfg, CounterRng& rng) {
  const Mesh& mesh = *pb.mesh;
  State cur = q_prev;
  if (!pb.auxiliary) {
    const auto& lam = mesh.label_nodes(BoundaryLabel::Lambda);
    std::vector<Vec> values;
    values.reserve(lam.size());
    for (int i : lam) values.push_back(pb.datum.map(t, mesh.node(i)));
    cur = State(apply_dirichlet(cur.y, values, pb.confinement), cur.m);
  }
  const double e_baseline = pb.energy(t, cur).value_or(kHuge);

  auto sweep_from = [&](State st) {
    double obj = pb.energy(t, st).value_or(kHuge) +
                 director_l1(mesh, st.m.directors(), q_prev.m.directors());
    for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
      const double eps = (sweep + 1 == cfg.max_sweeps) ? 0.5 * cfg.huber_eps : cfg.huber_eps;
      st = minimize_deformation(pb, t, std::move(st), cfg);
      st = minimize_director(pb, t, std::move(st), q_prev.m, eps, cfg);
      const double obj_new = pb.energy(t, st).value_or(kHuge) +
                             director_l1(mesh, st.m.directors(), q_prev.m.directors());
      if (obj - obj_new < cfg.sweep_tol * (1.0 + std::abs(obj))) {
        obj = obj_new;
        break;
      }
      obj = obj_new;
    }
    return std::make_pair(std::move(st), obj);
  };

  auto [candidate, cand_obj] = sweep_from(cur);

  for (int ms = 0; ms < cfg.multistart; ++ms) {
    // perturbed restart; amplitude shrinks with the restart index
    const double amp = 0.1 * std::pow(0.5, ms);
    std::vector<Vec> pos = cur.y.positions();
    const auto mask = free_node_mask(mesh);
    for (size_t i = 0; i < pos.size(); ++i) {
      if (!mask[i]) continue;
      pos[i] += Vec(amp * rng.normal(), amp * rng.normal());
      if (pb.confinement) pos[i] = pb.confinement->clamp(pos[i]);
    }
    DeformationField yp = DeformationField::unchecked(mesh, std::move(pos));
    if (!(yp.min_det() > 0.0)) continue;
    std::vector<Vec> dirs = cur.m.directors();
    for (auto& d : dirs) {
      Vec v = d + Vec(amp * rng.normal(), amp * rng.normal());
      const double r = v.norm();
      if (r > 1e-12) d = (1.0 / r) * v;
    }
    auto [st, obj] = sweep_from(State(std::move(yp), DirectorField(mesh, std::move(dirs))));
    if (obj < cand_obj) {
      candidate = std::move(st);
      cand_obj = obj;
    }
  }

  if (cand_obj <= e_baseline) return {std::move(candidate), false};
  return {std::move(cur), true};
}

StabilityReport stability_check(const Problem& pb, double t, const State& q,
                                const State* q_prev, int n_competitors, double tol,
                                CounterRng& rng) {
  const Mesh& mesh = *pb.mesh;
  const double eq = pb.energy(t, q).value_or(kHuge);
  StabilityReport rep;
  rep.worst_margin = kHuge;

  auto check = [&](const State& qhat) {
    const double rhs = pb.energy(t, qhat).value_or(kHuge);
    if (rhs >= kHuge) return;  // inadmissible competitor costs infinity
    const double margin = rhs + director_l1(mesh, qhat.m.directors(), q.m.directors()) - eq;
    ++rep.competitors;
    rep.worst_margin = std::min(rep.worst_margin, margin);
    if (margin < -tol) ++rep.violations;
  };

  if (q_prev) check(*q_prev);
  // global director flips
  for (const Vec& dir : {Vec(1.0, 0.0), Vec(-1.0, 0.0), Vec(0.0, 1.0), Vec(0.0, -1.0)}) {
    check(State(q.y, DirectorField::constant(mesh, dir)));
  }
  {
    std::vector<Vec> flipped = q.m.directors();
    for (auto& m : flipped) m = -1.0 * m;
    check(State(q.y, DirectorField(mesh, std::move(flipped))));
  }

  const auto mask = free_node_mask(mesh);
  const std::array<double, 3> amps = {1e-3, 1e-2, 1e-1};
  int made = 0;
  for (int k = 0; made < n_competitors && k < 20 * n_competitors; ++k) {
    const double amp = amps[static_cast<size_t>(k) % amps.size()];
    std::vector<Vec> pos = q.y.positions();
    for (size_t i = 0; i < pos.size(); ++i) {
      if (!mask[i]) continue;
      pos[i] += Vec(amp * rng.normal(), amp * rng.normal());
      if (pb.confinement) pos[i] = pb.confinement->clamp(pos[i]);
    }
    DeformationField yc = DeformationField::unchecked(mesh, std::move(pos));
    if (!(yc.min_det() > 0.0)) continue;
    std::vector<Vec> dirs = q.m.directors();
    for (auto& d : dirs) {
      Vec v = d + Vec(amp * rng.normal(), amp * rng.normal());
      const double r = v.norm();
      if (r > 1e-12) d = (1.0 / r) * v;
    }
    check(State(std::move(yc), DirectorField(mesh, std::move(dirs))));
    ++made;
  }
  return rep;
}

Trajectory run_quasistatic(const Problem& pb_in, const State& initial, const SolverConfig& cfg) {
  Problem pb = pb_in;
  pb.auxiliary = pb_in.auxiliary || pb_in.datum.time_dependent();
  if (!pb.confinement) pb.confinement = cfg.confinement;
  const Mesh& mesh = *pb.mesh;

  Trajectory tr;
  tr.auxiliary_route = pb.auxiliary;

  // enforce the t = 0 boundary trace, then map to minimization variables
  const auto& lam = mesh.label_nodes(BoundaryLabel::Lambda);
  std::vector<Vec> values0;
  values0.reserve(lam.size());
  for (int i : lam) values0.push_back(pb.datum.map(0.0, mesh.node(i)));
  State q0 = State(apply_dirichlet(initial.y, values0, pb.confinement), initial.m);
  State p0 = pb.auxiliary ? pullback_inverse(0.0, q0, pb.datum, pb.confinement) : q0;

  // initial relaxation pass: approximate-stability enforcement at t = 0
  CounterRng rng0(cfg.seed, 1);
  p0 = incremental_step(pb, 0.0, p0, cfg, rng0).state;

  const double dt = cfg.T / cfg.n_steps;
  const double scale_tol = cfg.stability_tol;

  State p_cur = p0;
  double variation_acc = 0.0;
  double e0 = 0.0;

  for (int k = 0; k <= cfg.n_steps; ++k) {
    const double t = dt * k;
    bool warn = false;
    bool descent_ok = true;
    double step_diss = 0.0;
    if (k > 0) {
      CounterRng step_rng(cfg.seed, 100 + static_cast<std::uint64_t>(k));
      const State p_prev = p_cur;
      const double e_prev = pb.energy(t, p_prev).value_or(kHuge);
      IncrementResult res = incremental_step(pb, t, p_prev, cfg, step_rng);
      warn = res.no_descent_warning;
      p_cur = std::move(res.state);
      step_diss = director_l1(mesh, p_cur.m.directors(), p_prev.m.directors());
      const double e_new = pb.energy(t, p_cur).value_or(kHuge);
      descent_ok = e_new + step_diss <= e_prev + 1e-9 * (1.0 + std::abs(e_prev));
      variation_acc += step_diss;
    }

    const Side side = (k == cfg.n_steps) ? Side::Left : Side::Right;
    State q = pb.auxiliary ? pullback(t, p_cur, pb.datum, pb.confinement) : p_cur;
    EnergyBreakdown eb = total_energy(t, q, pb.model, pb.loads);
    double gap = 0.0;
    double apower = 0.0;
    if (pb.auxiliary) {
      const EnergyBreakdown fb = aux_energy(t, p_cur, pb.model, pb.loads, pb.datum);
      gap = std::abs(eb.total().value_or(kHuge) - fb.total().value_or(kHuge));
      apower = aux_power(t, p_cur, pb.model, pb.loads, pb.datum, side);
    }
    const double power = power_time_independent(t, q, pb.loads, side) +
                         displacement_power(t, q, pb.model, pb.loads, pb.datum, side);
    if (!pb.auxiliary) apower = power;

    StepRecord rec{t,
                   q,
                   eb,
                   step_diss,
                   variation_acc,
                   power,
                   apower,
                   q.y.min_det(),
                   gap,
                   descent_ok,
                   warn,
                   StabilityReport{}};
    if (k == 0) e0 = eb.total().value_or(kHuge);
    if (cfg.stability_competitors > 0) {
      CounterRng stab_rng(cfg.seed, 10000 + static_cast<std::uint64_t>(k));
      const double tol = scale_tol * (1.0 + std::abs(e0));
      const State* prev = k > 0 ? &tr.internal_states.back() : nullptr;
      rec.stability =
          stability_check(pb, t, p_cur, prev, cfg.stability_competitors, tol, stab_rng);
    }
    tr.steps.push_back(std::move(rec));
    tr.internal_states.push_back(p_cur);
  }
  return tr;
}

std::vector<double> balance_residual(const Trajectory& tr) {
  std::vector<double> r;
  if (tr.steps.empty()) return r;
  const double e0 = tr.steps.front().energy.total().value_or(kHuge);
  double integral = 0.0;
  r.push_back(tr.steps.front().energy.total().value_or(kHuge) - e0);
  for (size_t k = 1; k < tr.steps.size(); ++k) {
    const auto& prev = tr.steps[k - 1];
    const auto& cur = tr.steps[k];
    integral += 0.5 * (cur.t - prev.t) * (cur.power + prev.power);
    r.push_back(cur.energy.total().value_or(kHuge) + cur.variation - e0 - integral);
  }
  return r;
}

}  // namespace nemato
