#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "nemato/solver.hpp"

using namespace nemato;

namespace {
MaterialModel reference() { return MaterialModel::reference_2d(); }

State identity_state(const Mesh& mesh, const Vec& dir = Vec(0.0, 1.0)) {
  return State(DeformationField::identity(mesh), DirectorField::constant(mesh, dir));
}

State random_admissible(const Mesh& mesh, CounterRng& rng, double amp = 0.05) {
  for (;;) {
    std::vector<Vec> pos;
    for (int i = 0; i < mesh.num_nodes(); ++i)
      pos.push_back(mesh.node(i) + Vec(amp * rng.normal(), amp * rng.normal()));
    DeformationField y = DeformationField::unchecked(mesh, std::move(pos));
    if (!(y.min_det() > 0.0)) continue;
    std::vector<Vec> dirs;
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      Vec v(rng.normal(), rng.normal());
      const double r = v.norm();
      dirs.push_back(r > 1e-12 ? (1.0 / r) * v : Vec(1.0, 0.0));
    }
    return State(std::move(y), DirectorField(mesh, std::move(dirs)));
  }
}

LoadSet smooth_loads() {
  LoadSet ls;
  ls.f.space = SpaceProfile{Vec(0.2, -0.1), Mat(0.1, 0.0, 0.05, -0.1)};
  ls.f.time = Polynomial({0.5, 1.0});
  ls.g.space = SpaceProfile{Vec(0.1, 0.3), Mat(0.0, 0.2, -0.1, 0.0)};
  ls.g.time = Polynomial({1.0, -0.5});
  ls.h.space = SpaceProfile{Vec(0.3, 0.1), Mat(-0.2, 0.1, 0.0, 0.15)};
  ls.h.time = Polynomial({0.2, 0.8});
  return ls;
}

Mesh one_triangle() {
  std::vector<Vec> nodes = {Vec(0.0, 0.0), Vec(1.0, 0.0), Vec(0.0, 1.0)};
  std::vector<std::array<int, 3>> elems = {{0, 1, 2}};
  std::vector<BoundaryEdge> bd = {{0, 1, BoundaryLabel::Free, 0.0},
                                  {1, 2, BoundaryLabel::Sigma, 0.0},
                                  {2, 0, BoundaryLabel::Lambda, 0.0}};
  return Mesh(nodes, elems, bd);
}
}  // namespace

TEST_CASE("position gradient matches finite differences") {
  const Mesh mesh = Mesh::unit_square(3);
  CounterRng rng(101);
  for (bool aux : {false, true}) {
    Problem pb{&mesh, reference(), smooth_loads(),
               aux ? BoundaryDatum::static_affine(Mat(1.2, 0.1, -0.05, 0.9), Vec(0.1, 0.0))
                   : BoundaryDatum::identity(),
               aux, std::nullopt};
    const State s = random_admissible(mesh, rng, 0.03);
    const auto grad = position_gradient(pb, 0.4, s);
    const double h = 1e-6;
    for (int i : {0, 4, 7, 12, 15}) {
      for (int c = 0; c < 2; ++c) {
        auto perturb = [&](double d) {
          std::vector<Vec> pos = s.y.positions();
          pos[static_cast<size_t>(i)][c] += d;
          const State sc(DeformationField::unchecked(mesh, std::move(pos)), s.m);
          return pb.energy(0.4, sc).value();
        };
        const double fd = (perturb(h) - perturb(-h)) / (2.0 * h);
        CHECK(grad[static_cast<size_t>(i)][c] == doctest::Approx(fd).epsilon(5e-5));
      }
    }
  }
}

TEST_CASE("director gradient matches finite differences") {
  const Mesh mesh = Mesh::unit_square(3);
  CounterRng rng(103);
  // mu != 1 exercises the elastic coupling through the director
  const MaterialModel model(NFunction::power(2.0), 1.6, 2.0, SigmaFunction::reference(), 2);
  Problem pb{&mesh, model, smooth_loads(), BoundaryDatum::identity(), false, std::nullopt};
  const State s = random_admissible(mesh, rng, 0.02);
  const State sp = random_admissible(mesh, rng, 0.02);
  const double eps = 1e-3;
  const auto grad = director_gradient(pb, 0.3, s, sp.m, eps);

  // the smoothed objective the solver descends on
  auto objective = [&](const std::vector<Vec>& dirs) {
    State st(s.y, DirectorField(mesh, dirs));
    double e = pb.energy(0.3, st).value();
    static const std::array<double, 3> c3 = {1.0 / 3, 1.0 / 3, 1.0 / 3};
    e += integrate_volume(mesh, [&](int el) {
      const double r =
          (p1_value(mesh, dirs, el, c3) - p1_value(mesh, sp.m.directors(), el, c3)).norm();
      return r <= eps ? r * r / (2.0 * eps) : r - 0.5 * eps;
    });
    return e;
  };

  const double h = 1e-7;
  for (int i : {0, 5, 9, 14}) {
    const Vec& m = s.m.director(i);
    const Vec tangent(-m[1], m[0]);  // unit tangent at the node
    auto shift = [&](double d) {
      std::vector<Vec> dirs = s.m.directors();
      Vec v = dirs[static_cast<size_t>(i)] + d * tangent;
      dirs[static_cast<size_t>(i)] = (1.0 / v.norm()) * v;
      return objective(dirs);
    };
    const double fd = (shift(h) - shift(-h)) / (2.0 * h);
    const double analytic = grad[static_cast<size_t>(i)].dot(tangent);
    CHECK(analytic == doctest::Approx(fd).epsilon(1e-4));
  }
}

TEST_CASE("minimize_deformation descends and respects the det floor") {
  const Mesh mesh = Mesh::unit_square(4);
  Problem pb{&mesh, reference(), LoadSet::none(),
             BoundaryDatum::static_affine(Mat(1.3, 0.0, 0.0, 1.0), Vec(0.0, 0.0)), false,
             std::nullopt};
  SolverConfig cfg;
  cfg.max_inner_iters = 300;

  // start from the Dirichlet-enforced identity; stretch pulls the interior
  const auto& lam = mesh.label_nodes(BoundaryLabel::Lambda);
  std::vector<Vec> values;
  for (int i : lam) values.push_back(pb.datum.map(0.0, mesh.node(i)));
  State s0(apply_dirichlet(DeformationField::identity(mesh), values),
           DirectorField::constant(mesh, Vec(0.0, 1.0)));
  const double e0 = pb.energy(0.0, s0).value();
  const State s1 = minimize_deformation(pb, 0.0, s0, cfg);
  const double e1 = pb.energy(0.0, s1).value();
  CHECK(e1 < e0);
  CHECK(s1.y.min_det() > 0.0);
  // Lambda nodes pinned
  for (int i : lam) CHECK((s1.y.position(i) - s0.y.position(i)).norm() == 0.0);

  // a converged point is a zero-gradient start: restarting stays put exactly
  SolverConfig tight = cfg;
  tight.grad_tol = 1e-10;
  tight.max_inner_iters = 3000;
  const State converged = minimize_deformation(pb, 0.0, s1, tight);
  const State again = minimize_deformation(pb, 0.0, converged, tight);
  double move = 0.0;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    move = std::max(move, (again.y.position(i) - converged.y.position(i)).norm());
  CHECK(move == 0.0);
}

TEST_CASE("one-element deformation minimum matches exhaustive grid search") {
  const Mesh mesh = one_triangle();
  Problem pb{&mesh, reference(), LoadSet::none(), BoundaryDatum::identity(), false, std::nullopt};
  SolverConfig cfg;
  cfg.max_inner_iters = 2000;
  cfg.grad_tol = 1e-12;

  auto energy_at = [&](double x, double y) {
    std::vector<Vec> pos = {Vec(0.0, 0.0), Vec(x, y), Vec(0.0, 1.0)};
    const DeformationField f = DeformationField::unchecked(mesh, pos);
    if (!(f.min_det() > 0.0)) return 1e300;
    return pb.energy(0.0, State(f, DirectorField::constant(mesh, Vec(0.0, 1.0)))).value();
  };

  // exhaustive grid oracle over the free node, <= 1e6 points
  double best = 1e300, bx = 0, by = 0;
  const int n = 1000;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double x = 0.2 + 1.6 * i / (n - 1), y = -0.8 + 1.6 * j / (n - 1);
      const double e = energy_at(x, y);
      if (e < best) {
        best = e;
        bx = x;
        by = y;
      }
    }

  const State out = minimize_deformation(pb, 0.0, identity_state(mesh), cfg);
  const Vec got = out.y.position(1);
  const double res = 1.6 / (n - 1);
  CHECK(std::abs(got[0] - bx) <= 2.0 * res);
  CHECK(std::abs(got[1] - by) <= 2.0 * res);
  CHECK(pb.energy(0.0, out).value() <= best + 1e-9);
}

TEST_CASE("director relaxation: stick and slip against the 1-node oracle") {
  const Mesh mesh = one_triangle();
  SolverConfig cfg;
  cfg.max_inner_iters = 4000;
  cfg.grad_tol = 1e-12;
  const State start = identity_state(mesh, Vec(0.0, 1.0));

  auto run_with_field = [&](double c, double eps) {
    LoadSet ls;
    ls.h.space = SpaceProfile::constant(Vec(c, 0.0));
    ls.h.time = PiecewisePoly::constant(1.0);
    Problem pb{&mesh, reference(), ls, BoundaryDatum::identity(), false, std::nullopt};
    return minimize_director(pb, 0.0, start, start.m, eps, cfg);
  };

  // weak field: the dissipation slope 1 beats the field work, director sticks
  const State stick = run_with_field(0.5, 1e-6);
  for (int i = 0; i < 3; ++i) CHECK((stick.m.director(i) - Vec(0.0, 1.0)).norm() == 0.0);

  // strong field: rotates towards e1 up to the analytic threshold angle
  const double c = 50.0;
  const State slip = run_with_field(c, 1e-8);
  // 1-node oracle: minimise -c sin(phi) + 2 sin(phi/2) over phi
  double best = 1e300, phi_star = 0.0;
  for (int i = 0; i <= 2000000; ++i) {
    const double phi = 3.14159265358979 * i / 2000000.0;
    const double f = -c * std::sin(phi) + 2.0 * std::sin(0.5 * phi);
    if (f < best) {
      best = f;
      phi_star = phi;
    }
  }
  for (int i = 0; i < 3; ++i) {
    const Vec m = slip.m.director(i);
    CHECK(std::abs(m.norm() - 1.0) < 1e-10);
    const double phi = std::atan2(m[0], m[1]);
    CHECK(phi == doctest::Approx(phi_star).epsilon(2e-3));
  }
}

TEST_CASE("incremental step never loses to staying") {
  const Mesh mesh = Mesh::unit_square(4);
  Problem pb{&mesh, reference(), smooth_loads(), BoundaryDatum::identity(), false, std::nullopt};
  SolverConfig cfg;
  CounterRng rng(7);
  const State q_prev = random_admissible(mesh, rng, 0.02);
  CounterRng step_rng(8);
  const auto res = incremental_step(pb, 0.6, q_prev, cfg, step_rng);
  const double lhs = pb.energy(0.6, res.state).value() +
                     dissipation(res.state, q_prev);
  CHECK(lhs <= pb.energy(0.6, q_prev).value() + 1e-10);
}

TEST_CASE("frozen data: constant trajectory with variation exactly zero") {
  const Mesh mesh = Mesh::unit_square(4);
  LoadSet ls;
  ls.h.space = SpaceProfile::constant(Vec(0.05, 0.0));
  ls.h.time = PiecewisePoly::constant(1.0);
  Problem pb{&mesh, reference(), ls, BoundaryDatum::identity(), false, std::nullopt};
  SolverConfig cfg;
  cfg.n_steps = 6;
  cfg.T = 1.0;
  const Trajectory tr = run_quasistatic(pb, identity_state(mesh), cfg);
  REQUIRE(static_cast<int>(tr.steps.size()) == cfg.n_steps + 1);
  const State& q0 = tr.steps.front().state;
  for (const auto& step : tr.steps) {
    CHECK(step.step_dissipation == 0.0);
    CHECK(step.variation == 0.0);
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      CHECK((step.state.y.position(i) - q0.y.position(i)).norm() == 0.0);
      CHECK((step.state.m.director(i) - q0.m.director(i)).norm() == 0.0);
    }
  }
  // balance residual identically zero for a constant trajectory, static data
  for (double r : balance_residual(tr)) CHECK(std::abs(r) < 1e-12);
}

TEST_CASE("rate independence: rescaled time grid reproduces the states") {
  const Mesh mesh = Mesh::unit_square(3);
  auto make_problem = [&](double slope_f, double slope_d, double T) {
    LoadSet ls;
    ls.f.space = SpaceProfile::constant(Vec(0.25, 0.0));
    ls.f.time = Polynomial({0.0, slope_f});
    std::array<PiecewisePoly, 4> a = {Polynomial({1.0, slope_d}), Polynomial({0.0}),
                                      Polynomial({0.0}), Polynomial({1.0})};
    std::array<PiecewisePoly, 2> b = {Polynomial({0.0}), Polynomial({0.0})};
    return Problem{&mesh, reference(), ls, BoundaryDatum(a, b, T), false, std::nullopt};
  };
  SolverConfig cfg;
  cfg.n_steps = 8;
  cfg.max_sweeps = 3;
  cfg.max_inner_iters = 60;

  cfg.T = 1.0;
  Problem p1 = make_problem(0.5, 0.25, 1.0);
  p1.auxiliary = true;  // force a common route for both runs
  const Trajectory t1 = run_quasistatic(p1, identity_state(mesh), cfg);

  cfg.T = 2.0;
  Problem p2 = make_problem(0.25, 0.125, 2.0);
  p2.auxiliary = true;
  const Trajectory t2 = run_quasistatic(p2, identity_state(mesh), cfg);

  REQUIRE(t1.steps.size() == t2.steps.size());
  for (size_t k = 0; k < t1.steps.size(); ++k) {
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      CHECK(t1.steps[k].state.y.position(i)[0] == t2.steps[k].state.y.position(i)[0]);
      CHECK(t1.steps[k].state.y.position(i)[1] == t2.steps[k].state.y.position(i)[1]);
      CHECK(t1.steps[k].state.m.director(i)[0] == t2.steps[k].state.m.director(i)[0]);
    }
  }
}

TEST_CASE("auxiliary route with identity datum matches the direct route") {
  const Mesh mesh = Mesh::unit_square(3);
  LoadSet ls;
  ls.f.space = SpaceProfile::constant(Vec(0.2, -0.1));
  ls.f.time = Polynomial({0.0, 1.0});
  SolverConfig cfg;
  cfg.n_steps = 4;
  cfg.max_sweeps = 3;
  cfg.max_inner_iters = 80;

  Problem direct{&mesh, reference(), ls, BoundaryDatum::identity(), false, std::nullopt};
  Problem aux = direct;
  aux.auxiliary = true;
  const Trajectory td = run_quasistatic(direct, identity_state(mesh), cfg);
  const Trajectory ta = run_quasistatic(aux, identity_state(mesh), cfg);
  REQUIRE(td.steps.size() == ta.steps.size());
  for (size_t k = 0; k < td.steps.size(); ++k)
    for (int i = 0; i < mesh.num_nodes(); ++i) {
      CHECK(td.steps[k].state.y.position(i)[0] == ta.steps[k].state.y.position(i)[0]);
      CHECK(td.steps[k].state.y.position(i)[1] == ta.steps[k].state.y.position(i)[1]);
    }
}

TEST_CASE("stability check accepts the previous state inequality") {
  const Mesh mesh = Mesh::unit_square(3);
  Problem pb{&mesh, reference(), LoadSet::none(), BoundaryDatum::identity(), false, std::nullopt};
  SolverConfig cfg;
  CounterRng rng(21);
  const State q_prev = random_admissible(mesh, rng, 0.02);
  CounterRng step_rng(22);
  const auto res = incremental_step(pb, 0.0, q_prev, cfg, step_rng);
  CounterRng stab_rng(23);
  const auto rep = stability_check(pb, 0.0, res.state, &q_prev, 30, 1e-8, stab_rng);
  CHECK(rep.competitors >= 30);
  CHECK(rep.violations == 0);
  CHECK(rep.worst_margin >= -1e-8);
}

TEST_CASE("balance residual decreases under time refinement") {
  const Mesh mesh = Mesh::unit_square(3);
  // sliding-director regime: a ramped field strong enough to rotate the
  // director every step keeps the dissipation active, which is where the
  // discrete balance carries its first-order error
  LoadSet ls;
  ls.f.space = SpaceProfile::constant(Vec(0.3, 0.0));
  ls.f.time = Polynomial({0.0, 1.0});
  ls.h.space = SpaceProfile::constant(Vec(2.0, 0.0));
  ls.h.time = Polynomial({1.0, 1.5});
  Problem pb{&mesh, reference(), ls, BoundaryDatum::identity(), false, std::nullopt};

  auto max_residual = [&](int steps) {
    SolverConfig cfg;
    cfg.n_steps = steps;
    cfg.max_sweeps = 3;
    cfg.max_inner_iters = 250;
    cfg.grad_tol = 1e-10;
    const Trajectory tr = run_quasistatic(pb, identity_state(mesh), cfg);
    CHECK(tr.steps.back().variation > 0.01);  // dissipation genuinely active
    double worst = 0.0;
    for (double r : balance_residual(tr)) worst = std::max(worst, std::abs(r));
    return worst;
  };
  const double r16 = max_residual(16);
  const double r32 = max_residual(32);
  const double r64 = max_residual(64);
  CHECK(r32 < r16);
  CHECK(r64 < r32);
  // first-order scheme once transients resolve: halving the step roughly
  // halves the residual
  const double ratio = r32 / std::max(r64, 1e-300);
  CHECK(ratio > 1.4);
  CHECK(ratio < 4.0);
}
