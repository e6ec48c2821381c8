// nemato command-line driver: quasistatic runs and verification suites.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nemato/config.hpp"
#include "nemato/lab.hpp"
#include "nemato/ledger.hpp"

namespace fs = std::filesystem;
using namespace nemato;

namespace {

struct CheckList {
  std::vector<std::string> failures;
  std::ostringstream log;

  void check(bool ok, const std::string& what) {
    log << (ok ? "PASS " : "FAIL ") << what << "\n";
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& line) {
    log << line << "\n";
    std::cout << line << "\n";
  }
  int finish(const std::string& out_dir, const std::string& report_name) {
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      std::ofstream os(fs::path(out_dir) / report_name, std::ios::binary);
      os << log.str();
      if (!failures.empty()) {
        os << "\nfailures:\n";
        for (const auto& f : failures) os << "  - " << f << "\n";
      }
    }
    if (!failures.empty()) {
      std::cout << failures.size() << " check(s) failed\n";
      return 1;
    }
    return 0;
  }
};

ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return parse_config("");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

State initial_state(const Mesh& mesh, const ExperimentConfig& cfg) {
  return State(DeformationField::identity(mesh), DirectorField::constant(mesh, cfg.m0));
}

// ------------------------------------------------------------------ simulate

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const Mesh mesh = cfg.make_mesh();
  Problem pb{&mesh, cfg.material(), cfg.loads, cfg.datum, false, cfg.confinement};

  const Trajectory tr = run_quasistatic(pb, initial_state(mesh, cfg), cfg.solver);

  fs::create_directories(out_dir);
  write_ledger_file(tr, (fs::path(out_dir) / "ledger.csv").string());
  for (size_t k = 0; k < tr.steps.size(); ++k) {
    char name[64];
    std::snprintf(name, sizeof name, "state_%03zu.txt", k);
    std::ofstream os(fs::path(out_dir) / name, std::ios::binary);
    write_snapshot(os, tr.steps[k].t, tr.steps[k].state);
  }

  CheckList cl;
  cl.note("route: " + std::string(tr.auxiliary_route ? "auxiliary (time-dependent datum)"
                                                     : "direct"));
  cl.note("seed: " + std::to_string(cfg.seed));
  bool descent = true, warned = false;
  double min_det_all = 1e300, m_defect = 0.0, max_gap = 0.0;
  for (const auto& s : tr.steps) {
    descent = descent && s.descent_ok;
    warned = warned || s.no_descent_warning;
    min_det_all = std::min(min_det_all, s.min_det);
    m_defect = std::max(m_defect, s.state.m.max_norm_defect());
    max_gap = std::max(max_gap, s.pullback_gap);
  }
  cl.check(descent, "per-step descent inequality E(t_k,q_k)+D <= E(t_k,q_{k-1})");
  cl.check(min_det_all > 0.0, "min over trajectory of min_det > 0 (got " + fmt(min_det_all) + ")");
  cl.check(m_defect <= 1e-10, "nodal |m| = 1 within 1e-10 (defect " + fmt(m_defect) + ")");
  if (warned) cl.note("note: some steps returned the previous state (no admissible descent)");

  const auto residuals = balance_residual(tr);
  double worst_r = 0.0;
  for (double r : residuals) worst_r = std::max(worst_r, std::abs(r));
  double injected = 0.0;
  for (size_t k = 1; k < tr.steps.size(); ++k)
    injected += 0.5 * (tr.steps[k].t - tr.steps[k - 1].t) *
                std::abs(tr.steps[k].power + tr.steps[k - 1].power);
  const double scale = tr.steps.back().variation + injected;
  {
    std::ofstream os(fs::path(out_dir) / "balance_report.txt", std::ios::binary);
    os << "k t residual\n";
    for (size_t k = 0; k < residuals.size(); ++k)
      os << k << " " << tr.steps[k].t << " " << residuals[k] << "\n";
    os << "max_abs_residual " << worst_r << "\n";
    os << "dissipated_plus_injected " << scale << "\n";
  }
  cl.note("max balance residual " + fmt(worst_r) + " on scale " + fmt(scale));
  if (tr.auxiliary_route)
    cl.check(max_gap <= 1e-9 * (1.0 + std::abs(tr.steps.back().energy.total().value_or(0.0))),
             "pull-back identity gap |E - F| (max " + fmt(max_gap) + ")");

  if (cfg.solver.stability_competitors > 0) {
    int violations = 0;
    double worst_margin = 1e300;
    std::ofstream os(fs::path(out_dir) / "stability_report.txt", std::ios::binary);
    os << "k t competitors violations worst_margin\n";
    for (size_t k = 0; k < tr.steps.size(); ++k) {
      const auto& st = tr.steps[k].stability;
      violations += st.violations;
      worst_margin = std::min(worst_margin, st.worst_margin);
      os << k << " " << tr.steps[k].t << " " << st.competitors << " " << st.violations << " "
         << st.worst_margin << "\n";
    }
    cl.check(violations == 0, "global stability sampling: " + std::to_string(violations) +
                                  " violation(s), worst margin " + fmt(worst_margin));
  }
  return cl.finish(out_dir, "simulate_report.txt");
}

// -------------------------------------------------------------- orlicz-check

int cmd_orlicz_check(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const NFunction& A = cfg.nfunction;
  CounterRng rng(cfg.seed);
  CheckList cl;

  cl.note("seed: " + std::to_string(cfg.seed));
  cl.note("kappa_A = " + fmt(A.kappa()) + "  p_A = " + fmt(A.p_growth()) +
          "  (grid surrogates on 1e-6..1e6)");
  cl.check(A.kappa() >= 2.0, "Delta_2 constant >= 2");
  cl.check(A.p_growth() > 1.0, "growth exponent p_A > 1");

  // Young's inequality with equality at the conjugate point
  int young_bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double s1 = rng.uniform(1e-8, 100.0), s2 = rng.uniform(1e-8, 100.0);
    if (s1 * s2 > A(s1) + conjugate_eval(A, s2) + 1e-10 * (1.0 + s1 * s2)) ++young_bad;
  }
  cl.check(young_bad == 0, "Young inequality, 10^4 samples (" + std::to_string(young_bad) +
                               " violations)");
  double eq_err = 0.0;
  for (double s1 : {0.3, 1.0, 4.0, 30.0}) {
    const double s2 = A.left_derivative(s1);
    eq_err = std::max(eq_err, std::abs(s1 * s2 - A(s1) - conjugate_eval(A, s2)) /
                                  (1.0 + std::abs(s1 * s2)));
  }
  cl.check(eq_err <= 1e-8, "Young equality at s2 = A'(s1) within 1e-8 (err " + fmt(eq_err) + ")");

  // Hoelder and norm-modular bounds on random sample sets
  const NFunction Abar = NFunction::conjugate_of(A);
  int hoelder_bad = 0, nm_bad = 0;
  for (int k = 0; k < 300; ++k) {
    std::vector<double> v, w, wts;
    for (int i = 0; i < 16; ++i) {
      v.push_back(std::abs(rng.normal()) * std::pow(10.0, rng.uniform(-2.0, 2.0)));
      w.push_back(std::abs(rng.normal()) * std::pow(10.0, rng.uniform(-2.0, 2.0)));
      wts.push_back(rng.uniform(0.01, 0.2));
    }
    const WeightedSampleSet sv(v, wts), sw(w, wts);
    double l1 = 0.0;
    for (size_t i = 0; i < v.size(); ++i) l1 += wts[i] * v[i] * w[i];
    if (l1 > 2.0 * luxemburg_norm(A, sv) * luxemburg_norm(Abar, sw) * (1.0 + 1e-9)) ++hoelder_bad;
    const double mod = modular(A, sv), norm = luxemburg_norm(A, sv);
    if (norm > mod + 1.0 + 1e-9) ++nm_bad;
    if (mod > std::pow(norm + 1.0, A.p_growth()) * (1.0 + 1e-9)) ++nm_bad;
  }
  cl.check(hoelder_bad == 0, "Hoelder inequality on random samples");
  cl.check(nm_bad == 0, "norm-modular bounds on random samples");

  // modular convergence along a vanishing perturbation
  {
    std::vector<double> pert, wts;
    for (int i = 0; i < 16; ++i) {
      pert.push_back(std::abs(rng.normal()) + 0.1);
      wts.push_back(1.0 / 16);
    }
    bool monotone = true;
    double pn = 1e300, pm = 1e300;
    for (int k = 0; k < 16; ++k) {
      std::vector<double> d(pert);
      for (auto& x : d) x *= std::pow(2.0, -k);
      const WeightedSampleSet set(d, wts);
      const double n = luxemburg_norm(A, set), m = modular(A, set);
      monotone = monotone && n < pn && m < pm;
      pn = n;
      pm = m;
    }
    cl.check(monotone && pn < 1e-3 && pm < 1e-3,
             "norm and modular convergence agree along a vanishing sequence");
  }

  // conjugate involution and sphere embedding
  {
    double inv_err = 0.0;
    const NFunction Abarbar = NFunction::conjugate_of(Abar);
    for (double s : {0.2, 1.0, 7.0, 40.0})
      inv_err = std::max(inv_err, std::abs(Abarbar(s) - A(s)) / (1.0 + A(s)));
    cl.check(inv_err <= 1e-8, "conjugate involution conj(conj(A)) = A (err " + fmt(inv_err) + ")");
    const NFunction A1 = sphere_embedding_function(A, 2);
    double emb_err = 0.0;
    for (double s : {0.5, 2.0, 9.0}) emb_err = std::max(emb_err, std::abs(A1(s) - A(s)));
    cl.check(emb_err == 0.0, "sphere embedding function A_1 = A in dimension 2");
  }
  return cl.finish(out_dir, "orlicz_report.txt");
}

// ---------------------------------------------------------- derivative-check

int cmd_derivative_check(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const MaterialModel model = cfg.material();
  CounterRng rng(cfg.seed);
  CheckList cl;
  cl.note("seed: " + std::to_string(cfg.seed));

  // suite 1: tensor differentials vs central differences
  {
    const double h = 1e-6;
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const int n = (k % 2 == 0) ? 2 : 3;
      Mat A = Mat::identity(n), B(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          A(i, j) += 0.6 * rng.uniform(-1.0, 1.0);
          B(i, j) = rng.uniform(-1.0, 1.0);
        }
      if (determinant(A) <= 0.1) {
        --k;
        continue;
      }
      const Mat Ap = A + h * B, Am = A - h * B;
      auto rel = [](const Mat& got, const Mat& want) {
        return (got - want).norm() / std::max(1.0, want.norm());
      };
      worst = std::max(worst, rel(d_adj(A, B), (1.0 / (2 * h)) * (adjugate(Ap) - adjugate(Am))));
      worst = std::max(worst, rel(d_cof(A, B), (1.0 / (2 * h)) * (cofactor(Ap) - cofactor(Am))));
      worst = std::max(worst, rel(d_inv(A, B), (1.0 / (2 * h)) * (inverse(Ap) - inverse(Am))));
      const double fd = (determinant(Ap) - determinant(Am)) / (2 * h);
      worst = std::max(worst, std::abs(d_det(A, B) - fd) / std::max(1.0, std::abs(fd)));
    }
    cl.check(worst <= 1e-5, "tensor differentials vs finite differences, 10^3 points (worst rel " +
                                fmt(worst) + ")");
  }

  // suite 2: stress and Kirchhoff tensor vs finite differences of W
  {
    const double h = 1e-6;
    double worst = 0.0;
    SampleBox box;
    for (int k = 0; k < 1000; ++k) {
      const Mat F = sample_f(rng, 2, box);
      const UnitVector z = sample_z(rng, 2);
      const Mat P = elastic_stress(model, F, z);
      Mat fd(2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Mat Fp = F, Fm = F;
          Fp(i, j) += h;
          Fm(i, j) -= h;
          fd(i, j) = (elastic_density(model, Fp, z).value() -
                      elastic_density(model, Fm, z).value()) /
                     (2 * h);
        }
      worst = std::max(worst, (P - fd).norm() / std::max(1.0, fd.norm()));
      worst = std::max(worst, (kirchhoff(model, F, z) - P * F.transposed()).norm() /
                                  std::max(1.0, P.norm()));
    }
    cl.check(worst <= 1e-5,
             "elastic stress and Kirchhoff tensor vs finite differences (worst rel " + fmt(worst) +
                 ")");
  }

  // suite 3: time derivatives of E and F and the power identity
  {
    const Mesh mesh = Mesh::unit_square(6);
    LoadSet ls = cfg.loads;
    if (ls.f.is_zero() && ls.g.is_zero() && ls.h.is_zero()) {
      ls.f.space = SpaceProfile{Vec(0.2, -0.1), Mat(0.1, 0.0, 0.05, -0.1)};
      ls.f.time = Polynomial({0.5, 1.0, -0.7, 0.3});
      ls.g.space = SpaceProfile{Vec(0.1, 0.3), Mat(0.0, 0.2, -0.1, 0.0)};
      ls.g.time = Polynomial({1.0, -0.5, 0.25});
      ls.h.space = SpaceProfile{Vec(0.3, 0.1), Mat(-0.2, 0.1, 0.0, 0.15)};
      ls.h.time = Polynomial({0.2, 0.8, 0.4});
    }
    BoundaryDatum datum = cfg.datum;
    if (!datum.time_dependent()) {
      std::array<PiecewisePoly, 4> a = {Polynomial({1.0, 0.25, 0.1}), Polynomial({0.0, 0.05}),
                                        Polynomial({0.0, -0.03}), Polynomial({1.0, 0.1})};
      std::array<PiecewisePoly, 2> b = {Polynomial({0.0, 0.07}), Polynomial({0.0, 0.04})};
      datum = BoundaryDatum(a, b, cfg.T);
    }
    double worst_e = 0.0, worst_f = 0.0, worst_id = 0.0;
    const double h = 1e-4;
    for (int k = 0; k < 40; ++k) {
      // random admissible state
      std::vector<Vec> pos;
      for (int i = 0; i < mesh.num_nodes(); ++i)
        pos.push_back(mesh.node(i) + Vec(0.03 * rng.normal(), 0.03 * rng.normal()));
      DeformationField y = DeformationField::unchecked(mesh, std::move(pos));
      if (!(y.min_det() > 0.0)) {
        --k;
        continue;
      }
      std::vector<Vec> dirs;
      for (int i = 0; i < mesh.num_nodes(); ++i) {
        Vec v(rng.normal(), rng.normal());
        dirs.push_back((1.0 / v.norm()) * v);
      }
      const State p(std::move(y), DirectorField(mesh, std::move(dirs)));
      const double t = rng.uniform(0.1, 0.9 * cfg.T);

      const double fd_e = (total_energy(t + h, p, model, ls).total().value() -
                           total_energy(t - h, p, model, ls).total().value()) /
                          (2 * h);
      const double pe = power_time_independent(t, p, ls);
      worst_e = std::max(worst_e, std::abs(pe - fd_e) / (1.0 + std::abs(fd_e)));

      const double fd_f = (aux_energy(t + h, p, model, ls, datum).total().value() -
                           aux_energy(t - h, p, model, ls, datum).total().value()) /
                          (2 * h);
      const double pf = aux_power(t, p, model, ls, datum);
      worst_f = std::max(worst_f, std::abs(pf - fd_f) / (1.0 + std::abs(fd_f)));

      const State q = pullback(t, p, datum);
      const double lhs =
          power_time_independent(t, q, ls) + displacement_power(t, q, model, ls, datum);
      worst_id = std::max(worst_id, std::abs(lhs - pf) / (1.0 + std::abs(pf)));
    }
    cl.check(worst_e <= 1e-4, "d_t E vs centred differences (worst rel " + fmt(worst_e) + ")");
    cl.check(worst_f <= 1e-4, "d_t F vs centred differences (worst rel " + fmt(worst_f) + ")");
    cl.check(worst_id <= 1e-6,
             "identity d_t E + P = d_t F at pulled-back states (worst rel " + fmt(worst_id) + ")");
  }
  return cl.finish(out_dir, "derivative_report.txt");
}

// ------------------------------------------------------------ material-check

int cmd_material_check(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = load_config(config_path);
  const MaterialModel model = cfg.material();
  CounterRng rng(cfg.seed);
  CheckList cl;
  cl.note("seed: " + std::to_string(cfg.seed));
  cl.note("mu1 = " + fmt(model.mu1) + "  mu2 = " + fmt(model.mu2) + "  c_W = " + fmt(model.c_W));

  // (W1): finite and continuous on det > 0, infinite on det <= 0
  {
    SampleBox box;
    bool ok = true;
    for (int k = 0; k < 2000; ++k) {
      const Mat F = sample_f(rng, 2, box);
      const UnitVector z = sample_z(rng, 2);
      const ExtReal W = elastic_density(model, F, z);
      if (!W.finite() || !std::isfinite(W.value())) ok = false;
    }
    ok = ok && !elastic_density(model, Mat(1.0, 0.0, 0.0, 0.0), UnitVector::axis(2, 0)).finite();
    ok = ok && !elastic_density(model, Mat(1.0, 0.0, 0.0, -1.0), UnitVector::axis(2, 0)).finite();
    cl.check(ok, "(W1) finiteness: W finite iff det F > 0");
  }
  // (W2): minorant never exceeds the density
  {
    SampleBox box;
    int bad = 0;
    for (int k = 0; k < 100000; ++k) {
      const Mat F = sample_f(rng, 2, box);
      const UnitVector z = sample_z(rng, 2);
      if (coercivity_minorant(model, F, z) >
          elastic_density(model, F, z).value() * (1.0 + 1e-12) + 1e-12)
        ++bad;
    }
    cl.check(bad == 0, "(W2) coercivity minorant <= W on 10^5 samples");
  }
  // (W5): monotonicity of the envelopes around the sigma minimiser
  {
    const double vbar = model.sigma.minimizer();
    bool ok = true;
    for (int i = 1; i < 50; ++i) {
      const double a = vbar * i / 50.0, b = vbar * (i + 1) / 50.0;
      if (model.sigma(a) < model.sigma(b) - 1e-12) ok = false;
      if (model.sigma(vbar * (1.0 + i * 0.1)) > model.sigma(vbar * (1.0 + (i + 1) * 0.1)) + 1e-12)
        ok = false;
      if (std::pow(a / model.mu2, model.zeta) > std::pow(b / model.mu2, model.zeta)) ok = false;
    }
    cl.check(ok, "(W5) Gamma increasing; gamma decreasing then increasing about " + fmt(vbar));
  }
  // (W6) calibration and the multiplicative estimates
  SampleBox box;
  const W6Calibration cal = calibrate_w6(model, box, rng);
  cl.note("(W6) fitted a_W = " + fmt(cal.a_W) + ", b_W = 1 (box |F| <= " + fmt(box.f_box) +
          ", det >= " + fmt(box.det_floor) + ")");
  cl.check(std::isfinite(cal.a_W) && cal.a_W > 0.0, "(W6) Kirchhoff ratio bounded on the box");

  const auto rep = multiplicative_estimates_check(model, box, 1e-3, cal, rng);
  cl.note("multiplicative estimates at |G-I| <= " + fmt(rep.delta) + " after " +
          std::to_string(rep.halvings) + " halving(s): worst margin " + fmt(rep.worst_margin));
  cl.check(rep.passed, "multiplicative estimates (gamma1-gamma3) hold with zero violations");

  // (W7) empirical continuity table
  {
    const auto table = w7_delta_table(model, box, {1e-1, 1e-2, 1e-3}, rng);
    for (const auto& [eps, delta] : table)
      cl.note("(W7) delta_W(" + fmt(eps) + ") ~= " + fmt(delta));
    cl.check(table[0].second >= table[1].second && table[1].second >= table[2].second,
             "(W7) delta_W(eps) monotone in eps");
  }
  return cl.finish(out_dir, "material_report.txt");
}

// ------------------------------------------------------------ inequality-lab

int cmd_inequality_lab(const std::string& config_path, const std::string& out_dir,
                       const std::string& which) {
  const ExperimentConfig cfg = load_config(config_path);
  const MaterialModel model = cfg.material();
  CheckList cl;
  cl.note("seed: " + std::to_string(cfg.seed));
  fs::create_directories(out_dir);
  std::ofstream csv(fs::path(out_dir) / "lab.csv", std::ios::binary);
  csv << "inequality,resolution,constant,samples,max_violation\n";

  auto want = [&](const char* name) { return which == "all" || which == name; };

  double cp_ref = 0.0, ct_ref = 0.0;
  if (want("poincare") || want("coercivity")) {
    double prev = -1.0;
    bool stable = true;
    for (int n : {8, 16, 32}) {
      const Mesh mesh = Mesh::unit_square(n);
      CounterRng rng(cfg.seed);
      const auto rep = poincare_estimate(mesh, cfg.nfunction, 300, rng);
      csv << "poincare," << n << "," << rep.constant << "," << rep.samples << ",0\n";
      cl.note("poincare n=" + std::to_string(n) + ": C_P ~= " + fmt(rep.constant));
      if (prev > 0.0 && std::abs(rep.constant - prev) / prev >= 0.2) stable = false;
      prev = rep.constant;
      if (n == 8) cp_ref = rep.constant;
    }
    if (want("poincare"))
      cl.check(stable, "Poincare constant varies < 20% across resolutions 8/16/32");
  }
  if (want("trace") || want("coercivity")) {
    double prev = -1.0;
    bool stable = true;
    for (int n : {8, 16, 32}) {
      const Mesh mesh = Mesh::unit_square(n);
      CounterRng rng(cfg.seed + 1);
      const auto rep = trace_estimate(mesh, cfg.nfunction, 300, rng);
      csv << "trace," << n << "," << rep.constant << "," << rep.samples << ",0\n";
      cl.note("trace n=" + std::to_string(n) + ": C_tr ~= " + fmt(rep.constant));
      if (prev > 0.0 && std::abs(rep.constant - prev) / prev >= 0.2) stable = false;
      prev = rep.constant;
      if (n == 8) ct_ref = rep.constant;
    }
    if (want("trace"))
      cl.check(stable, "trace constant varies < 20% across resolutions 8/16/32");
  }
  if (want("power")) {
    const Mesh mesh = cfg.make_mesh();
    CounterRng rng(cfg.seed + 2);
    std::vector<State> states;
    while (states.size() < 5) {
      std::vector<Vec> pos;
      for (int i = 0; i < mesh.num_nodes(); ++i)
        pos.push_back(mesh.node(i) + Vec(0.02 * rng.normal(), 0.02 * rng.normal()));
      DeformationField y = DeformationField::unchecked(mesh, std::move(pos));
      if (!(y.min_det() > 0.0)) continue;
      states.emplace_back(std::move(y), DirectorField::constant(mesh, cfg.m0));
    }
    LoadSet ls = cfg.loads;
    if (ls.f.is_zero() && ls.g.is_zero() && ls.h.is_zero()) {
      ls.f.space = SpaceProfile::constant(Vec(0.3, -0.2));
      ls.f.time = Polynomial({0.0, 0.5, 1.0});
    }
    Problem pb{&mesh, model, ls, cfg.datum, cfg.datum.time_dependent(), cfg.confinement};
    const auto res = power_modulus_check(pb, 0.4 * cfg.T, states, {1e-1, 1e-2, 1e-3, 1e-4});
    for (size_t i = 0; i < res.h.size(); ++i)
      csv << "power," << res.h[i] << "," << res.err[i] << "," << states.size() << ",0\n";
    cl.note("power modulus log-log slope " + fmt(res.slope));
    cl.check(res.monotone, "difference-quotient error decreases with h");
  }
  if (want("embedding")) {
    CounterRng rng(cfg.seed + 3);
    const auto rep = sphere_embedding_check(cfg.nfunction, 200, rng);
    csv << "embedding,256," << rep.constant << "," << rep.samples << ",0\n";
    cl.note("sphere embedding C_em ~= " + fmt(rep.constant));
    cl.check(rep.passed && rep.constant >= 1.0 - 1e-9, "embedding constant finite and >= 1");
  }
  if (want("coercivity")) {
    const Mesh mesh = Mesh::unit_square(8);
    const Box domain = cfg.confinement ? *cfg.confinement : Box{Vec(-1.0, -1.0), Vec(2.0, 2.0)};
    const auto cc = coercivity_constants(0.5 * cfg.T, mesh, model, cfg.loads, cfg.datum, cp_ref,
                                         ct_ref, domain);
    cl.note("constructive constants: K1 = " + fmt(cc.K1) + " K2 = " + fmt(cc.K2) +
            " (eps = " + fmt(cc.eps) + ", C_P = " + fmt(cc.C_P) + ", C_tr = " + fmt(cc.C_tr) + ")");
    cl.note("transformed branch: K1 = " + fmt(cc.K1_aux) + " K2 = " + fmt(cc.K2_aux) +
            " (m1 = " + fmt(cc.m1) + ", m2 = " + fmt(cc.m2) + ", m3 = " + fmt(cc.m3) + ")");
    CounterRng rng(cfg.seed + 4);
    const auto rep = coercivity_probe(0.5 * cfg.T, 100, mesh, model, cfg.loads, cfg.datum, cc, rng);
    csv << "coercivity,8," << cc.K1 << "," << rep.samples << "," << rep.max_violation << "\n";
    cl.check(rep.passed && rep.max_violation <= 0.0,
             "coercivity probe: zero violations on 100 random admissible states (worst slack " +
                 fmt(-rep.max_violation) + ")");
  }
  return cl.finish(out_dir, "lab_report.txt");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nemato: quasistatic nematoelastic evolutions and their verification lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", which = "all";

  auto* sim = app.add_subcommand("simulate", "run a quasistatic evolution and write ledgers");
  sim->add_option("--config", config_path, "experiment config file");
  sim->add_option("--out", out_dir, "output directory");

  auto* orl = app.add_subcommand("orlicz-check", "verify the N-function calculus");
  orl->add_option("--config", config_path, "experiment config file");
  orl->add_option("--out", out_dir, "output directory");

  auto* der = app.add_subcommand("derivative-check", "finite-difference suites");
  der->add_option("--config", config_path, "experiment config file");
  der->add_option("--out", out_dir, "output directory");

  auto* mat = app.add_subcommand("material-check", "verify the density assumptions");
  mat->add_option("--config", config_path, "experiment config file");
  mat->add_option("--out", out_dir, "output directory");

  auto* lab = app.add_subcommand("inequality-lab", "estimate and verify the modular inequalities");
  lab->add_option("--config", config_path, "experiment config file");
  lab->add_option("--out", out_dir, "output directory");
  lab->add_option("--which", which, "poincare|trace|power|embedding|coercivity|all")
      ->check(CLI::IsMember({"poincare", "trace", "power", "embedding", "coercivity", "all"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << app.help() << "\n";
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sim->parsed()) return cmd_simulate(config_path, out_dir);
    if (orl->parsed()) return cmd_orlicz_check(config_path, out_dir);
    if (der->parsed()) return cmd_derivative_check(config_path, out_dir);
    if (mat->parsed()) return cmd_material_check(config_path, out_dir);
    if (lab->parsed()) return cmd_inequality_lab(config_path, out_dir, which);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
