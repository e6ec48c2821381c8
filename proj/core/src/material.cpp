#include "nemato/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nemato {

// ------------------------------------------------------------------- sigma

SigmaFunction SigmaFunction::power_log(double a, double b, double alpha, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(alpha > 1.0))
    throw std::invalid_argument("SigmaFunction::power_log: need a, b > 0, alpha > 1");
  SigmaFunction s;
  s.family_ = SigmaFamily::PowerLog;
  s.a_ = a;
  s.b_ = b;
  s.alpha_ = alpha;
  s.c_ = c;
  s.finalize();
  return s;
}

SigmaFunction SigmaFunction::power_power(double a, double b, double alpha, double beta, double c) {
  if (!(a > 0.0) || !(b > 0.0) || !(alpha > 1.0) || !(beta >= 1.0))
    throw std::invalid_argument("SigmaFunction::power_power: need a, b > 0, alpha > 1, beta >= 1");
  SigmaFunction s;
  s.family_ = SigmaFamily::PowerPower;
  s.a_ = a;
  s.b_ = b;
  s.alpha_ = alpha;
  s.beta_ = beta;
  s.c_ = c;
  s.finalize();
  return s;
}

double SigmaFunction::operator()(double v) const {
  if (!(v > 0.0)) throw std::domain_error("SigmaFunction: v must be positive");
  if (family_ == SigmaFamily::PowerLog) return a_ * std::pow(v, alpha_) - b_ * std::log(v) + c_;
  return a_ * std::pow(v, alpha_) + b_ * std::pow(v, -beta_) + c_;
}

double SigmaFunction::derivative(double v) const {
  if (!(v > 0.0)) throw std::domain_error("SigmaFunction: v must be positive");
  if (family_ == SigmaFamily::PowerLog) return a_ * alpha_ * std::pow(v, alpha_ - 1.0) - b_ / v;
  return a_ * alpha_ * std::pow(v, alpha_ - 1.0) - b_ * beta_ * std::pow(v, -beta_ - 1.0);
}

double SigmaFunction::second_derivative(double v) const {
  if (!(v > 0.0)) throw std::domain_error("SigmaFunction: v must be positive");
  const double t1 = a_ * alpha_ * (alpha_ - 1.0) * std::pow(v, alpha_ - 2.0);
  if (family_ == SigmaFamily::PowerLog) return t1 + b_ / (v * v);
  return t1 + b_ * beta_ * (beta_ + 1.0) * std::pow(v, -beta_ - 2.0);
}

void SigmaFunction::finalize() {
  // locate the global minimum (sigma' is increasing) and require sigma >= 0
  double lo = 1e-12, hi = 1.0;
  int guard = 0;
  while (derivative(hi) < 0.0) {
    hi *= 4.0;
    if (++guard > 200) throw std::runtime_error("SigmaFunction: minimiser bracket failed");
  }
  guard = 0;
  while (derivative(lo) > 0.0) {
    lo /= 4.0;
    if (++guard > 200) throw std::runtime_error("SigmaFunction: minimiser bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (derivative(mid) < 0.0 ? lo : hi) = mid;
  }
  vbar_ = 0.5 * (lo + hi);
  if ((*this)(vbar_) < -1e-10)
    throw std::invalid_argument("SigmaFunction: negative minimum, not a [0,inf) penalty");
}

// ------------------------------------------------------------------- model

MaterialModel::MaterialModel(NFunction A_, double mu_, double zeta_, SigmaFunction sigma_, int dim_)
    : A(std::move(A_)), mu(mu_), zeta(zeta_), sigma(std::move(sigma_)), dim(dim_) {
  if (dim != 2 && dim != 3) throw std::invalid_argument("MaterialModel: dim must be 2 or 3");
  if (!(mu > 0.0)) throw std::invalid_argument("MaterialModel: mu must be positive");
  if (!(zeta > 1.0)) throw std::invalid_argument("MaterialModel: zeta must be > 1");
  mu1 = director_mu1(mu, dim);
  mu2 = director_mu2(mu, dim);
  c_W = std::pow(mu1 + 1.0, -A.p_growth());
}

ExtReal phi_eval(const MaterialModel& m, const Mat& X) {
  const double det = determinant(X);
  if (det <= 0.0) return ExtReal::infinity();
  return m.A(X.norm()) + std::pow(adjugate(X).norm(), m.zeta) + m.sigma(det);
}

ExtReal elastic_density(const MaterialModel& m, const Mat& F, const UnitVector& z) {
  const Mat X = director_tensor(z, m.mu).N_inv * F;
  return phi_eval(m, X);
}

Mat l_tensor(const MaterialModel& m, const Mat& X) {
  const double det = determinant(X);
  if (det <= 0.0) throw std::domain_error("l_tensor: det X <= 0");
  const double nx = X.norm();
  const Mat adjX = adjugate(X);
  const double na = adjX.norm();
  Mat L = (m.A.left_derivative(nx) / nx) * (X * X.transposed());
  L += m.zeta * (std::pow(na, m.zeta) * Mat::identity(X.n) -
                 std::pow(na, m.zeta - 2.0) * (cofactor(X) * adjX));
  L += (m.sigma.derivative(det) * det) * Mat::identity(X.n);
  return L;
}

Mat phi_gradient(const MaterialModel& m, const Mat& X) {
  return l_tensor(m, X) * inverse(X).transposed();
}

Mat elastic_stress(const MaterialModel& m, const Mat& F, const UnitVector& z) {
  if (determinant(F) <= 0.0) throw std::domain_error("elastic_stress: det F <= 0");
  const Mat Ninv = director_tensor(z, m.mu).N_inv;
  return Ninv * phi_gradient(m, Ninv * F);
}

Mat kirchhoff(const MaterialModel& m, const Mat& F, const UnitVector& z) {
  if (determinant(F) <= 0.0) throw std::domain_error("kirchhoff: det F <= 0");
  const DirectorTensor d = director_tensor(z, m.mu);
  return d.N_inv * l_tensor(m, d.N_inv * F) * d.N;
}

Vec elastic_density_zgrad(const MaterialModel& m, const Mat& F, const UnitVector& z) {
  const double c = m.mu - std::pow(m.mu, -1.0 / (m.dim - 1));
  if (c == 0.0) return Vec::zero(m.dim);
  const Mat Ninv = director_tensor(z, m.mu).N_inv;
  const Mat G = phi_gradient(m, Ninv * F);
  const Mat S = G * F.transposed() + F * G.transposed();
  return c * (S * z.z);
}

double coercivity_minorant(const MaterialModel& m, const Mat& F, const UnitVector&) {
  const double det = determinant(F);
  if (det <= 0.0) throw std::domain_error("coercivity_minorant: det F <= 0");
  return m.c_W * m.A(F.norm()) + std::pow(adjugate(F).norm() / m.mu2, m.zeta) + m.sigma(det);
}

double nematic_integrand(const Mat& Dm, const Mat& Dy) {
  const double det = determinant(Dy);
  if (det <= 0.0) throw std::domain_error("nematic_integrand: det Dy <= 0");
  const Mat G = Dm * inverse(Dy);
  return G.ddot(G) * det;
}

// ------------------------------------------------------------ calibrations

Mat sample_f(CounterRng& rng, int dim, const SampleBox& box) {
  // rejection sampling of |F| <= f_box with det F >= det_floor
  for (int attempt = 0; attempt < 100000; ++attempt) {
    Mat F(dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) F(i, j) = rng.uniform(-1.0, 1.0);
    // bias towards the identity to populate moderate determinants
    F = 0.5 * box.f_box * F;
    const double blend = rng.uniform();
    F = blend * Mat::identity(dim) + F;
    if (F.norm() <= box.f_box && determinant(F) >= box.det_floor) return F;
  }
  throw std::runtime_error("sample_f: rejection sampling failed");
}

UnitVector sample_z(CounterRng& rng, int dim) {
  for (;;) {
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = rng.normal();
    if (v.norm() > 1e-8) return UnitVector::normalized(v);
  }
}

W6Calibration calibrate_w6(const MaterialModel& m, const SampleBox& box, CounterRng& rng) {
  if (box.count <= 0) throw std::invalid_argument("calibrate_w6: empty sample set");
  W6Calibration cal{0.0, 1.0, box, 0.0};
  for (int k = 0; k < box.count; ++k) {
    const Mat F = sample_f(rng, m.dim, box);
    const UnitVector z = sample_z(rng, m.dim);
    const double W = elastic_density(m, F, z).value();
    const double ratio = kirchhoff(m, F, z).norm() / (W + cal.b_W);
    if (!std::isfinite(ratio)) throw std::runtime_error("calibrate_w6: unbounded ratio");
    if (ratio > cal.a_W) {
      cal.a_W = ratio;
      cal.max_ratio_at = F.norm();
    }
  }
  return cal;
}

namespace {
Mat sample_g_near_identity(CounterRng& rng, int dim, double delta) {
  Mat R(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) R(i, j) = rng.uniform(-1.0, 1.0);
  const double r = R.norm();
  if (r == 0.0) return Mat::identity(dim);
  return Mat::identity(dim) + (delta * rng.uniform() / r) * R;
}
}  // namespace

MultiplicativeReport multiplicative_estimates_check(const MaterialModel& m, const SampleBox& box,
                                                    double delta, const W6Calibration& w6,
                                                    CounterRng& rng) {
  if (!(delta > 0.0) || delta > 1e-2)
    throw std::invalid_argument("multiplicative_estimates_check: delta must be in (0, 1e-2]");
  const double N = m.dim;
  const double c1 = N / (N - 1.0);
  const double c2 = w6.a_W * N * N / (N - 1.0);

  MultiplicativeReport rep{};
  for (int halving = 0; halving <= 3; ++halving) {
    rep = MultiplicativeReport{};
    rep.delta = delta;
    rep.halvings = halving;
    rep.samples = box.count;
    rep.worst_margin = 1e300;
    for (int k = 0; k < box.count; ++k) {
      const Mat F = sample_f(rng, m.dim, box);
      const UnitVector z = sample_z(rng, m.dim);
      const Mat G = sample_g_near_identity(rng, m.dim, delta);
      const double W = elastic_density(m, F, z).value();
      const double WG = elastic_density(m, G * F, z).value();
      const double gnorm = (G - Mat::identity(m.dim)).norm();

      const double s1 = c1 * (W + w6.b_W) - (WG + w6.b_W);
      if (s1 < 0.0) ++rep.violations_g1;
      // d_F W(GF, z) F^T = K(GF, z) G^{-T}
      const double kn = (kirchhoff(m, G * F, z) * inverse(G).transposed()).norm();
      const double s2 = c2 * (W + w6.b_W) - kn;
      if (s2 < 0.0) ++rep.violations_g2;
      const double s3 = c2 * (W + w6.b_W) * gnorm - std::abs(WG - W);
      if (s3 < 0.0) ++rep.violations_g3;
      rep.worst_margin = std::min({rep.worst_margin, s1, s2, s3});
    }
    rep.passed = rep.violations_g1 + rep.violations_g2 + rep.violations_g3 == 0;
    if (rep.passed) break;
    delta *= 0.5;
  }
  return rep;
}

std::vector<std::pair<double, double>> w7_delta_table(const MaterialModel& m, const SampleBox& box,
                                                      const std::vector<double>& eps_list,
                                                      CounterRng& rng) {
  // pre-draw the sample cloud once so the bisection sees a fixed criterion
  std::vector<Mat> fs;
  std::vector<UnitVector> zs;
  std::vector<Mat> dirs;  // unit perturbation directions for G
  const int n = std::min(box.count, 2000);
  for (int k = 0; k < n; ++k) {
    fs.push_back(sample_f(rng, m.dim, box));
    zs.push_back(sample_z(rng, m.dim));
    Mat R(m.dim);
    for (int i = 0; i < m.dim; ++i)
      for (int j = 0; j < m.dim; ++j) R(i, j) = rng.uniform(-1.0, 1.0);
    dirs.push_back((1.0 / R.norm()) * R);
  }
  auto sup_ratio = [&](double delta) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const Mat G = Mat::identity(m.dim) + delta * dirs[static_cast<size_t>(k)];
      if (determinant(G) <= 0.0) continue;
      const Mat& F = fs[static_cast<size_t>(k)];
      const UnitVector& z = zs[static_cast<size_t>(k)];
      const double W = elastic_density(m, F, z).value();
      const double diff = (kirchhoff(m, G * F, z) - kirchhoff(m, F, z)).norm();
      worst = std::max(worst, diff / (W + 1.0));
    }
    return worst;
  };

  std::vector<std::pair<double, double>> table;
  for (double eps : eps_list) {
    double lo = 0.0, hi = 0.5;
    while (sup_ratio(hi) > eps && hi > 1e-12) hi *= 0.5;
    lo = hi;
    hi = std::min(1.0, 2.0 * hi);
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      (sup_ratio(mid) <= eps ? lo : hi) = mid;
    }
    table.emplace_back(eps, lo);
  }
  return table;
}

}  // namespace nemato
