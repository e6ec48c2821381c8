#pragma once

#include <vector>

#include "nemato/extreal.hpp"
#include "nemato/orlicz.hpp"
#include "nemato/rng.hpp"
#include "nemato/tensor.hpp"

namespace nemato {

enum class SigmaFamily { PowerLog, PowerPower };

// Convex volumetric penalty sigma: (0,inf) -> [0,inf) with sigma(v)/v -> inf
// at infinity and sigma -> inf at 0+. Families:
//   PowerLog:   a v^alpha - b log v + c
//   PowerPower: a v^alpha + b v^-beta + c
class SigmaFunction {
 public:
  static SigmaFunction power_log(double a, double b, double alpha, double c);
  static SigmaFunction power_power(double a, double b, double alpha, double beta, double c);
  // v^2 + 2/v - 3: stress-free with sigma(1) = sigma'(1) = 0.
  static SigmaFunction reference() { return power_power(1.0, 2.0, 2.0, 1.0, -3.0); }

  double operator()(double v) const;
  double derivative(double v) const;
  double second_derivative(double v) const;
  double minimizer() const { return vbar_; }  // the global minimum location

  SigmaFamily family() const { return family_; }

 private:
  SigmaFunction() = default;
  void finalize();
  SigmaFamily family_ = SigmaFamily::PowerPower;
  double a_ = 1.0, b_ = 2.0, alpha_ = 2.0, beta_ = 2.0, c_ = -3.0;
  double vbar_ = 1.0;
};

// The prototypical nematoelastic density
//   W(F, z) = Phi(N^{-1}(z) F),  Phi(X) = A(|X|) + |adj X|^zeta + sigma(det X)
// with the derived constants mu1 = |N(z)|, mu2 = |N^{-1}(z)|,
// c_W = (mu1 + 1)^{-p_A}.
struct MaterialModel {
  NFunction A;
  double mu;
  double zeta;
  SigmaFunction sigma;
  int dim;

  double mu1, mu2, c_W;

  MaterialModel(NFunction A_, double mu_, double zeta_, SigmaFunction sigma_, int dim_);

  static MaterialModel reference_2d() {
    return MaterialModel(NFunction::power(2.0), 1.0, 2.0, SigmaFunction::reference(), 2);
  }
};

// Phi(X); +inf when det X <= 0.
ExtReal phi_eval(const MaterialModel& m, const Mat& X);

// W(F, z) = Phi(N^{-1}(z) F); +inf when det F <= 0.
ExtReal elastic_density(const MaterialModel& m, const Mat& F, const UnitVector& z);

// L(X) = DPhi(X) X^T, assembled from the closed form
//   L = A'(|X|) X X^T / |X|
//     + zeta (|adj X|^zeta I - |adj X|^{zeta-2} (cof X)(adj X))
//     + sigma'(det X) det X I.
Mat l_tensor(const MaterialModel& m, const Mat& X);

// DPhi(X) = L(X) X^{-T}; det X > 0 required.
Mat phi_gradient(const MaterialModel& m, const Mat& X);

// First Piola-type stress d_F W(F, z) = N^{-1}(z) DPhi(N^{-1}(z) F).
Mat elastic_stress(const MaterialModel& m, const Mat& F, const UnitVector& z);

// Kirchhoff tensor K(F, z) = d_F W(F, z) F^T = N^{-1} L(N^{-1} F) N.
Mat kirchhoff(const MaterialModel& m, const Mat& F, const UnitVector& z);

// d_z W(F, z) along unconstrained z-perturbations:
//   (mu - mu^{-1/(N-1)}) (DPhi X^T-composite) z   with X = N^{-1}(z) F.
// Used by the director descent; vanishes identically at mu = 1.
Vec elastic_density_zgrad(const MaterialModel& m, const Mat& F, const UnitVector& z);

// c_W A(|F|) + (|adj F|/mu2)^zeta + sigma(det F); a rigorous lower bound
// for W(F, z). det F > 0 required.
double coercivity_minorant(const MaterialModel& m, const Mat& F, const UnitVector& z);

// |Dm (Dy)^{-1}|^2 det Dy; the nematic energy integrand pulled back to the
// reference configuration. det Dy > 0 required.
double nematic_integrand(const Mat& Dm, const Mat& Dy);

// Sampling box for material calibrations: |F| <= f_box with det F >= det_floor.
struct SampleBox {
  double f_box = 5.0;
  double det_floor = 0.1;
  int count = 10000;
};

Mat sample_f(CounterRng& rng, int dim, const SampleBox& box);
UnitVector sample_z(CounterRng& rng, int dim);

struct W6Calibration {
  double a_W;
  double b_W;  // fixed to 1
  SampleBox box;
  double max_ratio_at;  // |F| where the max was attained
};

// b_W = 1; a_W = max over samples of |K(F,z)| / (W(F,z) + 1).
W6Calibration calibrate_w6(const MaterialModel& m, const SampleBox& box, CounterRng& rng);

struct MultiplicativeReport {
  double delta;        // the |G - I| radius that passed
  int halvings;        // how many times delta was halved (max 3)
  int samples;
  int violations_g1;
  int violations_g2;
  int violations_g3;
  double worst_margin;  // most negative slack seen at the final delta
  bool passed;
};

// Checks the three multiplicative estimates at radius delta with the
// calibrated (a_W, b_W): for |G - I| <= delta and z on the sphere,
//   W(GF,z) + b_W          <= N/(N-1) (W(F,z) + b_W)
//   |d_F W(GF,z) F^T|      <= a_W N^2/(N-1) (W(F,z) + b_W)
//   |W(GF,z) - W(F,z)|     <= a_W N^2/(N-1) (W(F,z) + b_W) |G - I|.
// On violation delta is halved, at most three times.
MultiplicativeReport multiplicative_estimates_check(const MaterialModel& m, const SampleBox& box,
                                                    double delta, const W6Calibration& w6,
                                                    CounterRng& rng);

// Largest delta (by bisection) such that |K(GF,z) - K(F,z)| <= eps (W(F,z)+b_W)
// over the sample box, for each requested eps. Empirical table for the
// stress-continuity modulus.
std::vector<std::pair<double, double>> w7_delta_table(const MaterialModel& m, const SampleBox& box,
                                                      const std::vector<double>& eps_list,
                                                      CounterRng& rng);

}  // namespace nemato
