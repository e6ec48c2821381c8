#pragma once

#include <memory>
#include <vector>

namespace nemato {

// Quadrature-weighted carrier of a modular integral: values v_i >= 0 with
// positive weights w_i (units of area or length).
struct WeightedSampleSet {
  std::vector<double> values;
  std::vector<double> weights;

  WeightedSampleSet() = default;
  WeightedSampleSet(std::vector<double> v, std::vector<double> w);

  static WeightedSampleSet constant(double value, double measure, std::size_t count = 1);
  double measure() const;
};

enum class NFamily { Power, PowerLog, Tabulated, Conjugate };

// A Young/N-function: convex, A(0)=0, strictly increasing, sublinear at 0
// and superlinear at infinity. Families:
//   Power:    A(s) = coeff * s^p,            p > 1, coeff > 0
//   PowerLog: A(s) = s^p * log^q(e + s),     p >= 1, q >= 0
//   Tabulated: monotone piecewise-linear interpolation in log-log
//              coordinates, end segments extrapolated
//   Conjugate: the Legendre conjugate of a stored base function
//
// Growth descriptors kappa (Delta_2 constant) and p_growth (the exponent of
// Lemma lem-type bound s A'(s) <= p A(s)) are empirical suprema over a fixed
// log-spaced grid 1e-6..1e6 with 4096 points; they are near-infinity
// surrogates for the global constants and are computed once on construction.
//
// p = 1 log families approach A(s)/s -> 1 (not 0) at the origin; the
// standard fix is an equivalent modification of A in (0,1), which this
// implementation deliberately omits: families are globally defined and the
// small-argument limit is not enforced by the validator.
class NFunction {
 public:
  static NFunction power(double p, double coeff = 1.0);
  static NFunction power_log(double p, double q);
  static NFunction tabulated(std::vector<double> knots, std::vector<double> values);
  static NFunction conjugate_of(const NFunction& base);

  NFamily family() const { return family_; }
  double power_exponent() const { return p_; }
  double power_coeff() const { return coeff_; }
  double log_exponent() const { return q_; }

  // A(s); exactly 0 at s = 0. Throws std::domain_error for s < 0.
  double operator()(double s) const;
  // Left derivative A'_-(s), s > 0.
  double left_derivative(double s) const;
  // A^{-1}(t) for t >= 0 (A is strictly increasing).
  double inverse(double t) const;

  double kappa() const { return kappa_; }      // Delta_2 constant, >= 2
  double p_growth() const { return p_growth_; }  // > 1

 private:
  NFunction() = default;
  void finalize();  // validates invariants, computes kappa_/p_growth_

  NFamily family_ = NFamily::Power;
  double p_ = 2.0;
  double q_ = 0.0;
  double coeff_ = 1.0;
  std::vector<double> log_knots_;   // log s
  std::vector<double> log_values_;  // log A(s)
  std::shared_ptr<const NFunction> base_;  // Conjugate only
  double kappa_ = 2.0;
  double p_growth_ = 2.0;
};

// Fixed log-spaced growth grid 1e-6..1e6 (4096 points).
std::vector<double> default_growth_grid();

double nfun_eval(const NFunction& A, double s);
double nfun_left_derivative(const NFunction& A, double s);

// Conjugate function value sup{s*sigma - A(sigma) : sigma >= 0}. Closed form
// for Power; derivative inversion for PowerLog with p = 1 (the sup is
// attained where A'(sigma) = s); otherwise bracketed golden-section
// maximisation (the objective is concave).
double conjugate_eval(const NFunction& A, double s);

// max over grid of A(2s)/A(s); grid must be positive.
double delta2_constant(const NFunction& A, const std::vector<double>& grid);

// max over grid of s A'_-(s)/A(s); also verifies the derived bound
// A(c s) <= c^{p_A} A(s) on the grid for c in {1.5, 2, 10}.
double p_exponent(const NFunction& A, const std::vector<double>& grid);

// sum_i w_i A(v_i)
double modular(const NFunction& A, const WeightedSampleSet& v);

// Luxemburg norm: the s with modular(v/s) = 1, located by bisection after
// geometric bracket expansion (factor 4, at most 200 doublings each way).
// Returns 0 for v identically 0. The modular at the returned value is <= 1.
double luxemburg_norm(const NFunction& A, const WeightedSampleSet& v, double tol = 1e-10);

// The sphere-embedding function A_{N-1}: conjugate of
//   B_{N-1}(s) = conj(A)(s)                                  if N = 2
//   B_{N-1}(s) = s^2 int_s^inf conj(A)(sigma)/sigma^3 dsigma if N = 3.
// For N = 2 this returns A itself. For N = 3 the tail integral is computed
// by adaptive quadrature and B_2 is tabulated; a divergent tail (integrability
// condition violated) throws std::domain_error.
NFunction sphere_embedding_function(const NFunction& A, int N);

}  // namespace nemato
