#include "nemato/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nemato {

namespace {
constexpr double kE = 2.718281828459045235360287;
constexpr int kGridPoints = 4096;
constexpr double kGridLo = 1e-6;
constexpr double kGridHi = 1e6;
}  // namespace

WeightedSampleSet::WeightedSampleSet(std::vector<double> v, std::vector<double> w)
    : values(std::move(v)), weights(std::move(w)) {
  if (values.size() != weights.size())
    throw std::invalid_argument("WeightedSampleSet: length mismatch");
  for (double x : values)
    if (!(x >= 0.0)) throw std::invalid_argument("WeightedSampleSet: negative value");
  for (double x : weights)
    if (!(x > 0.0)) throw std::invalid_argument("WeightedSampleSet: non-positive weight");
}

WeightedSampleSet WeightedSampleSet::constant(double value, double measure, std::size_t count) {
  std::vector<double> v(count, value), w(count, measure / static_cast<double>(count));
  return WeightedSampleSet(std::move(v), std::move(w));
}

double WeightedSampleSet::measure() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> default_growth_grid() {
  std::vector<double> g(kGridPoints);
  const double la = std::log(kGridLo), lb = std::log(kGridHi);
  for (int i = 0; i < kGridPoints; ++i)
    g[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (kGridPoints - 1));
  return g;
}

// ---------------------------------------------------------------- NFunction

NFunction NFunction::power(double p, double coeff) {
  if (!(p > 1.0)) throw std::invalid_argument("NFunction::power: p must be > 1");
  if (!(coeff > 0.0)) throw std::invalid_argument("NFunction::power: coeff must be > 0");
  NFunction f;
  f.family_ = NFamily::Power;
  f.p_ = p;
  f.coeff_ = coeff;
  f.finalize();
  return f;
}

NFunction NFunction::power_log(double p, double q) {
  if (!(p >= 1.0)) throw std::invalid_argument("NFunction::power_log: p must be >= 1");
  if (!(q >= 0.0)) throw std::invalid_argument("NFunction::power_log: q must be >= 0");
  if (p == 1.0 && q == 0.0)
    throw std::invalid_argument("NFunction::power_log: p = 1, q = 0 is linear");
  NFunction f;
  f.family_ = NFamily::PowerLog;
  f.p_ = p;
  f.q_ = q;
  f.finalize();
  return f;
}

NFunction NFunction::tabulated(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2)
    throw std::invalid_argument("NFunction::tabulated: need >= 2 matching knots");
  NFunction f;
  f.family_ = NFamily::Tabulated;
  f.log_knots_.reserve(knots.size());
  f.log_values_.reserve(values.size());
  for (size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0) || !(values[i] > 0.0))
      throw std::invalid_argument("NFunction::tabulated: knots and values must be positive");
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw std::invalid_argument("NFunction::tabulated: knots must increase");
    f.log_knots_.push_back(std::log(knots[i]));
    f.log_values_.push_back(std::log(values[i]));
  }
  f.finalize();
  return f;
}

NFunction NFunction::conjugate_of(const NFunction& base) {
  switch (base.family_) {
    case NFamily::Power: {
      // conj(c s^p) = c' s^{p'} with p' = p/(p-1).
      const double p = base.p_, c = base.coeff_;
      const double pc = p / (p - 1.0);
      const double cc = (p - 1.0) / p * std::pow(c * p, -1.0 / (p - 1.0));
      return power(pc, cc);
    }
    case NFamily::Conjugate:
      return *base.base_;  // conj(conj(A)) = A
    default: {
      NFunction f;
      f.family_ = NFamily::Conjugate;
      f.base_ = std::make_shared<NFunction>(base);
      f.finalize();
      return f;
    }
  }
}

double NFunction::operator()(double s) const {
  if (s < 0.0) throw std::domain_error("NFunction: negative argument");
  if (s == 0.0) return 0.0;
  switch (family_) {
    case NFamily::Power:
      return coeff_ * std::pow(s, p_);
    case NFamily::PowerLog:
      return std::pow(s, p_) * std::pow(std::log(kE + s), q_);
    case NFamily::Tabulated: {
      const double ls = std::log(s);
      const auto& k = log_knots_;
      size_t i;
      if (ls <= k.front())
        i = 0;
      else if (ls >= k.back())
        i = k.size() - 2;
      else
        i = static_cast<size_t>(std::upper_bound(k.begin(), k.end(), ls) - k.begin()) - 1;
      const double slope = (log_values_[i + 1] - log_values_[i]) / (k[i + 1] - k[i]);
      return std::exp(log_values_[i] + slope * (ls - k[i]));
    }
    case NFamily::Conjugate:
      return conjugate_eval(*base_, s);
  }
  return 0.0;
}

double NFunction::left_derivative(double s) const {
  if (!(s > 0.0)) throw std::domain_error("NFunction: left derivative needs s > 0");
  switch (family_) {
    case NFamily::Power:
      return coeff_ * p_ * std::pow(s, p_ - 1.0);
    case NFamily::PowerLog: {
      const double l = std::log(kE + s);
      double d = p_ * std::pow(s, p_ - 1.0) * std::pow(l, q_);
      if (q_ > 0.0) d += std::pow(s, p_) * q_ * std::pow(l, q_ - 1.0) / (kE + s);
      return d;
    }
    case NFamily::Tabulated: {
      // derivative of the log-log segment, approached from the left
      const double ls = std::log(s);
      const auto& k = log_knots_;
      size_t i;
      if (ls <= k.front())
        i = 0;
      else if (ls > k.back())
        i = k.size() - 2;
      else {
        i = static_cast<size_t>(std::lower_bound(k.begin(), k.end(), ls) - k.begin());
        i = (i == 0) ? 0 : i - 1;
      }
      const double slope = (log_values_[i + 1] - log_values_[i]) / (k[i + 1] - k[i]);
      const double val = std::exp(log_values_[i] + slope * (ls - k[i]));
      return val * slope / s;
    }
    case NFamily::Conjugate: {
      // Legendre: the derivative of conj(A) at s is the maximiser sigma*.
      // Locate it as the root of A'(sigma) = s.
      const NFunction& A = *base_;
      double lo = 0.0, hi = 1.0;
      int guard = 0;
      while (A.left_derivative(hi) < s) {
        lo = hi;
        hi *= 4.0;
        if (++guard > 200)
          throw std::runtime_error("NFunction: conjugate derivative bracket failed");
      }
      for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (A.left_derivative(mid) < s ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double NFunction::inverse(double t) const {
  if (t < 0.0) throw std::domain_error("NFunction: inverse of negative value");
  if (t == 0.0) return 0.0;
  if (family_ == NFamily::Power) return std::pow(t / coeff_, 1.0 / p_);
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while ((*this)(hi) < t) {
    lo = hi;
    hi *= 4.0;
    if (++guard > 200) throw std::runtime_error("NFunction: inverse bracket failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((*this)(mid) < t ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void NFunction::finalize() {
  // Invariants checked on a coarse log grid: positivity, strict increase,
  // midpoint convexity, and divergence of A(s)/s towards infinity.
  // Conjugates of p = 1 log families vanish identically below A'(0+);
  // strict increase is required only past that flat region.
  const int n = 129;
  std::vector<double> g(n);
  const double la = std::log(kGridLo), lb = std::log(kGridHi);
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = std::exp(la + (lb - la) * i / (n - 1));

  double prev = 0.0;
  bool seen_positive = false;
  for (int i = 0; i < n; ++i) {
    const double s = g[static_cast<size_t>(i)];
    const double v = (*this)(s);
    if (!std::isfinite(v) || v < 0.0)
      throw std::domain_error("NFunction: invalid value on the check grid");
    if (v > 0.0) seen_positive = true;
    if (seen_positive && !(v > prev) && family_ != NFamily::Conjugate)
      throw std::domain_error("NFunction: not strictly increasing on the check grid");
    if (seen_positive && v < prev)
      throw std::domain_error("NFunction: decreasing on the check grid");
    prev = v;
  }
  if (!seen_positive) throw std::domain_error("NFunction: identically zero on check grid");
  for (int i = 0; i + 2 < n; i += 2) {
    const double s1 = g[static_cast<size_t>(i)], s2 = g[static_cast<size_t>(i + 2)];
    const double mid = (*this)(0.5 * (s1 + s2));
    const double chord = 0.5 * ((*this)(s1) + (*this)(s2));
    if (mid > chord * (1.0 + 1e-9))
      throw std::domain_error("NFunction: midpoint convexity violated");
  }
  const double r1 = (*this)(1.0) / 1.0;
  const double rhi = (*this)(kGridHi) / kGridHi;
  if (!(rhi > r1 * (1.0 + 1e-9)) || !(rhi > 0.0))
    throw std::domain_error("NFunction: A(s)/s fails to grow towards infinity");

  const auto grid = default_growth_grid();
  kappa_ = delta2_constant(*this, grid);
  p_growth_ = p_exponent(*this, grid);
}

double nfun_eval(const NFunction& A, double s) { return A(s); }
double nfun_left_derivative(const NFunction& A, double s) { return A.left_derivative(s); }

// ------------------------------------------------------------ conjugation

namespace {

// golden-section maximisation of the concave map sigma -> s*sigma - A(sigma)
double conjugate_by_maximisation(const NFunction& A, double s) {
  auto g = [&](double sigma) { return s * sigma - A(sigma); };
  // expand until the objective decreases past the maximiser
  double hi = 1.0;
  int guard = 0;
  while (A.left_derivative(hi) <= s) {
    hi *= 4.0;
    if (++guard > 200)
      throw std::runtime_error("conjugate_eval: bracket expansion exceeded cap");
  }
  constexpr double kInvPhi = 0.6180339887498948482;
  double a = 0.0, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 180 && b - a > 1e-14 * (1.0 + b); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    }
  }
  return std::max(0.0, g(0.5 * (a + b)));
}

// p = 1 families: invert A'(sigma) = s, the maximiser of the sup.
double conjugate_by_derivative_inversion(const NFunction& A, double s) {
  if (s <= A.left_derivative(1e-300)) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (A.left_derivative(hi) < s) {
    lo = hi;
    hi *= 4.0;
    if (++guard > 200)
      throw std::runtime_error("conjugate_eval: bracket expansion exceeded cap");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (A.left_derivative(mid) < s ? lo : hi) = mid;
  }
  const double sigma = 0.5 * (lo + hi);
  return std::max(0.0, s * sigma - A(sigma));
}

}  // namespace

double conjugate_eval(const NFunction& A, double s) {
  if (s < 0.0) throw std::domain_error("conjugate_eval: negative argument");
  if (s == 0.0) return 0.0;
  switch (A.family()) {
    case NFamily::Power: {
      const double p = A.power_exponent(), c = A.power_coeff();
      const double sigma = std::pow(s / (c * p), 1.0 / (p - 1.0));
      return s * sigma - c * std::pow(sigma, p);
    }
    case NFamily::PowerLog:
      if (A.power_exponent() == 1.0) return conjugate_by_derivative_inversion(A, s);
      return conjugate_by_maximisation(A, s);
    default:
      return conjugate_by_maximisation(A, s);
  }
}

// ------------------------------------------------------- growth constants

double delta2_constant(const NFunction& A, const std::vector<double>& grid) {
  if (grid.empty()) throw std::domain_error("delta2_constant: empty grid");
  double kappa = 0.0;
  for (double s : grid) {
    if (!(s > 0.0)) throw std::domain_error("delta2_constant: grid must be positive");
    const double a = A(s);
    if (a == 0.0) continue;  // flat zero region of a conjugate view
    kappa = std::max(kappa, A(2.0 * s) / a);
  }
  if (kappa == 0.0) throw std::domain_error("delta2_constant: no usable grid points");
  return kappa;
}

double p_exponent(const NFunction& A, const std::vector<double>& grid) {
  if (grid.empty()) throw std::domain_error("p_exponent: empty grid");
  double p = 0.0;
  for (double s : grid) {
    if (!(s > 0.0)) throw std::domain_error("p_exponent: grid must be positive");
    const double a = A(s);
    if (a == 0.0) continue;
    const double r = s * A.left_derivative(s) / a;
    if (!std::isfinite(r)) throw std::runtime_error("p_exponent: non-finite ratio");
    p = std::max(p, r);
  }
  const double hi = grid.back();
  for (double c : {1.5, 2.0, 10.0}) {
    for (double s : grid) {
      if (c * s > hi) break;
      const double a = A(s);
      if (a == 0.0) continue;
      if (A(c * s) > std::pow(c, p) * a * (1.0 + 1e-9))
        throw std::runtime_error("p_exponent: growth bound A(cs) <= c^p A(s) violated");
    }
  }
  return p;
}

double modular(const NFunction& A, const WeightedSampleSet& v) {
  double s = 0.0;
  for (size_t i = 0; i < v.values.size(); ++i) s += v.weights[i] * A(v.values[i]);
  return s;
}

double luxemburg_norm(const NFunction& A, const WeightedSampleSet& v, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol must be positive");
  bool all_zero = true;
  for (double x : v.values)
    if (x > 0.0) {
      all_zero = false;
      break;
    }
  if (all_zero) return 0.0;

  auto mod_at = [&](double s) {
    double m = 0.0;
    for (size_t i = 0; i < v.values.size(); ++i) m += v.weights[i] * A(v.values[i] / s);
    return m;
  };

  double lo = 1.0, hi = 1.0;
  int guard = 0;
  while (mod_at(hi) > 1.0) {
    hi *= 4.0;
    if (++guard > 200) throw std::runtime_error("luxemburg_norm: bracket cap exceeded");
  }
  guard = 0;
  while (mod_at(lo) < 1.0) {
    lo /= 4.0;
    if (++guard > 200) return hi;  // modular < 1 for every scale: norm below bracket floor
  }
  // invariant: mod_at(lo) >= 1 >= mod_at(hi)
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double m = mod_at(mid);
    if (std::abs(m - 1.0) <= tol && hi - lo <= 1e-12 * hi) return mid;
    (m > 1.0 ? lo : hi) = mid;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return hi;  // modular(v/hi) <= 1 by construction
}

// ------------------------------------------------- sphere embedding A_{N-1}

NFunction sphere_embedding_function(const NFunction& A, int N) {
  if (N != 2 && N != 3)
    throw std::invalid_argument("sphere_embedding_function: N must be 2 or 3");
  if (N == 2) return A;  // B_1 = conj(A), and conjugating back gives A

  const NFunction Abar = NFunction::conjugate_of(A);

  // tail integral int_s^inf conj(A)(sigma)/sigma^3 dsigma via sigma = s e^tau,
  // Simpson panels on tau-windows of width 1 until the contribution decays
  auto tail = [&](double s) {
    auto f = [&](double tau) {
      const double sigma = s * std::exp(tau);
      return Abar(sigma) / (sigma * sigma * sigma) * sigma;  // d sigma = sigma d tau
    };
    double total = 0.0;
    double window_start = 0.0;
    double prev_window = -1.0;
    int stalled = 0;
    for (int w = 0; w < 400; ++w) {
      const int m = 16;  // Simpson sub-panels per unit window
      double acc = 0.0;
      const double h = 1.0 / m;
      for (int i = 0; i < m; ++i) {
        const double a = window_start + i * h;
        acc += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
      }
      total += acc;
      // a window contribution that refuses to decay signals a divergent tail
      stalled = (prev_window >= 0.0 && acc >= 0.98 * prev_window) ? stalled + 1 : 0;
      if (stalled >= 3)
        throw std::domain_error(
            "sphere_embedding_function: divergent tail integral (integrability condition violated)");
      if (acc < 1e-14 * total && w > 2) return total;
      prev_window = acc;
      window_start += 1.0;
    }
    return total;
  };

  const int knots_n = 161;
  std::vector<double> knots(knots_n), values(knots_n);
  const double la = std::log(1e-4), lb = std::log(1e4);
  for (int i = 0; i < knots_n; ++i) {
    const double s = std::exp(la + (lb - la) * i / (knots_n - 1));
    knots[static_cast<size_t>(i)] = s;
    values[static_cast<size_t>(i)] = s * s * tail(s);  // B_2(s)
  }
  const NFunction B2 = NFunction::tabulated(std::move(knots), std::move(values));
  return NFunction::conjugate_of(B2);
}

}  // namespace nemato
