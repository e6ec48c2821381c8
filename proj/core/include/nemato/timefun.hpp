#pragma once

#include <vector>

namespace nemato {

// Polynomial c0 + c1 t + c2 t^2 + ...
struct Polynomial {
  std::vector<double> coeffs;

  Polynomial() : coeffs{0.0} {}
  explicit Polynomial(std::vector<double> c) : coeffs(std::move(c)) {
    if (coeffs.empty()) coeffs.push_back(0.0);
  }
  static Polynomial constant(double c) { return Polynomial({c}); }

  double operator()(double t) const {
    double v = 0.0;
    for (size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
    return v;
  }
  Polynomial derivative() const {
    if (coeffs.size() <= 1) return Polynomial();
    std::vector<double> d(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
  }
  bool is_constant() const {
    for (size_t i = 1; i < coeffs.size(); ++i)
      if (coeffs[i] != 0.0) return false;
    return true;
  }
};

enum class Side { Left, Right };

// Piecewise polynomial in t; interior breakpoints form the explicit
// non-differentiability set P. Continuity at breakpoints is required.
class PiecewisePoly {
 public:
  PiecewisePoly() : pieces_{Polynomial()} {}
  /*implicit*/ PiecewisePoly(Polynomial p) : pieces_{std::move(p)} {}
  PiecewisePoly(std::vector<double> knots, std::vector<Polynomial> pieces);

  static PiecewisePoly constant(double c) { return PiecewisePoly(Polynomial::constant(c)); }

  double operator()(double t) const;
  // One-sided derivative; the two agree away from knots.
  double derivative(double t, Side side = Side::Right) const;
  bool is_knot(double t, double tol = 0.0) const;
  const std::vector<double>& knots() const { return knots_; }
  bool is_constant() const;

 private:
  size_t piece_index(double t, Side side) const;
  std::vector<double> knots_;
  std::vector<Polynomial> pieces_;
};

}  // namespace nemato
