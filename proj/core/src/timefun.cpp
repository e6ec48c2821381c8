#include "nemato/timefun.hpp"

#include <cmath>
#include <stdexcept>

namespace nemato {

PiecewisePoly::PiecewisePoly(std::vector<double> knots, std::vector<Polynomial> pieces)
    : knots_(std::move(knots)), pieces_(std::move(pieces)) {
  if (pieces_.size() != knots_.size() + 1)
    throw std::invalid_argument("PiecewisePoly: need one more piece than knots");
  for (size_t i = 1; i < knots_.size(); ++i)
    if (!(knots_[i] > knots_[i - 1]))
      throw std::invalid_argument("PiecewisePoly: knots must increase");
  for (size_t i = 0; i < knots_.size(); ++i) {
    const double l = pieces_[i](knots_[i]), r = pieces_[i + 1](knots_[i]);
    if (std::abs(l - r) > 1e-12 * (1.0 + std::abs(l)))
      throw std::invalid_argument("PiecewisePoly: discontinuous at a knot");
  }
}

size_t PiecewisePoly::piece_index(double t, Side side) const {
  size_t i = 0;
  for (; i < knots_.size(); ++i) {
    if (t < knots_[i]) break;
    if (t == knots_[i] && side == Side::Left) break;
  }
  return i;
}

double PiecewisePoly::operator()(double t) const { return pieces_[piece_index(t, Side::Right)](t); }

double PiecewisePoly::derivative(double t, Side side) const {
  return pieces_[piece_index(t, side)].derivative()(t);
}

bool PiecewisePoly::is_knot(double t, double tol) const {
  for (double k : knots_)
    if (std::abs(t - k) <= tol) return true;
  return false;
}

bool PiecewisePoly::is_constant() const {
  if (!pieces_[0].is_constant()) return false;
  const double c = pieces_[0].coeffs[0];
  for (const auto& p : pieces_) {
    if (!p.is_constant() || p.coeffs[0] != c) return false;
  }
  return true;
}

}  // namespace nemato
