#pragma once

#include <cmath>
#include <stdexcept>

namespace nemato {

// Extended real in (-inf, +inf]. Infinite values are tagged instead of
// leaking IEEE inf into quadrature sums: a single infinite element makes
// the whole integral infinite by contract.
class ExtReal {
 public:
  constexpr ExtReal() : value_(0.0), finite_(true) {}
  constexpr ExtReal(double v) : value_(v), finite_(true) {}

  static constexpr ExtReal infinity() {
    ExtReal r;
    r.finite_ = false;
    return r;
  }

  constexpr bool finite() const { return finite_; }
  double value() const {
    if (!finite_) throw std::domain_error("ExtReal: value() on infinite");
    return value_;
  }
  double value_or(double fallback) const { return finite_ ? value_ : fallback; }

  ExtReal& operator+=(const ExtReal& o) {
    if (!o.finite_) finite_ = false;
    if (finite_) value_ += o.value_;
    return *this;
  }
  friend ExtReal operator+(ExtReal a, const ExtReal& b) { return a += b; }
  friend ExtReal operator-(ExtReal a, double b) {
    if (a.finite_) a.value_ -= b;
    return a;
  }
  friend ExtReal operator*(double c, ExtReal a) {
    if (a.finite_) a.value_ *= c;
    return a;  // c expected > 0; scaling an infinite value keeps it infinite
  }

  friend bool operator<(const ExtReal& a, const ExtReal& b) {
    if (!a.finite_) return false;
    if (!b.finite_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtReal& a, const ExtReal& b) { return !(b < a); }

 private:
  double value_;
  bool finite_;
};

}  // namespace nemato
