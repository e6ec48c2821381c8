#pragma once

#include <array>
#include <cmath>
#include <vector>

namespace nemato {

// Small dense vector in dimension 2 or 3.
struct Vec {
  int n = 2;
  std::array<double, 3> v{0.0, 0.0, 0.0};

  Vec() = default;
  Vec(double x, double y) : n(2), v{x, y, 0.0} {}
  Vec(double x, double y, double z) : n(3), v{x, y, z} {}
  static Vec zero(int n_) {
    Vec r;
    r.n = n_;
    return r;
  }

  double& operator[](int i) { return v[static_cast<size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<size_t>(i)]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < n; ++i) v[i] += o.v[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < n; ++i) v[i] -= o.v[i];
    return *this;
  }
  Vec& operator*=(double c) {
    for (int i = 0; i < n; ++i) v[i] *= c;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(double c, Vec a) { return a *= c; }

  double dot(const Vec& o) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += v[i] * o.v[i];
    return s;
  }
  double norm() const { return std::sqrt(dot(*this)); }
};

// Square matrix of order 2 or 3, row-major.
struct Mat {
  int n = 2;
  std::array<double, 9> a{};

  Mat() = default;
  explicit Mat(int n_) : n(n_) { a.fill(0.0); }
  Mat(double a11, double a12, double a21, double a22) : n(2) {
    a.fill(0.0);
    a[0] = a11;
    a[1] = a12;
    a[3] = a21;
    a[4] = a22;
  }

  static Mat identity(int n_) {
    Mat m(n_);
    for (int i = 0; i < n_; ++i) m(i, i) = 1.0;
    return m;
  }
  static Mat zero(int n_) { return Mat(n_); }

  double& operator()(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(3 * i + j)]; }

  Mat& operator+=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) += o(i, j);
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) -= o(i, j);
    return *this;
  }
  Mat& operator*=(double c) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*this)(i, j) *= c;
    return *this;
  }
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(double c, Mat x) { return x *= c; }

  friend Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < x.n; ++j) {
        double s = 0.0;
        for (int k = 0; k < x.n; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
    return r;
  }
  friend Vec operator*(const Mat& x, const Vec& u) {
    Vec r = Vec::zero(x.n);
    for (int i = 0; i < x.n; ++i) {
      double s = 0.0;
      for (int j = 0; j < x.n; ++j) s += x(i, j) * u[j];
      r[i] = s;
    }
    return r;
  }

  Mat transposed() const {
    Mat r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = (*this)(j, i);
    return r;
  }
  double trace() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += (*this)(i, i);
    return s;
  }
  // Frobenius inner product X : Y.
  double ddot(const Mat& o) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += (*this)(i, j) * o(i, j);
    return s;
  }
  // Frobenius norm |X|; this is the matrix norm used throughout.
  double norm() const { return std::sqrt(ddot(*this)); }

  double max_abs() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m = std::max(m, std::abs((*this)(i, j)));
    return m;
  }
};

// a (x) b
Mat outer(const Vec& a, const Vec& b);

double determinant(const Mat& f);
// adj F with F adj(F) = (det F) I; no inverse needed, works for singular F.
Mat adjugate(const Mat& f);
// cof F = (adj F)^T
Mat cofactor(const Mat& f);
// Throws std::domain_error on det F = 0.
Mat inverse(const Mat& f);

// All minors of F in a fixed order: n=2 -> (4 entries, det);
// n=3 -> (9 entries, 9 cofactor entries, det).
std::vector<double> minors_vector(const Mat& f);

// Unit vector on the sphere S^{n-1}; norm checked to 1e-12 on construction.
struct UnitVector {
  Vec z;

  explicit UnitVector(const Vec& v);
  static UnitVector axis(int n, int k);
  // Normalises v; throws if |v| is below tol.
  static UnitVector normalized(const Vec& v, double tol = 1e-14);

  int dim() const { return z.n; }
  double operator[](int i) const { return z[i]; }
};

struct DirectorTensor {
  Mat N;      // N(z)   = mu^{-1} z(x)z + mu^{1/(n-1)} (I - z(x)z)
  Mat N_inv;  // N^{-1}(z) = mu z(x)z + mu^{-1/(n-1)} (I - z(x)z)
};

// det N(z) = 1, |N(z)| = mu1, |N^{-1}(z)| = mu2. Throws on mu <= 0.
DirectorTensor director_tensor(const UnitVector& z, double mu);
double director_mu1(double mu, int n);  // sqrt(mu^-2 + mu^{2/(n-1)})
double director_mu2(double mu, int n);  // sqrt(mu^2 + mu^{-2/(n-1)})

// Directional derivatives of adj, cof, inv, det at A (det A > 0 required)
// in direction B:
//   d(adj)(A)B = ((cof A):B) A^{-1} - (adj A) B A^{-1}
//   d(cof)(A)B = ((cof A):B) A^{-T} - (cof A) B^T A^{-T}
//   d(inv)(A)B = -A^{-1} B A^{-1}
//   d(det)(A)B = cof A : B
Mat d_adj(const Mat& A, const Mat& B);
Mat d_cof(const Mat& A, const Mat& B);
Mat d_inv(const Mat& A, const Mat& B);
double d_det(const Mat& A, const Mat& B);

}  // namespace nemato
