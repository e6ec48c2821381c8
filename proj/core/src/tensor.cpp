#include "nemato/tensor.hpp"

#include <stdexcept>

namespace nemato {

Mat outer(const Vec& a, const Vec& b) {
  Mat r(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) r(i, j) = a[i] * b[j];
  return r;
}

double determinant(const Mat& f) {
  if (f.n == 2) return f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
  return f(0, 0) * (f(1, 1) * f(2, 2) - f(1, 2) * f(2, 1)) -
         f(0, 1) * (f(1, 0) * f(2, 2) - f(1, 2) * f(2, 0)) +
         f(0, 2) * (f(1, 0) * f(2, 1) - f(1, 1) * f(2, 0));
}

Mat adjugate(const Mat& f) {
  Mat r(f.n);
  if (f.n == 2) {
    r(0, 0) = f(1, 1);
    r(0, 1) = -f(0, 1);
    r(1, 0) = -f(1, 0);
    r(1, 1) = f(0, 0);
    return r;
  }
  // adj = cof^T; cof_ij = (-1)^{i+j} minor_ij
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
      const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      // cyclic indices absorb the sign
      r(j, i) = f(i1, j1) * f(i2, j2) - f(i1, j2) * f(i2, j1);
    }
  return r;
}

Mat cofactor(const Mat& f) { return adjugate(f).transposed(); }

Mat inverse(const Mat& f) {
  const double det = determinant(f);
  if (det == 0.0) throw std::domain_error("inverse: singular matrix");
  return (1.0 / det) * adjugate(f);
}

std::vector<double> minors_vector(const Mat& f) {
  std::vector<double> m;
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) m.push_back(f(i, j));
  if (f.n == 3) {
    const Mat c = cofactor(f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.push_back(c(i, j));
  }
  m.push_back(determinant(f));
  return m;
}

UnitVector::UnitVector(const Vec& v) : z(v) {
  if (std::abs(v.norm() - 1.0) > 1e-12)
    throw std::domain_error("UnitVector: |z| != 1");
}

UnitVector UnitVector::axis(int n, int k) {
  Vec v = Vec::zero(n);
  v[k] = 1.0;
  return UnitVector(v);
}

UnitVector UnitVector::normalized(const Vec& v, double tol) {
  const double r = v.norm();
  if (r < tol) throw std::domain_error("UnitVector: cannot normalise near-zero vector");
  return UnitVector((1.0 / r) * v);
}

double director_mu1(double mu, int n) {
  return std::sqrt(std::pow(mu, -2.0) + std::pow(mu, 2.0 / (n - 1)));
}

double director_mu2(double mu, int n) {
  return std::sqrt(std::pow(mu, 2.0) + std::pow(mu, -2.0 / (n - 1)));
}

DirectorTensor director_tensor(const UnitVector& z, double mu) {
  if (mu <= 0.0) throw std::domain_error("director_tensor: mu must be positive");
  const int n = z.dim();
  const Mat zz = outer(z.z, z.z);
  const Mat perp = Mat::identity(n) - zz;
  DirectorTensor d;
  d.N = (1.0 / mu) * zz + std::pow(mu, 1.0 / (n - 1)) * perp;
  d.N_inv = mu * zz + std::pow(mu, -1.0 / (n - 1)) * perp;
  return d;
}

namespace {
void require_positive_det(const Mat& A, const char* who) {
  if (determinant(A) <= 0.0)
    throw std::domain_error(std::string(who) + ": det A <= 0");
}
}  // namespace

Mat d_adj(const Mat& A, const Mat& B) {
  require_positive_det(A, "d_adj");
  const Mat Ainv = inverse(A);
  return cofactor(A).ddot(B) * Ainv - adjugate(A) * B * Ainv;
}

Mat d_cof(const Mat& A, const Mat& B) {
  require_positive_det(A, "d_cof");
  const Mat AinvT = inverse(A).transposed();
  return cofactor(A).ddot(B) * AinvT - cofactor(A) * B.transposed() * AinvT;
}

Mat d_inv(const Mat& A, const Mat& B) {
  require_positive_det(A, "d_inv");
  const Mat Ainv = inverse(A);
  return -1.0 * (Ainv * B * Ainv);
}

double d_det(const Mat& A, const Mat& B) {
  require_positive_det(A, "d_det");
  return cofactor(A).ddot(B);
}

}  // namespace nemato
