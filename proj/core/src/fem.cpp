#include "nemato/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>

namespace nemato {

namespace {
double triangle_area(const Vec& a, const Vec& b, const Vec& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}
}  // namespace

Mesh::Mesh(std::vector<Vec> nodes, std::vector<std::array<int, 3>> elements,
           std::vector<BoundaryEdge> boundary)
    : nodes_(std::move(nodes)), elements_(std::move(elements)), boundary_(std::move(boundary)) {
  areas_.reserve(elements_.size());
  shape_grads_.reserve(elements_.size());
  for (const auto& el : elements_) {
    const Vec &a = nodes_[static_cast<size_t>(el[0])], &b = nodes_[static_cast<size_t>(el[1])],
              &c = nodes_[static_cast<size_t>(el[2])];
    const double area = triangle_area(a, b, c);
    if (!(area > 0.0)) throw std::invalid_argument("Mesh: non-positive element area");
    areas_.push_back(area);
    // P1 shape gradients: grad phi_i = rot90(opposite edge) / (2 area)
    std::array<Vec, 3> g;
    const Vec* v[3] = {&a, &b, &c};
    for (int i = 0; i < 3; ++i) {
      const Vec& p = *v[(i + 1) % 3];
      const Vec& q = *v[(i + 2) % 3];
      g[static_cast<size_t>(i)] = Vec((p[1] - q[1]) / (2.0 * area), (q[0] - p[0]) / (2.0 * area));
    }
    shape_grads_.push_back(g);
  }
  // conformity: every interior edge shared by exactly two elements
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& el : elements_)
    for (int i = 0; i < 3; ++i) {
      const int u = el[static_cast<size_t>(i)], w = el[static_cast<size_t>((i + 1) % 3)];
      ++edge_count[{std::min(u, w), std::max(u, w)}];
    }
  for (const auto& [e, c] : edge_count)
    if (c > 2) throw std::invalid_argument("Mesh: non-conforming edge");

  std::set<int> lam, sig, fre;
  for (auto& be : boundary_) {
    const Vec &a = nodes_[static_cast<size_t>(be.a)], &b = nodes_[static_cast<size_t>(be.b)];
    be.length = (b - a).norm();
    auto& bucket = be.label == BoundaryLabel::Lambda ? lam
                   : be.label == BoundaryLabel::Sigma ? sig
                                                      : fre;
    bucket.insert(be.a);
    bucket.insert(be.b);
  }
  if (lam.empty()) throw std::invalid_argument("Mesh: Dirichlet part Lambda is empty");
  lambda_nodes_.assign(lam.begin(), lam.end());
  sigma_nodes_.assign(sig.begin(), sig.end());
  free_nodes_.assign(fre.begin(), fre.end());
}

Mesh Mesh::unit_square(int n, const std::vector<std::string>& lambda_sides,
                       const std::vector<std::string>& sigma_sides) {
  if (n < 2) throw std::invalid_argument("Mesh::unit_square: n must be >= 2");
  auto label_of = [&](const char* side) {
    for (const auto& s : lambda_sides)
      if (s == side) return BoundaryLabel::Lambda;
    for (const auto& s : sigma_sides)
      if (s == side) return BoundaryLabel::Sigma;
    return BoundaryLabel::Free;
  };
  for (const auto& s : lambda_sides)
    if (s != "left" && s != "right" && s != "bottom" && s != "top")
      throw std::invalid_argument("Mesh::unit_square: unknown side '" + s + "'");
  for (const auto& s : sigma_sides)
    if (s != "left" && s != "right" && s != "bottom" && s != "top")
      throw std::invalid_argument("Mesh::unit_square: unknown side '" + s + "'");

  std::vector<Vec> nodes;
  nodes.reserve(static_cast<size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };

  std::vector<std::array<int, 3>> elements;
  elements.reserve(static_cast<size_t>(2 * n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      elements.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }

  std::vector<BoundaryEdge> boundary;  // CCW
  for (int i = 0; i < n; ++i)
    boundary.push_back({id(i, 0), id(i + 1, 0), label_of("bottom"), 0.0});
  for (int j = 0; j < n; ++j)
    boundary.push_back({id(n, j), id(n, j + 1), label_of("right"), 0.0});
  for (int i = n; i > 0; --i)
    boundary.push_back({id(i, n), id(i - 1, n), label_of("top"), 0.0});
  for (int j = n; j > 0; --j)
    boundary.push_back({id(0, j), id(0, j - 1), label_of("left"), 0.0});
  return Mesh(std::move(nodes), std::move(elements), std::move(boundary));
}

double Mesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

Vec Mesh::centroid(int e) const { return barycentric_point(e, 1.0 / 3, 1.0 / 3, 1.0 / 3); }

Vec Mesh::barycentric_point(int e, double b0, double b1, double b2) const {
  const auto& el = elements_[static_cast<size_t>(e)];
  return b0 * nodes_[static_cast<size_t>(el[0])] + b1 * nodes_[static_cast<size_t>(el[1])] +
         b2 * nodes_[static_cast<size_t>(el[2])];
}

double Mesh::boundary_measure(BoundaryLabel label) const {
  double s = 0.0;
  for (const auto& be : boundary_)
    if (be.label == label) s += be.length;
  return s;
}

const std::vector<int>& Mesh::label_nodes(BoundaryLabel label) const {
  switch (label) {
    case BoundaryLabel::Lambda:
      return lambda_nodes_;
    case BoundaryLabel::Sigma:
      return sigma_nodes_;
    default:
      return free_nodes_;
  }
}

std::vector<int> Mesh::boundary_loop() const {
  std::map<int, int> next;
  for (const auto& be : boundary_) next[be.a] = be.b;
  if (next.empty()) return {};
  std::vector<int> loop;
  const int start = next.begin()->first;
  int cur = start;
  do {
    loop.push_back(cur);
    auto it = next.find(cur);
    if (it == next.end()) throw std::runtime_error("Mesh: boundary is not a closed loop");
    cur = it->second;
  } while (cur != start && loop.size() <= next.size());
  return loop;
}

// --------------------------------------------------------------- fields

DeformationField::DeformationField(const Mesh& mesh, std::vector<Vec> positions)
    : mesh_(&mesh), positions_(std::move(positions)) {
  if (positions_.size() != static_cast<size_t>(mesh.num_nodes()))
    throw std::invalid_argument("DeformationField: wrong number of nodal positions");
  validate();
}

DeformationField DeformationField::identity(const Mesh& mesh) {
  std::vector<Vec> pos;
  pos.reserve(static_cast<size_t>(mesh.num_nodes()));
  for (int i = 0; i < mesh.num_nodes(); ++i) pos.push_back(mesh.node(i));
  return DeformationField(mesh, std::move(pos));
}

DeformationField DeformationField::unchecked(const Mesh& mesh, std::vector<Vec> positions) {
  DeformationField f = identity(mesh);
  f.positions_ = std::move(positions);
  return f;
}

Mat DeformationField::gradient(int e) const { return element_gradient(*mesh_, positions_, e); }

double DeformationField::min_det() const {
  double d = 1e300;
  for (int e = 0; e < mesh_->num_elements(); ++e) d = std::min(d, determinant(gradient(e)));
  return d;
}

void DeformationField::validate() const {
  if (!(min_det() > 0.0))
    throw std::domain_error("DeformationField: element with det Dy <= 0");
}

DirectorField::DirectorField(const Mesh& mesh, std::vector<Vec> directors)
    : mesh_(&mesh), directors_(std::move(directors)) {
  if (directors_.size() != static_cast<size_t>(mesh.num_nodes()))
    throw std::invalid_argument("DirectorField: wrong number of nodal directors");
  if (max_norm_defect() > 1e-10)
    throw std::domain_error("DirectorField: nodal director off the unit sphere");
}

DirectorField DirectorField::constant(const Mesh& mesh, const Vec& direction) {
  const double r = direction.norm();
  if (!(r > 0.0)) throw std::invalid_argument("DirectorField: zero direction");
  std::vector<Vec> dirs(static_cast<size_t>(mesh.num_nodes()), (1.0 / r) * direction);
  return DirectorField(mesh, std::move(dirs));
}

Mat DirectorField::gradient(int e) const { return element_gradient(*mesh_, directors_, e); }

Vec DirectorField::unit_value(int e, double b0, double b1, double b2) const {
  const auto& el = mesh_->element(e);
  Vec v = b0 * directors_[static_cast<size_t>(el[0])] + b1 * directors_[static_cast<size_t>(el[1])] +
          b2 * directors_[static_cast<size_t>(el[2])];
  const double r = v.norm();
  if (r < 1e-8) return directors_[static_cast<size_t>(el[0])];  // antipodal nodal data
  return (1.0 / r) * v;
}

double DirectorField::max_norm_defect() const {
  double d = 0.0;
  for (const auto& m : directors_) d = std::max(d, std::abs(m.norm() - 1.0));
  return d;
}

State::State(DeformationField y_, DirectorField m_) : y(std::move(y_)), m(std::move(m_)) {
  if (&y.mesh() != &m.mesh())
    throw std::invalid_argument("State: deformation and director live on different meshes");
}

Mat element_gradient(const Mesh& mesh, const std::vector<Vec>& nodal, int e) {
  const auto& el = mesh.element(e);
  const auto& g = mesh.shape_gradients(e);
  Mat grad(2);
  for (int v = 0; v < 3; ++v) {
    const Vec& val = nodal[static_cast<size_t>(el[static_cast<size_t>(v)])];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) grad(i, j) += val[i] * g[static_cast<size_t>(v)][j];
  }
  return grad;
}

Vec p1_value(const Mesh& mesh, const std::vector<Vec>& nodal, int e,
             const std::array<double, 3>& b) {
  const auto& el = mesh.element(e);
  return b[0] * nodal[static_cast<size_t>(el[0])] + b[1] * nodal[static_cast<size_t>(el[1])] +
         b[2] * nodal[static_cast<size_t>(el[2])];
}

double integrate_volume(const Mesh& mesh, const std::function<double(int)>& per_element) {
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) s += mesh.area(e) * per_element(e);
  return s;
}

ExtReal integrate_volume_ext(const Mesh& mesh, const std::function<ExtReal(int)>& per_element) {
  ExtReal s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const ExtReal v = per_element(e);
    if (!v.finite()) return ExtReal::infinity();
    s += mesh.area(e) * v;
  }
  return s;
}

double integrate_volume_q2(
    const Mesh& mesh, const std::function<double(int, const Vec&, const std::array<double, 3>&)>& f) {
  static const std::array<std::array<double, 3>, 3> pts = {
      {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
  double s = 0.0;
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const double w = mesh.area(e) / 3.0;
    for (const auto& b : pts) s += w * f(e, mesh.barycentric_point(e, b[0], b[1], b[2]), b);
  }
  return s;
}

double integrate_boundary(const Mesh& mesh, BoundaryLabel label,
                          const std::function<double(const BoundaryEdge&)>& per_edge) {
  double s = 0.0;
  for (const auto& be : mesh.boundary())
    if (be.label == label) s += be.length * per_edge(be);
  return s;
}

double integrate_boundary_q2(const Mesh& mesh, BoundaryLabel label,
                             const std::function<double(const BoundaryEdge&, const Vec&, double)>& f) {
  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> ss = {0.5 - g, 0.5 + g};
  double sum = 0.0;
  for (const auto& be : mesh.boundary()) {
    if (be.label != label) continue;
    const Vec &a = mesh.node(be.a), &b = mesh.node(be.b);
    for (double s : ss) sum += 0.5 * be.length * f(be, (1.0 - s) * a + s * b, s);
  }
  return sum;
}

double min_det(const DeformationField& y) { return y.min_det(); }

double geometric_area(const DeformationField& y) {
  return integrate_volume(y.mesh(), [&](int e) { return determinant(y.gradient(e)); });
}

DeformationField apply_dirichlet(const DeformationField& y, const std::vector<Vec>& lambda_values,
                                 const std::optional<Box>& confinement) {
  const auto& nodes = y.mesh().label_nodes(BoundaryLabel::Lambda);
  if (nodes.size() != lambda_values.size())
    throw std::invalid_argument("apply_dirichlet: wrong number of Lambda values");
  std::vector<Vec> pos = y.positions();
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (confinement && !confinement->contains(lambda_values[k], 1e-12))
      throw std::runtime_error("apply_dirichlet: datum outside the confinement box");
    pos[static_cast<size_t>(nodes[k])] = lambda_values[k];
  }
  return DeformationField(y.mesh(), std::move(pos));  // revalidates det > 0
}

void write_snapshot(std::ostream& os, double t, const State& q) {
  const Mesh& mesh = q.y.mesh();
  char buf[256];
  std::snprintf(buf, sizeof buf, "# %.17g %d %d\n", t, mesh.num_nodes(), mesh.num_elements());
  os << buf;
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const Vec& x = mesh.node(i);
    const Vec u = q.y.position(i) - x;
    const Vec& m = q.m.director(i);
    std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g %.17g %.17g %.17g\n", i, x[0], x[1], u[0],
                  u[1], m[0], m[1]);
    os << buf;
  }
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const auto& el = mesh.element(e);
    std::snprintf(buf, sizeof buf, "%d %d %d\n", el[0], el[1], el[2]);
    os << buf;
  }
}

}  // namespace nemato
