#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nemato/extreal.hpp"
#include "nemato/tensor.hpp"

namespace nemato {

enum class BoundaryLabel { Lambda, Sigma, Free };

struct BoundaryEdge {
  int a, b;             // node ids, ordered CCW along the boundary
  BoundaryLabel label;
  double length;
};

// Axis-aligned confinement box O.
struct Box {
  Vec lo, hi;
  bool contains(const Vec& x, double tol = 0.0) const {
    for (int i = 0; i < x.n; ++i)
      if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
    return true;
  }
  Vec clamp(const Vec& x) const {
    Vec r = x;
    for (int i = 0; i < x.n; ++i) r[i] = std::min(std::max(r[i], lo[i]), hi[i]);
    return r;
  }
};

// Conforming triangulation of a planar reference domain. Immutable after
// construction. The Dirichlet part Lambda must be nonempty.
class Mesh {
 public:
  Mesh(std::vector<Vec> nodes, std::vector<std::array<int, 3>> elements,
       std::vector<BoundaryEdge> boundary);

  // 2 n^2 right triangles on (0,1)^2; by default the left edge is labelled
  // Lambda, the right edge Sigma, top and bottom free. Sides are "left",
  // "right", "bottom", "top"; a side listed in neither set is free.
  // Throws on n < 2 or when Lambda ends up empty.
  static Mesh unit_square(int n, const std::vector<std::string>& lambda_sides = {"left"},
                          const std::vector<std::string>& sigma_sides = {"right"});

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  const Vec& node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  const std::array<int, 3>& element(int e) const { return elements_[static_cast<size_t>(e)]; }
  double area(int e) const { return areas_[static_cast<size_t>(e)]; }
  double total_area() const;
  // P1 shape-function gradients of the three vertices of element e.
  const std::array<Vec, 3>& shape_gradients(int e) const {
    return shape_grads_[static_cast<size_t>(e)];
  }
  Vec centroid(int e) const;
  Vec barycentric_point(int e, double b0, double b1, double b2) const;

  const std::vector<BoundaryEdge>& boundary() const { return boundary_; }
  double boundary_measure(BoundaryLabel label) const;
  // Nodes incident to edges with the given label, ascending ids.
  const std::vector<int>& label_nodes(BoundaryLabel label) const;
  // Boundary nodes in CCW order, starting from the lexicographically first.
  std::vector<int> boundary_loop() const;

 private:
  std::vector<Vec> nodes_;
  std::vector<std::array<int, 3>> elements_;
  std::vector<BoundaryEdge> boundary_;
  std::vector<double> areas_;
  std::vector<std::array<Vec, 3>> shape_grads_;
  std::vector<int> lambda_nodes_, sigma_nodes_, free_nodes_;
};

// Nodal P1 deformation. The checked constructor enforces per-element
// det Dy > 0; solver internals build candidates unchecked and validate
// before committing.
class DeformationField {
 public:
  DeformationField(const Mesh& mesh, std::vector<Vec> positions);
  static DeformationField identity(const Mesh& mesh);
  static DeformationField unchecked(const Mesh& mesh, std::vector<Vec> positions);

  const Mesh& mesh() const { return *mesh_; }
  const Vec& position(int i) const { return positions_[static_cast<size_t>(i)]; }
  const std::vector<Vec>& positions() const { return positions_; }
  std::vector<Vec>& mutable_positions() { return positions_; }

  Mat gradient(int e) const;
  double min_det() const;
  void validate() const;  // throws std::domain_error if some det <= 0

 private:
  const Mesh* mesh_;
  std::vector<Vec> positions_;
};

// Nodal unit director field representing the composition of the spatial
// director with the deformation; |m_i| = 1 within 1e-10 at every node.
class DirectorField {
 public:
  DirectorField(const Mesh& mesh, std::vector<Vec> directors);
  static DirectorField constant(const Mesh& mesh, const Vec& direction);

  const Mesh& mesh() const { return *mesh_; }
  const Vec& director(int i) const { return directors_[static_cast<size_t>(i)]; }
  const std::vector<Vec>& directors() const { return directors_; }
  std::vector<Vec>& mutable_directors() { return directors_; }

  Mat gradient(int e) const;
  // P1 value at barycentric coordinates, renormalised to the sphere.
  Vec unit_value(int e, double b0, double b1, double b2) const;
  double max_norm_defect() const;

 private:
  const Mesh* mesh_;
  std::vector<Vec> directors_;
};

struct State {
  DeformationField y;
  DirectorField m;

  State(DeformationField y_, DirectorField m_);
};

// Constant per-element P1 gradient of a nodal vector field.
Mat element_gradient(const Mesh& mesh, const std::vector<Vec>& nodal, int e);

// P1 interpolant of a nodal vector field at barycentric coordinates.
Vec p1_value(const Mesh& mesh, const std::vector<Vec>& nodal, int e,
             const std::array<double, 3>& b);

// Midpoint (one-point) rule, exact for element-wise constants.
double integrate_volume(const Mesh& mesh, const std::function<double(int)>& per_element);
ExtReal integrate_volume_ext(const Mesh& mesh, const std::function<ExtReal(int)>& per_element);
// Order-2 (three midsides) rule for load terms; f(e, x, b) with b the
// barycentric coordinates of the quadrature point.
double integrate_volume_q2(const Mesh& mesh,
                           const std::function<double(int, const Vec&, const std::array<double, 3>&)>& f);
double integrate_boundary(const Mesh& mesh, BoundaryLabel label,
                          const std::function<double(const BoundaryEdge&)>& per_edge);
// Two-point Gauss rule on labelled edges; f(edge, x, s) with s in (0,1) the
// edge parameter of the quadrature point.
double integrate_boundary_q2(const Mesh& mesh, BoundaryLabel label,
                             const std::function<double(const BoundaryEdge&, const Vec&, double)>& f);

double min_det(const DeformationField& y);
// int det Dy dx; equals the area of the image polygon for injective y.
double geometric_area(const DeformationField& y);

// Overwrites Lambda-node positions with the given values (ordered as
// mesh.label_nodes(Lambda)) and revalidates. Throws std::domain_error on
// inversion and std::runtime_error on confinement violation.
DeformationField apply_dirichlet(const DeformationField& y, const std::vector<Vec>& lambda_values,
                                 const std::optional<Box>& confinement = std::nullopt);

// ASCII snapshot: `# t nodes elements`, per-node `id x y u1 u2 m1 m2` with
// u the displacement y - x, then element connectivity. Node ids ascending.
void write_snapshot(std::ostream& os, double t, const State& q);

}  // namespace nemato
