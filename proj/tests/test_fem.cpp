#include <cmath>
#include <sstream>

#include "doctest.h"
#include "nemato/fem.hpp"
#include "nemato/rng.hpp"

using namespace nemato;

TEST_CASE("unit square mesh counts and labels") {
  const Mesh m2 = Mesh::unit_square(2);
  CHECK(m2.num_nodes() == 9);
  CHECK(m2.num_elements() == 8);
  const Mesh m4 = Mesh::unit_square(4);
  CHECK(m4.num_nodes() == 25);
  CHECK(m4.num_elements() == 32);
  CHECK_THROWS_AS(Mesh::unit_square(1), std::invalid_argument);

  // labels partition the boundary
  CHECK(m4.boundary_measure(BoundaryLabel::Lambda) == doctest::Approx(1.0));
  CHECK(m4.boundary_measure(BoundaryLabel::Sigma) == doctest::Approx(1.0));
  CHECK(m4.boundary_measure(BoundaryLabel::Free) == doctest::Approx(2.0));
  for (int i : m4.label_nodes(BoundaryLabel::Lambda)) CHECK(m4.node(i)[0] == 0.0);
  for (int i : m4.label_nodes(BoundaryLabel::Sigma)) CHECK(m4.node(i)[0] == 1.0);
  CHECK(m4.total_area() == doctest::Approx(1.0));

  const auto loop = m4.boundary_loop();
  CHECK(loop.size() == 16);
}

TEST_CASE("element gradient exact for affine fields") {
  const Mesh mesh = Mesh::unit_square(3);
  auto field_of = [&](const Mat& A, const Vec& b) {
    std::vector<Vec> pos;
    for (int i = 0; i < mesh.num_nodes(); ++i) pos.push_back(A * mesh.node(i) + b);
    return pos;
  };
  const auto id = field_of(Mat::identity(2), Vec(0.0, 0.0));
  const auto twice = field_of(2.0 * Mat::identity(2), Vec(0.0, 0.0));
  CounterRng rng(2);
  Mat A(1.3, 0.4, -0.2, 0.9);
  const auto affine = field_of(A, Vec(0.3, -0.1));
  for (int e = 0; e < mesh.num_elements(); ++e) {
    CHECK((element_gradient(mesh, id, e) - Mat::identity(2)).max_abs() < 1e-14);
    CHECK((element_gradient(mesh, twice, e) - 2.0 * Mat::identity(2)).max_abs() < 1e-14);
    CHECK((element_gradient(mesh, affine, e) - A).max_abs() < 1e-13);
  }
}

TEST_CASE("quadrature") {
  const Mesh mesh = Mesh::unit_square(4);
  CHECK(integrate_volume(mesh, [](int) { return 1.0; }) == doctest::Approx(1.0));
  CHECK(integrate_boundary(mesh, BoundaryLabel::Lambda, [](const BoundaryEdge&) { return 1.0; }) ==
        doctest::Approx(1.0));
  // order-2 rule integrates x1 exactly
  const double ix = integrate_volume_q2(
      mesh, [](int, const Vec& x, const std::array<double, 3>&) { return x[0]; });
  CHECK(ix == doctest::Approx(0.5).epsilon(1e-14));
  // and quadratics exactly
  const double ixx = integrate_volume_q2(
      mesh, [](int, const Vec& x, const std::array<double, 3>&) { return x[0] * x[1]; });
  CHECK(ixx == doctest::Approx(0.25).epsilon(1e-14));
  // boundary q2 integrates quadratics on edges exactly
  const double ib = integrate_boundary_q2(
      mesh, BoundaryLabel::Sigma,
      [](const BoundaryEdge&, const Vec& x, double) { return x[1] * x[1]; });
  CHECK(ib == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("extended-real volume integral") {
  const Mesh mesh = Mesh::unit_square(2);
  const ExtReal fin = integrate_volume_ext(mesh, [](int) -> ExtReal { return 2.0; });
  CHECK(fin.value() == doctest::Approx(2.0));
  const ExtReal inf = integrate_volume_ext(
      mesh, [](int e) -> ExtReal { return e == 3 ? ExtReal::infinity() : ExtReal(1.0); });
  CHECK_FALSE(inf.finite());
}

TEST_CASE("min det and geometric area") {
  const Mesh mesh = Mesh::unit_square(4);
  const DeformationField id = DeformationField::identity(mesh);
  CHECK(min_det(id) == doctest::Approx(1.0));
  CHECK(geometric_area(id) == doctest::Approx(1.0));

  std::vector<Vec> pos;
  for (int i = 0; i < mesh.num_nodes(); ++i) pos.push_back(2.0 * mesh.node(i));
  const DeformationField twice(mesh, pos);
  CHECK(geometric_area(twice) == doctest::Approx(4.0));

  // area formula vs shoelace of the image polygon for a perturbed map
  CounterRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec> p;
    for (int i = 0; i < mesh.num_nodes(); ++i)
      p.push_back(mesh.node(i) + Vec(0.04 * rng.normal(), 0.04 * rng.normal()));
    DeformationField y = DeformationField::unchecked(mesh, p);
    if (!(y.min_det() > 0.0)) continue;
    const auto loop = mesh.boundary_loop();
    double shoelace = 0.0;
    for (size_t k = 0; k < loop.size(); ++k) {
      const Vec& a = y.position(loop[k]);
      const Vec& b = y.position(loop[(k + 1) % loop.size()]);
      shoelace += 0.5 * (a[0] * b[1] - a[1] * b[0]);
    }
    CHECK(std::abs(geometric_area(y) - shoelace) < 1e-12);
  }
}

TEST_CASE("deformation field validation") {
  const Mesh mesh = Mesh::unit_square(2);
  std::vector<Vec> pos;
  for (int i = 0; i < mesh.num_nodes(); ++i) pos.push_back(mesh.node(i));
  pos[4] = Vec(-2.0, -2.0);  // fold the interior node far outside
  CHECK_THROWS_AS(DeformationField(mesh, pos), std::domain_error);
}

TEST_CASE("apply dirichlet") {
  const Mesh mesh = Mesh::unit_square(3);
  const DeformationField id = DeformationField::identity(mesh);
  const auto& lam = mesh.label_nodes(BoundaryLabel::Lambda);

  std::vector<Vec> same;
  for (int i : lam) same.push_back(mesh.node(i));
  const DeformationField y1 = apply_dirichlet(id, same);
  for (int i = 0; i < mesh.num_nodes(); ++i)
    CHECK((y1.position(i) - id.position(i)).norm() == 0.0);

  // strong inward push inverts elements
  std::vector<Vec> bad;
  for (int i : lam) bad.push_back(mesh.node(i) + Vec(0.9, 0.0));
  CHECK_THROWS_AS(apply_dirichlet(id, bad), std::domain_error);

  // confinement violation reported distinctly
  std::vector<Vec> outside;
  for (int i : lam) outside.push_back(mesh.node(i) + Vec(-5.0, 0.0));
  const Box box{Vec(-1.0, -1.0), Vec(2.0, 2.0)};
  CHECK_THROWS_AS(apply_dirichlet(id, outside, box), std::runtime_error);
}

TEST_CASE("director field invariants") {
  const Mesh mesh = Mesh::unit_square(2);
  const DirectorField m = DirectorField::constant(mesh, Vec(3.0, 4.0));
  CHECK(m.director(0)[0] == doctest::Approx(0.6));
  CHECK(m.max_norm_defect() < 1e-15);
  std::vector<Vec> bad(static_cast<size_t>(mesh.num_nodes()), Vec(1.0, 1.0));
  CHECK_THROWS_AS(DirectorField(mesh, bad), std::domain_error);
}

TEST_CASE("snapshot format") {
  const Mesh mesh = Mesh::unit_square(2);
  const State q(DeformationField::identity(mesh), DirectorField::constant(mesh, Vec(0.0, 1.0)));
  std::ostringstream os;
  write_snapshot(os, 0.25, q);
  std::istringstream is(os.str());
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "# 0.25 9 8");
  int lines = 0;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 9 + 8);
  // byte stability
  std::ostringstream os2;
  write_snapshot(os2, 0.25, q);
  CHECK(os.str() == os2.str());
}
