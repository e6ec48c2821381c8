#include <sstream>

#include "doctest.h"
#include "nemato/ledger.hpp"

using namespace nemato;

namespace {
Trajectory tiny_run() {
  static const Mesh mesh = Mesh::unit_square(2);
  LoadSet ls;
  ls.h.space = SpaceProfile::constant(Vec(0.1, 0.0));
  ls.h.time = Polynomial({0.0, 1.0});
  Problem pb{&mesh, MaterialModel::reference_2d(), ls, BoundaryDatum::identity(), false,
             std::nullopt};
  SolverConfig cfg;
  cfg.n_steps = 3;
  cfg.max_sweeps = 2;
  cfg.max_inner_iters = 40;
  State init(DeformationField::identity(mesh), DirectorField::constant(mesh, Vec(0.0, 1.0)));
  return run_quasistatic(pb, init, cfg);
}
}  // namespace

TEST_CASE("ledger header and round trip") {
  const Trajectory tr = tiny_run();
  std::ostringstream os;
  write_ledger(tr, os);
  const std::string text = os.str();
  CHECK(text.rfind("t,elastic,nematic,loads,total,dissipation_step,variation,power,aux_power,"
                   "min_det\n",
                   0) == 0);
  CHECK(text.find('\r') == std::string::npos);  // LF endings only

  std::istringstream is(text);
  const auto rows = read_ledger(is);
  REQUIRE(rows.size() == tr.steps.size());
  for (size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k][0] == tr.steps[k].t);
    CHECK(rows[k][1] == tr.steps[k].energy.elastic.value());
    CHECK(rows[k][4] == tr.steps[k].energy.total().value());
    CHECK(rows[k][6] == tr.steps[k].variation);
    CHECK(rows[k][9] == tr.steps[k].min_det);
  }
}

TEST_CASE("ledger is byte stable across reruns") {
  const Trajectory a = tiny_run();
  const Trajectory b = tiny_run();
  std::ostringstream oa, ob;
  write_ledger(a, oa);
  write_ledger(b, ob);
  CHECK(oa.str() == ob.str());
}

TEST_CASE("constant trajectory writes an all-zero dissipation column") {
  static const Mesh mesh = Mesh::unit_square(2);
  Problem pb{&mesh, MaterialModel::reference_2d(), LoadSet::none(), BoundaryDatum::identity(),
             false, std::nullopt};
  SolverConfig cfg;
  cfg.n_steps = 3;
  State init(DeformationField::identity(mesh), DirectorField::constant(mesh, Vec(0.0, 1.0)));
  const Trajectory tr = run_quasistatic(pb, init, cfg);
  std::ostringstream os;
  write_ledger(tr, os);
  std::istringstream is(os.str());
  for (const auto& row : read_ledger(is)) {
    CHECK(row[5] == 0.0);
    CHECK(row[6] == 0.0);
  }
}
