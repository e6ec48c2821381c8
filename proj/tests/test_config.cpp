#include <cstdlib>

#include "doctest.h"
#include "nemato/config.hpp"

using namespace nemato;

TEST_CASE("minimal config fills defaults") {
  const auto cfg = parse_config("");
  CHECK(cfg.mesh_n == 8);
  CHECK(cfg.T == 1.0);
  CHECK(cfg.n_steps == 20);
  CHECK(cfg.mu == 1.0);
  CHECK(cfg.nfunction.family() == NFamily::Power);
  CHECK(cfg.datum.time_dependent() == false);
  CHECK(cfg.loads.f.is_zero());
}

TEST_CASE("full config round") {
  const char* text = R"(
# stretch experiment
seed = 99

[mesh]
n = 6
lambda = left right
sigma = none

[orlicz]
nfunction = { family = "powerlog", p = 1, q = 1 }

[material]
mu = 1.0
zeta = 2.0
sigma = { family = "powerpower", a = 1, b = 2, alpha = 2, beta = 1, c = -3 }

[loads]
h_const = 1.2 0
h_time = 1

[datum]
type = affine_path
a11 = 1 0.3

[time]
T = 1.0
steps = 20

[solver]
stability_competitors = 50

[initial]
m0 = 0 1
)";
  const auto cfg = parse_config(text);
  CHECK(cfg.seed == 99);
  CHECK(cfg.mesh_n == 6);
  CHECK(cfg.lambda_sides.size() == 2);
  CHECK(cfg.sigma_sides.empty());
  CHECK(cfg.nfunction.family() == NFamily::PowerLog);
  CHECK(cfg.loads.h.value(1.0, Vec(0.0, 0.0))[0] == doctest::Approx(1.2));
  CHECK(cfg.datum.time_dependent());
  CHECK(cfg.datum.A(1.0)(0, 0) == doctest::Approx(1.3));
  CHECK(cfg.solver.stability_competitors == 50);
  const Mesh mesh = cfg.make_mesh();
  CHECK(mesh.boundary_measure(BoundaryLabel::Lambda) == doctest::Approx(2.0));
}

TEST_CASE("errors are aggregated and name the keys") {
  const char* text = R"(
[time]
T = -2
[mesh]
n = 1
[bogus]
x = 1
[solver]
backtrack = 7
)";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.issues.size() >= 4);
    bool saw_T = false, saw_n = false, saw_section = false, saw_backtrack = false;
    for (const auto& i : e.issues) {
      if (i.find("[time] T") != std::string::npos) saw_T = true;
      if (i.find("[mesh] n") != std::string::npos) saw_n = true;
      if (i.find("[bogus]") != std::string::npos) saw_section = true;
      if (i.find("backtrack") != std::string::npos) saw_backtrack = true;
    }
    CHECK(saw_T);
    CHECK(saw_n);
    CHECK(saw_section);
    CHECK(saw_backtrack);
  }
}

TEST_CASE("duplicate sections and unknown keys rejected") {
  CHECK_THROWS_AS(parse_config("[mesh]\nn = 4\n[mesh]\nn = 8\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[mesh]\nwhat = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[datum]\ntype = warp\n"), ConfigError);
}

TEST_CASE("confinement box must absorb the datum") {
  // contraction towards the origin stays inside the box
  const char* ok = R"(
[mesh]
confine = -0.5 -0.5 2.0 2.0
[datum]
type = affine_path
a11 = 1 -0.2
a22 = 1 -0.2
)";
  const auto cfg = parse_config(ok);
  REQUIRE(cfg.confinement.has_value());
  CHECK(cfg.confinement->hi[0] == 2.0);

  // an expanding stretch cannot map any bounded box into itself
  const char* bad = R"(
[mesh]
confine = -0.5 -0.5 2.0 2.0
[datum]
type = affine_path
a11 = 1 0.3
)";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("environment seed override") {
  setenv("NEMATO_SEED", "4242", 1);
  const auto cfg = parse_config("seed = 7\n");
  CHECK(cfg.seed == 4242);
  unsetenv("NEMATO_SEED");
  const auto cfg2 = parse_config("seed = 7\n");
  CHECK(cfg2.seed == 7);
}
