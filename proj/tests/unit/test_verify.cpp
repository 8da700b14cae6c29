#include <doctest.h>

#include "nkstab/presets.hpp"
#include "nkstab/report.hpp"
#include "nkstab/verify.hpp"

using namespace nkstab;

namespace {

SpaceOptions preset_options(const std::string& name) {
  SpaceOptions o;
  o.samples = 5;
  for (const auto& p : preset_catalog())
    if (p.name == name) {
      o.expected_b2 = p.b2;
      o.expected_b3 = p.b3;
    }
  return o;
}

bool fails(const Report& r, const char* id) {
  const CheckRecord* c = r.find(id);
  return c != nullptr && !c->pass;
}

}  // namespace

TEST_CASE("flat model suite") {
  ModelOptions o;
  o.samples = 200;
  const Report r = verify_model(o);
  CHECK(r.context == "flat-model");
  CHECK(r.all_pass());
  for (const char* id : {"sigma_norm", "sigma_norm_minus", "omega_prop", "const_type", "three_form_characterization",
                         "j_conjugation_1", "j_conjugation_2", "j_conjugation_3", "eta_omega_orthogonality"})
    CHECK(r.find(id) != nullptr);
  for (const auto& c : r.checks) CHECK(c.tolerance == kFlatTolerance);

  // Deterministic under a fixed seed.
  CHECK(verify_model(o) == r);
  o.seed = 99;
  CHECK(verify_model(o).all_pass());

  o.tol = 1e-10;
  for (const auto& c : verify_model(o).checks) CHECK(c.tolerance == 1e-10);
}

TEST_CASE("flat model option errors") {
  ModelOptions o;
  o.samples = 0;
  CHECK_THROWS_AS(verify_model(o), std::invalid_argument);
  o.samples = 1;
  o.inject = {"bogus"};
  CHECK_THROWS_AS(verify_model(o), std::invalid_argument);
  o.inject = {"perturb-metric"};
  CHECK_THROWS_AS(verify_model(o), std::invalid_argument);
}

TEST_CASE("flat model negative control") {
  ModelOptions o;
  o.samples = 10;
  o.inject = {"flip-omega-plus"};
  const Report r = verify_model(o);
  CHECK(fails(r, "omega_prop"));
  CHECK_FALSE(r.all_pass());
}

TEST_CASE("space pipelines pass on every preset") {
  for (const auto& p : preset_catalog()) {
    CAPTURE(p.name);
    const Report r = verify_space(preset_definition(p.name), preset_options(p.name));
    for (const auto& c : r.checks)
      if (!c.pass) FAIL_CHECK(c.id << " residual " << c.residual);
    REQUIRE(r.stability.has_value());
    CHECK(r.stability->coindex_lower_bound == p.b2 + p.b3);
    const Finding* g2 = r.find_finding("gray2_variants");
    REQUIRE(g2 != nullptr);
    CHECK(g2->values[2].second == 1.0);
    CHECK(r.find("b2_sector") != nullptr);
  }
}

TEST_CASE("tolerance override applies to every space check") {
  SpaceOptions o = preset_options("su3_t2");
  o.tol = 1e-8;
  const Report r = verify_space(preset_definition("su3_t2"), o);
  for (const auto& c : r.checks)
    if (c.id != "b2_sector" && c.id != "b3_sector" && c.id != "gram_rank" && c.id != "q_positive_definite")
      CHECK(c.tolerance == 1e-8);
}

TEST_CASE("space negative controls") {
  SpaceOptions o = preset_options("s3xs3");
  o.inject = {"flip-omega-plus"};
  CHECK(fails(verify_space(preset_definition("s3xs3"), o), "d_omega"));

  o.inject = {"perturb-metric"};
  const Report pert = verify_space(preset_definition("s3xs3"), o);
  CHECK(fails(pert, "einstein_fit"));
  CHECK(pert.find_finding("pipeline_halted") != nullptr);
  CHECK_FALSE(pert.stability.has_value());

  o.inject = {"non-primitive"};
  CHECK(fails(verify_space(preset_definition("s3xs3"), o), "eta3_lambda3_12[0]"));

  SpaceOptions t = preset_options("su3_t2");
  t.inject = {"non-primitive"};
  const Report np = verify_space(preset_definition("su3_t2"), t);
  CHECK(fails(np, "eta2_primitive[0]"));
  CHECK(fails(np, "eta2_primitive[1]"));

  SpaceOptions bad;
  bad.inject = {"bogus"};
  CHECK_THROWS_AS(verify_space(preset_definition("s6"), bad), std::invalid_argument);
}
