#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "nonmarkov/errors.hpp"
#include "nonmarkov/nm_measures.hpp"
#include "nonmarkov/oracle.hpp"
#include "nonmarkov/special_functions.hpp"

using namespace testing;

namespace {

DephasingParams small_params(EnvKind kind, double r) {
  DephasingParams p;
  p.r = r;
  p.alpha2 = 0.7;
  p.omega_c = 0.02;
  p.env_kind = kind;
  return p;
}

void require_pass(const SuiteReport& report) {
  for (const auto& c : report.checks) {
    INFO(c.name << " violation " << c.max_violation << " tolerance " << c.tolerance);
    CHECK(c.pass);
    CHECK(c.pass == (c.max_violation <= c.tolerance));
  }
}

}  // namespace

TEST_CASE("identity suite passes and is deterministic") {
  const auto report = identity_suite(1, 100);
  CHECK(report.seed == 1);
  CHECK(report.checks.size() == 8);
  require_pass(report);
  CHECK(report.all_pass());
  for (const auto& c : report.checks) {
    CHECK(c.tolerance == kIdentityTol);
    CHECK(c.samples == 100);
  }
  const auto again = identity_suite(1, 100);
  for (std::size_t i = 0; i < report.checks.size(); ++i)
    CHECK(report.checks[i].max_violation == again.checks[i].max_violation);
  CHECK_THROWS(report.check("z_missing"));
}

TEST_CASE("identity suite negative control") {
  IdentityOptions broken;
  broken.entangle_ancilla = true;
  const auto report = identity_suite(1, 20, broken);
  CHECK_FALSE(report.check("a_conservation").pass);
  CHECK(report.check("a_conservation").max_violation > 1e-3);
  CHECK_FALSE(report.all_pass());
}

TEST_CASE("special function suite") {
  const auto report = special_function_suite(1);
  require_pass(report);
  CHECK(report.check("pmofh_displaced_fock").tolerance == 1e-8);
  CHECK(report.check("lphh_classical_pair").tolerance == 1e-6);
  CHECK(report.check("tmsv_cross_term").tolerance == 1e-6);
}

TEST_CASE("truncated displacement matches the closed form") {
  for (Complex g : {Complex(0.3, -0.2), Complex(-1.1, 0.4)}) {
    const Matrix d = truncated_displacement(g, 8, 60);
    for (int m = 0; m < 8; ++m)
      for (int n = 0; n < 8; ++n) CHECK(std::abs(d(m, n) - displacement_element(m, n, g)) < 1e-12);
  }
}

TEST_CASE("dense check: entangled and classical single mode pairs") {
  const auto times = uniform_grid(0.0, 5.0, 0.5);
  for (auto kind : {EnvKind::Entangled, EnvKind::Classical}) {
    const auto p = small_params(kind, 0.5);
    const auto model = build_discrete_model(p, 1, 5);
    const auto ops = dense_dephasing_check(model, default_flagged_state(), times);
    require_pass(ops);
    CHECK(ops.check("conditional_mutual_information").tolerance == 1e-7);

    DenseCheckOptions narrow;
    narrow.fock_padding = 6;
    const auto mixed = random_density_matrix(parts({{"A", 2}, {"S1", 2}, {"S2", 2}}), 2, 71);
    const auto report = dense_dephasing_check(model, mixed, times, narrow);
    require_pass(report);
    if (kind == EnvKind::Classical) CHECK(report.check("classical_modulus_symmetry").pass);
  }
}

TEST_CASE("dense check: uncorrelated environments leak nothing into E2 before its window") {
  const auto p = small_params(EnvKind::Entangled, 0.0);
  const auto model = build_discrete_model(p, 1, 2);
  const auto times = uniform_grid(0.0, 2.5, 0.25);
  require_pass(dense_dephasing_check(model, default_flagged_state(), times));
  const auto series = cmi_trajectory(model, default_flagged_state(), times, EnvPart::E2);
  for (double v : series.values())
    CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("dense check budget") {
  const auto model = build_discrete_model(small_params(EnvKind::Classical, 0.5), 2, 5);
  DenseCheckOptions tight;
  tight.max_dimension = 1024;
  CHECK_THROWS_AS(dense_dephasing_check(model, default_flagged_state(), {1.0}, tight), BudgetError);
  // three Fock levels capture too little of the r = 0.5 pair state
  CHECK_THROWS_AS(build_discrete_model(small_params(EnvKind::Entangled, 0.5), 1, 3), BudgetError);
}
