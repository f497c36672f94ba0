#include <doctest.h>

#include "imlab/errors.hpp"
#include "imlab/verify.hpp"

using namespace imlab;

namespace {

void require_all_pass(const VerificationReport& r) {
  for (const auto& c : r.cases) {
    CAPTURE(c.name);
    CAPTURE(c.gap);
    CHECK(c.pass);
  }
  CHECK(r.passed());
}

}  // namespace

TEST_CASE("gaussian chain suite") {
  const auto r = verify_gaussian_zero(6);
  CHECK(r.cases.size() >= 6);
  require_all_pass(r);
  for (const auto& c : r.cases) CHECK(c.oracle_exact == c.formula_exact);
}

TEST_CASE("cumulant suite") { require_all_pass(verify_cumulants(7, 10)); }

TEST_CASE("lemma1 suite") {
  const auto r = verify_lemma1(7, 20);
  CHECK(r.cases.size() > 20);
  require_all_pass(r);
}

TEST_CASE("lemma2 suite") {
  require_all_pass(verify_lemma2(rademacher(), {{0.3, 0.7}, {0.25, 0.0}, {0.2, 0.3, 0.5}}));
  require_all_pass(verify_lemma2(three_atom_scalar(), {{0.5, 0.5}}));
}

TEST_CASE("theorem1 single cases") {
  VerifyConfig cfg;
  require_all_pass(verify_theorem1(rademacher(), {0.8}, {2}, cfg, "rademacher/2"));
  require_all_pass(verify_theorem1(correlated_pair(), {0.5, 0.9}, {1, 1}, cfg, "pair/1,1"));
  const auto r = verify_theorem1(three_atom_scalar(), {0.6}, {3}, cfg, "three/3");
  require_all_pass(r);
  REQUIRE(r.cases[0].alt_gap.has_value());
  CHECK(*r.cases[0].alt_gap <= cfg.tol.paths);
}

TEST_CASE("failing tolerance is reported, not hidden") {
  VerifyConfig cfg;
  cfg.tol.order2 = 1e-14;
  const auto r = verify_theorem1(rademacher(), {0.8}, {2}, cfg);
  CHECK_FALSE(r.passed());
}

TEST_CASE("adjudication picks the half convention") {
  const auto a = adjudicate_first_derivative(1.0, VerifyConfig{});
  CHECK(a.verdict == "half_mmse");
  CHECK(a.pass);
  CHECK(a.gap_half_mmse < 1e-8);
  CHECK(a.rel_gap_full_mmse > 0.1);
}

TEST_CASE("reports are deterministic") {
  const auto a = to_json(run_suite("lemma1", 3, VerifyConfig{})).dump();
  const auto b = to_json(run_suite("lemma1", 3, VerifyConfig{})).dump();
  CHECK(a == b);
  CHECK(to_csv(run_suite("cumulants", 3, VerifyConfig{})) == to_csv(run_suite("cumulants", 3, VerifyConfig{})));
  CHECK(a != to_json(run_suite("lemma1", 4, VerifyConfig{})).dump());
}

TEST_CASE("random joints") {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto j = random_joint(rng, 2, 5);
    Rational total = 0;
    for (const auto& p : j.probs) {
      CHECK(p > 0);
      CHECK(Rational(p * 64).str().find('/') == std::string::npos);
      total += p;
    }
    CHECK(total == 1);
    CHECK(j.support.size() == 5);
  }
  CHECK_THROWS_AS(run_suite("nope", 1, VerifyConfig{}), DomainError);
}
