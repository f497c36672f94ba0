#include <doctest.h>

#include "imlab/distribution.hpp"
#include "imlab/errors.hpp"
#include "imlab/moment_forms.hpp"
#include "imlab/verify.hpp"

#include <algorithm>
#include <cmath>

using namespace imlab;

namespace {

// k-th derivative at 0 of log(1 + x) / 2, from its Taylor coefficients.
Rational half_log1p_derivative(int k) {
  Rational coeff(k % 2 ? 1 : -1, k);
  return coeff * factorial(k) / 2;
}

// Same law shifted so every coordinate has mean zero.
ExactJoint centered(const ExactJoint& j) {
  ExactJoint out = j;
  for (int i = 0; i < j.dims; ++i) {
    Rational mean = 0;
    for (std::size_t a = 0; a < j.probs.size(); ++a) mean += j.probs[a] * j.support[a][static_cast<std::size_t>(i)];
    for (auto& x : out.support) x[static_cast<std::size_t>(i)] -= mean;
  }
  return out;
}

MomentOracle<Rational> constant_oracle(Rational value) {
  return [value](std::span<const int> vars) {
    Rational r = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) r *= value;
    return r;
  };
}

}  // namespace

TEST_CASE("single slot tau is minus half the squared mean") {
  const MomentOracle<double> oracle = [](std::span<const int> vars) { return std::pow(2.0, static_cast<double>(vars.size())); };
  CHECK(tau_eval(SlotBinding::distinct(1), oracle, 1) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("two centered variables") {
  // E[X1] = E[X2] = 0, E[X1 X2] = 1/2.
  const MomentOracle<Rational> oracle = [](std::span<const int> vars) -> Rational {
    std::vector<int> v(vars.begin(), vars.end());
    std::sort(v.begin(), v.end());
    if (v == std::vector<int>{1, 2}) return Rational(1, 2);
    if (v.size() == 1) return 0;
    throw DomainError("unexpected block");
  };
  CHECK(tau_eval(SlotBinding::distinct(2), oracle, 2) == Rational(-1, 8));
}

TEST_CASE("constant input gives zero") {
  for (int n = 1; n <= 5; ++n) {
    if (n == 1) continue;  // -E[X]^2 / 2 is the only term
    CHECK(tau_eval(SlotBinding::distinct(n), constant_oracle(1), 1) == 0);
    CHECK(tau_eval(SlotBinding::distinct(n), constant_oracle(Rational(3, 7)), 1) == 0);
  }
}

TEST_CASE("gaussian chain at zero snr") {
  const auto oracle = standard_gaussian_oracle();
  for (int k = 2; k <= 6; ++k) {
    CAPTURE(k);
    const std::vector<int> mult{k};
    const auto binding = SlotBinding::from_multiplicities(mult);
    CHECK(tau_eval(binding, oracle, 2) == half_log1p_derivative(k));
    CHECK(tau_eval(binding, oracle, 1) == half_log1p_derivative(k));
  }
  // One slot: tau = -E[X]^2 / 2 = 0; the first derivative adds E[X^2] / 2.
  const std::vector<int> one{1};
  const Block square{1, 1};
  CHECK(tau_eval(SlotBinding::from_multiplicities(one), oracle, 1) + oracle(square) / 2 == half_log1p_derivative(1));
  const std::vector<int> four{4};
  CHECK(tau_eval(SlotBinding::from_multiplicities(four), oracle, 2) == -3);
}

TEST_CASE("identical-argument symbolic forms") {
  const auto form = [](int k) {
    const std::vector<int> mult{k};
    return tau_symbolic(SlotBinding::from_multiplicities(mult), 2);
  };
  const SymbolicExpansion two = form(2);
  CHECK(two.size() == 1);
  CHECK(two.coefficient({{1, 1}, {1, 1}}) == Rational(-1, 2));
  CHECK(two.to_string() == "-1/2*M2^2");

  const SymbolicExpansion three = form(3);
  CHECK(three.size() == 2);
  CHECK(three.coefficient({{1, 1}, {1, 1}, {1, 1}}) == 1);
  CHECK(three.coefficient({{1, 1, 1}, {1, 1, 1}}) == Rational(-1, 2));
  CHECK(three.to_string() == "M2^3 - 1/2*M3^2");

  const SymbolicExpansion four = form(4);
  CHECK(four.size() == 4);
  CHECK(four.coefficient({{1, 1}, {1, 1}, {1, 1}, {1, 1}}) == Rational(-15, 2));
  CHECK(four.coefficient({{1, 1}, {1, 1, 1}, {1, 1, 1}}) == 6);
  CHECK(four.coefficient({{1, 1}, {1, 1}, {1, 1, 1, 1}}) == 3);
  CHECK(four.coefficient({{1, 1, 1, 1}, {1, 1, 1, 1}}) == Rational(-1, 2));
  CHECK(four.to_string() == "-15/2*M2^4 + 6*M3^2*M2 + 3*M4*M2^2 - 1/2*M4^2");
}

TEST_CASE("symbolic expansion evaluates like tau_eval") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const ExactJoint joint = random_joint(rng, 3, 4);
    const auto oracle = prior_moment_oracle(joint);
    const SlotBinding binding({1, 1, 2, 3});
    CHECK(tau_symbolic(binding, 1).evaluate(oracle) == tau_eval(binding, oracle, 1));
  }
}

TEST_CASE("centering identity") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int dims = 2 + trial % 2;
    const ExactJoint joint = random_joint(rng, dims, 3 + trial % 3);
    const auto raw = prior_moment_oracle(joint);
    const auto cen = prior_moment_oracle(centered(joint));
    for (int n = 2; n <= 4; ++n) {
      std::vector<int> map;
      for (int s = 0; s < n; ++s) map.push_back(1 + (s * 7 + trial) % dims);
      const SlotBinding binding(map);
      CHECK(tau_eval(binding, raw, 1) == tau_eval(binding, cen, 2));
    }
  }
}

TEST_CASE("slot permutation invariance") {
  Rng rng(3);
  const ExactJoint joint = random_joint(rng, 3, 5);
  const auto oracle = prior_moment_oracle(joint);
  std::vector<int> map{1, 1, 2, 3};
  const Rational ref = tau_eval(SlotBinding(map), oracle, 1);
  std::sort(map.begin(), map.end());
  do {
    CHECK(tau_eval(SlotBinding(map), oracle, 1) == ref);
  } while (std::next_permutation(map.begin(), map.end()));
}

TEST_CASE("cumulant examples") {
  const auto standard = univariate_oracle<Rational>({1, 0, 1, 0});
  CHECK(kappa_eval(3, standard) == 0);
  CHECK(kappa_eval(4, standard_gaussian_oracle()) == 0);
  CHECK(kappa_recursion_oracle(2, univariate_oracle<Rational>({1, 3, 10})) == 1);
  CHECK(kappa_eval(1, univariate_oracle<Rational>({1, Rational(5, 3)})) == Rational(5, 3));
  CHECK(kappa_recursion_oracle(6, standard_gaussian_oracle()) == 0);

  const std::vector<Rational> m{1, 2, 7, Rational(1, 3)};
  const Rational m1 = m[1], m2 = m[2], m3 = m[3];
  const Rational k3 = m3 - 3 * m2 * m1 + 2 * m1 * m1 * m1;
  CHECK(kappa_eval(3, univariate_oracle<Rational>(m)) == k3);
  const auto ks = cumulants_from_moments<Rational>(m);
  REQUIRE(ks.size() == 3);
  CHECK(ks[0] == m1);
  CHECK(ks[1] == m2 - m1 * m1);
  CHECK(ks[2] == k3);
}

TEST_CASE("cumulant recursion agrees with the partition sum on random joints") {
  Rng rng(19);
  for (int trial = 0; trial < 10; ++trial) {
    const ExactJoint joint = random_joint(rng, 4, 5);
    const auto raw = prior_moment_oracle(joint);
    const MomentOracle<Rational> by_slot = [&](std::span<const int> slots) {
      Block b(slots.begin(), slots.end());
      return raw(b);
    };
    for (int n = 1; n <= 4; ++n) CHECK(kappa_eval(n, by_slot) == kappa_recursion_oracle(n, by_slot));
  }
}

TEST_CASE("cumulants are multilinear") {
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const ExactJoint joint = random_joint(rng, 4, 5);
    const Rational a(3, 2), b(-2);
    // Columns: (a X1 + b X2, X3, X4), X1-version and X2-version.
    const auto mix = prior_moment_oracle(linear_map(joint, {{a, b, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    const auto first = prior_moment_oracle(linear_map(joint, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    const auto second = prior_moment_oracle(linear_map(joint, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}));
    const auto as_slots = [](const MomentOracle<Rational>& o) {
      return MomentOracle<Rational>([o](std::span<const int> s) { return o(Block(s.begin(), s.end())); });
    };
    CHECK(kappa_eval(3, as_slots(mix)) == a * kappa_eval(3, as_slots(first)) + b * kappa_eval(3, as_slots(second)));
  }
}

TEST_CASE("expansion json") {
  const std::vector<int> mult{3};
  const auto j = to_json(tau_symbolic(SlotBinding::from_multiplicities(mult), 2));
  CHECK(j.at("centered") == true);
  REQUIRE(j.at("terms").size() == 2);
  CHECK(j.at("terms")[1].at("coeff") == "-1/2");
}

TEST_CASE("slot range guard") {
  const auto oracle = standard_gaussian_oracle();
  CHECK_THROWS_AS(tau_eval(SlotBinding::distinct(kMaxEnumerationSlots + 1), oracle, 1), SizeLimitError);
}
