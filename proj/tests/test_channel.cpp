#include <doctest.h>

#include "imlab/channel.hpp"
#include "imlab/errors.hpp"
#include "imlab/verify.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

using namespace imlab;

namespace {

// E[f(Z)] for standard normal Z by adaptive Gauss-Kronrod on the real line.
template <class F>
double normal_expectation(F f) {
  const auto integrand = [&](double z) { return f(z) * std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      integrand, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), 20, 1e-15);
}

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// Rademacher input: posterior mean tanh(sqrt(snr) y) and y = sqrt(snr) x + z.
double rademacher_mi(double snr) {
  return snr - normal_expectation([&](double z) { return log_cosh(snr + std::sqrt(snr) * z); });
}

double rademacher_mmse(double snr) {
  return 1.0 - normal_expectation([&](double z) {
           const double t = std::tanh(snr + std::sqrt(snr) * z);
           return t * t;
         });
}

const QuadratureRule& rule(int order = kDefaultQuadratureOrder) {
  static std::map<int, QuadratureRule> cache;
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, QuadratureRule::gauss_hermite(order)).first;
  return it->second;
}

double mi(const DiscreteJoint& d, std::vector<double> snr, int order = kDefaultQuadratureOrder) {
  return mutual_information(d, ChannelSpec(std::move(snr)), rule(order));
}

}  // namespace

TEST_CASE("rademacher mutual information against a one-dimensional oracle") {
  const auto x = rademacher();
  CHECK(std::abs(mi(x, {0.25}) - rademacher_mi(0.25)) < 1e-10);
  CHECK(std::abs(mi(x, {1.0}) - rademacher_mi(1.0)) < 1e-10);
  // 64 nodes resolve log cosh(4 + 2z) only to ~1e-7.
  CHECK(std::abs(mi(x, {4.0}, 200) - rademacher_mi(4.0)) < 1e-10);
}

TEST_CASE("rademacher information approaches log 2") {
  const auto x = rademacher();
  double prev = 0.0;
  for (double snr : {1.0, 4.0, 9.0, 16.0}) {
    const double v = mi(x, {snr}, 200);
    CHECK(v > prev);
    CHECK(v < std::numbers::ln2);
    prev = v;
  }
  CHECK(std::numbers::ln2 - prev < 1e-4);
}

TEST_CASE("rademacher mmse against a one-dimensional oracle") {
  const auto x = rademacher();
  CHECK(std::abs(mmse(x, ChannelSpec({0.5}), rule(), 1) - rademacher_mmse(0.5)) < 1e-10);
  // tanh(2 + sqrt(2) z) has poles close to the real axis; 64 nodes give ~3e-7.
  CHECK(std::abs(mmse(x, ChannelSpec({2.0}), rule(200), 1) - rademacher_mmse(2.0)) < 1e-10);
}

TEST_CASE("mmse at zero snr is the variance and does not increase") {
  const auto x = three_atom_scalar();
  const double mean = -0.3 + 0.25 + 0.4;
  const double var = 0.3 * 1.0 + 0.5 * 0.25 + 0.2 * 4.0 - mean * mean;
  CHECK(mmse(x, ChannelSpec({0.0}), rule(), 1) == doctest::Approx(var).epsilon(1e-13));
  double prev = var + 1e-12;
  for (int i = 0; i <= 8; ++i) {
    const double m = mmse(x, ChannelSpec({0.25 * i}), rule(), 1);
    CHECK(m <= prev + 1e-13);
    CHECK(m >= 0.0);
    CHECK(m <= var + 1e-10);
    prev = m;
  }
}

TEST_CASE("posterior moments") {
  const auto x = rademacher();
  const std::vector<double> y{0.7};
  CHECK(posterior_moment(x, ChannelSpec({1.0}), y, {1}) == doctest::Approx(std::tanh(0.7)).epsilon(1e-14));
  const std::vector<double> zero{0.0};
  CHECK(std::abs(posterior_moment(x, ChannelSpec({1.0}), zero, {1})) < 1e-15);
  CHECK(posterior_moment(x, ChannelSpec({1.0}), y, {}) == 1.0);

  const auto pair = correlated_pair();
  const std::vector<double> y2{0.3, -1.2};
  CHECK(posterior_moment(pair, ChannelSpec({0.0, 0.0}), y2, {1, 2}) == doctest::Approx(prior_moment_oracle(pair)(Block{1, 2})));
  CHECK(posterior_moment(pair, ChannelSpec({0.5, 0.9}), y2, {}) == 1.0);
}

TEST_CASE("zero snr and constant input carry no information") {
  CHECK(std::abs(mi(correlated_pair(), {0.0, 0.0})) < 1e-15);
  CHECK(std::abs(mi(three_atom_scalar(), {0.0})) < 1e-15);
  const auto constant = DiscreteJoint::make({{1.5, -2.0}}, {1.0});
  CHECK(std::abs(mi(constant, {0.7, 1.3})) < 1e-15);
}

TEST_CASE("information is bounded by entropy and nondecreasing") {
  const auto pair = correlated_pair();
  double prev = -1e-15;
  for (int i = 0; i <= 6; ++i) {
    const double v = mi(pair, {0.25 * i, 0.5});
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  for (double snr : {0.1, 0.5, 1.5}) {
    const double v = mi(three_atom_scalar(), {snr});
    CHECK(v >= -1e-10);
    CHECK(v <= entropy(three_atom_scalar()) + 1e-10);
  }
}

TEST_CASE("independent coordinates add") {
  const ExactJoint a{1, {{-1}, {1}}, {Rational(1, 2), Rational(1, 2)}};
  const ExactJoint b{1, {{-1}, {Rational(1, 2)}, {2}}, {Rational(3, 10), Rational(1, 2), Rational(1, 5)}};
  const auto joint = product(a, b).to_discrete();
  const double lhs = mi(joint, {0.6, 0.9});
  const double rhs = mi(rademacher(), {0.6}) + mi(three_atom_scalar(), {0.9});
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("duplicated signals reduce to one channel") {
  const auto twice = DiscreteJoint::make({{-1, -1}, {1, 1}}, {0.5, 0.5});
  CHECK(std::abs(mi(twice, {0.3, 0.7}) - mi(rademacher(), {1.0})) < 1e-10);
  const auto thrice = DiscreteJoint::make({{-1, -1, -1}, {1, 1, 1}}, {0.5, 0.5});
  CHECK(std::abs(mi(thrice, {0.2, 0.3, 0.5}) - mi(rademacher(), {1.0})) < 1e-10);

  const auto reduced = combine_channels(thrice, ChannelSpec({0.2, 0.3, 0.5}), {{1, 2, 3}});
  CHECK(reduced.dist.dims() == 1);
  CHECK(reduced.spec.snr()[0] == doctest::Approx(1.0));
  const auto identity = combine_channels(correlated_pair(), ChannelSpec({0.5, 0.9}), {{1}, {2}});
  CHECK(identity.dist.dims() == 2);
  CHECK(mutual_information(identity.dist, identity.spec, rule()) == mi(correlated_pair(), {0.5, 0.9}));
}

TEST_CASE("combine_channels errors") {
  const auto pair = correlated_pair();
  const ChannelSpec spec({0.5, 0.9});
  CHECK_THROWS_AS(combine_channels(pair, spec, {{1, 2}}), DomainError);
  CHECK_THROWS_AS(combine_channels(pair, spec, {{1}}), DomainError);
  CHECK_THROWS_AS(combine_channels(pair, spec, {{1}, {1, 2}}), DomainError);
}

TEST_CASE("doubling the quadrature order at acceptance points") {
  const auto check = [](const DiscreteJoint& d, std::vector<double> snr) {
    CHECK(std::abs(mi(d, snr, 64) - mi(d, snr, 128)) < 1e-10);
  };
  check(rademacher(), {1.0});
  check(rademacher(), {0.5});
  check(three_atom_scalar(), {0.6});
  check(correlated_pair(), {0.5, 0.9});
}

TEST_CASE("centered and uncentered conditional tau agree") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto d = random_joint(rng, 2, 3).to_discrete();
    const ChannelSpec spec({0.4, 0.7});
    const SlotBinding binding({1, 2, 2});
    const double a = expected_conditional_tau(d, spec, rule(), binding, true);
    const double b = expected_conditional_tau(d, spec, rule(), binding, false);
    CHECK(std::abs(a - b) < 1e-11);
  }
}

TEST_CASE("order (1,1) conditional tau is the centered cross moment form") {
  const auto pair = correlated_pair();
  const ChannelSpec spec({0.5, 0.9});
  const auto& q = rule();
  // -E[E[Xbar1 Xbar2 | Y]^2] / 2 evaluated node by node.
  double direct = 0.0;
  for (std::size_t a = 0; a < pair.size(); ++a)
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
      for (std::size_t j = 0; j < q.nodes.size(); ++j) {
        const std::vector<double> y{std::sqrt(0.5) * pair.support()[a][0] + q.nodes[i],
                                    std::sqrt(0.9) * pair.support()[a][1] + q.nodes[j]};
        const double c = posterior_moment(pair, spec, y, {1, 2}, true);
        direct += pair.probs()[a] * q.weights[i] * q.weights[j] * (-0.5 * c * c);
      }
  CHECK(std::abs(expected_conditional_tau(pair, spec, q, SlotBinding({1, 2}), true) - direct) < 1e-12);
}

TEST_CASE("zero snr conditional tau is the prior tau") {
  Rng rng(2);
  const auto exact = random_joint(rng, 2, 4);
  const auto d = exact.to_discrete();
  const SlotBinding binding({1, 1, 2});
  const double prior = to_double(tau_eval(binding, prior_moment_oracle(exact), 1));
  CHECK(expected_conditional_tau(d, ChannelSpec({0.0, 0.0}), rule(), binding, false) == doctest::Approx(prior).epsilon(1e-12));
}

TEST_CASE("argument errors") {
  const auto x = rademacher();
  CHECK_THROWS_AS(ChannelSpec({-0.1}), DomainError);
  CHECK_THROWS_AS(mi(x, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(mi(x, {1.0}, 8), DomainError);
  CHECK_THROWS_AS(mmse(x, ChannelSpec({1.0}), rule(), 2), DomainError);
  CHECK_THROWS_AS(expected_conditional_tau(x, ChannelSpec({1.0}), rule(), SlotBinding({1}), true), DomainError);
  const auto four = DiscreteJoint::make({{1, 1, 1, 1}}, {1.0});
  CHECK_THROWS_AS(mi(four, {1, 1, 1, 1}), SizeLimitError);
}

TEST_CASE("distribution validation") {
  using nlohmann::json;
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"support": [[0],[1]], "probs": [0.5, 0.6]})")), ValidationError);
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"support": [[0],[1]], "probs": [1.5, -0.5]})")), ValidationError);
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"support": [[0],[1, 2]], "probs": [0.5, 0.5]})")), ValidationError);
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"support": [[0]], "probs": [0.5, 0.5]})")), ValidationError);
  CHECK_THROWS_AS(distribution_from_json(json::parse(R"({"n": 2, "support": [[0]], "probs": [1]})")), ValidationError);
  try {
    distribution_from_json(json::parse(R"({"support": [[0],[1]], "probs": [0.5, 0.6]})"));
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).rfind("probs", 0) == 0);
  }

  const auto d = distribution_from_json(json::parse(R"({"support": [[0],[1],[1],[2]], "probs": [0.25, 0.25, 0.5, 0]})"));
  CHECK(d.size() == 2);
  CHECK(d.probs()[1] == doctest::Approx(0.75));
  CHECK(distribution_from_json(to_json(d)).support() == d.support());

  std::vector<std::vector<double>> many;
  std::vector<double> probs;
  for (int i = 0; i < 65; ++i) {
    many.push_back({static_cast<double>(i)});
    probs.push_back(1.0 / 65);
  }
  CHECK_THROWS_AS(DiscreteJoint::make(many, probs), SizeLimitError);
}
