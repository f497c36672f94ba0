#pragma once

#include "imlab/channel.hpp"
#include "imlab/finite_difference.hpp"
#include "imlab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace imlab {

/// Maximum |gap| by total derivative order, plus the agreement required
/// between the centered and uncentered formula paths.
struct ToleranceSchedule {
  double order1 = 1e-8;
  double order2 = 1e-7;
  double order3 = 1e-5;
  double order4 = 1e-3;
  double paths = 1e-11;
  double lemma1_quadratic = 1e-9;
  double lemma1_independence = 1e-10;
  double lemma2 = 1e-10;

  double for_order(int total_order) const;
};

struct VerifyConfig {
  int quad_order = kDefaultQuadratureOrder;
  double fd_step = 0.2;
  int richardson_levels = 3;
  ToleranceSchedule tol;
};

/// One adjudicated comparison. `oracle` is the independent side (finite
/// difference, analytic value, recursion, or reduced channel); `formula` is
/// the side under test. `formula_alt` carries a second algebraic route when
/// one exists (uncentered tau next to centered tau-bar).
struct CaseRecord {
  std::string suite;
  std::string name;
  std::vector<int> orders;
  std::vector<double> point;
  std::string oracle_kind;
  double oracle = 0.0;
  double oracle_error = 0.0;
  double formula = 0.0;
  std::optional<double> formula_alt;
  std::optional<std::string> oracle_exact;
  std::optional<std::string> formula_exact;
  double gap = 0.0;
  double rel_gap = 0.0;
  std::optional<double> alt_gap;
  double tol = 0.0;
  std::optional<double> alt_tol;
  bool pass = false;
};

/// Which normalization of the first derivative the data supports.
struct Adjudication {
  double snr = 0.0;
  double fd_first_derivative = 0.0;
  double fd_error = 0.0;
  double mmse = 0.0;
  double gap_half_mmse = 0.0;
  double rel_gap_full_mmse = 0.0;
  std::string verdict;  // "half_mmse", "full_mmse" or "undecided"
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::uint64_t seed = 0;
  VerifyConfig config;
  std::vector<CaseRecord> cases;
  std::optional<Adjudication> adjudication;

  bool passed() const;
  void append(const VerificationReport& other);
};

nlohmann::json to_json(const VerificationReport& report);
std::string to_csv(const VerificationReport& report);

/// Seeded generator for reproducible random inputs. Uses only mt19937_64
/// output so streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [lo, hi].
  int uniform(int lo, int hi);

private:
  std::mt19937_64 engine_;
};

/// Random law on {-2,...,2}^dims with the given number of distinct atoms and
/// probabilities k/64 (every k >= 1).
ExactJoint random_joint(Rng& rng, int dims, int atoms);

/// Standard test inputs.
DiscreteJoint rademacher();
DiscreteJoint three_atom_scalar();
DiscreteJoint correlated_pair();

/// Finite-difference derivative of I at `point` against the tau formulas:
/// mmse / 2 at order 1, E[tau-bar(centered)] above. `formula_alt` is the
/// uncentered tau path and `alt_gap` its distance from the centered path; at
/// order 1 those are E[tau(X_i | Y) + E[X_i^2 | Y] / 2] and E[Var(X_i | Y)] / 2.
VerificationReport verify_theorem1(const DiscreteJoint& dist, const std::vector<double>& point,
                                   const std::vector<int>& orders, const VerifyConfig& config,
                                   const std::string& name = "theorem1");

/// fd of I' for Rademacher at `snr` against mmse / 2 and mmse.
Adjudication adjudicate_first_derivative(double snr, const VerifyConfig& config);

/// Multiquadratic identity and independence vanishing on random joints,
/// evaluated with exact prior moments.
VerificationReport verify_lemma1(std::uint64_t seed, int trials, const VerifyConfig& config = {});

/// tau with k identical standard-Gaussian slots against the k-th derivative of
/// log(1 + snr) / 2 at zero, exactly; k = 1 adds E[X^2] / 2.
VerificationReport verify_gaussian_zero(int max_order);

/// Mutual information of a scalar signal copied onto several channels
/// against the single channel with the summed SNR.
VerificationReport verify_lemma2(const DiscreteJoint& scalar, const std::vector<std::vector<double>>& splits,
                                 const VerifyConfig& config = {});

/// Partition-sum cumulants against the subset recursion, exactly, on random
/// rational moment sets; Gaussian cumulants above order two vanish.
VerificationReport verify_cumulants(std::uint64_t seed, int sets, int max_n = 6);

/// The fixed Theorem 1 case list (including the seeded random triple).
VerificationReport verify_theorem1_suite(std::uint64_t seed, const VerifyConfig& config);

/// suite: theorem1 | lemma1 | lemma2 | gaussian | cumulants | all.
VerificationReport run_suite(const std::string& suite, std::uint64_t seed, const VerifyConfig& config);

} // namespace imlab
