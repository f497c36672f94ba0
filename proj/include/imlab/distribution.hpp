#pragma once

#include "imlab/moment_forms.hpp"
#include "imlab/rational.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace imlab {

inline constexpr std::size_t kMaxSupportSize = 64;

/// Finitely supported law of the channel input vector. Coordinates are
/// addressed by 1-based variable ids elsewhere in the library.
class DiscreteJoint {
public:
  DiscreteJoint() = default;

  /// Validates shapes and probabilities (nonnegative, summing to one within
  /// 1e-12), drops zero-probability atoms and merges repeated points.
  static DiscreteJoint make(std::vector<std::vector<double>> support, std::vector<double> probs);

  int dims() const { return dims_; }
  std::size_t size() const { return probs_.size(); }
  const std::vector<std::vector<double>>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

private:
  int dims_ = 0;
  std::vector<std::vector<double>> support_;
  std::vector<double> probs_;
};

/// Rational-valued counterpart used where prior moments must be exact.
struct ExactJoint {
  int dims = 0;
  std::vector<std::vector<Rational>> support;
  std::vector<Rational> probs;

  DiscreteJoint to_discrete() const;
};

/// Product law of independent blocks; coordinates of `a` come first.
ExactJoint product(const ExactJoint& a, const ExactJoint& b);

/// New coordinates as rational linear combinations of the old ones:
/// y_r = sum_c rows[r][c] x_c.
ExactJoint linear_map(const ExactJoint& joint, const std::vector<std::vector<Rational>>& rows);

/// E[prod_{v in B} X_v] under the prior.
MomentOracle<double> prior_moment_oracle(const DiscreteJoint& joint);
MomentOracle<Rational> prior_moment_oracle(const ExactJoint& joint);

/// Shannon entropy in nats.
double entropy(const DiscreteJoint& joint);

/// Schema: {"n": 2, "support": [[1,1],...], "probs": [0.25,...]}.
/// ValidationError messages begin with the offending field.
DiscreteJoint distribution_from_json(const nlohmann::json& j);
DiscreteJoint load_distribution(const std::filesystem::path& path);
nlohmann::json to_json(const DiscreteJoint& joint);

} // namespace imlab
