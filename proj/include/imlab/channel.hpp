#pragma once

#include "imlab/distribution.hpp"
#include "imlab/moment_forms.hpp"
#include "imlab/quadrature.hpp"

#include <span>
#include <vector>

namespace imlab {

/// Per-channel SNRs for Y_i = sqrt(snr_i) X_i + Z_i.
class ChannelSpec {
public:
  ChannelSpec() = default;
  /// Throws DomainError on negative or non-finite entries.
  explicit ChannelSpec(std::vector<double> snr);

  const std::vector<double>& snr() const { return snr_; }
  int dims() const { return static_cast<int>(snr_.size()); }

private:
  std::vector<double> snr_;
};

inline constexpr int kMaxQuadratureDims = 3;
/// Tensor nodes whose product weight falls below this are skipped.
inline constexpr double kTensorWeightFloor = 1e-25;
/// Posterior terms more than this far below the largest log-weight are dropped.
inline constexpr double kLogFloor = -745.0;

/// I(X; Y) in nats. The output expectation runs atom-major over the shifted
/// tensor grid y = sqrt(snr) * x + z, with densities taken relative to the
/// standard Gaussian output measure and combined by log-sum-exp.
double mutual_information(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad);

/// E[X_B | Y = y] (or the conditional central moment when `centered`), with
/// B a multiset of 1-based channel ids. Empty B gives 1.
double posterior_moment(const DiscreteJoint& dist, const ChannelSpec& spec, std::span<const double> y,
                        const Block& block, bool centered = false);

/// E_Y[E[X_B | Y]] (or of the conditional central moment) over the output law.
double expected_posterior_moment(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad,
                                 const Block& block, bool centered = false);

/// E[(X_i - E[X_i | Y])^2] for 1-based channel `i`.
double mmse(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad, int i);

/// E_Y[tau(bound arguments | Y)] when `centered` is false, or
/// E_Y[tau-bar(centered bound arguments | Y)] when true. The centered form
/// needs at least two slots; its one-slot value is the empty sum.
double expected_conditional_tau(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad,
                                const SlotBinding& binding, bool centered);

struct CombinedChannels {
  DiscreteJoint dist;
  ChannelSpec spec;
};

/// Merges coordinates that carry the same signal. `groups` lists 1-based
/// coordinates, each exactly once; the reduced problem has one coordinate per
/// group with the group's SNRs summed. Throws DomainError when coordinates in
/// a group disagree on any atom.
CombinedChannels combine_channels(const DiscreteJoint& dist, const ChannelSpec& spec,
                                  const std::vector<std::vector<int>>& groups);

} // namespace imlab
