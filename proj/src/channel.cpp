#include "imlab/channel.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace imlab {

ChannelSpec::ChannelSpec(std::vector<double> snr) : snr_(std::move(snr)) {
  for (double v : snr_)
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("snr: entries must be finite and nonnegative");
}

namespace {

// Neumaier compensated sum.
class CompensatedSum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) comp_ += (sum_ - t) + x;
    else comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

void check_problem(const DiscreteJoint& dist, const ChannelSpec& spec) {
  if (dist.dims() != spec.dims())
    throw DomainError("dimension mismatch: distribution has " + std::to_string(dist.dims()) + " coordinates, snr has " +
                      std::to_string(spec.dims()));
  if (dist.dims() < 1 || dist.dims() > kMaxQuadratureDims)
    throw SizeLimitError("quadrature paths support 1..3 channels");
}

// Shifted tensor grid over the output law. For atom a and node z, the output
// is y = sqrt(snr) * x_a + z and the log posterior weight of atom b is, up to
// a constant in b,
//   s_b = log p_b + sum_i [ sqrt(snr_i) z_i d_i - snr_i d_i^2 / 2 ],  d = x_b - x_a.
// Then log p(y | x_a) - log p_Y(y) = -logsumexp_b s_b.
class OutputGrid {
public:
  OutputGrid(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad)
      : dist_(dist), dims_(dist.dims()), atoms_(dist.size()), order_(quad.order) {
    check_problem(dist, spec);
    if (quad.order < kMinQuadratureOrder) throw DomainError("quadrature order must be at least 16");

    log_p_.resize(atoms_);
    for (std::size_t b = 0; b < atoms_; ++b) log_p_[b] = std::log(dist.probs()[b]);

    const std::size_t q = static_cast<std::size_t>(order_);
    shift_.assign(static_cast<std::size_t>(dims_) * atoms_ * atoms_ * q, 0.0);
    for (int i = 0; i < dims_; ++i) {
      const double lam = spec.snr()[static_cast<std::size_t>(i)];
      const double root = std::sqrt(lam);
      for (std::size_t a = 0; a < atoms_; ++a)
        for (std::size_t b = 0; b < atoms_; ++b) {
          const double d = dist.support()[b][static_cast<std::size_t>(i)] - dist.support()[a][static_cast<std::size_t>(i)];
          for (std::size_t j = 0; j < q; ++j)
            shift_[index(i, a, b, j)] = root * quad.nodes[j] * d - 0.5 * lam * d * d;
        }
    }

    // Pruned tensor grid in lexicographic order.
    std::array<std::size_t, kMaxQuadratureDims> idx{};
    const std::size_t total = static_cast<std::size_t>(std::pow(static_cast<double>(q), dims_));
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      double w = 1.0;
      for (int i = dims_ - 1; i >= 0; --i) {
        idx[static_cast<std::size_t>(i)] = rem % q;
        rem /= q;
      }
      for (int i = 0; i < dims_; ++i) w *= quad.weights[idx[static_cast<std::size_t>(i)]];
      if (w < kTensorWeightFloor) continue;
      nodes_.push_back(idx);
      weights_.push_back(w);
    }
  }

  std::size_t atoms() const { return atoms_; }
  int dims() const { return dims_; }

  // visit(a, node_index, weight p_a * w, log-weights s, logsumexp of s)
  template <class F>
  void for_each(F&& visit) const {
    std::vector<double> s(atoms_);
    for (std::size_t a = 0; a < atoms_; ++a) {
      const double pa = dist_.probs()[a];
      for (std::size_t g = 0; g < nodes_.size(); ++g) {
        double mx = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < atoms_; ++b) {
          double v = log_p_[b];
          for (int i = 0; i < dims_; ++i) v += shift_[index(i, a, b, nodes_[g][static_cast<std::size_t>(i)])];
          s[b] = v;
          mx = std::max(mx, v);
        }
        if (!std::isfinite(mx)) throw QuadratureUnderflow("posterior weights underflow at a quadrature node");
        double acc = 0.0;
        for (std::size_t b = 0; b < atoms_; ++b)
          if (s[b] - mx >= kLogFloor) acc += std::exp(s[b] - mx);
        visit(a, g, pa * weights_[g], std::span<const double>(s), mx + std::log(acc));
      }
    }
  }

  // Normalized posterior weights from log-weights.
  static void posterior(std::span<const double> s, double lse, std::span<double> out) {
    for (std::size_t b = 0; b < s.size(); ++b) out[b] = (s[b] - lse >= kLogFloor) ? std::exp(s[b] - lse) : 0.0;
  }

private:
  std::size_t index(int i, std::size_t a, std::size_t b, std::size_t j) const {
    return ((static_cast<std::size_t>(i) * atoms_ + a) * atoms_ + b) * static_cast<std::size_t>(order_) + j;
  }

  const DiscreteJoint& dist_;
  int dims_;
  std::size_t atoms_;
  int order_;
  std::vector<double> log_p_;
  std::vector<double> shift_;
  std::vector<std::array<std::size_t, kMaxQuadratureDims>> nodes_;
  std::vector<double> weights_;
};

void check_channel_index(const DiscreteJoint& dist, int i) {
  if (i < 1 || i > dist.dims()) throw DomainError("channel index " + std::to_string(i) + " outside 1.." + std::to_string(dist.dims()));
}

} // namespace

double mutual_information(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad) {
  OutputGrid grid(dist, spec, quad);
  CompensatedSum total;
  grid.for_each([&](std::size_t, std::size_t, double weight, std::span<const double>, double lse) {
    total.add(-weight * lse);
  });
  return total.value();
}

double posterior_moment(const DiscreteJoint& dist, const ChannelSpec& spec, std::span<const double> y,
                        const Block& block, bool centered) {
  if (dist.dims() != spec.dims() || static_cast<int>(y.size()) != dist.dims())
    throw DomainError("posterior_moment: dimension mismatch");
  for (int v : block) check_channel_index(dist, v);
  if (block.empty()) return 1.0;

  const std::size_t m = dist.size();
  std::vector<double> s(m);
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < m; ++b) {
    double v = std::log(dist.probs()[b]);
    for (int i = 0; i < dist.dims(); ++i) {
      const double lam = spec.snr()[static_cast<std::size_t>(i)];
      const double x = dist.support()[b][static_cast<std::size_t>(i)];
      v += std::sqrt(lam) * y[static_cast<std::size_t>(i)] * x - 0.5 * lam * x * x;
    }
    s[b] = v;
    mx = std::max(mx, v);
  }
  if (!std::isfinite(mx)) throw QuadratureUnderflow("posterior_moment: every posterior weight underflows");
  double norm = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    s[b] = (s[b] - mx >= kLogFloor) ? std::exp(s[b] - mx) : 0.0;
    norm += s[b];
  }
  std::vector<double> mean(static_cast<std::size_t>(dist.dims()), 0.0);
  if (centered)
    for (std::size_t b = 0; b < m; ++b)
      for (int i = 0; i < dist.dims(); ++i) mean[static_cast<std::size_t>(i)] += s[b] / norm * dist.support()[b][static_cast<std::size_t>(i)];
  double total = 0.0;
  for (std::size_t b = 0; b < m; ++b) {
    double prod = s[b] / norm;
    for (int v : block) prod *= dist.support()[b][static_cast<std::size_t>(v - 1)] - mean[static_cast<std::size_t>(v - 1)];
    total += prod;
  }
  return total;
}

double expected_posterior_moment(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad,
                                 const Block& block, bool centered) {
  for (int v : block) check_channel_index(dist, v);
  OutputGrid grid(dist, spec, quad);
  std::vector<double> post(grid.atoms());
  std::vector<double> mean(static_cast<std::size_t>(dist.dims()), 0.0);
  CompensatedSum total;
  grid.for_each([&](std::size_t, std::size_t, double weight, std::span<const double> s, double lse) {
    OutputGrid::posterior(s, lse, post);
    if (centered) {
      std::fill(mean.begin(), mean.end(), 0.0);
      for (std::size_t b = 0; b < post.size(); ++b)
        for (int i = 0; i < dist.dims(); ++i) mean[static_cast<std::size_t>(i)] += post[b] * dist.support()[b][static_cast<std::size_t>(i)];
    }
    double acc = 0.0;
    for (std::size_t b = 0; b < post.size(); ++b) {
      double prod = post[b];
      for (int v : block) prod *= dist.support()[b][static_cast<std::size_t>(v - 1)] - mean[static_cast<std::size_t>(v - 1)];
      acc += prod;
    }
    total.add(weight * acc);
  });
  return total.value();
}

double mmse(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad, int i) {
  check_channel_index(dist, i);
  OutputGrid grid(dist, spec, quad);
  const std::size_t c = static_cast<std::size_t>(i - 1);
  std::vector<double> post(grid.atoms());
  CompensatedSum total;
  grid.for_each([&](std::size_t a, std::size_t, double weight, std::span<const double> s, double lse) {
    OutputGrid::posterior(s, lse, post);
    double mu = 0.0;
    for (std::size_t b = 0; b < post.size(); ++b) mu += post[b] * dist.support()[b][c];
    const double err = dist.support()[a][c] - mu;
    total.add(weight * err * err);
  });
  return total.value();
}

double expected_conditional_tau(const DiscreteJoint& dist, const ChannelSpec& spec, const QuadratureRule& quad,
                                const SlotBinding& binding, bool centered) {
  if (binding.slots() < 1) throw DomainError("expected_conditional_tau: at least one slot is required");
  if (centered && binding.slots() < 2)
    throw DomainError("expected_conditional_tau: the centered form needs total order >= 2; use mmse for order 1");
  for (int v : binding.map()) check_channel_index(dist, v);

  const SymbolicExpansion expansion = tau_symbolic(binding, centered ? 2 : 1);
  const std::vector<Block> blocks = expansion.blocks();
  // Monomials as (coefficient, block indices).
  std::vector<std::pair<double, std::vector<std::size_t>>> terms;
  for (const auto& [mono, coeff] : expansion.terms()) {
    std::vector<std::size_t> ids;
    for (const auto& b : mono)
      ids.push_back(static_cast<std::size_t>(std::lower_bound(blocks.begin(), blocks.end(), b) - blocks.begin()));
    terms.emplace_back(to_double(coeff), std::move(ids));
  }

  OutputGrid grid(dist, spec, quad);
  const int dims = dist.dims();
  std::vector<double> post(grid.atoms());
  std::vector<double> mean(static_cast<std::size_t>(dims));
  std::vector<double> value(blocks.size());
  CompensatedSum total;
  grid.for_each([&](std::size_t, std::size_t, double weight, std::span<const double> s, double lse) {
    OutputGrid::posterior(s, lse, post);
    std::fill(mean.begin(), mean.end(), 0.0);
    if (centered)
      for (std::size_t b = 0; b < post.size(); ++b)
        for (int i = 0; i < dims; ++i) mean[static_cast<std::size_t>(i)] += post[b] * dist.support()[b][static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < blocks.size(); ++k) {
      double acc = 0.0;
      for (std::size_t b = 0; b < post.size(); ++b) {
        double prod = post[b];
        for (int v : blocks[k]) prod *= dist.support()[b][static_cast<std::size_t>(v - 1)] - mean[static_cast<std::size_t>(v - 1)];
        acc += prod;
      }
      value[k] = acc;
    }
    double tau = 0.0;
    for (const auto& [coeff, ids] : terms) {
      double prod = coeff;
      for (std::size_t id : ids) prod *= value[id];
      tau += prod;
    }
    total.add(weight * tau);
  });
  return total.value();
}

CombinedChannels combine_channels(const DiscreteJoint& dist, const ChannelSpec& spec,
                                  const std::vector<std::vector<int>>& groups) {
  if (dist.dims() != spec.dims()) throw DomainError("combine_channels: dimension mismatch");
  std::vector<int> owner(static_cast<std::size_t>(dist.dims()), -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw DomainError("combine_channels: empty group");
    for (int c : groups[g]) {
      check_channel_index(dist, c);
      if (owner[static_cast<std::size_t>(c - 1)] >= 0) throw DomainError("combine_channels: coordinate listed twice");
      owner[static_cast<std::size_t>(c - 1)] = static_cast<int>(g);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw DomainError("combine_channels: every coordinate must belong to a group");

  std::vector<std::vector<double>> support;
  for (const auto& x : dist.support()) {
    std::vector<double> reduced;
    for (const auto& group : groups) {
      const double lead = x[static_cast<std::size_t>(group.front() - 1)];
      for (int c : group)
        if (x[static_cast<std::size_t>(c - 1)] != lead)
          throw DomainError("combine_channels: coordinates " + std::to_string(group.front()) + " and " + std::to_string(c) +
                            " carry different signals");
      reduced.push_back(lead);
    }
    support.push_back(std::move(reduced));
  }
  std::vector<double> snr;
  for (const auto& group : groups) {
    double sum = 0.0;
    for (int c : group) sum += spec.snr()[static_cast<std::size_t>(c - 1)];
    snr.push_back(sum);
  }
  return {DiscreteJoint::make(std::move(support), dist.probs()), ChannelSpec(std::move(snr))};
}

} // namespace imlab
