#pragma once

#include "imlab/partition.hpp"
#include "imlab/rational.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace imlab {

/// Maps argument slots 1..n onto variable ids, so tau(X1, X1, X2) is the
/// binding {1, 1, 2}.
class SlotBinding {
public:
  SlotBinding() = default;
  explicit SlotBinding(std::vector<int> slot_to_variable);

  /// Slot list for derivative orders (k1, ..., kn): variable i repeated ki times.
  static SlotBinding from_multiplicities(std::span<const int> multiplicities);
  static SlotBinding distinct(int n);

  int slots() const { return static_cast<int>(map_.size()); }
  /// Variable bound to slot `slot` (1-based).
  int variable(int slot) const { return map_[static_cast<std::size_t>(slot - 1)]; }
  const std::vector<int>& map() const { return map_; }
  /// Sorted variable ids for a block of slot ids.
  Block apply(const Block& slots) const;

private:
  std::vector<int> map_;
};

/// E[X_B] for a sorted multiset B of variable ids. Oracles must return 1 for
/// the empty block. `Rational` oracles give exact arithmetic end to end.
template <class T>
using MomentOracle = std::function<T(std::span<const int> variables)>;

/// Product of moment blocks; blocks are sorted variable-id multisets and the
/// block list is in `block_less` order.
using Monomial = std::vector<Block>;

/// Orders monomials by their block-size profile (ascending), then by content.
struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

/// Exact rational combination of moment monomials.
class SymbolicExpansion {
public:
  using TermMap = std::map<Monomial, Rational, MonomialLess>;

  SymbolicExpansion() = default;
  explicit SymbolicExpansion(bool centered) : centered_(centered) {}

  /// Adds `coeff` to the canonicalized monomial; zero results are erased.
  void add(Monomial m, const Rational& coeff);

  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool centered() const { return centered_; }
  /// Coefficient of a monomial, zero when absent.
  Rational coefficient(Monomial m) const;

  template <class T>
  T evaluate(const MomentOracle<T>& oracle) const;

  /// Distinct blocks appearing in any monomial.
  std::vector<Block> blocks() const;

  /// Human-readable form. Single-variable expansions use M<k> for central and
  /// m<k> for raw moments, e.g. "M2^3 - 1/2*M3^2".
  std::string to_string() const;

  friend bool operator==(const SymbolicExpansion&, const SymbolicExpansion&) = default;

private:
  TermMap terms_;
  bool centered_ = false;
};

nlohmann::json to_json(const SymbolicExpansion& e);

/// (-1)^(k-1) (k-2)! / 2^s for a diverse partition with k blocks.
Rational tau_coefficient(const Partition& p);

/// Cached `enumerate_diverse` for the evaluators below.
const std::vector<Partition>& diverse_partitions(int n, int min_block_size);

/// tau (min_block_size = 1) or tau-bar (min_block_size = 2) of the bound
/// arguments, summed over diverse partitions of the doubled slot multiset.
/// tau-bar is meant for centered oracles; with n = 1 it is the empty sum.
template <class T>
T tau_eval(const SlotBinding& binding, const MomentOracle<T>& oracle, int min_block_size);

/// Same partition sum with blocks mapped through the binding and merged.
SymbolicExpansion tau_symbolic(const SlotBinding& binding, int min_block_size);

/// Joint cumulant of X1..Xn (oracle keyed by slot id) from the alternating
/// sum over set partitions of {1..n}.
template <class T>
T kappa_eval(int n, const MomentOracle<T>& oracle);

/// Joint cumulant by the subset recursion
///   m(S) = sum over T containing min(S) of kappa(T) m(S \ T),
/// solved for kappa(S). Does not enumerate partitions.
template <class T>
T kappa_recursion_oracle(int n, const MomentOracle<T>& oracle);

/// Univariate cumulants kappa_1..kappa_N from raw moments m_0 = 1, m_1..m_N via
/// m_n = sum_j C(n-1, j-1) kappa_j m_{n-j}.
template <class T>
std::vector<T> cumulants_from_moments(std::span<const T> raw_moments);

/// Independent standard Gaussians, one per distinct variable id.
MomentOracle<Rational> standard_gaussian_oracle();

/// Every id denotes the same variable with raw moments m_0, m_1, ...
template <class T>
MomentOracle<T> univariate_oracle(std::vector<T> raw_moments);

} // namespace imlab
