#include "imlab/moment_forms.hpp"

#include "imlab/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <utility>

namespace imlab {

SlotBinding::SlotBinding(std::vector<int> slot_to_variable) : map_(std::move(slot_to_variable)) {
  for (int v : map_)
    if (v < 1) throw DomainError("slot binding: variable ids are 1-based");
}

SlotBinding SlotBinding::from_multiplicities(std::span<const int> multiplicities) {
  std::vector<int> map;
  for (std::size_t i = 0; i < multiplicities.size(); ++i) {
    if (multiplicities[i] < 0) throw DomainError("slot binding: negative multiplicity");
    map.insert(map.end(), static_cast<std::size_t>(multiplicities[i]), static_cast<int>(i) + 1);
  }
  return SlotBinding(std::move(map));
}

SlotBinding SlotBinding::distinct(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) map[static_cast<std::size_t>(i)] = i + 1;
  return SlotBinding(std::move(map));
}

Block SlotBinding::apply(const Block& slots) const {
  Block out;
  out.reserve(slots.size());
  for (int s : slots) out.push_back(variable(s));
  std::sort(out.begin(), out.end());
  return out;
}

bool MonomialLess::operator()(const Monomial& a, const Monomial& b) const {
  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    if (a[i].size() != b[i].size()) return a[i].size() < b[i].size();
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

namespace {

void canonicalize(Monomial& m) {
  for (auto& b : m) std::sort(b.begin(), b.end());
  std::sort(m.begin(), m.end(), block_less);
}

} // namespace

void SymbolicExpansion::add(Monomial m, const Rational& coeff) {
  if (coeff == 0) return;
  canonicalize(m);
  auto [it, inserted] = terms_.try_emplace(std::move(m), coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational SymbolicExpansion::coefficient(Monomial m) const {
  canonicalize(m);
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Block> SymbolicExpansion::blocks() const {
  std::set<Block> seen;
  for (const auto& [m, c] : terms_)
    for (const auto& b : m) seen.insert(b);
  return {seen.begin(), seen.end()};
}

template <class T>
T SymbolicExpansion::evaluate(const MomentOracle<T>& oracle) const {
  T total = 0;
  for (const auto& [m, c] : terms_) {
    T prod = 1;
    for (const auto& b : m) prod *= oracle(b);
    if constexpr (std::is_same_v<T, Rational>) total += c * prod;
    else total += to_double(c) * prod;
  }
  return total;
}

std::string SymbolicExpansion::to_string() const {
  if (terms_.empty()) return "0";
  std::set<int> vars;
  for (const auto& [m, c] : terms_)
    for (const auto& b : m) vars.insert(b.begin(), b.end());
  const bool univariate = vars.size() == 1;

  auto block_name = [&](const Block& b) {
    std::ostringstream s;
    if (univariate) {
      s << (centered_ ? 'M' : 'm') << b.size();
    } else {
      s << (centered_ ? "Ebar[" : "E[");
      for (std::size_t i = 0; i < b.size(); ++i) s << (i ? "*" : "") << 'X' << b[i];
      s << ']';
    }
    return s.str();
  };

  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) out << (c < 0 ? "-" : "");
    else out << (c < 0 ? " - " : " + ");
    first = false;
    if (mag != 1) out << imlab::to_string(mag) << '*';
    for (std::size_t i = 0; i < m.size();) {
      std::size_t j = i;
      while (j < m.size() && m[j] == m[i]) ++j;
      if (i) out << '*';
      out << block_name(m[i]);
      if (j - i > 1) out << '^' << (j - i);
      i = j;
    }
  }
  return out.str();
}

nlohmann::json to_json(const SymbolicExpansion& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [m, c] : e.terms()) terms.push_back({{"blocks", m}, {"coeff", to_string(c)}});
  return {{"terms", std::move(terms)}, {"centered", e.centered()}};
}

Rational tau_coefficient(const Partition& p) {
  const int k = p.k();
  Rational c = factorial(k - 2);
  if ((k - 1) % 2 != 0) c = -c;
  for (int i = 0; i < p.s(); ++i) c /= 2;
  return c;
}

const std::vector<Partition>& diverse_partitions(int n, int min_block_size) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<Partition>> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(n, min_block_size);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, enumerate_diverse(n, min_block_size)).first;
  return it->second;
}

template <class T>
T tau_eval(const SlotBinding& binding, const MomentOracle<T>& oracle, int min_block_size) {
  const int n = binding.slots();
  if (n < 1) throw DomainError("tau_eval: at least one slot is required");
  T total = 0;
  for (const auto& p : diverse_partitions(n, min_block_size)) {
    T prod = 1;
    for (const auto& b : p.blocks()) prod *= oracle(binding.apply(b));
    Rational c = tau_coefficient(p);
    if constexpr (std::is_same_v<T, Rational>) total += c * prod;
    else total += to_double(c) * prod;
  }
  return total;
}

SymbolicExpansion tau_symbolic(const SlotBinding& binding, int min_block_size) {
  const int n = binding.slots();
  if (n < 1) throw DomainError("tau_symbolic: at least one slot is required");
  SymbolicExpansion out(min_block_size == 2);
  for (const auto& p : diverse_partitions(n, min_block_size)) {
    Monomial m;
    for (const auto& b : p.blocks()) m.push_back(binding.apply(b));
    out.add(std::move(m), tau_coefficient(p));
  }
  return out;
}

template <class T>
T kappa_eval(int n, const MomentOracle<T>& oracle) {
  if (n < 1) throw DomainError("kappa_eval: n must be positive");
  T total = 0;
  for_each_set_partition(n, [&](std::span<const int> labels) {
    const int k = 1 + *std::max_element(labels.begin(), labels.end());
    std::vector<Block> blocks(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])].push_back(i + 1);
    T prod = 1;
    for (const auto& b : blocks) prod *= oracle(b);
    Rational c = factorial(k - 1);
    if ((k - 1) % 2 != 0) c = -c;
    if constexpr (std::is_same_v<T, Rational>) total += c * prod;
    else total += to_double(c) * prod;
  });
  return total;
}

template <class T>
T kappa_recursion_oracle(int n, const MomentOracle<T>& oracle) {
  if (n < 1 || n > 20) throw SizeLimitError("kappa_recursion_oracle: n must be in 1..20");
  const unsigned full = (1u << n) - 1u;
  std::vector<T> moment(full + 1u);
  std::vector<T> kappa(full + 1u);
  for (unsigned s = 1; s <= full; ++s) {
    Block ids;
    for (int i = 0; i < n; ++i)
      if (s & (1u << i)) ids.push_back(i + 1);
    moment[s] = oracle(ids);
  }
  moment[0] = 1;
  // Subsets in increasing numeric order: every proper subset of s is smaller.
  for (unsigned s = 1; s <= full; ++s) {
    const unsigned low = s & (~s + 1u);
    const unsigned rest = s ^ low;
    T acc = moment[s];
    // Iterate r over subsets of rest; t = r | low ranges over subsets of s holding low.
    for (unsigned r = rest;; r = (r - 1u) & rest) {
      const unsigned t = r | low;
      if (t != s) acc -= kappa[t] * moment[s ^ t];
      if (r == 0) break;
    }
    kappa[s] = acc;
  }
  return kappa[full];
}

template <class T>
std::vector<T> cumulants_from_moments(std::span<const T> raw_moments) {
  if (raw_moments.empty() || raw_moments[0] != T(1))
    throw DomainError("cumulants_from_moments: m_0 must be 1");
  const int top = static_cast<int>(raw_moments.size()) - 1;
  std::vector<T> kappa(static_cast<std::size_t>(top) + 1, T(0));
  for (int n = 1; n <= top; ++n) {
    T acc = raw_moments[static_cast<std::size_t>(n)];
    for (int j = 1; j < n; ++j) {
      T c;
      if constexpr (std::is_same_v<T, Rational>) c = binomial(n - 1, j - 1);
      else c = to_double(binomial(n - 1, j - 1));
      acc -= c * kappa[static_cast<std::size_t>(j)] * raw_moments[static_cast<std::size_t>(n - j)];
    }
    kappa[static_cast<std::size_t>(n)] = acc;
  }
  kappa.erase(kappa.begin());
  return kappa;
}

MomentOracle<Rational> standard_gaussian_oracle() {
  return [](std::span<const int> vars) -> Rational {
    Rational prod = 1;
    for (std::size_t i = 0; i < vars.size();) {
      std::size_t j = i;
      while (j < vars.size() && vars[j] == vars[i]) ++j;
      const int k = static_cast<int>(j - i);
      if (k % 2 != 0) return 0;
      for (int odd = k - 1; odd > 1; odd -= 2) prod *= odd;
      i = j;
    }
    return prod;
  };
}

template <class T>
MomentOracle<T> univariate_oracle(std::vector<T> raw_moments) {
  return [m = std::move(raw_moments)](std::span<const int> vars) -> T {
    if (vars.size() >= m.size()) throw DomainError("univariate oracle: moment order " + std::to_string(vars.size()) + " not supplied");
    return m[vars.size()];
  };
}

template double SymbolicExpansion::evaluate<double>(const MomentOracle<double>&) const;
template Rational SymbolicExpansion::evaluate<Rational>(const MomentOracle<Rational>&) const;
template double tau_eval<double>(const SlotBinding&, const MomentOracle<double>&, int);
template Rational tau_eval<Rational>(const SlotBinding&, const MomentOracle<Rational>&, int);
template double kappa_eval<double>(int, const MomentOracle<double>&);
template Rational kappa_eval<Rational>(int, const MomentOracle<Rational>&);
template double kappa_recursion_oracle<double>(int, const MomentOracle<double>&);
template Rational kappa_recursion_oracle<Rational>(int, const MomentOracle<Rational>&);
template std::vector<double> cumulants_from_moments<double>(std::span<const double>);
template std::vector<Rational> cumulants_from_moments<Rational>(std::span<const Rational>);
template MomentOracle<double> univariate_oracle<double>(std::vector<double>);
template MomentOracle<Rational> univariate_oracle<Rational>(std::vector<Rational>);

} // namespace imlab
