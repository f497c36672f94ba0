#include "imlab/distribution.hpp"

#include "imlab/errors.hpp"

#include <cmath>
#include <fstream>
#include <map>

namespace imlab {

DiscreteJoint DiscreteJoint::make(std::vector<std::vector<double>> support, std::vector<double> probs) {
  if (support.size() != probs.size()) throw ValidationError("probs: length differs from support");
  if (support.empty()) throw ValidationError("support: at least one atom is required");
  const std::size_t dims = support.front().size();
  if (dims == 0) throw ValidationError("support: points must have at least one coordinate");
  double total = 0.0;
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (support[a].size() != dims) throw ValidationError("support: inconsistent point dimension");
    for (double x : support[a])
      if (!std::isfinite(x)) throw ValidationError("support: coordinates must be finite");
    if (!(probs[a] >= 0.0) || !std::isfinite(probs[a])) throw ValidationError("probs: entries must be nonnegative");
    total += probs[a];
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("probs: must sum to 1 within 1e-12");

  // Merge repeated points, keep first-seen order.
  std::map<std::vector<double>, std::size_t> index;
  DiscreteJoint out;
  out.dims_ = static_cast<int>(dims);
  for (std::size_t a = 0; a < support.size(); ++a) {
    if (probs[a] == 0.0) continue;
    auto [it, inserted] = index.try_emplace(support[a], out.probs_.size());
    if (inserted) {
      out.support_.push_back(std::move(support[a]));
      out.probs_.push_back(probs[a]);
    } else {
      out.probs_[it->second] += probs[a];
    }
  }
  if (out.probs_.size() > kMaxSupportSize) throw SizeLimitError("support: at most 64 atoms are supported");
  return out;
}

DiscreteJoint ExactJoint::to_discrete() const {
  std::vector<std::vector<double>> pts;
  std::vector<double> p;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    std::vector<double> x;
    for (const auto& c : support[a]) x.push_back(to_double(c));
    pts.push_back(std::move(x));
    p.push_back(to_double(probs[a]));
  }
  return DiscreteJoint::make(std::move(pts), std::move(p));
}

ExactJoint product(const ExactJoint& a, const ExactJoint& b) {
  ExactJoint out;
  out.dims = a.dims + b.dims;
  for (std::size_t i = 0; i < a.probs.size(); ++i) {
    for (std::size_t j = 0; j < b.probs.size(); ++j) {
      auto x = a.support[i];
      x.insert(x.end(), b.support[j].begin(), b.support[j].end());
      out.support.push_back(std::move(x));
      out.probs.push_back(a.probs[i] * b.probs[j]);
    }
  }
  return out;
}

ExactJoint linear_map(const ExactJoint& joint, const std::vector<std::vector<Rational>>& rows) {
  ExactJoint out;
  out.dims = static_cast<int>(rows.size());
  out.probs = joint.probs;
  for (const auto& x : joint.support) {
    std::vector<Rational> y;
    for (const auto& row : rows) {
      if (row.size() != x.size()) throw DomainError("linear_map: row length differs from dimension");
      Rational acc = 0;
      for (std::size_t c = 0; c < x.size(); ++c) acc += row[c] * x[c];
      y.push_back(std::move(acc));
    }
    out.support.push_back(std::move(y));
  }
  return out;
}

namespace {

template <class Point, class Prob, class T>
T block_moment(const std::vector<Point>& support, const std::vector<Prob>& probs, int dims, std::span<const int> vars) {
  T total = 0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    T prod = probs[a];
    for (int v : vars) {
      if (v < 1 || v > dims) throw DomainError("moment oracle: variable id " + std::to_string(v) + " outside 1.." + std::to_string(dims));
      prod *= support[a][static_cast<std::size_t>(v - 1)];
    }
    total += prod;
  }
  return total;
}

} // namespace

MomentOracle<double> prior_moment_oracle(const DiscreteJoint& joint) {
  return [joint](std::span<const int> vars) {
    return block_moment<std::vector<double>, double, double>(joint.support(), joint.probs(), joint.dims(), vars);
  };
}

MomentOracle<Rational> prior_moment_oracle(const ExactJoint& joint) {
  return [joint](std::span<const int> vars) {
    return block_moment<std::vector<Rational>, Rational, Rational>(joint.support, joint.probs, joint.dims, vars);
  };
}

double entropy(const DiscreteJoint& joint) {
  double h = 0.0;
  for (double p : joint.probs()) h -= p * std::log(p);
  return h;
}

DiscreteJoint distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("distribution: expected a JSON object");
  if (!j.contains("support") || !j["support"].is_array()) throw ValidationError("support: missing or not an array");
  if (!j.contains("probs") || !j["probs"].is_array()) throw ValidationError("probs: missing or not an array");
  std::vector<std::vector<double>> support;
  for (const auto& pt : j["support"]) {
    if (!pt.is_array()) throw ValidationError("support: each point must be an array of numbers");
    std::vector<double> x;
    for (const auto& c : pt) {
      if (!c.is_number()) throw ValidationError("support: coordinates must be numbers");
      x.push_back(c.get<double>());
    }
    support.push_back(std::move(x));
  }
  std::vector<double> probs;
  for (const auto& p : j["probs"]) {
    if (!p.is_number()) throw ValidationError("probs: entries must be numbers");
    probs.push_back(p.get<double>());
  }
  DiscreteJoint d = DiscreteJoint::make(std::move(support), std::move(probs));
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || j["n"].get<int>() != d.dims())
      throw ValidationError("n: does not match the point dimension");
  }
  return d;
}

DiscreteJoint load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("dist: cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("dist: ") + e.what());
  }
  return distribution_from_json(j);
}

nlohmann::json to_json(const DiscreteJoint& joint) {
  return {{"n", joint.dims()}, {"support", joint.support()}, {"probs", joint.probs()}};
}

} // namespace imlab
