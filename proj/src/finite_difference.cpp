#include "imlab/finite_difference.hpp"

#include "imlab/errors.hpp"
#include "imlab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace imlab {

int DerivativeRequest::total_order() const {
  int t = 0;
  for (int k : orders) t += k;
  return t;
}

void DerivativeRequest::validate() const {
  if (orders.size() != point.size()) throw DomainError("derivative request: orders and point differ in length");
  for (int k : orders)
    if (k < 0) throw DomainError("derivative request: negative order");
  if (total_order() < 1) throw DomainError("derivative request: total order must be at least 1");
  if (method != DerivativeMethod::formula && total_order() > 4)
    throw DomainError("derivative request: finite differences support total order 1..4");
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (!(point[i] >= 0.0) || point[i] > 4.0) throw DomainError("derivative request: snr entries must lie in [0, 4]");
    if (orders[i] > 0 && point[i] == 0.0) throw DomainError("derivative request: differentiated snr must be positive");
  }
}

int stencil_half_width(int derivative, int accuracy) {
  if (derivative < 1 || accuracy < 2 || accuracy % 2 != 0) throw DomainError("stencil: bad derivative or accuracy");
  return (derivative + 1) / 2 - 1 + accuracy / 2;
}

std::vector<double> central_stencil(int derivative, int accuracy) {
  const int m = stencil_half_width(derivative, accuracy);
  const int npts = 2 * m + 1;
  // Fornberg's recursion for weights at x0 = 0 on grid points -m..m.
  std::vector<Rational> x(static_cast<std::size_t>(npts));
  for (int i = 0; i < npts; ++i) x[static_cast<std::size_t>(i)] = i - m;
  const int M = derivative;
  // c[k][j]: weight of point j for derivative k using the first i+1 points.
  std::vector<std::vector<Rational>> c(static_cast<std::size_t>(M) + 1, std::vector<Rational>(static_cast<std::size_t>(npts), 0));
  c[0][0] = 1;
  Rational c1 = 1;
  auto at = [&](int k, int j) -> Rational& { return c[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)]; };
  auto xs = [&](int j) -> const Rational& { return x[static_cast<std::size_t>(j)]; };
  for (int i = 1; i < npts; ++i) {
    const int mn = std::min(i, M);
    Rational c2 = 1;
    for (int j = 0; j < i; ++j) c2 *= xs(i) - xs(j);
    // Column i comes from the not yet updated column i-1.
    for (int k = mn; k >= 0; --k)
      at(k, i) = c1 / c2 * ((k > 0 ? k * at(k - 1, i - 1) : Rational(0)) - xs(i - 1) * at(k, i - 1));
    for (int j = 0; j < i; ++j) {
      const Rational c3 = xs(i) - xs(j);
      for (int k = mn; k >= 0; --k) at(k, j) = (xs(i) * at(k, j) - (k > 0 ? k * at(k - 1, j) : Rational(0))) / c3;
    }
    c1 = c2;
  }
  std::vector<double> out;
  for (const auto& w : c[static_cast<std::size_t>(M)]) out.push_back(to_double(w));
  return out;
}

double fit_fd_step(const DerivativeRequest& request, double max_step, double lower_bound) {
  request.validate();
  double h = max_step;
  for (std::size_t i = 0; i < request.orders.size(); ++i) {
    if (request.orders[i] == 0) continue;
    const double room = request.point[i] - lower_bound;
    if (room <= 0.0) throw DomainError("fit_fd_step: point sits on the domain boundary");
    h = std::min(h, room / stencil_half_width(request.orders[i]));
  }
  return h;
}

FdResult fd_partial(const VectorFunction& f, const DerivativeRequest& request, double step, int richardson_levels,
                    double lower_bound) {
  request.validate();
  if (!(step > 0.0)) throw DomainError("fd_partial: step must be positive");
  if (richardson_levels < 2 || richardson_levels > 8) throw DomainError("fd_partial: richardson_levels must be in 2..8");

  const std::size_t dims = request.orders.size();
  std::vector<std::size_t> active;
  std::vector<std::vector<double>> stencils(dims);
  std::vector<int> half(dims, 0);
  for (std::size_t i = 0; i < dims; ++i) {
    if (request.orders[i] == 0) continue;
    active.push_back(i);
    stencils[i] = central_stencil(request.orders[i]);
    half[i] = stencil_half_width(request.orders[i]);
    if (request.point[i] - half[i] * step < lower_bound)
      throw DomainError("fd_partial: stencil leaves the domain; shift the point or shrink the step");
  }

  const int levels = richardson_levels;
  const long finest = 1L << (levels - 1);
  std::map<std::vector<long>, double> cache;
  std::vector<double> x(request.point);
  auto eval = [&](const std::vector<long>& units, double unit_step) {
    auto it = cache.find(units);
    if (it != cache.end()) return it->second;
    for (std::size_t a = 0; a < active.size(); ++a)
      x[active[a]] = request.point[active[a]] + static_cast<double>(units[a]) * unit_step;
    const double v = f(x);
    cache.emplace(units, v);
    return v;
  };

  const int order = request.total_order();
  std::vector<double> raw;
  for (int level = 0; level < levels; ++level) {
    const double h = step / static_cast<double>(1L << level);
    const double unit_step = step / static_cast<double>(finest);
    const long scale = finest >> level;
    std::vector<int> offset(active.size());
    for (std::size_t a = 0; a < active.size(); ++a) offset[a] = -half[active[a]];
    double sum = 0.0;
    while (true) {
      double coeff = 1.0;
      std::vector<long> units(active.size());
      for (std::size_t a = 0; a < active.size(); ++a) {
        const std::size_t ax = active[a];
        coeff *= stencils[ax][static_cast<std::size_t>(offset[a] + half[ax])];
        units[a] = offset[a] * scale;
      }
      if (coeff != 0.0) sum += coeff * eval(units, unit_step);
      std::size_t a = 0;
      for (; a < active.size(); ++a) {
        if (++offset[a] <= half[active[a]]) break;
        offset[a] = -half[active[a]];
      }
      if (a == active.size()) break;
    }
    raw.push_back(sum / std::pow(h, order));
  }

  // Richardson tableau on the even-power error expansion h^8, h^10, ...
  std::vector<std::vector<double>> t(static_cast<std::size_t>(levels));
  for (int i = 0; i < levels; ++i) {
    t[static_cast<std::size_t>(i)].push_back(raw[static_cast<std::size_t>(i)]);
    for (int j = 1; j <= i; ++j) {
      const double factor = std::pow(2.0, kStencilAccuracy + 2 * (j - 1)) - 1.0;
      const double prev = t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)];
      t[static_cast<std::size_t>(i)].push_back(prev + (prev - t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)]) / factor);
    }
  }
  FdResult r;
  r.value = t.back().back();
  r.error_estimate = std::abs(t.back().back() - t[static_cast<std::size_t>(levels - 2)].back());
  r.step = step;
  r.evaluations = static_cast<int>(cache.size());
  return r;
}

} // namespace imlab
