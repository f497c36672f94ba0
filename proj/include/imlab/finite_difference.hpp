#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace imlab {

enum class DerivativeMethod { fd, formula, both };

/// Mixed partial d^{k1}...d^{kn} at `point`. Axes with k_i = 0 stay fixed.
struct DerivativeRequest {
  std::vector<int> orders;
  std::vector<double> point;
  DerivativeMethod method = DerivativeMethod::both;

  int total_order() const;
  /// Throws DomainError on shape mismatch, negative orders, a zero total, a
  /// total above 4 for fd, snr outside [0, 4], or a zero differentiated snr.
  void validate() const;
};

struct FdResult {
  double value = 0.0;
  double error_estimate = 0.0;
  double step = 0.0;        // coarsest step
  int evaluations = 0;      // distinct function evaluations
};

inline constexpr int kStencilAccuracy = 8;

/// Central-difference weights for the given derivative on offsets -m..m,
/// computed exactly (Fornberg) and rounded once.
std::vector<double> central_stencil(int derivative, int accuracy = kStencilAccuracy);
int stencil_half_width(int derivative, int accuracy = kStencilAccuracy);

/// Largest step <= `max_step` keeping every stencil point >= `lower_bound`.
double fit_fd_step(const DerivativeRequest& request, double max_step, double lower_bound = 0.0);

using VectorFunction = std::function<double(std::span<const double>)>;

/// Tensor product of per-axis central stencils (order-8 accurate per axis),
/// evaluated at steps h, h/2, ... and Richardson-extrapolated. The error
/// estimate is the gap between the last two diagonal tableau entries.
/// Throws DomainError when a stencil point falls below `lower_bound`.
FdResult fd_partial(const VectorFunction& f, const DerivativeRequest& request, double step, int richardson_levels,
                    double lower_bound = 0.0);

} // namespace imlab
