#pragma once

#include <cstddef>
#include <span>

namespace periodfn {

/// Gauss-Legendre rule on [-1, 1] with `n` nodes (n >= 1). Rules are built
/// once per n and cached for the lifetime of the process; the returned spans
/// stay valid and may be read from any thread.
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

GaussLegendreRule gauss_legendre(std::size_t n);

/// Integral of f over [lo, hi] with the n-point rule.
template <class F>
double gauss_legendre_integrate(F&& f, double lo, double hi, std::size_t n) {
  const GaussLegendreRule rule = gauss_legendre(n);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

}  // namespace periodfn
