#include "periodfn/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "periodfn/errors.hpp"

namespace periodfn {

namespace {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton on P_n from the Chebyshev-like initial guess; symmetric fill.
std::unique_ptr<Rule> build_rule(std::size_t n) {
  auto rule = std::make_unique<Rule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * z * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule->nodes[i] = -z;
    rule->nodes[n - 1 - i] = z;
    rule->weights[i] = w;
    rule->weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule->nodes[n / 2] = 0.0;
  return rule;
}

std::mutex cache_mutex;
std::map<std::size_t, std::unique_ptr<Rule>> cache;

}  // namespace

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw NumericError("Gauss-Legendre rule needs at least one node");
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[n];
  if (!slot) slot = build_rule(n);
  return {slot->nodes, slot->weights};
}

}  // namespace periodfn
