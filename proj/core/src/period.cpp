#include "periodfn/period.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include "periodfn/errors.hpp"
#include "periodfn/quadrature.hpp"
#include "parallel.hpp"

namespace periodfn {

namespace {

constexpr std::size_t kStartNodes = 16;
constexpr std::size_t kMaxNodes = 2048;
constexpr double kConvergence = 1e-11;

std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_energy(const Potential& pot, double c) {
  const double c_bar = pot.domain().c_bar;
  if (!(c > 0.0) || !(c < c_bar)) {
    throw NumericError("energy c = " + fmt_g(c) + " outside (0, c_bar = " + fmt_g(c_bar) + ")");
  }
}

// One branch: integral over theta in [0, pi/2] of 2 sqrt(2c) sin(theta) / |g(x(theta))|.
double branch_integral(const Potential& pot, double c, int side, double x_turn, std::size_t n) {
  const GaussLegendreRule rule = gauss_legendre(n);
  const double half = 0.25 * std::numbers::pi;
  const double scale = 2.0 * std::sqrt(2.0 * c);
  double x_prev = 0.0;
  double sum = 0.0;
  // Nodes ascend in theta, so x(theta) moves monotonically outward and the
  // previous root bounds the next one.
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double theta = half * (1.0 + rule.nodes[i]);
    const double s = std::sin(theta);
    const double target = c * s * s;
    const double lo = side > 0 ? x_prev : x_turn;
    const double hi = side > 0 ? x_turn : x_prev;
    const double x = pot.energy_preimage(target, side, lo, hi);
    x_prev = x;
    const double gx = std::abs(pot.g(x));
    if (!(gx > 0.0)) throw NumericError("g vanishes inside the orbit at x = " + fmt_g(x));
    sum += rule.weights[i] * scale * s / gx;
  }
  return half * sum;
}

}  // namespace

int PeriodDerivative::sign() const {
  if (!(std::abs(value) > 3.0 * error_bound)) return 0;
  return value > 0.0 ? 1 : -1;
}

std::string_view monotone_flag_name(MonotoneFlag f) {
  switch (f) {
    case MonotoneFlag::increasing:
      return "increasing";
    case MonotoneFlag::decreasing:
      return "decreasing";
    case MonotoneFlag::constant:
      return "constant";
    case MonotoneFlag::mixed:
      return "mixed";
  }
  return "?";
}

PeriodSample period_at(const Potential& pot, double c) {
  require_energy(pot, c);
  const double x_right = pot.energy_preimage(c, +1);
  const double x_left = pot.energy_preimage(c, -1);
  auto total = [&](std::size_t n) {
    return branch_integral(pot, c, +1, x_right, n) + branch_integral(pot, c, -1, x_left, n);
  };
  double prev = total(kStartNodes);
  double diff = std::numeric_limits<double>::infinity();
  std::size_t n = kStartNodes;
  while (n < kMaxNodes) {
    n *= 2;
    const double next = total(n);
    diff = std::abs(next - prev);
    prev = next;
    if (diff <= kConvergence * std::abs(next)) break;
  }
  PeriodSample out;
  out.c = c;
  out.T = prev;
  out.dTdc = std::numeric_limits<double>::quiet_NaN();
  out.err_estimate = diff;
  return out;
}

double period_fixed_nodes(const Potential& pot, double c, std::size_t nodes) {
  require_energy(pot, c);
  return branch_integral(pot, c, +1, pot.energy_preimage(c, +1), nodes) +
         branch_integral(pot, c, -1, pot.energy_preimage(c, -1), nodes);
}

PeriodDerivative period_derivative(const Potential& pot, double c) {
  require_energy(pot, c);
  const double h = std::max(1e-6, 1e-3 * c);
  if (!(c - h > 0.0) || !(c + h < pot.domain().c_bar)) {
    throw NumericError("derivative stencil at c = " + fmt_g(c) + " leaves (0, c_bar)");
  }
  const std::array<double, 4> offsets{-h, -0.5 * h, 0.5 * h, h};
  std::array<PeriodSample, 4> s;
  for (std::size_t i = 0; i < 4; ++i) s[i] = period_at(pot, c + offsets[i]);
  const double d_h = (s[3].T - s[0].T) / (2.0 * h);
  const double d_h2 = (s[2].T - s[1].T) / h;
  PeriodDerivative out;
  out.value = (4.0 * d_h2 - d_h) / 3.0;
  double noise = 1e-13 * s[0].T;
  for (const auto& x : s) noise = std::max(noise, x.err_estimate);
  out.error_bound = std::abs(out.value - d_h2) + 3.0 * noise / h;
  return out;
}

double period_derivative_at(const Potential& pot, double c) {
  return period_derivative(pot, c).value;
}

PeriodTable period_table(const Potential& pot, double c_min, double c_max, int steps) {
  if (steps < 2) throw NumericError("period table needs at least 2 steps");
  if (!(c_min > 0.0) || !(c_min < c_max)) {
    throw NumericError("period table needs 0 < c_min < c_max");
  }
  require_energy(pot, c_max);
  const auto count = static_cast<std::size_t>(steps);
  std::vector<double> energies(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    energies[i] = c_min * std::pow(c_max / c_min, t);
  }
  energies.back() = c_max;

  PeriodTable table;
  table.samples.resize(count);
  detail::parallel_for(count, [&](std::size_t i) {
    PeriodSample s = period_at(pot, energies[i]);
    try {
      s.dTdc = period_derivative_at(pot, energies[i]);
    } catch (const NumericError&) {
      s.dTdc = std::numeric_limits<double>::quiet_NaN();
    }
    table.samples[i] = s;
  });

  bool up = true;
  bool down = true;
  bool flat = true;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const PeriodSample& a = table.samples[i];
    const PeriodSample& b = table.samples[i + 1];
    const double delta = b.T - a.T;
    const double tol = std::max(1e-10 * std::abs(a.T), a.err_estimate + b.err_estimate);
    if (std::abs(delta) > tol) flat = false;
    if (!(delta > tol)) up = false;
    if (!(delta < -tol)) down = false;
  }
  if (flat) {
    table.flag = MonotoneFlag::constant;
  } else if (up) {
    table.flag = MonotoneFlag::increasing;
  } else if (down) {
    table.flag = MonotoneFlag::decreasing;
  } else {
    table.flag = MonotoneFlag::mixed;
  }
  return table;
}

double period_via_ode(const Potential& pot, double c) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;

  const PeriodSample estimate = period_at(pot, c);
  const double t_max = 10.0 * estimate.T;
  const double x0 = pot.energy_preimage(c, +1);

  auto rhs = [&pot](const State& s, State& ds, double) {
    ds[0] = s[1];
    ds[1] = -pot.g(s[0]);
  };
  auto stepper = odeint::make_dense_output(1e-14, 1e-12, odeint::runge_kutta_dopri5<State>());
  stepper.initialize(State{x0, 0.0}, 0.0, 1e-3 * estimate.T);

  // The orbit leaves the right turning point with y < 0; it returns there
  // when y crosses from positive to non-positive with x > 0.
  while (stepper.current_time() < t_max) {
    const double t0 = stepper.current_time();
    const State s0 = stepper.current_state();
    stepper.do_step(rhs);
    const State& s1 = stepper.current_state();
    if (s0[1] > 0.0 && s1[1] <= 0.0 && s1[0] > 0.0) {
      const double t1 = stepper.current_time();
      if (s1[1] == 0.0) return t1;
      auto y_at = [&](double t) {
        State s;
        stepper.calc_state(t, s);
        return s[1];
      };
      std::uintmax_t iters = 200;
      auto [lo, hi] = boost::math::tools::toms748_solve(
          y_at, t0, t1, s0[1], s1[1], boost::math::tools::eps_tolerance<double>(52), iters);
      return 0.5 * (lo + hi);
    }
  }
  throw NumericError("orbit did not return within 10 periods at c = " + fmt_g(c));
}

}  // namespace periodfn
