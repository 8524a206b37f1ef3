#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "periodfn/errors.hpp"
#include "periodfn/series.hpp"

using namespace periodfn;

namespace {

PowerSeries poly(std::vector<double> c, int order) {
  c.resize(static_cast<std::size_t>(order) + 1, 0.0);
  return PowerSeries(std::move(c));
}

double fact(int k) { return std::tgamma(k + 1.0); }

// Normalized g with g^(k)(0) = a[k] for the listed k.
PowerSeries g_from_derivs(const std::vector<std::pair<int, double>>& a, int order = 24) {
  std::vector<double> c(static_cast<std::size_t>(order) + 1, 0.0);
  c[1] = 1.0;
  for (auto [k, v] : a) c[static_cast<std::size_t>(k)] = v / fact(k);
  return PowerSeries(c);
}

}  // namespace

TEST_CASE("algebra") {
  const PowerSeries p = series_product(poly({1, 1}, 4), poly({1, -1}, 4));
  CHECK(p[0] == 1);
  CHECK(p[1] == 0);
  CHECK(p[2] == -1);
  CHECK(p.order() == 4);

  const PowerSeries q = series_divide(poly({1}, 6), poly({1, -1}, 6));
  for (int k = 0; k <= 6; ++k) CHECK(q[k] == doctest::Approx(1.0));
  CHECK_THROWS_AS((void)series_divide(poly({1}, 4), poly({0, 1}, 4)), SeriesError);

  const PowerSeries cube = series_power(poly({1, 1}, 5), 3);
  CHECK(cube[3] == doctest::Approx(1.0));
  CHECK(cube[2] == doctest::Approx(3.0));

  const PowerSeries i = series_integrate(poly({0, 1}, 3));
  CHECK(i.order() == 4);
  CHECK(i[2] == doctest::Approx(0.5));
  CHECK(series_derivative(i)[1] == doctest::Approx(1.0));

  CHECK(poly({0, 0, 3, 5}, 5).derivative_at_zero(3) == doctest::Approx(30));
  CHECK(poly({1, 2, 3}, 2).evaluate(2.0) == doctest::Approx(17));
}

TEST_CASE("compose and revert") {
  const PowerSeries e = series_compose(series_exp(PowerSeries::identity(6)), poly({0, 2}, 6));
  for (int k = 0; k <= 6; ++k) CHECK(e[k] == doctest::Approx(std::pow(2.0, k) / fact(k)));
  CHECK_THROWS_AS((void)series_compose(poly({1, 1}, 4), poly({1, 1}, 4)), SeriesError);

  // arcsin: x + x^3/6 + 3 x^5/40.
  const PowerSeries as = series_revert(series_sin(PowerSeries::identity(7)));
  CHECK(as[1] == doctest::Approx(1.0));
  CHECK(as[3] == doctest::Approx(1.0 / 6));
  CHECK(as[5] == doctest::Approx(3.0 / 40));
  CHECK(as[7] == doctest::Approx(5.0 / 112));
  CHECK_THROWS_AS((void)series_revert(poly({0, 0, 1}, 4)), SeriesError);
}

TEST_CASE("elementary functions") {
  const PowerSeries x = PowerSeries::identity(7);
  const PowerSeries t = series_tan(x);
  CHECK(t[3] == doctest::Approx(1.0 / 3));
  CHECK(t[5] == doctest::Approx(2.0 / 15));
  CHECK(t[7] == doctest::Approx(17.0 / 315));
  const PowerSeries th = series_tanh(x);
  CHECK(th[3] == doctest::Approx(-1.0 / 3));
  CHECK(th[5] == doctest::Approx(2.0 / 15));
  const PowerSeries l = series_log(poly({1, 1}, 7));
  for (int k = 1; k <= 7; ++k) CHECK(l[k] == doctest::Approx((k % 2 ? 1.0 : -1.0) / k));
  const PowerSeries r = series_sqrt(poly({1, 1}, 4));
  CHECK(r[2] == doctest::Approx(-1.0 / 8));
  CHECK(r[3] == doctest::Approx(1.0 / 16));
  CHECK(r[4] == doctest::Approx(-5.0 / 128));
  const PowerSeries c = series_cos(x);
  const PowerSeries s = series_sin(x);
  const PowerSeries one = series_product(c, c) + series_product(s, s);
  CHECK(one[0] == doctest::Approx(1.0));
  for (int k = 1; k <= 7; ++k) CHECK(std::abs(one[k]) < 1e-15);
  const PowerSeries ch = series_cosh(x);
  const PowerSeries sh = series_sinh(x);
  const PowerSeries hyp = series_product(ch, ch) - series_product(sh, sh);
  for (int k = 1; k <= 7; ++k) CHECK(std::abs(hyp[k]) < 1e-15);
  CHECK_THROWS_AS((void)series_log(poly({0, 1}, 4)), SeriesError);
  CHECK_THROWS_AS((void)series_sqrt(poly({0, 1}, 4)), SeriesError);
}

TEST_CASE("shift down") {
  const PowerSeries s = series_shift_down(poly({0, 0, 3, 4}, 5), 2);
  CHECK(s.order() == 3);
  CHECK(s[0] == 3);
  CHECK(s[1] == 4);
  CHECK_THROWS_AS((void)series_shift_down(poly({1, 0, 3}, 4), 2), SeriesError);
}

TEST_CASE("involution series") {
  const PowerSeries lin = involution_series(PowerSeries::identity(12));
  CHECK(lin[1] == doctest::Approx(-1.0));
  for (int k = 2; k <= 12; ++k) CHECK(std::abs(lin[k]) < 1e-14);

  // Second coefficient -a2/3.
  for (double a2 : {-1.3, 0.4, 2.0}) {
    const PowerSeries A = involution_series(g_from_derivs({{2, a2}}));
    CHECK(A[2] == doctest::Approx(-a2 / 3));
  }
}

TEST_CASE("property: involution is self-inverse and preserves G") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<int, double>> a;
    for (int k = 2; k <= 8; ++k) a.push_back({k, u(rng) * fact(k) / 2});
    const PowerSeries g = g_from_derivs(a, 16);
    const PowerSeries A = involution_series(g);
    const PowerSeries AA = series_compose(A, A);
    CHECK(AA[1] == doctest::Approx(1.0));
    for (int k = 2; k <= 16; ++k) CHECK(std::abs(AA[k]) < 1e-9 * std::pow(10.0, k / 4));
    const PowerSeries G = series_integrate(g).with_order(16);
    const PowerSeries GA = series_compose(G, A);
    for (int k = 0; k <= 16; ++k) CHECK(std::abs(GA[k] - G[k]) < 1e-9 * std::pow(10.0, k / 4));
  }
}

TEST_CASE("criterion coefficients") {
  // g = x: f vanishes identically.
  const CriterionCoefficients lin = extract_criterion_coefficients(PowerSeries::identity(24), 3);
  for (double d : lin.identified.derivs) CHECK(std::abs(d) < 1e-14);

  // f(0) = -g''(0)/3 for any g.
  for (double a2 : {-2.0, 0.5, 1.0 / 0.647}) {
    const auto c = extract_criterion_coefficients(g_from_derivs({{2, a2}, {3, 1.1}, {4, -0.4}}), 0);
    CHECK(c.identified.derivs[0] == doctest::Approx(-a2 / 3).epsilon(1e-12));
  }

  CHECK_THROWS_AS((void)extract_criterion_coefficients(PowerSeries::identity(5), 2), SeriesError);
  CHECK_THROWS_AS((void)extract_criterion_coefficients(poly({0, 2, 1}, 24), 1), SeriesError);
}

TEST_CASE("coefficients with vanishing g''(0)") {
  // The printed forms are the G^k Taylor coefficients of f: f'(0) = -a4/5,
  // f''(0)/2 = -a6/42, f'''(0)/6 = -a8/810.
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a4 = u(rng), a6 = u(rng), a8 = u(rng);
    const auto c = extract_criterion_coefficients(g_from_derivs({{4, a4}, {6, a6}, {8, a8}}), 3);
    const auto& d = c.identified.derivs;
    CHECK(std::abs(d[0]) < 1e-14);
    CHECK(d[1] == doctest::Approx(-a4 / 5).epsilon(1e-10));
    CHECK(d[2] / 2 == doctest::Approx(-a6 / 42).epsilon(1e-10));
    CHECK(d[3] / 6 == doctest::Approx(-a8 / 810).epsilon(1e-9));
    CHECK(std::abs(c.odd_constraint_residual) < 1e-14);
  }
}

TEST_CASE("odd constraint") {
  const double a2 = 0.8;
  const auto good = extract_criterion_coefficients(g_from_derivs({{2, a2}, {3, 5.0 / 3 * a2 * a2}}), 1);
  CHECK(std::abs(good.odd_constraint_residual) < 1e-14);
  const auto bad = extract_criterion_coefficients(g_from_derivs({{2, a2}, {3, 4.0}}), 1);
  CHECK(bad.odd_constraint_residual == doctest::Approx(4.0 - 5.0 / 3 * a2 * a2));
}

TEST_CASE("printed closed forms and the resolved polynomial") {
  const double s = 0.647;
  const PowerSeries g = g_from_derivs({{2, 1 / s}, {3, 4.0}, {4, 12 / s}, {5, 32.0}, {6, 80 / s}});
  const auto printed = printed_closed_forms(g, 2);
  REQUIRE(printed.size() == 3);
  CHECK(printed[1].size() == 2);
  const CriterionPolynomial p = resolved_polynomial(g, 2);
  const double a2 = 1 / s, a4 = 12 / s, a6 = 80 / s;
  CHECK(p.derivs[0] == doctest::Approx(-a2 / 3));
  CHECK(p.derivs[1] == doctest::Approx(7.0 / 9 * a2 * a2 * a2 - a4 / 5));
  const double q = 28550 * std::pow(a2, 6) - 10320 * std::pow(a2, 3) * a4 + 81 * a4 * a4 + 270 * a2 * a6;
  CHECK(p.derivs[2] == doctest::Approx(-q / (2025 * a2)));
  CHECK(p(0.1) == doctest::Approx(p.derivs[0] + p.derivs[1] * 0.1 + p.derivs[2] * 0.005));
  CHECK(criterion_working_order(2) >= 8);
}

TEST_CASE("criterion polynomial composes with G") {
  CriterionPolynomial p{2, {0.5, -1.0, 3.0}};
  const PowerSeries G = poly({0, 0, 0.5, 1.0 / 3}, 8);
  const PowerSeries f = p.compose(G);
  for (double x : {-0.1, 0.05, 0.2}) {
    CHECK(f.evaluate(x) == doctest::Approx(p(G.evaluate(x))).epsilon(1e-6));
  }
}
