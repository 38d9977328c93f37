#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qcalc/extremal.hpp"
#include "qcalc/inequalities.hpp"
#include "qcalc/oracle.hpp"

using namespace qcalc;

namespace {
const QInterval kUnit(0.0, 1.0);
}

TEST_CASE("series_abs_weighted_sum: partial sums and remainder bounds") {
  const QParam half(0.5);

  const auto deep = oracle::series_abs_weighted_sum(0, half, 60);
  CHECK(std::abs(deep.value - 2.0 / 3.0) <= 5e-16);  // truth gap ~2e-18, fp ulps dominate
  CHECK(deep.remainder_bound <= 4e-18);

  const auto first = oracle::series_abs_weighted_sum(0, half, 1);
  CHECK(first.value == 0.0);  // the k = 0 term vanishes for m = 0
  CHECK(first.remainder_bound == doctest::Approx(2.0 * 0.5 / 0.5).epsilon(1e-15));

  // K far beyond the noise floor: the bound only holds up to summation ulps.
  const QParam q09(0.9);
  const auto long_run = oracle::series_abs_weighted_sum(3, q09, 400);
  CHECK(std::abs(abs_weighted_sum_closed(3, q09) - long_run.value) <=
        long_run.remainder_bound + 1e-13);

  CHECK_THROWS_AS(oracle::series_abs_weighted_sum(-1, half, 10), std::invalid_argument);
  CHECK_THROWS_AS(oracle::series_abs_weighted_sum(0, half, 0), std::invalid_argument);
}

TEST_CASE("closed form agrees with the series inside the remainder bound") {
  for (int dq = 1; dq <= 9; ++dq) {
    const QParam q(dq / 10.0);
    for (int m = 0; m <= 30; ++m) {
      int K = 1;
      while (oracle::series_abs_weighted_sum(m, q, K).remainder_bound >= 1e-12) ++K;
      const auto partial = oracle::series_abs_weighted_sum(m, q, K);
      CHECK(partial.remainder_bound < 1e-12);
      CHECK(std::abs(abs_weighted_sum_closed(m, q) - partial.value) <=
            partial.remainder_bound);
    }
  }
}

TEST_CASE("series_q_integral: fixed-K Jackson sums") {
  const QParam half(0.5);

  const PiecewiseLinearFn cx = make_counterexample();
  const auto icx = oracle::series_q_integral([&cx](double t) { return cx(t); }, half,
                                             kUnit, 1.0, cx.max_abs_value(), 50);
  CHECK(std::abs(icx.value - 1.0 / 6.0) <= 1e-15);

  const double c = -2.75;
  const auto iconst = oracle::series_q_integral([c](double) { return c; }, half, kUnit,
                                                0.8, std::abs(c), 20);
  const double geometric = c * 0.8 * (1.0 - std::pow(0.5, 20));
  CHECK(icx.terms_used == 50);
  CHECK(iconst.value == doctest::Approx(geometric).epsilon(1e-15));

  const QParam q06(0.6);
  const LatticeFn fx = make_selfsim_witness(0.8, q06);
  const auto ifx = oracle::series_q_integral([&fx](double t) { return fx(t); }, q06,
                                             kUnit, 1.0, 1.0, 80);
  CHECK(std::abs(ifx.value - (-0.625)) <= ifx.tail_bound + 1e-14);

  CHECK_THROWS_AS(oracle::series_q_integral([](double) { return 0.0; }, half, kUnit,
                                            1.5, 1.0, 10),
                  std::domain_error);
  CHECK_THROWS_AS(oracle::series_q_integral([](double) { return 0.0; }, half, kUnit,
                                            1.0, 1.0, 0),
                  std::invalid_argument);
}

TEST_CASE("grid_sup") {
  CHECK(oracle::grid_sup([](double t) { return t; }, 0.0, 1.0, 11) == 1.0);
  CHECK(oracle::grid_sup([](double t) { return t - t * t; }, 0.0, 1.0, 10001) ==
        doctest::Approx(0.25).epsilon(1e-8));
  CHECK(oracle::grid_sup([](double) { return 0.0; }, 0.0, 1.0, 5) == 0.0);
  CHECK_THROWS_AS(oracle::grid_sup([](double) { return 0.0; }, 1.0, 0.0, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(oracle::grid_sup([](double) { return 0.0; }, 0.0, 1.0, 1),
                  std::invalid_argument);
}

TEST_CASE("riemann_integral: midpoint rule") {
  CHECK(std::abs(oracle::riemann_integral([](double t) { return t * t; }, kUnit,
                                          1000000) -
                 1.0 / 3.0) <= 1e-9);

  CHECK(oracle::riemann_integral([](double) { return 3.25; }, QInterval(1.0, 3.0), 7) ==
        doctest::Approx(6.5).epsilon(1e-15));

  // Triangle areas 0.405 + 0.045; far from the q-integral value 1/6, which is
  // the whole point of lattice sampling.
  const PiecewiseLinearFn cx = make_counterexample();
  CHECK(std::abs(oracle::riemann_integral([&cx](double t) { return cx(t); }, kUnit,
                                          1000000) -
                 0.45) <= 1e-6);

  CHECK_THROWS_AS(oracle::riemann_integral([](double) { return 0.0; }, kUnit, 0),
                  std::invalid_argument);
}

TEST_CASE("midpoint rule never touches the endpoints") {
  // A Lifted witness has no value at 0; the rule must still integrate it.
  const QParam q06(0.6);
  const LatticeFn g = make_lifted_witness(0.8, q06, 1.0);
  CHECK_NOTHROW(oracle::riemann_integral([&g](double t) { return g(t); }, kUnit, 4096));
}

TEST_CASE("adaptive truncation matches the fixed-K oracle") {
  const QParam half(0.5);
  const QParam q06(0.6);
  const PiecewiseLinearFn cx = make_counterexample();
  const LatticeFn fx = make_selfsim_witness(0.8, q06);
  const PiecewiseLinearFn ad = make_absdev(2, q06, kUnit);

  const auto compare = [](const RealFn& fn, QParam q, double sup) {
    const QIntegralResult adaptive = q_integral(fn, q, kUnit, 1.0, sup, 1e-12);
    const QIntegralResult fixed = oracle::series_q_integral(fn, q, kUnit, 1.0, sup, 80);
    CHECK(std::abs(adaptive.value - fixed.value) <=
          adaptive.tail_bound + fixed.tail_bound);
  };
  compare([&cx](double t) { return cx(t); }, half, cx.max_abs_value());
  compare([&fx](double t) { return fx(t); }, q06, 1.0);
  compare([&ad](double t) { return ad(t); }, q06, ad.max_abs_value());
}

TEST_CASE("q -> 1 limits against the Riemann oracle") {
  for (int j : {2, 3}) {
    const QParam q(1.0 - std::pow(10.0, -j));
    for (int p : {1, 2, 3}) {
      const RealFn mono = [p](double t) { return std::pow(t, p); };
      const QIntegralResult qi = q_integral(mono, q, kUnit, 1.0, 1.0, 1e-9);
      const double riem = oracle::riemann_integral(mono, kUnit, 200000);
      CHECK(std::abs(qi.value - riem) < 3.0 * std::pow(10.0, -j));
    }
  }
}
