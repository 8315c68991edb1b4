#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "grandlab/func01.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/lebesgue.hpp"
#include "grandlab/quadrature.hpp"

using namespace grandlab;

namespace {
const std::vector<Singularity> kNone;
const std::vector<double> kNoBreaks;
}  // namespace

TEST(Interval, RejectsDegenerateAndOutOfRange) {
  EXPECT_THROW(Interval(0.5, 0.5), InvalidInterval);
  EXPECT_THROW(Interval(0.6, 0.5), InvalidInterval);
  EXPECT_THROW(Interval(-0.1, 0.5), InvalidInterval);
  EXPECT_THROW(Interval(0.1, 1.1), InvalidInterval);
  const Interval J(0.25, 0.75);
  EXPECT_DOUBLE_EQ(J.length(), 0.5);
  EXPECT_TRUE(J.contains(0.25));
  EXPECT_FALSE(J.contains(0.8));
}

TEST(Integrate, Constant) {
  const auto r = integrate([](double) { return 1.0; }, Interval::unit(), kNone, 1e-10);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
  EXPECT_FALSE(r.divergent);
}

TEST(Integrate, InverseSquareRoot) {
  const std::vector<Singularity> s = {{0.0, -0.5}};
  const auto r = integrate([](double t) { return 1.0 / std::sqrt(t); }, Interval::unit(), s, 1e-10);
  EXPECT_NEAR(r.value, 2.0, 1e-10);
  EXPECT_LE(r.abs_error_estimate, 1e-10);
}

TEST(Integrate, NearCriticalExponent) {
  const std::vector<Singularity> s = {{0.0, -0.99}};
  const auto r = integrate([](double t) { return std::pow(t, -0.99); }, Interval::unit(), s, 1e-9);
  EXPECT_NEAR(r.value / 100.0, 1.0, 1e-10);
}

TEST(Integrate, HarmonicDivergence) {
  const std::vector<Singularity> s = {{0.0, -1.0}};
  const auto r = integrate([](double t) { return 1.0 / t; }, Interval::unit(), s, 1e-9);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(Integrate, InteriorSingularityBothSides) {
  // ∫_0^1 |t - 1/3|^{-1/2} = 2 (sqrt(1/3) + sqrt(2/3))
  const std::vector<Singularity> s = {{1.0 / 3.0, -0.5}};
  auto g = [](double t) { return 1.0 / std::sqrt(std::abs(t - 1.0 / 3.0)); };
  const auto r = integrate(g, Interval::unit(), s, 1e-10);
  EXPECT_NEAR(r.value, 2.0 * (std::sqrt(1.0 / 3.0) + std::sqrt(2.0 / 3.0)), 1e-9);
}

TEST(Integrate, SingularityOutsideIntervalIgnored) {
  const std::vector<Singularity> s = {{0.0, -2.0}};
  const auto r = integrate([](double t) { return 1.0 / (t * t); }, Interval(0.5, 1.0), s, 1e-10);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
}

TEST(Integrate, BreakpointsHandleJumps) {
  const std::vector<double> br = {0.3};
  QuadOptions opt;
  opt.tol = 1e-12;
  const auto r = integrate([](double t) { return t < 0.3 ? 1.0 : 5.0; }, Interval::unit(), kNone, br, opt);
  EXPECT_NEAR(r.value, 0.3 + 5.0 * 0.7, 1e-12);
}

TEST(Integrate, PolynomialExactness) {
  // GK15 integrates degree <= 22 exactly on a single cell.
  for (int deg = 0; deg <= 20; deg += 4) {
    auto g = [deg](double t) { return (deg + 1) * std::pow(t, deg); };
    const auto r = integrate(g, Interval(0.2, 0.9), kNone, 1e-12);
    const double want = std::pow(0.9, deg + 1) - std::pow(0.2, deg + 1);
    EXPECT_NEAR(r.value, want, 1e-12) << "degree " << deg;
  }
}

TEST(Integrate, SmoothFactorTimesPower) {
  // ∫_0^1 t^{-0.7} e^t dt = sum_k 1 / (k! (k + 0.3))
  double want = 0.0;
  double fact = 1.0;
  for (int k = 0; k < 30; ++k) {
    if (k > 0) fact *= k;
    want += 1.0 / (fact * (k + 0.3));
  }
  const std::vector<Singularity> s = {{0.0, -0.7}};
  const auto r = integrate([](double t) { return std::pow(t, -0.7) * std::exp(t); }, Interval::unit(), s, 1e-11);
  EXPECT_NEAR(r.value, want, 1e-10);
}

TEST(Integrate, PowerPlusRegularPart) {
  // Singular and regular components decay at different rates toward 0.
  const std::vector<Singularity> s = {{0.0, -0.5}};
  auto g = [](double t) { return std::pow(t, -0.5) + std::cos(t); };
  const auto r = integrate(g, Interval::unit(), s, 1e-11);
  EXPECT_NEAR(r.value, 2.0 + std::sin(1.0), 1e-10);
}

TEST(Integrate, GradingConvergesWithBudget) {
  for (double s : {-0.3, -0.6, -0.9}) {
    const std::vector<Singularity> sg = {{0.0, s}};
    const double exact = 1.0 / (s + 1.0);
    double prev_err = INFINITY;
    for (int levels : {5, 10, 20}) {
      QuadOptions opt;
      opt.extrapolate_tail = false;
      opt.strict = false;
      opt.max_grading_levels = levels;
      const auto r = integrate([s](double t) { return std::pow(t, s); }, Interval::unit(), sg, kNoBreaks, opt);
      const double err = std::abs(r.value - exact) / exact;
      EXPECT_LT(err, prev_err) << "s=" << s << " levels=" << levels;
      prev_err = err;
    }
  }
}

TEST(Integrate, StrictModeThrowsWhenBudgetTooSmall) {
  QuadOptions opt;
  opt.tol = 1e-14;
  opt.max_subdivisions = 4;
  auto g = [](double t) { return std::sin(50.0 * t); };
  EXPECT_THROW(integrate(g, Interval::unit(), kNone, kNoBreaks, opt), NonConvergent);
  opt.strict = false;
  const auto r = integrate(g, Interval::unit(), kNone, kNoBreaks, opt);
  EXPECT_FALSE(r.converged);
}

TEST(Func01, DslTermsAndMetadata) {
  const auto f = Func01::parse("sum:(power:-0.5),(scale:3,(indicator:0.25,0.5))");
  EXPECT_DOUBLE_EQ(f.sing0(), -0.5);
  EXPECT_DOUBLE_EQ(f.sing1(), 0.0);
  EXPECT_NEAR(f(0.3), 1.0 / std::sqrt(0.3) + 3.0, 1e-15);
  EXPECT_NEAR(f(0.7), 1.0 / std::sqrt(0.7), 1e-15);
  EXPECT_EQ(Func01::parse(f.term()).term(), f.term());

  const auto r = Func01::parse("rpower:-0.25");
  EXPECT_DOUBLE_EQ(r.sing1(), -0.25);
  EXPECT_TRUE(Func01::parse("one").is_piecewise_constant());
  EXPECT_FALSE(Func01::parse("power:0.5").is_piecewise_constant());
}

TEST(Func01, DslRejectsMalformedTerms) {
  for (const char* bad : {"", "power", "power:x", "indicator:0.5", "indicator:0.6,0.2", "sum:(one)",
                          "scale:2", "cube:3", "power:-0.5)"}) {
    EXPECT_THROW(Func01::parse(bad), UsageError) << bad;
  }
}

TEST(Func01, ExponentAlgebra) {
  const auto f = Func01::power(-0.3) * Func01::power(-0.4);
  EXPECT_NEAR(f.sing0(), -0.7, 1e-15);
  const auto g = Func01::power(-0.3) + Func01::power(-0.6);
  EXPECT_NEAR(g.sing0(), -0.6, 1e-15);
  EXPECT_NEAR(Func01::power(-0.3).abs_pow(2.0).sing0(), -0.6, 1e-15);
  EXPECT_FALSE(Func01::power(-0.6).abs_pow(2.0).locally_integrable());
}

TEST(Func01, PiecewiseConstantIntegralsAreExact) {
  const auto f = Func01::parse("sum:(indicator:0,0.3),(scale:-2,(indicator:0.2,0.9))");
  ASSERT_TRUE(f.is_piecewise_constant());
  const auto r = f.integrate(Interval(0.1, 0.95));
  EXPECT_NEAR(r.value, 0.2 - 2.0 * 0.7, 1e-15);
  EXPECT_EQ(r.subdivisions, 0);
}

TEST(LebesgueNorm, Examples) {
  EXPECT_NEAR(lebesgue_norm(Func01::one(), 2.0), 1.0, 1e-14);
  EXPECT_TRUE(std::isinf(lebesgue_norm(Func01::power(-0.5), 2.0)));
  EXPECT_NEAR(lebesgue_norm(Func01::power(-0.5), 1.5), std::pow(4.0, 2.0 / 3.0), 1e-9);
}

TEST(LebesgueNorm, HomogeneityProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double s = -0.9 * unit(rng);
    const double r = 0.5 + 2.0 * unit(rng);
    const auto f = Func01::power(s * std::min(1.0, 0.9 / r)) + Func01::indicator(0.0, 0.5 + 0.5 * unit(rng));
    const auto w = Weight::power(2.0 * unit(rng) - 0.5);
    const double base = lebesgue_norm(f, r, w);
    for (double c : {-2.0, 0.5, 10.0}) {
      EXPECT_NEAR(lebesgue_norm(f.scaled(c), r, w) / (std::abs(c) * base), 1.0, 1e-9);
    }
  }
}

TEST(LebesgueNorm, WeightedClosedForm) {
  // ∫_0^1 x^{-1/2} x dx = 2/3
  EXPECT_NEAR(lebesgue_norm(Func01::power(-0.25), 2.0, Weight::power(1.0)), std::sqrt(2.0 / 3.0), 1e-10);
}
