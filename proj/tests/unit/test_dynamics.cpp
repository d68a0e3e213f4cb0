#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <functional>
#include <vector>

#include "langevin/dynamics.hpp"
#include "langevin/stats.hpp"

using namespace langevin;

namespace {

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(1.0, std::abs(b[i])));
  }
  return worst;
}

struct Moments {
  double x2 = 0.0;
  double p2 = 0.0;
};

/// Time averages of x^2 and p^2 after a burn-in, 1D.
Moments sample_moments(Integrator& integ, const Potential& model, std::uint64_t steps,
                       std::uint64_t seed) {
  PhaseState s = PhaseState::zeros(1);
  StepContext ctx(model);
  NoiseStream stream(seed, 0);
  for (int i = 0; i < 1000; ++i) integ.step(s, ctx, stream);
  Moments m;
  for (std::uint64_t i = 0; i < steps; ++i) {
    integ.step(s, ctx, stream);
    m.x2 += s.x[0] * s.x[0];
    m.p2 += s.p[0] * s.p[0];
  }
  m.x2 /= static_cast<double>(steps);
  m.p2 /= static_cast<double>(steps);
  return m;
}

}  // namespace

TEST(OUCoefficients, MatchIndependentEvaluation) {
  const auto c = ou_coefficients(1.0, 0.1, 1.0);
  EXPECT_NEAR(c.c1, 0.90483741803595957, 1e-14 * 0.905);
  EXPECT_NEAR(c.c2, 0.095162581964040427, 1e-14 * 0.0952);
  EXPECT_NEAR(c.c3, 0.42575726291164798, 1e-14 * 0.426);
}

TEST(OUCoefficients, VanishingStepInjectsNoNoise) {
  const auto c = ou_coefficients(1.0, 1e-300, 1.0);
  EXPECT_EQ(c.c1, 1.0);
  EXPECT_LT(c.c3, 1e-149);
  EXPECT_NEAR(c.c2, 1e-300, 1e-314);
}

TEST(OUCoefficients, UnderflowGivesFullRefresh) {
  const auto c = ou_coefficients(1e9, 1.0, 2.0);
  EXPECT_EQ(c.c1, 0.0);
  EXPECT_EQ(c.c3, std::sqrt(2.0));
  EXPECT_EQ(c.c2, 1e-9);
}

TEST(OUCoefficients, RejectsNonpositiveInputs) {
  EXPECT_THROW(ou_coefficients(0.0, 0.1, 1.0), DomainError);
  EXPECT_THROW(ou_coefficients(1.0, -0.1, 1.0), DomainError);
  EXPECT_THROW(ou_coefficients(1.0, 0.1, 0.0), DomainError);
}

TEST(AFlow, ZeroTimeAndZeroMomentumAreIdentity) {
  PhaseState s{{0.3}, {1.7}, {1.0}};
  a_flow(s, 0.0);
  EXPECT_EQ(s.x[0], 0.3);
  s.p[0] = 0.0;
  a_flow(s, 5.0);
  EXPECT_EQ(s.x[0], 0.3);
}

TEST(AFlow, LinearDrift) {
  PhaseState s{{0.0}, {1.0}, {1.0}};
  a_flow(s, 0.5);
  EXPECT_EQ(s.x[0], 0.5);
  EXPECT_EQ(s.p[0], 1.0);
}

TEST(AFlow, SplitDriftEqualsWholeDrift) {
  PhaseState a{{0.375, -1.25}, {0.5, 3.0}, {1.0, 2.0}};
  PhaseState b = a;
  a_flow(a, 0.25);
  a_flow(a, 0.5);
  a_flow(b, 0.75);
  EXPECT_EQ(a.x, b.x);
  // General reals only agree to rounding.
  PhaseState c{{0.1}, {0.7}, {1.3}}, d = c;
  a_flow(c, 0.1);
  a_flow(c, 0.2);
  a_flow(d, 0.1 + 0.2);
  EXPECT_LT(max_rel_diff(c.x, d.x), 4e-16);
}

TEST(BFlow, KickAtZeroUsesClosedFormGradient) {
  const auto model = PotentialModel::oscillator();
  StepContext ctx(model);
  PhaseState s = PhaseState::zeros(1);
  b_flow(s, 1.0, ctx);
  EXPECT_NEAR(s.p[0], -2.7015115293406985870, 1e-15);
  EXPECT_EQ(s.x[0], 0.0);
  b_flow(s, 0.0, ctx);
  EXPECT_NEAR(s.p[0], -2.7015115293406985870, 1e-15);
}

TEST(BFlow, HalfKicksAddUpAndShareOneEvaluation) {
  const auto model = PotentialModel::oscillator();
  StepContext ctx(model);
  PhaseState a{{0.4}, {0.1}, {1.0}}, b = a;
  b_flow(a, 0.05, ctx);
  b_flow(a, 0.05, ctx);
  EXPECT_EQ(ctx.force_evaluations(), 1u);
  StepContext ctx2(model);
  b_flow(b, 0.1, ctx2);
  EXPECT_NEAR(a.p[0], b.p[0], 1e-15);
}

TEST(StepContext, CachesOnlyForIdenticalPositions) {
  const auto model = PotentialModel::oscillator();
  StepContext ctx(model);
  std::vector<double> x{0.2};
  ctx.gradient(x);
  ctx.gradient(x);
  EXPECT_EQ(ctx.force_evaluations(), 1u);
  x[0] = std::nextafter(0.2, 1.0);
  ctx.gradient(x);
  EXPECT_EQ(ctx.force_evaluations(), 2u);
  ctx.invalidate();
  ctx.gradient(x);
  EXPECT_EQ(ctx.force_evaluations(), 3u);
}

TEST(OFlow, NoNoiseContracts) {
  const auto model = FreePotential(1);
  StepContext ctx(model);
  NoiseStream stream(1, 0);
  PhaseState s{{0.0}, {2.0}, {1.0}};
  o_flow(s, {0.5, 0.0, 0.0}, stream, ctx);
  EXPECT_EQ(s.p[0], 1.0);
}

TEST(OFlow, FullRefreshDrawsFromTheStream) {
  const auto model = FreePotential(2);
  StepContext ctx(model);
  NoiseStream stream(4, 1), copy(4, 1);
  PhaseState s{{0.0, 0.0}, {9.0, -9.0}, {1.0, 4.0}};
  o_flow(s, ou_coefficients(1e9, 1.0, 1.5), stream, ctx);
  const double r0 = copy.next_normal(), r1 = copy.next_normal();
  EXPECT_EQ(s.p[0], std::sqrt(1.5) * std::sqrt(1.0) * r0);
  EXPECT_EQ(s.p[1], std::sqrt(1.5) * std::sqrt(4.0) * r1);
}

TEST(OFlow, StationaryVarianceIsKbtTimesMass) {
  const auto model = FreePotential(1);
  StepContext ctx(model);
  NoiseStream stream(8, 0);
  PhaseState s{{0.0}, {0.0}, {2.0}};
  const auto c = ou_coefficients(1.0, 0.1, 1.5);
  for (int i = 0; i < 100; ++i) o_flow(s, c, stream, ctx);
  double sum2 = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    o_flow(s, c, stream, ctx);
    sum2 += s.p[0] * s.p[0];
  }
  EXPECT_NEAR(sum2 / n, 3.0, 0.03);
}

class OUChiSquare : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(OUChiSquare, MomentaFollowTheGaussian) {
  const auto [gamma, dt] = GetParam();
  const double kBT = 1.0, mass = 1.0;
  const auto model = FreePotential(1);
  StepContext ctx(model);
  NoiseStream stream(21, 0);
  PhaseState s{{0.0}, {0.0}, {mass}};
  const auto c = ou_coefficients(gamma, dt, kBT);
  // Equal-probability bins under N(0, kBT m); thin by the decorrelation time.
  const std::size_t bins = 50, n = 1000000;
  const std::size_t thin = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(5.0 / (gamma * dt))));
  std::vector<std::uint64_t> counts(bins, 0);
  for (std::size_t i = 0; i < 10 * thin; ++i) o_flow(s, c, stream, ctx);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < thin; ++k) o_flow(s, c, stream, ctx);
    const double u = 0.5 * std::erfc(-s.p[0] / std::sqrt(2.0 * kBT * mass));
    ++counts[std::min(bins - 1, static_cast<std::size_t>(u * bins))];
  }
  const double expected = static_cast<double>(n) / bins;
  double chi2 = 0.0;
  for (auto k : counts) chi2 += (k - expected) * (k - expected) / expected;
  const boost::math::chi_squared dist(bins - 1);
  EXPECT_LT(chi2, boost::math::quantile(dist, 0.99));
}

INSTANTIATE_TEST_SUITE_P(Regimes, OUChiSquare,
                         ::testing::Values(std::make_pair(1.0, 0.1), std::make_pair(50.0, 0.1)));

TEST(Splitting, RejectsBadStrings) {
  EXPECT_THROW(compose_splitting("", {}), DomainError);
  EXPECT_THROW(compose_splitting("BAXAB", {}), DomainError);
  EXPECT_THROW(compose_splitting("baoab", {}), DomainError);
  EXPECT_THROW(make_integrator("split:BAQ", {}), DomainError);
  EXPECT_THROW(make_integrator("verlet", {}), DomainError);
}

TEST(Splitting, DurationsDivideByLetterCount) {
  const auto s = compose_splitting("BAOAB", {0.2, 1.0, 1.0});
  EXPECT_EQ(s.durations(), (std::vector<double>{0.1, 0.1, 0.2, 0.1, 0.1}));
  const auto t = compose_splitting("OBABO", {0.3, 1.0, 1.0});
  EXPECT_EQ(t.durations(), (std::vector<double>{0.15, 0.15, 0.3, 0.15, 0.15}));
  for (const char* word : {"ABAO", "BABO", "ABOBA", "BAOAB", "OBABO", "AAAB"}) {
    const auto sch = compose_splitting(word, {0.25, 1.0, 1.0});
    const auto d = sch.durations();
    for (char letter : {'A', 'B', 'O'}) {
      double total = 0.0;
      bool present = false;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (word[i] == letter) {
          total += d[i];
          present = true;
        }
      }
      if (present) EXPECT_NEAR(total, 0.25, 1e-15) << word << letter;
    }
  }
}

TEST(Splitting, SingleAIsAFlow) {
  const auto model = FreePotential(1);
  StepContext ctx(model);
  NoiseStream stream(1, 0);
  PhaseState a{{0.1}, {0.3}, {1.0}}, b = a;
  compose_splitting("A", {0.2, 1.0, 1.0}).step(a, ctx, stream);
  a_flow(b, 0.2);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(stream.counter(), 0u);
}

class ComposerMatchesHandWrittenStep : public ::testing::TestWithParam<std::string> {};

TEST_P(ComposerMatchesHandWrittenStep, OverAHundredThousandSteps) {
  const std::string word = GetParam();
  const LangevinParams params{0.2, 2.0, 1.0};
  const auto coeffs = ou_coefficients(params.gamma, params.dt, params.kBT);
  const auto model = PotentialModel::oscillator();
  const auto scheme = compose_splitting(word, params);
  PhaseState a{{0.3}, {-0.4}, {1.7}}, b = a;
  StepContext ca(model), cb(model);
  NoiseStream sa(31, 2), sb(31, 2);
  double worst = 0.0;
  bool identical = true;
  for (int i = 0; i < 100000; ++i) {
    scheme.step(a, ca, sa);
    if (word == "BAOAB") {
      step_baoab(b, cb, params, coeffs, sb);
    } else {
      step_aboba(b, cb, params, coeffs, sb);
    }
    worst = std::max({worst, max_rel_diff(a.x, b.x), max_rel_diff(a.p, b.p)});
    identical = identical && a.x == b.x && a.p == b.p;
  }
  EXPECT_LE(worst, 1e-12);
  EXPECT_TRUE(identical);
  EXPECT_EQ(ca.force_evaluations(), cb.force_evaluations());
}

INSTANTIATE_TEST_SUITE_P(Words, ComposerMatchesHandWrittenStep, ::testing::Values("BAOAB", "ABOBA"));

TEST(HandWritten, FreeNoiselessLimitIsFreeFlight) {
  const LangevinParams params{0.1, 1e-12, 1e-300};
  const auto coeffs = ou_coefficients(params.gamma, params.dt, params.kBT);
  const FreePotential model(2);
  using Fn = std::function<void(PhaseState&, StepContext&, NoiseStream&)>;
  ColoredNoiseCache cache;
  const std::vector<std::pair<std::string, Fn>> methods = {
      {"baoab", [&](auto& s, auto& c, auto& r) { step_baoab(s, c, params, coeffs, r); }},
      {"aboba", [&](auto& s, auto& c, auto& r) { step_aboba(s, c, params, coeffs, r); }},
      {"spv", [&](auto& s, auto& c, auto& r) { step_spv(s, c, params, coeffs, r); }},
      {"bbk", [&](auto& s, auto& c, auto& r) { step_bbk(s, c, params, cache, r); }},
  };
  for (const auto& [name, step] : methods) {
    PhaseState s{{0.5, -1.0}, {0.3, 0.9}, {1.0, 3.0}};
    StepContext ctx(model);
    NoiseStream stream(1, 0);
    step(s, ctx, stream);
    EXPECT_NEAR(s.x[0], 0.5 + 0.1 * 0.3, 1e-12) << name;
    EXPECT_NEAR(s.x[1], -1.0 + 0.1 * 0.9 / 3.0, 1e-12) << name;
    EXPECT_NEAR(s.p[0], 0.3, 1e-12) << name;
  }
}

TEST(HandWritten, FrictionlessNoiselessBBKIsVelocityVerlet) {
  const LangevinParams params{0.05, 1e-300, 1e-300};
  const auto model = PotentialModel::oscillator();
  PhaseState s{{0.4}, {0.2}, {1.0}};
  StepContext ctx(model);
  ColoredNoiseCache cache;
  NoiseStream stream(1, 0);
  double x = 0.4, p = 0.2;
  for (int i = 0; i < 1000; ++i) {
    step_bbk(s, ctx, params, cache, stream);
    p -= params.dt / 2 * oscillator_eval(x).u1;
    x += params.dt * p;
    p -= params.dt / 2 * oscillator_eval(x).u1;
  }
  EXPECT_NEAR(s.x[0], x, 1e-12);
  EXPECT_NEAR(s.p[0], p, 1e-12);
}

TEST(HandWritten, SpvMatchesItsStatementsOnce) {
  const LangevinParams params{0.2, 3.0, 0.7};
  const auto c = ou_coefficients(params.gamma, params.dt, params.kBT);
  const auto model = PotentialModel::oscillator();
  PhaseState s{{0.25}, {0.5}, {2.0}};
  StepContext ctx(model);
  NoiseStream stream(3, 0), copy(3, 0);
  step_spv(s, ctx, params, c, stream);
  const double xh = 0.25 + 0.2 * 0.5 / 2.0 / 2;
  const double p1 = c.c1 * 0.5 - c.c2 * oscillator_eval(xh).u1 + c.c3 * std::sqrt(2.0) * copy.next_normal();
  EXPECT_DOUBLE_EQ(s.p[0], p1);
  EXPECT_DOUBLE_EQ(s.x[0], xh + 0.2 * p1 / 2.0 / 2);
}

TEST(ForceEvaluations, OnePerStepInSteadyState) {
  const auto model = PotentialModel::oscillator();
  const LangevinParams params{0.1, 1.0, 1.0};
  for (const std::string method :
       {"baoab", "aboba", "spv", "bbk", "euler-maruyama", "baoab-limit", "split:BAOAB", "split:ABOBA",
        "split:OBABO"}) {
    auto integ = make_integrator(method, params);
    PhaseState s = PhaseState::zeros(1);
    StepContext ctx(model);
    NoiseStream stream(2, 0);
    for (int i = 0; i < 10; ++i) integ->step(s, ctx, stream);
    const auto before = ctx.force_evaluations();
    for (int i = 0; i < 500; ++i) integ->step(s, ctx, stream);
    EXPECT_EQ(ctx.force_evaluations() - before, 500u) << method;
  }
}

TEST(EulerMaruyama, NoForceNoTemperatureIsIdentity) {
  const FreePotential model(3);
  StepContext ctx(model);
  NoiseStream stream(1, 0);
  PhaseState s{{1.0, 2.0, 3.0}, {}, {1.0, 1.0, 1.0}};
  step_euler_maruyama(s, ctx, 0.1, 0.0, stream);
  EXPECT_EQ(s.x, (std::vector<double>{1.0, 2.0, 3.0}));
}

TEST(EulerMaruyama, FreeIncrementsHaveVarianceTwoKbtHOverM) {
  const FreePotential model(1);
  StepContext ctx(model);
  NoiseStream stream(6, 0);
  PhaseState s{{0.0}, {}, {2.0}};
  const double h = 0.05, kBT = 1.5;
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double before = s.x[0];
    step_euler_maruyama(s, ctx, h, kBT, stream);
    const double d = s.x[0] - before;
    sum += d;
    sum2 += d * d;
  }
  const double var = sum2 / n - (sum / n) * (sum / n);
  EXPECT_NEAR(var, 2 * kBT * h / 2.0, 0.01 * 2 * kBT * h / 2.0);
}

class EulerMaruyamaHarmonic : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(EulerMaruyamaHarmonic, StationaryVarianceMatchesRecursion) {
  const auto [h, expected] = GetParam();
  const HarmonicPotential model(1);
  auto integ = make_integrator("euler-maruyama", {h, 1.0, 1.0});
  const auto m = sample_moments(*integ, model, 2000000, 13);
  EXPECT_NEAR(m.x2, expected, 0.02 * expected);
}

// 2h / (1 - (1 - h)^2).
INSTANTIATE_TEST_SUITE_P(Steps, EulerMaruyamaHarmonic,
                         ::testing::Values(std::make_pair(0.1, 1.0526315789473684),
                                           std::make_pair(0.5, 1.3333333333333333)));

struct HarmonicCase {
  std::string method;
  double dt;
  double gamma;
  double x2;
  double p2;
};

void PrintTo(const HarmonicCase& c, std::ostream* os) { *os << c.method << " dt=" << c.dt; }

class HarmonicStationary : public ::testing::TestWithParam<HarmonicCase> {};

// Exact stationary second moments from the discrete Lyapunov equation
// (tests/oracles/harmonic_lyapunov.py).
TEST_P(HarmonicStationary, MomentsMatchLyapunovSolution) {
  const auto& c = GetParam();
  const HarmonicPotential model(1);
  auto integ = make_integrator(c.method, {c.dt, c.gamma, 1.0});
  const auto m = sample_moments(*integ, model, 4000000, 17);
  EXPECT_NEAR(m.x2, c.x2, 0.015 * c.x2) << c.method;
  if (c.p2 > 0.0) EXPECT_NEAR(m.p2, c.p2, 0.015 * c.p2) << c.method;
}

INSTANTIATE_TEST_SUITE_P(
    Methods, HarmonicStationary,
    ::testing::Values(HarmonicCase{"baoab", 0.3, 1.0, 1.0, 0.9775},
                      HarmonicCase{"aboba", 0.3, 1.0, 1.0, 1.0230179028132993},
                      HarmonicCase{"spv", 0.3, 1.0, 1.0074887740530247, 1.0228428999321657},
                      HarmonicCase{"bbk", 0.05, 1.0, 1.0006253908692964, 0.9756097560975632},
                      HarmonicCase{"baoab-limit", 0.1, 1.0, 1.0, 0.0}),
    [](const auto& info) {
      std::string n = info.param.method;
      for (auto& ch : n) ch = std::isalnum(static_cast<unsigned char>(ch)) ? ch : '_';
      return n;
    });

TEST(BBK, SamplesTheRequestedTemperature) {
  const HarmonicPotential model(1);
  auto integ = make_integrator("bbk", {0.01, 1.0, 2.0});
  const auto m = sample_moments(*integ, model, 4000000, 19);
  EXPECT_NEAR(m.x2, 2.0, 0.1);
}

TEST(BBK, ReusesTheClosingDrawOnTheNextOpeningKick) {
  const FreePotential model(1);
  const LangevinParams params{0.1, 1.0, 1.0};
  ColoredNoiseCache cache;
  StepContext ctx(model);
  NoiseStream stream(5, 0);
  PhaseState s = PhaseState::zeros(1);
  step_bbk(s, ctx, params, cache, stream);
  EXPECT_EQ(stream.counter(), 2u);
  NoiseStream copy(5, 0);
  copy.seek(1);
  EXPECT_EQ(cache.previous_R[0], copy.next_normal());
  step_bbk(s, ctx, params, cache, stream);
  EXPECT_EQ(stream.counter(), 3u);
}

TEST(Limit, ZeroTemperatureIsGradientDescent) {
  const auto model = PotentialModel::oscillator();
  StepContext ctx(model);
  ColoredNoiseCache cache;
  NoiseStream stream(1, 0);
  PhaseState s{{0.7}, {}, {1.0}};
  double x = 0.7;
  for (int i = 0; i < 50; ++i) {
    step_baoab_limit(s, ctx, cache, 0.01, 0.0, stream);
    x -= 0.01 * oscillator_eval(x).u1;
  }
  EXPECT_NEAR(s.x[0], x, 1e-13);
}

TEST(Limit, ColoredNoiseAutocovariance) {
  // With U = 0, kBT = 1, h = 2 each increment is exactly R_n + R_{n+1} = sqrt(2) Z_n.
  const FreePotential model(1);
  StepContext ctx(model);
  ColoredNoiseCache cache;
  NoiseStream stream(77, 0);
  PhaseState s = PhaseState::zeros(1);
  const std::size_t n = 1000000;
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double before = s.x[0];
    step_baoab_limit(s, ctx, cache, 2.0, 1.0, stream);
    z[i] = (s.x[0] - before) / std::sqrt(2.0);
  }
  EXPECT_NEAR(lag_autocovariance(z, 0), 1.0, 0.01);
  EXPECT_NEAR(lag_autocovariance(z, 1), 0.5, 0.01);
  EXPECT_LT(std::abs(lag_autocovariance(z, 2)), 0.01);
  EXPECT_LT(std::abs(lag_autocovariance(z, 3)), 0.01);
}

TEST(Limit, PrimesFromTheStreamThenOneDrawPerStep) {
  const FreePotential model(2);
  StepContext ctx(model);
  ColoredNoiseCache cache;
  NoiseStream stream(1, 0);
  PhaseState s = PhaseState::zeros(2);
  step_baoab_limit(s, ctx, cache, 0.1, 1.0, stream);
  EXPECT_EQ(stream.counter(), 4u);
  step_baoab_limit(s, ctx, cache, 0.1, 1.0, stream);
  EXPECT_EQ(stream.counter(), 6u);
}

TEST(HighFriction, BaoabCollapsesToTheLimitMethod) {
  const double dt = 0.1, gamma = 1e4, kBT = 1.0;
  const LangevinParams params{dt, gamma, kBT};
  const auto coeffs = ou_coefficients(gamma, dt, kBT);
  ASSERT_EQ(coeffs.c1, 0.0);
  const auto model = PotentialModel::oscillator();
  NoiseStream sa(404, 0), sb(404, 0);
  StepContext ca(model), cb(model);
  PhaseState a{{0.2}, {0.0}, {1.0}};
  a.p[0] = std::sqrt(kBT) * sa.next_normal() - dt / 2 * oscillator_eval(0.2).u1;
  PhaseState b{{0.2}, {}, {1.0}};
  ColoredNoiseCache cache;
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    step_baoab(a, ca, params, coeffs, sa);
    step_baoab_limit(b, cb, cache, dt * dt / 2, kBT, sb);
    worst = std::max(worst, max_rel_diff(a.x, b.x));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(Divergence, IsReportedNotPropagated) {
  const auto model = PotentialModel::oscillator();
  auto integ = make_integrator("euler-maruyama", {1.0, 1.0, 1.0});
  PhaseState s{{3.0}, {0.0}, {1.0}};
  StepContext ctx(model);
  NoiseStream stream(1, 0);
  StepStatus status = StepStatus::Ok;
  for (int i = 0; i < 100 && status == StepStatus::Ok; ++i) status = integ->step(s, ctx, stream);
  EXPECT_EQ(status, StepStatus::Diverged);
}

TEST(Methods, NamesAndKinds) {
  for (const char* m : {"baoab", "aboba", "spv", "bbk", "euler-maruyama", "baoab-limit", "split:OBABO"}) {
    EXPECT_TRUE(is_known_method(m)) << m;
    EXPECT_EQ(make_integrator(m, {})->name(), m);
  }
  EXPECT_FALSE(is_known_method("split:"));
  EXPECT_FALSE(is_known_method("leapfrog"));
  EXPECT_TRUE(is_brownian_method("euler-maruyama"));
  EXPECT_TRUE(is_brownian_method("baoab-limit"));
  EXPECT_FALSE(is_brownian_method("baoab"));
  EXPECT_FALSE(make_integrator("baoab-limit", {})->uses_momenta());
  EXPECT_TRUE(make_integrator("split:OBABO", {})->uses_momenta());
}
