#include <gtest/gtest.h>

#include <cmath>

#include "hamosc/divergence.hpp"
#include "hamosc/errors.hpp"
#include "hamosc/quadrature.hpp"

using namespace hamosc;
using namespace hamosc::criteria;

TEST(Quadrature, SimpsonIsExactForCubics) {
  auto f = [](double t) { return 1 + t - 3 * t * t + 2 * t * t * t; };
  const double exact = 2 + 2 - 8 + 8;  // on [0, 2]
  EXPECT_NEAR(quad::simpson(f, 0, 2, 1), exact, 1e-13);
  const auto g = quad::uniform_grid(0, 2, 7);
  EXPECT_NEAR(quad::cumulative_simpson(std::span<const double>(g), f).back(), exact, 1e-13);
}

TEST(Quadrature, SampledRunningIntegral) {
  const auto g = quad::uniform_grid(0, M_PI, 2000);
  std::vector<double> v;
  for (double t : g) v.push_back(std::sin(t));
  const auto r = quad::cumulative_integral_of_samples(std::span<const double>(g), std::span<const double>(v));
  for (std::size_t i = 0; i < g.size(); i += 250) EXPECT_NEAR(r[i], 1 - std::cos(g[i]), 1e-10);
  v.pop_back();
  EXPECT_THROW(quad::cumulative_integral_of_samples(std::span<const double>(g), std::span<const double>(v)),
               GridMismatch);
}

TEST(Quadrature, InterleavedMatchesCallable) {
  auto f = [](double t) { return std::exp(-t) * std::cos(3 * t); };
  const auto g = quad::uniform_grid(0, 4, 64);
  const auto fine = quad::with_midpoints(g);
  ASSERT_EQ(fine.size(), 129u);
  std::vector<double> v;
  for (double t : fine) v.push_back(f(t));
  const auto a = quad::cumulative_simpson_interleaved(g, v);
  const auto b = quad::cumulative_simpson(std::span<const double>(g), f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(a[i], b[i], 1e-15);
}

TEST(Divergence, LinearSeriesDiverges) {
  DivergenceOpts o;
  o.t_max = 100;
  o.threshold = 10;
  const auto e = divergence_estimate("t", [](double t) { return t; }, 0.0, o);
  EXPECT_EQ(e.verdict, DivergenceVerdict::Diverges);
  EXPECT_EQ(e.checkpoints.size(), 8u);
  EXPECT_DOUBLE_EQ(e.checkpoints.back().t, 100.0);
  EXPECT_DOUBLE_EQ(e.checkpoints.front().t, 100.0 / 128);
  EXPECT_GE(e.monotone_tail, 3);
}

TEST(Divergence, SaturatingSeriesIsBounded) {
  const auto e = divergence_estimate("1-exp(-t)", [](double t) { return 1 - std::exp(-t); }, 0.0, {});
  EXPECT_EQ(e.verdict, DivergenceVerdict::Bounded);
}

TEST(Divergence, SlowGrowthBelowThresholdIsInconclusive) {
  DivergenceOpts o;
  o.t_max = 1000;
  o.threshold = 10;
  const auto e = divergence_estimate("log", [](double t) { return std::log(t); }, 0.0, o);
  EXPECT_EQ(e.verdict, DivergenceVerdict::Inconclusive);
  EXPECT_LT(e.final_value, 10.0);
}

TEST(Divergence, RejectsTooFewCheckpoints) {
  DivergenceOpts o;
  o.checkpoints = 3;
  EXPECT_THROW(divergence_estimate("t", [](double t) { return t; }, 0.0, o), ConfigError);
}

TEST(Divergence, CheckpointsAreGridNodes) {
  DivergenceOpts o;
  o.t_max = 37.5;
  const auto g = checkpoint_grid(2.5, o);
  const auto times = checkpoint_times(2.5, o);
  ASSERT_EQ(g.checkpoint_index.size(), times.size());
  for (std::size_t k = 0; k < times.size(); ++k) EXPECT_NEAR(g.t[g.checkpoint_index[k]], times[k], 1e-12);
  EXPECT_LE(g.t[1] - g.t[0], 0.05 + 1e-12);
}

// Monotone evidence: a diverging verdict on a nondecreasing series persists for longer horizons.
TEST(Divergence, MonotoneEvidencePersists) {
  const std::function<double(double)> series[] = {
      [](double t) { return t; }, [](double t) { return std::sqrt(t) * 10; },
      [](double t) { return t + std::sin(t) * 0.5; }, [](double t) { return std::floor(t / 3) * 3 + t * 0.01; }};
  for (const auto& f : series) {
    for (double T = 100; T <= 3200; T *= 2) {
      DivergenceOpts o;
      o.t_max = T;
      if (divergence_estimate("f", f, 0.0, o).verdict != DivergenceVerdict::Diverges) continue;
      for (double T2 = T * 2; T2 <= 6400; T2 *= 2) {
        o.t_max = T2;
        EXPECT_EQ(divergence_estimate("f", f, 0.0, o).verdict, DivergenceVerdict::Diverges) << T2;
      }
      break;
    }
  }
}
