#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/sphere_grid.hpp"

using namespace imcf;

namespace {

template <class F>
Field sample(const SphereGrid& g, F&& f) {
  Field out(g.ntheta(), g.nphi());
  for (int i = 0; i < g.ntheta(); ++i)
    for (int j = 0; j < g.nphi(); ++j) out(i, j) = f(g.theta(i), g.phi(j));
  return out;
}

double smooth(double th, double ph) {
  const double x = std::sin(th) * std::cos(ph), y = std::sin(th) * std::sin(ph), z = std::cos(th);
  return std::exp(0.7 * x - 0.3 * y + 0.5 * z);
}

}  // namespace

TEST(SphereGrid, WeightsSumToSphereArea) {
  const SphereGrid g(16, 32);
  EXPECT_NEAR(g.integrate(g.zeros().array() + 1.0), 4.0 * std::numbers::pi, 1e-12);
  const Field z2 = sample(g, [](double th, double) { return std::cos(th) * std::cos(th); });
  EXPECT_NEAR(g.integrate(z2), 4.0 * std::numbers::pi / 3.0, 1e-12);
}

TEST(SphereGrid, IntegratesSmoothFieldSpectrally) {
  // int_S2 exp(a.x) = 4 pi sinh|a| / |a|
  const double a = std::sqrt(0.49 + 0.09 + 0.25);
  const double exact = 4.0 * std::numbers::pi * std::sinh(a) / a;
  const SphereGrid g(16, 32);
  EXPECT_NEAR(g.integrate(sample(g, smooth)), exact, 1e-12);
}

TEST(SphereGrid, DerivativesOfSmoothField) {
  const SphereGrid g(24, 48);
  const Field f = sample(g, smooth);
  const Field ft = g.d_theta(f), fp = g.d_phi(f), ftt = g.d_theta2(f), fpp = g.d_phi2(f);
  double err = 0.0;
  for (int i = 0; i < g.ntheta(); ++i) {
    for (int j = 0; j < g.nphi(); ++j) {
      const double th = g.theta(i), ph = g.phi(j);
      const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
      const double v = f(i, j);
      // e = 0.7 x - 0.3 y + 0.5 z
      const double et = 0.7 * ct * cp - 0.3 * ct * sp - 0.5 * st;
      const double ep = -0.7 * st * sp - 0.3 * st * cp;
      const double ett = -0.7 * st * cp + 0.3 * st * sp - 0.5 * ct;
      const double epp = -0.7 * st * cp + 0.3 * st * sp;
      err = std::max(err, std::abs(ft(i, j) - v * et));
      err = std::max(err, std::abs(fp(i, j) - v * ep));
      err = std::max(err, std::abs(ftt(i, j) - v * (ett + et * et)));
      err = std::max(err, std::abs(fpp(i, j) - v * (epp + ep * ep)));
    }
  }
  EXPECT_LT(err, 1e-10);
}

TEST(SphereGrid, BatchedGradientsMatchSingle) {
  const SphereGrid g(16, 32);
  const Field a = sample(g, smooth);
  const Field b = sample(g, [](double th, double ph) { return std::sin(th) * std::sin(th) * std::cos(2 * ph); });
  std::vector<Field> dt, dp;
  g.gradients({&a, &b}, dt, dp);
  ASSERT_EQ(dt.size(), 2u);
  EXPECT_LT((dt[0] - g.d_theta(a)).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT((dp[1] - g.d_phi(b)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(SphereGrid, InterpolatesOffGrid) {
  const SphereGrid g(24, 48);
  const Field f = sample(g, smooth);
  for (auto [th, ph] : {std::pair{0.01, 1.0}, std::pair{1.234, 5.0}, std::pair{3.1, 0.2}}) {
    const auto v = g.interpolate({&f}, th, ph);
    EXPECT_NEAR(v[0], smooth(th, ph), 1e-11);
  }
}

TEST(SphereGrid, FilterPreservesAxisymmetricFields) {
  const SphereGrid g(16, 32);
  const Field f = sample(g, [](double th, double) { return std::exp(std::cos(th)); });
  Field h = f;
  g.filter(h);
  EXPECT_LT((h - f).cwiseAbs().maxCoeff(), 1e-14);
  // Constant rings come back bitwise unchanged, otherwise roundoff seeds
  // gradients on round flows.
  Field c = sample(g, [](double th, double) { return 0.3 + th; });
  const Field c0 = c;
  g.filter(c);
  EXPECT_TRUE((c.array() == c0.array()).all());
}

TEST(SphereGrid, NoNodeOnPole) {
  const SphereGrid g(8, 16);
  for (int i = 0; i < g.ntheta(); ++i) EXPECT_GT(g.sin_theta(i), 0.05);
  EXPECT_NEAR(g.sphere_distance(0, 0, 0, 8), 2.0 * g.theta(0), 1e-12);
}

TEST(SphereGrid, RejectsBadSizes) {
  EXPECT_THROW(SphereGrid(2, 8), ArgumentError);
  EXPECT_THROW(SphereGrid(8, 7), ArgumentError);
}
