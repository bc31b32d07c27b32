#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/quadrature.hpp"
#include "imcf/spline.hpp"

using namespace imcf;

TEST(Quadrature, GaussLegendreIntegratesPolynomialsExactly) {
  const GaussLegendre gl = gauss_legendre(8);
  double sum_w = 0.0;
  for (double w : gl.weights) sum_w += w;
  EXPECT_NEAR(sum_w, 2.0, 1e-14);
  // Degree 15 is the highest exact degree for 8 nodes.
  double i14 = 0.0;
  for (std::size_t k = 0; k < gl.nodes.size(); ++k) i14 += gl.weights[k] * std::pow(gl.nodes[k], 14);
  EXPECT_NEAR(i14, 2.0 / 15.0, 1e-14);
  EXPECT_THROW(gauss_legendre(0), ArgumentError);
}

TEST(Spline, NotAKnotReproducesCubics) {
  std::vector<double> x, y;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.3 * i + 0.01 * i * i;
    x.push_back(t);
    y.push_back(t * t * t - 2.0 * t + 1.0);
  }
  const CubicSpline sp(x, y);
  for (double t : {0.1, 0.77, 1.9, 3.9}) {
    const Jet j = sp(t);
    EXPECT_NEAR(j.value, t * t * t - 2.0 * t + 1.0, 1e-11);
    EXPECT_NEAR(j.d1, 3.0 * t * t - 2.0, 1e-10);
    EXPECT_NEAR(j.d2, 6.0 * t, 1e-9);
  }
}

TEST(Spline, PchipPreservesMonotonicity) {
  const std::vector<double> x{0, 1, 2, 3, 4, 5};
  const std::vector<double> y{0, 0, 0, 1, 1, 1};
  const PchipSpline sp(x, y);
  double prev = -1.0;
  for (double t = 0.0; t <= 5.0; t += 0.01) {
    const double v = sp(t).value;
    EXPECT_GE(v, prev - 1e-15);
    EXPECT_GE(v, -1e-15);
    EXPECT_LE(v, 1.0 + 1e-15);
    prev = v;
  }
}

TEST(Spline, RejectsUnsortedKnots) {
  const std::vector<double> x{0, 2, 1, 3};
  const std::vector<double> y{0, 1, 2, 3};
  EXPECT_THROW(CubicSpline(x, y), ProfileError);
}

TEST(Ambient, HyperbolicWarpIsSinh) {
  const AmbientProfile h = AmbientProfile::hyperbolic();
  for (double r : {0.1, 1.0, 3.0}) {
    const WarpSample w = warp_eval(h, r);
    EXPECT_NEAR(w.lambda, std::sinh(r), 1e-12 * std::cosh(r));
    EXPECT_NEAR(w.dlambda, std::cosh(r), 1e-12 * std::cosh(r));
    EXPECT_NEAR(w.ddlambda, std::sinh(r), 1e-12 * std::cosh(r));
    EXPECT_NEAR(h.radius_of(std::sinh(r)), r, 1e-12);
  }
}

TEST(Ambient, HyperbolicCurvatureIsConstant) {
  const AmbientProfile h = AmbientProfile::hyperbolic();
  for (double r : {0.2, 1.5, 4.0}) {
    const CurvatureSample c = curvature_sample(h, r);
    EXPECT_NEAR(c.R, -6.0, 1e-10);
    EXPECT_NEAR(c.Rc_nn, -2.0, 1e-10);
    EXPECT_NEAR(c.K12, -1.0, 1e-10);
  }
}

TEST(Ambient, AdssRadialRicciMatchesClosedForm) {
  const double m = 1.0;
  const AmbientProfile a = AmbientProfile::adss(m);
  for (double s : {1.5, 2.0, 5.0}) {
    const CurvatureSample c = curvature_at_area_radius(a, s);
    EXPECT_NEAR(c.Rc_nn, -2.0 - 2.0 * m / (s * s * s), 1e-10);
    EXPECT_NEAR(c.K12, -1.0 + 2.0 * m / (s * s * s), 1e-10);
    EXPECT_NEAR(c.R, -6.0, 1e-10);
    const WarpSample w = a.at_area_radius(s);
    EXPECT_NEAR(w.dlambda * w.dlambda, 1.0 + s * s - 2.0 * m / s, 1e-12);
  }
}

TEST(Ambient, AdssHorizonSolvesLapseEquation) {
  for (double m : {0.1, 0.5, 1.0, 7.0}) {
    const double s = AmbientProfile::horizon_radius(m);
    EXPECT_NEAR(s * s * s + s - 2.0 * m, 0.0, 1e-12 * (1.0 + m));
  }
  EXPECT_NEAR(AmbientProfile::horizon_radius(1.0), 1.0, 1e-14);
}

TEST(Ambient, AdssRejectsNonpositiveMass) {
  EXPECT_THROW(AmbientProfile::adss(0.0), ParamError);
  EXPECT_THROW(AmbientProfile::adss(-1.0), ParamError);
}

TEST(Ambient, ConstantMassAspectMatchesAdss) {
  const double m = 0.5;
  std::vector<double> s, mm;
  for (int i = 0; i <= 200; ++i) {
    s.push_back(1.0 + 0.05 * i);
    mm.push_back(m);
  }
  const AmbientProfile ma = AmbientProfile::mass_aspect(s, mm);
  const AmbientProfile ad = AmbientProfile::adss(m);
  for (double x : {1.2, 3.3, 9.0}) {
    const WarpSample a = ma.at_area_radius(x), b = ad.at_area_radius(x);
    EXPECT_NEAR(a.dlambda, b.dlambda, 1e-12);
    EXPECT_NEAR(a.ddlambda, b.ddlambda, 1e-12);
  }
}

TEST(Ambient, TabulatedSinhApproximatesHyperbolic) {
  std::vector<double> r, l;
  for (int i = 0; i <= 400; ++i) {
    r.push_back(0.1 + 0.01 * i);
    l.push_back(std::sinh(r.back()));
  }
  const AmbientProfile t = AmbientProfile::tabulated(r, l);
  const CurvatureSample c = curvature_sample(t, 2.0);
  EXPECT_NEAR(c.Rc_nn, -2.0, 1e-4);  // O(h^2) in the second derivative
  EXPECT_NEAR(c.K12, -1.0, 1e-6);
}

TEST(Ambient, OutOfDomainThrows) {
  const AmbientProfile a = AmbientProfile::adss(1.0);
  EXPECT_THROW((void)a.at_area_radius(0.5), DomainError);
}

TEST(Ambient, ValidateFlagsDecreasingMassAspect) {
  std::vector<double> s, m;
  for (int i = 0; i <= 100; ++i) {
    s.push_back(1.0 + 0.02 * i);
    m.push_back(0.5 - 0.1 * i / 100.0);  // m' < 0 gives R < -6
  }
  const ProfileReport bad = validate_profile(AmbientProfile::mass_aspect(s, m), 1e-9);
  EXPECT_FALSE(bad.r_floor_ok);
  EXPECT_LT(bad.min_R, -6.0);
  const ProfileReport good = validate_profile(AmbientProfile::adss(1.0), 1e-9, 1.5, 10.0);
  EXPECT_TRUE(good.pass());
}

// Property: for random increasing mass aspects the scalar curvature floor holds.
TEST(Ambient, IncreasingMassAspectRespectsCurvatureFloor) {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> inc(0.0, 0.02);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> s, m;
    double acc = 0.1;
    for (int i = 0; i <= 60; ++i) {
      s.push_back(1.0 + 0.1 * i);
      m.push_back(acc);
      acc += inc(rng);
    }
    const ProfileReport rep = validate_profile(AmbientProfile::mass_aspect(s, m), 1e-9);
    EXPECT_TRUE(rep.r_floor_ok) << "trial " << trial << " min R " << rep.min_R;
  }
}
