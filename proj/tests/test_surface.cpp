#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/surface.hpp"

using namespace imcf;
using V3 = Eigen::Vector3d;

namespace {

double lumpy(double th, double ph) {
  return 1.0 + 0.05 * std::cos(th) + 0.04 * std::sin(th) * std::sin(th) * std::cos(2 * ph);
}

// The same graph in the Poincare ball: geodesic radius r maps to tanh(r / 2).
V3 ball_point(double th, double ph) {
  const double rho = std::tanh(std::asinh(lumpy(th, ph)) / 2.0);
  return rho * V3(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
}

// Hyperbolic mean curvature from the Euclidean one under the conformal factor
// e^w = 2 / (1 - |x|^2): H_g = e^{-w} (H_e + 2 dw(n)).
double ball_mean_curvature(double th, double ph) {
  const double h = 1e-3;
  const V3 x = ball_point(th, ph);
  const V3 xt = (ball_point(th + h, ph) - ball_point(th - h, ph)) / (2 * h);
  const V3 xp = (ball_point(th, ph + h) - ball_point(th, ph - h)) / (2 * h);
  const V3 xtt = (ball_point(th + h, ph) - 2 * x + ball_point(th - h, ph)) / (h * h);
  const V3 xpp = (ball_point(th, ph + h) - 2 * x + ball_point(th, ph - h)) / (h * h);
  const V3 xtp = (ball_point(th + h, ph + h) - ball_point(th + h, ph - h) - ball_point(th - h, ph + h) +
                  ball_point(th - h, ph - h)) /
                 (4 * h * h);
  V3 n = xt.cross(xp).normalized();
  if (n.dot(x) < 0) n = -n;
  const double E = xt.dot(xt), F = xt.dot(xp), G = xp.dot(xp);
  const double L = -xtt.dot(n), M = -xtp.dot(n), N = -xpp.dot(n);
  const double He = (E * N - 2 * F * M + G * L) / (E * G - F * F);
  const double q = 1.0 - x.squaredNorm();
  return (He + 2.0 * (2.0 * x / q).dot(n)) * q / 2.0;
}

}  // namespace

TEST(Surface, RoundSphereInHyperbolicSpace) {
  const auto hyp = AmbientProfile::hyperbolic();
  const auto grid = make_grid(16, 32);
  for (double s : {0.5, 1.0, 3.0}) {
    const SurfaceGeometry g = geometry(hyp, make_round(hyp, s, grid));
    const double H = 2.0 * std::sqrt(1.0 + s * s) / s;
    EXPECT_LT((g.H.array() - H).abs().maxCoeff(), 1e-12);
    EXPECT_LT((g.lam2 - g.lam1).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((g.K.array() - 1.0 / (s * s)).abs().maxCoeff(), 1e-12);
    EXPECT_LT((g.Rc_nn.array() + 2.0).abs().maxCoeff(), 1e-10);
    EXPECT_NEAR(g.area(), 4.0 * std::numbers::pi * s * s, 1e-11 * s * s);
    EXPECT_NEAR(euler_characteristic(g), 2.0, 1e-12);
    EXPECT_LT(g.grad_H2.maxCoeff(), 1e-20);
  }
}

TEST(Surface, RoundSphereInAdss) {
  const double m = 1.0;
  const auto adss = AmbientProfile::adss(m);
  const auto grid = make_grid(8, 16);
  for (double s : {1.5, 2.0, 4.0}) {
    const SurfaceGeometry g = geometry(adss, make_round(adss, s, grid));
    EXPECT_NEAR(g.H(0, 0), 2.0 * std::sqrt(1.0 + s * s - 2.0 * m / s) / s, 1e-12);
    EXPECT_NEAR(g.Rc_nn(3, 5), -2.0 - 2.0 * m / (s * s * s), 1e-10);
  }
}

TEST(Surface, MeanCurvatureMatchesBallEmbedding) {
  const auto hyp = AmbientProfile::hyperbolic();
  const int nt = 32;
  const auto grid = make_grid(nt, 2 * nt);
  const SurfaceGeometry g = geometry(hyp, make_graph(hyp, grid, lumpy));
  double err = 0.0;
  for (int i = nt / 8; i < nt - nt / 8; i += 3) {
    for (int j = 0; j < 2 * nt; j += 5) {
      err = std::max(err, std::abs(ball_mean_curvature(grid->theta(i), grid->phi(j)) - g.H(i, j)));
    }
  }
  // Dominated by the finite-difference error of the oracle.
  EXPECT_LT(err, 5e-6);
}

TEST(Surface, GaussBonnetOnGraphs) {
  const auto hyp = AmbientProfile::hyperbolic();
  const auto grid = make_grid(32, 64);
  const auto shapes = {
      std::function<double(double, double)>(lumpy),
      std::function<double(double, double)>([](double th, double ph) {
        return 2.0 + 0.2 * std::sin(th) * std::sin(th) * std::sin(th) * std::cos(3 * ph);
      }),
      std::function<double(double, double)>([](double th, double) { return std::exp(0.3 * std::cos(th)); }),
  };
  for (const auto& f : shapes) {
    EXPECT_NEAR(euler_characteristic(geometry(hyp, make_graph(hyp, grid, f))), 2.0, 1e-8);
  }
}

TEST(Surface, PrincipalCurvaturesSumToH) {
  const auto hyp = AmbientProfile::hyperbolic();
  const SurfaceGeometry g = geometry(hyp, make_graph(hyp, make_grid(16, 32), lumpy));
  EXPECT_LT((g.lam1 + g.lam2 - g.H).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE((g.lam1.array() <= g.lam2.array()).all());
  EXPECT_TRUE((g.tilt.array() >= 1.0).all());
}

TEST(Surface, IntrinsicDiameterOfRoundSphere) {
  const auto hyp = AmbientProfile::hyperbolic();
  const SurfaceGeometry g = geometry(hyp, make_round(hyp, 1.0, make_grid(16, 32)));
  const double d = intrinsic_diameter(g);
  EXPECT_GE(d, std::numbers::pi * 0.98);
  EXPECT_LE(d, std::numbers::pi * 1.05);
}

TEST(Surface, ErrorsOnInvalidInput) {
  const auto hyp = AmbientProfile::hyperbolic();
  const auto adss = AmbientProfile::adss(1.0);
  const auto grid = make_grid(8, 16);
  EXPECT_THROW(make_round(adss, 0.5, grid), DomainError);
  EXPECT_THROW(make_graph(hyp, grid, [](double, double) { return -1.0; }), DomainError);
  GraphSurface bad = make_round(hyp, 1.0, grid);
  bad.u(0, 0) = -0.1;
  EXPECT_THROW(geometry(hyp, bad), GeometryError);
  // A deep dent is not mean convex.
  const auto dent = make_graph(hyp, make_grid(32, 64), [](double th, double) {
    return 1.0 - 0.6 * std::exp(-std::pow(th / 0.3, 2));
  });
  EXPECT_THROW(geometry(hyp, dent), CurvatureError);
  EXPECT_NO_THROW(geometry(hyp, dent, false));
  const SurfaceGeometry g = geometry(hyp, make_round(hyp, 1.0, grid));
  EXPECT_THROW(integrate(g, Field::Zero(3, 3)), ShapeError);
}
