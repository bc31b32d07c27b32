#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "imcf/comparison.hpp"
#include "imcf/quadrature.hpp"

using namespace imcf;

namespace {

FlowTrack round_flow(const AmbientProfile& p, double s0, double T, int nt = 8) {
  FlowOptions opt;
  opt.snapshot_every = 10;
  opt.track_normal = false;
  return run(p, make_round(p, s0, make_grid(nt, 2 * nt)), T, 1e-3, opt);
}

GraphSurface bumpy(const AmbientProfile& p, double e) {
  return make_graph(p, make_grid(16, 32), [e](double th, double ph) {
    return 1.0 + e * (1.5 * std::cos(th) * std::cos(th) - 0.5 + std::sin(th) * std::sin(th) * std::cos(2 * ph));
  });
}

}  // namespace

TEST(Comparison, LabelNamesRoundTrip) {
  for (const char* n : {"hat", "g1", "g2", "g2'", "g3_PMT", "g3_RPI", "g3_alt", "hyperbolic_model", "adss_model"}) {
    EXPECT_EQ(to_string(metric_label(n)), n);
  }
  EXPECT_THROW(metric_label("g4"), ArgumentError);
}

TEST(Comparison, ModelMeanCurvatureMatchesRoundSpheres) {
  const double r0 = 2.0, m = 1.0;
  const auto adss = AmbientProfile::adss(m);
  for (double t : {0.0, 0.7, 2.0}) {
    const double s = r0 * std::exp(0.5 * t);
    const double H = 2.0 * adss.at_area_radius(s).dlambda / s;
    EXPECT_NEAR(model_mean_curvature_sq(t, r0, m), H * H, 1e-12);
  }
}

TEST(Comparison, RoundHyperbolicFlowMatchesEveryModel) {
  const auto hyp = AmbientProfile::hyperbolic();
  const FlowTrack tr = round_flow(hyp, 1.0, 1.0);
  const auto hat = assemble(tr, MetricLabel::hat);
  for (MetricLabel l : {MetricLabel::g1, MetricLabel::g2, MetricLabel::g2_prime, MetricLabel::g3_pmt,
                        MetricLabel::hyperbolic_model}) {
    EXPECT_LT(l2_distance(hat, assemble(tr, l), hat, tr), 1e-18) << to_string(l);
  }
}

TEST(Comparison, RoundAdssFlowMatchesAdssModel) {
  const auto adss = AmbientProfile::adss(1.0);
  const FlowTrack tr = round_flow(adss, 2.0, 1.0);
  MetricParams p;
  p.m = 1.0;
  const auto hat = assemble(tr, MetricLabel::hat);
  EXPECT_LT(l2_distance(hat, assemble(tr, MetricLabel::adss_model, p), hat, tr), 1e-18);
  EXPECT_LT(l2_distance(hat, assemble(tr, MetricLabel::g3_rpi, p), hat, tr), 1e-18);
  // The hyperbolic model lapse misses the mass term.
  EXPECT_GT(l2_distance(hat, assemble(tr, MetricLabel::hyperbolic_model), hat, tr), 1e-4);
}

TEST(Comparison, LapseOnlyDistanceAgainstQuadrature) {
  // hat vs g3_alt on the round hyperbolic flow: fibers agree, and the relative
  // lapse difference is -s^2, so the density is s^4 / H over the sphere.
  const auto hyp = AmbientProfile::hyperbolic();
  const FlowTrack tr = round_flow(hyp, 1.0, 1.0);
  const auto hat = assemble(tr, MetricLabel::hat);
  const std::vector<double> series = l2_distance_series(hat, assemble(tr, MetricLabel::g3_alt), hat, tr);
  const auto density = [](double t) {
    const double s = std::exp(0.5 * t);
    return std::pow(s, 4) * s / (2.0 * std::sqrt(1.0 + s * s)) * 4.0 * std::numbers::pi * s * s;
  };
  EXPECT_NEAR(series.back(), integrate_gl(density, 0.0, 1.0), 1e-4 * series.back());
  EXPECT_DOUBLE_EQ(series.front(), 0.0);
  for (std::size_t k = 1; k < series.size(); ++k) EXPECT_GE(series[k], series[k - 1]);
}

TEST(Comparison, ParameterErrors) {
  const auto hyp = AmbientProfile::hyperbolic();
  const FlowTrack tr = round_flow(hyp, 1.0, 0.1);
  MetricParams bad_r0;
  bad_r0.r0 = -1.0;
  EXPECT_THROW(assemble(tr, MetricLabel::hat, bad_r0), ParamError);
  EXPECT_THROW(assemble(tr, MetricLabel::g3_rpi), ParamError);
  MetricParams heavy;
  heavy.r0 = 1.0;
  heavy.m = 2.0;
  EXPECT_THROW(assemble(tr, MetricLabel::adss_model, heavy), LapseError);
  const FlowTrack other = round_flow(hyp, 1.0, 0.1, 16);
  const auto a = assemble(tr, MetricLabel::hat);
  EXPECT_THROW(l2_distance(a, assemble(other, MetricLabel::hat), a, tr), ShapeError);
}

TEST(Comparison, CAlphaOfConstantOffset) {
  const SphereGrid g(8, 16);
  const double r0 = 1.5;
  const Field c = Field::Constant(8, 16, r0 * r0 + 0.3);
  EXPECT_NEAR(c_alpha_distance_to_round(g, c, Field::Zero(8, 16), c, r0), 0.3, 1e-14);
  const Field round = Field::Constant(8, 16, r0 * r0);
  EXPECT_DOUBLE_EQ(c_alpha_distance_to_round(g, round, Field::Zero(8, 16), round, r0), 0.0);
  EXPECT_THROW(c_alpha_distance_to_round(g, round, Field::Zero(8, 16), round, r0, 1.5), ArgumentError);
}

TEST(Comparison, CAlphaScalesLinearlyWithPerturbation) {
  const auto hyp = AmbientProfile::hyperbolic();
  const double d1 = c_alpha_distance_to_round(geometry(hyp, bumpy(hyp, 0.02)), 1.0);
  const double d2 = c_alpha_distance_to_round(geometry(hyp, bumpy(hyp, 0.01)), 1.0);
  EXPECT_GT(d1 / d2, 1.8);
  EXPECT_LT(d1 / d2, 2.2);
}

TEST(Comparison, GaussDeviation) {
  const auto hyp = AmbientProfile::hyperbolic();
  const auto grid = make_grid(8, 16);
  const double t = 0.4, r0 = 1.2;
  const SurfaceGeometry g = geometry(hyp, make_round(hyp, r0 * std::exp(0.5 * t), grid));
  EXPECT_LT(gauss_deviation(g, r0, t), 1e-24);
  // Second order in the perturbation amplitude.
  const double q1 = gauss_deviation(geometry(hyp, bumpy(hyp, 0.02)), 1.0, 0.0);
  const double q2 = gauss_deviation(geometry(hyp, bumpy(hyp, 0.01)), 1.0, 0.0);
  EXPECT_GT(q1 / q2, 3.6);
  EXPECT_LT(q1 / q2, 4.4);
}
