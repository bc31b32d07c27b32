#pragma once

// Product metrics on Sigma x [0, T] of the form  lapse^2 dt^2 + fiber(x, t)
// and their L^2 distances, plus the fiber-to-round C^alpha distance.
//
// All fibers are expressed in the radial-graph coordinates of the track
// (sigma-orthonormal frame at each node), the coordinates every snapshot is
// stored in.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/imcf.hpp"
#include "imcf/sphere_grid.hpp"
#include "imcf/surface.hpp"

namespace imcf {

enum class MetricLabel { hat, g1, g2, g2_prime, g3_pmt, g3_rpi, g3_alt, hyperbolic_model, adss_model };

inline std::string_view to_string(MetricLabel l) {
  switch (l) {
    case MetricLabel::hat: return "hat";
    case MetricLabel::g1: return "g1";
    case MetricLabel::g2: return "g2";
    case MetricLabel::g2_prime: return "g2'";
    case MetricLabel::g3_pmt: return "g3_PMT";
    case MetricLabel::g3_rpi: return "g3_RPI";
    case MetricLabel::g3_alt: return "g3_alt";
    case MetricLabel::hyperbolic_model: return "hyperbolic_model";
    case MetricLabel::adss_model: return "adss_model";
  }
  return "?";
}

inline MetricLabel metric_label(std::string_view name) {
  for (MetricLabel l : {MetricLabel::hat, MetricLabel::g1, MetricLabel::g2, MetricLabel::g2_prime,
                        MetricLabel::g3_pmt, MetricLabel::g3_rpi, MetricLabel::g3_alt,
                        MetricLabel::hyperbolic_model, MetricLabel::adss_model}) {
    if (to_string(l) == name) return l;
  }
  throw ArgumentError("unknown metric label '" + std::string(name) + "'");
}

struct MetricParams {
  std::optional<double> r0;  // defaults to the track's area radius sqrt(|Sigma_0| / 4 pi)
  double m = 0.0;
};

/// Block-diagonal metric sampled at every (node, snapshot).
struct ProductMetricGrid {
  MetricLabel label = MetricLabel::hat;
  GridPtr grid;
  std::vector<double> times;
  std::vector<Field> lapse2;         // dt^2 coefficient
  std::vector<Field> f11, f12, f22;  // fiber, sigma-orthonormal frame
};

/// Area-averaged mean curvature of a snapshot.
inline double mean_curvature_average(const SurfaceGeometry& g) {
  return integrate(g, g.H) / g.area();
}

inline ProductMetricGrid assemble(const FlowTrack& track, MetricLabel label, const MetricParams& params = {}) {
  const double r0 = params.r0.value_or(track.bounds.r0);
  const double m = params.m;
  if (!(r0 > 0.0)) throw ParamError("assemble: r0 must be positive");
  if ((label == MetricLabel::g3_rpi || label == MetricLabel::adss_model) && !(m > 0.0)) {
    throw ParamError("assemble: " + std::string(to_string(label)) + " needs m > 0");
  }
  ProductMetricGrid out;
  out.label = label;
  out.grid = track.surfaces.front().grid;
  const int nt = out.grid->ntheta(), np = out.grid->nphi();
  const SurfaceGeometry& first = track.geometries.front();
  const SurfaceGeometry& last = track.geometries.back();
  const double T = track.final_time();
  const double t0 = track.times.front();

  for (std::size_t k = 0; k < track.size(); ++k) {
    const SurfaceGeometry& g = track.geometries[k];
    const double t = track.times[k] - t0;
    Field lapse(nt, np);
    const double Hbar2 = [&] {
      const double h = mean_curvature_average(g);
      return h * h;
    }();
    const double pmt = 0.25 / (1.0 + std::exp(-t) / (r0 * r0));
    const double rpi_den = std::exp(-t) / (r0 * r0) - 2.0 * m * std::exp(-1.5 * t) / (r0 * r0 * r0) + 1.0;
    switch (label) {
      case MetricLabel::hat: lapse = g.H.array().square().inverse().matrix(); break;
      case MetricLabel::g1:
      case MetricLabel::g2:
      case MetricLabel::g2_prime: lapse.setConstant(1.0 / Hbar2); break;
      case MetricLabel::g3_pmt:
      case MetricLabel::hyperbolic_model: lapse.setConstant(pmt); break;
      case MetricLabel::g3_rpi:
      case MetricLabel::adss_model: lapse.setConstant(0.25 / rpi_den); break;
      case MetricLabel::g3_alt: lapse.setConstant(0.25 * r0 * r0 * std::exp(t)); break;
    }
    if (!(lapse.minCoeff() > 0.0)) {
      throw LapseError("assemble: nonpositive lapse for " + std::string(to_string(label)) +
                       " at t = " + std::to_string(track.times[k]));
    }
    Field a, b, c;
    switch (label) {
      case MetricLabel::hat:
      case MetricLabel::g1:
        a = g.g11, b = g.g12, c = g.g22;
        break;
      case MetricLabel::g2:
      case MetricLabel::g3_pmt:
      case MetricLabel::g3_rpi:
      case MetricLabel::g3_alt: {
        const double e = std::exp(t);
        a = e * first.g11, b = e * first.g12, c = e * first.g22;
        break;
      }
      case MetricLabel::g2_prime: {
        const double e = std::exp(t - (T - t0));
        a = e * last.g11, b = e * last.g12, c = e * last.g22;
        break;
      }
      case MetricLabel::hyperbolic_model:
      case MetricLabel::adss_model: {
        const double e = r0 * r0 * std::exp(t);
        a = Field::Constant(nt, np, e), b = Field::Zero(nt, np), c = Field::Constant(nt, np, e);
        break;
      }
    }
    out.times.push_back(track.times[k]);
    out.lapse2.push_back(std::move(lapse));
    out.f11.push_back(std::move(a));
    out.f12.push_back(std::move(b));
    out.f22.push_back(std::move(c));
  }
  return out;
}

/// Cumulative int_0^{t_k} int_{Sigma_t} |A - B|^2_ref dmu dt / H for every
/// snapshot k (no square root). Trapezoid rule in t.
inline std::vector<double> l2_distance_series(const ProductMetricGrid& A, const ProductMetricGrid& B,
                                              const ProductMetricGrid& ref, const FlowTrack& track) {
  const auto same = [&](const ProductMetricGrid& X) {
    return X.times.size() == track.size() && X.grid && X.grid->ntheta() == track.grid().ntheta() &&
           X.grid->nphi() == track.grid().nphi();
  };
  if (!same(A) || !same(B) || !same(ref)) {
    throw ShapeError("l2_distance: metric grids do not match the track");
  }
  const SphereGrid& grid = track.grid();
  const int nt = grid.ntheta(), np = grid.nphi();
  std::vector<double> slice(track.size());
  for (std::size_t k = 0; k < track.size(); ++k) {
    const SurfaceGeometry& g = track.geometries[k];
    Field integrand(nt, np);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < np; ++j) {
        const double dl = (A.lapse2[k](i, j) - B.lapse2[k](i, j)) / ref.lapse2[k](i, j);
        Eigen::Matrix2d D, R;
        D << A.f11[k](i, j) - B.f11[k](i, j), A.f12[k](i, j) - B.f12[k](i, j),
            A.f12[k](i, j) - B.f12[k](i, j), A.f22[k](i, j) - B.f22[k](i, j);
        R << ref.f11[k](i, j), ref.f12[k](i, j), ref.f12[k](i, j), ref.f22[k](i, j);
        const Eigen::Matrix2d M = R.inverse() * D;
        integrand(i, j) = (dl * dl + (M * M).trace()) / g.H(i, j);
      }
    }
    slice[k] = integrate(g, integrand);
  }
  std::vector<double> out(track.size(), 0.0);
  for (std::size_t k = 1; k < track.size(); ++k) {
    out[k] = out[k - 1] + 0.5 * (track.times[k] - track.times[k - 1]) * (slice[k - 1] + slice[k]);
  }
  return out;
}

/// int_0^T int_{Sigma_t} |A - B|^2_ref dmu dt / H (no square root).
inline double l2_distance(const ProductMetricGrid& A, const ProductMetricGrid& B,
                          const ProductMetricGrid& ref, const FlowTrack& track) {
  return l2_distance_series(A, B, ref, track).back();
}

/// Hbar^2 along the round model flow: (4 / r0^2)(1 - (2 / r0) m e^{-t/2}) e^{-t} + 4.
inline double model_mean_curvature_sq(double t, double r0, double m) {
  return 4.0 / (r0 * r0) * (1.0 - 2.0 / r0 * m * std::exp(-0.5 * t)) * std::exp(-t) + 4.0;
}

namespace detail {
inline double sym_norm(double a, double b, double c) {
  return std::abs(0.5 * (a + c)) + std::hypot(0.5 * (a - c), b);
}
}  // namespace detail

/// sup |g - r0^2 sigma| plus the Hoelder seminorm over sampled node pairs,
/// with operator norms of the sigma-frame components.
inline double c_alpha_distance_to_round(const SphereGrid& grid, const Field& g11, const Field& g12,
                                        const Field& g22, double r0, double alpha = 0.5,
                                        std::size_t max_pairs = 1000000) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("c_alpha: alpha must lie in (0, 1)");
  const int nt = grid.ntheta(), np = grid.nphi();
  std::vector<Eigen::Matrix2d> D(static_cast<std::size_t>(nt) * np);
  std::vector<Eigen::Vector3d> X(D.size());
  double sup = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
    for (int j = 0; j < np; ++j) {
      const double sp = std::sin(grid.phi(j)), cp = std::cos(grid.phi(j));
      Eigen::Matrix2d d;
      d << g11(i, j) - r0 * r0, g12(i, j), g12(i, j), g22(i, j) - r0 * r0;
      sup = std::max(sup, detail::sym_norm(d(0, 0), d(0, 1), d(1, 1)));
      const std::size_t n = static_cast<std::size_t>(i) * np + j;
      D[n] = d;
      X[n] << st * cp, st * sp, ct;
    }
  }
  double semi = 0.0;
  const auto pair = [&](std::size_t a, std::size_t b) {
    const double ang = std::atan2(X[a].cross(X[b]).norm(), X[a].dot(X[b]));
    if (ang <= 0.0) return;
    const Eigen::Matrix2d diff = D[a] - D[b];
    const double n = detail::sym_norm(diff(0, 0), diff(0, 1), diff(1, 1));
    semi = std::max(semi, n / std::pow(ang, alpha));
  };
  const std::size_t ring_pairs = static_cast<std::size_t>(np) * (np - 1) / 2;
  std::size_t used = 0;
  for (int i = 0; i < nt && used + ring_pairs <= max_pairs; ++i, used += ring_pairs) {
    for (int a = 0; a < np; ++a) {
      for (int b = a + 1; b < np; ++b) {
        pair(static_cast<std::size_t>(i) * np + a, static_cast<std::size_t>(i) * np + b);
      }
    }
  }
  // Ring-to-ring pairs on a decimated longitude set sized to the remaining budget.
  const std::size_t cross = static_cast<std::size_t>(nt) * (nt - 1) / 2;
  if (cross > 0 && used < max_pairs) {
    const auto q = static_cast<int>(std::sqrt(static_cast<double>(max_pairs - used) / cross));
    if (q >= 1) {
      const int stride = std::max(1, (np + q - 1) / q);
      for (int i = 0; i < nt; ++i) {
        for (int k = i + 1; k < nt; ++k) {
          for (int a = 0; a < np; a += stride) {
            for (int b = 0; b < np; b += stride) {
              pair(static_cast<std::size_t>(i) * np + a, static_cast<std::size_t>(k) * np + b);
            }
          }
        }
      }
    }
  }
  return sup + semi;
}

inline double c_alpha_distance_to_round(const SurfaceGeometry& g0, double r0, double alpha = 0.5) {
  return c_alpha_distance_to_round(*g0.grid, g0.g11, g0.g12, g0.g22, r0, alpha);
}

/// int (K - e^{-t} / r0^2)^2 dmu.
inline double gauss_deviation(const SurfaceGeometry& geom, double r0, double t) {
  const double model = std::exp(-t) / (r0 * r0);
  return integrate(geom, (geom.K.array() - model).square().matrix());
}

}  // namespace imcf
