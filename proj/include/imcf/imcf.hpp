#pragma once

// Inverse mean curvature flow of radial graphs.
//
// The outward normal velocity 1/H moves the graph point at fixed angle with
// speed d r / dt = W / H, i.e. d s / dt = lambda' W / H in the area radius.
// We integrate w = ln s, for which coordinate spheres have the exact rate 1/2.
//
// Optionally the flow also carries the normal parameterization: the inverse
// map Psi (label on the initial surface of the particle now at each node, as
// a unit vector in R^3) and Lambda_i = int 2 lambda_i / H along particle
// paths. Particles drift in angle with velocity X = -grad_sigma f / (s^2 W H).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/errors.hpp"
#include "imcf/sphere_grid.hpp"
#include "imcf/surface.hpp"

namespace imcf {

struct FlowOptions {
  double cfl = 0.2;          // explicit stability constant
  int snapshot_every = 10;   // steps between stored snapshots
  bool track_normal = true;  // carry the normal parameterization
};

struct ClassBounds {
  double H0 = 0.0;  // min H over all snapshots
  double H1 = 0.0;  // max H
  double A1 = 0.0;  // max |A|
  double r0 = 0.0;  // sqrt(|Sigma_0| / 4 pi)
};

/// Normal-parameterization state at one snapshot.
struct NormalFrame {
  Field px, py, pz;    // label (unit vector) of the particle at each node
  Field lam1, lam2;    // int_0^t 2 lambda_i / H along the particle path
};

struct FlowTrack {
  explicit FlowTrack(AmbientProfile p) : profile(std::move(p)) {}

  AmbientProfile profile;
  double dt = 0.0;
  int steps = 0;
  int stride = 1;
  std::vector<double> times;
  std::vector<GraphSurface> surfaces;
  std::vector<SurfaceGeometry> geometries;
  std::vector<NormalFrame> frames;  // empty unless tracked
  ClassBounds bounds;

  [[nodiscard]] std::size_t size() const { return times.size(); }
  [[nodiscard]] double final_time() const { return times.back(); }
  [[nodiscard]] const SphereGrid& grid() const { return *surfaces.front().grid; }
  /// Snapshot index of time t (must lie on the snapshot grid).
  [[nodiscard]] std::size_t index_of(double t) const {
    const double h = dt * stride;
    const double k = t / h;
    const auto i = static_cast<long>(std::llround(k));
    if (std::abs(k - static_cast<double>(i)) > 1e-6 || i < 0 ||
        i >= static_cast<long>(times.size())) {
      throw ArgumentError("time " + std::to_string(t) + " is not on the snapshot grid");
    }
    return static_cast<std::size_t>(i);
  }
};

/// Closed-form flow of a coordinate sphere.
struct RoundFlowValue {
  double s = 0.0;  // area radius
  double H = 0.0;  // mean curvature 2 lambda' / s
};

inline RoundFlowValue exact_round_flow(const AmbientProfile& profile, double s0, double t) {
  RoundFlowValue v;
  v.s = s0 * std::exp(0.5 * t);
  const WarpSample w = profile.at_area_radius(v.s);
  v.H = 2.0 * w.dlambda / v.s;
  return v;
}

/// Largest stable step for the current surface: c h^2 min(H^2 s^2).
inline double stable_step(const SphereGrid& grid, const Field& H, const Field& u, double cfl) {
  const double m = (H.array() * u.array()).square().minCoeff();
  const double h = grid.spacing();
  return cfl * h * h * m;
}

namespace detail {

struct FlowState {
  Field w;  // ln s
  Field px, py, pz, lam1, lam2;
  bool tracked = false;
};

struct FlowRate {
  FlowState d;
  double min_H = 0.0;
  double dt_limit = 0.0;
};

inline FlowRate flow_rate(const AmbientProfile& profile, const SphereGrid& grid,
                          const FlowState& st, double cfl) {
  const Field u = st.w.array().exp().matrix();
  const detail::GraphJet jet = detail::graph_jet(grid, u);
  const Eigen::Index nt = u.rows(), np = u.cols();
  FlowRate r;
  r.d.tracked = st.tracked;
  r.d.w.resize(nt, np);
  Field H(nt, np), x1, x2;
  if (st.tracked) {
    for (Field* f : {&r.d.lam1, &r.d.lam2}) f->resize(nt, np);
    x1.resize(nt, np);
    x2.resize(nt, np);
  }
  for (Eigen::Index i = 0; i < nt; ++i) {
    for (Eigen::Index j = 0; j < np; ++j) {
      const double s = u(i, j);
      const WarpSample ws = profile.at_area_radius(s);
      const NodeGeometry n =
          node_geometry(ws, jet.p1(i, j), jet.p2(i, j), jet.q11(i, j), jet.q12(i, j), jet.q22(i, j));
      if (!(n.H > 0.0)) {
        throw CurvatureError("mean curvature " + std::to_string(n.H) + " <= 0 at node (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      H(i, j) = n.H;
      r.d.w(i, j) = ws.dlambda * n.W / (n.H * s);
      if (st.tracked) {
        r.d.lam1(i, j) = 2.0 * n.lam1 / n.H;
        r.d.lam2(i, j) = 2.0 * n.lam2 / n.H;
        const double c = -1.0 / (s * s * n.W * n.H);
        x1(i, j) = c * n.f1;
        x2(i, j) = c * n.f2 / grid.sin_theta(static_cast<int>(i));  // d_phi coefficient
      }
    }
  }
  r.min_H = H.minCoeff();
  r.dt_limit = stable_step(grid, H, u, cfl);
  if (st.tracked) {
    std::vector<Field> dt, dp;
    grid.gradients({&st.px, &st.py, &st.pz, &st.lam1, &st.lam2}, dt, dp);
    const auto advect = [&](std::size_t b) -> Field {
      return -(x1.array() * dt[b].array() + x2.array() * dp[b].array()).matrix();
    };
    r.d.px = advect(0);
    r.d.py = advect(1);
    r.d.pz = advect(2);
    r.d.lam1 += advect(3);
    r.d.lam2 += advect(4);
  }
  return r;
}

inline FlowState axpy(const FlowState& a, double h, const FlowState& d) {
  FlowState out;
  out.tracked = a.tracked;
  out.w = a.w + h * d.w;
  if (a.tracked) {
    out.px = a.px + h * d.px;
    out.py = a.py + h * d.py;
    out.pz = a.pz + h * d.pz;
    out.lam1 = a.lam1 + h * d.lam1;
    out.lam2 = a.lam2 + h * d.lam2;
  }
  return out;
}

// Only the graph needs the polar filter; the transported fields are smooth
// and pure advection is stable for Heun at the parabolic step size.
inline void filter_state(const SphereGrid& grid, FlowState& s) { grid.filter(s.w); }

// Heun step; throws StabilityError when dt exceeds the guard.
inline FlowState heun(const AmbientProfile& profile, const SphereGrid& grid, const FlowState& s,
                      double dt, double cfl) {
  const FlowRate k1 = flow_rate(profile, grid, s, cfl);
  if (dt > k1.dt_limit) {
    throw StabilityError("step " + std::to_string(dt) + " exceeds stability limit " +
                         std::to_string(k1.dt_limit));
  }
  FlowState mid = axpy(s, dt, k1.d);
  filter_state(grid, mid);
  const FlowRate k2 = flow_rate(profile, grid, mid, cfl);
  FlowState out = axpy(s, 0.5 * dt, k1.d);
  out = axpy(out, 0.5 * dt, k2.d);
  filter_state(grid, out);
  return out;
}

inline FlowState initial_state(const GraphSurface& s, bool track) {
  FlowState st;
  st.w = s.u.array().log().matrix();
  st.tracked = track;
  if (track) {
    const SphereGrid& g = *s.grid;
    const int nt = g.ntheta(), np = g.nphi();
    st.px.resize(nt, np);
    st.py.resize(nt, np);
    st.pz.resize(nt, np);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < np; ++j) {
        st.px(i, j) = g.sin_theta(i) * std::cos(g.phi(j));
        st.py(i, j) = g.sin_theta(i) * std::sin(g.phi(j));
        st.pz(i, j) = g.cos_theta(i);
      }
    }
    st.lam1 = Field::Zero(nt, np);
    st.lam2 = Field::Zero(nt, np);
  }
  return st;
}

inline GraphSurface to_surface(const GridPtr& grid, const FlowState& st, double t) {
  GraphSurface s;
  s.grid = grid;
  s.u = st.w.array().exp().matrix();
  s.time = t;
  return s;
}

}  // namespace detail

/// One Heun step of the flow.
inline GraphSurface step(const AmbientProfile& profile, const GraphSurface& surface, double dt,
                         double cfl = 0.2) {
  if (!(dt > 0.0)) throw ArgumentError("step: dt must be positive");
  const detail::FlowState s = detail::initial_state(surface, false);
  return detail::to_surface(surface.grid, detail::heun(profile, *surface.grid, s, dt, cfl),
                            surface.time + dt);
}

/// Runs the flow to time T. Snapshots (with cached geometry) are kept every
/// options.snapshot_every steps; T / dt must be an integer multiple of it.
inline FlowTrack run(const AmbientProfile& profile, const GraphSurface& surface0, double T,
                     double dt, const FlowOptions& options = {}) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ArgumentError("run: T and dt must be positive");
  const double ratio = T / dt;
  const long n = std::llround(ratio);
  if (n < 1 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * ratio) {
    throw ArgumentError("run: dt does not divide T");
  }
  const int stride = std::max(1, options.snapshot_every);
  if (n % stride != 0) {
    throw ArgumentError("run: snapshot stride " + std::to_string(stride) +
                        " does not divide the step count " + std::to_string(n));
  }

  FlowTrack track{profile};
  track.dt = dt;
  track.steps = static_cast<int>(n);
  track.stride = stride;
  const GridPtr grid = surface0.grid;

  detail::FlowState st = detail::initial_state(surface0, options.track_normal);
  const auto record = [&](long k) {
    const double t = static_cast<double>(k) * dt;
    GraphSurface s = detail::to_surface(grid, st, t);
    try {
      track.geometries.push_back(geometry(profile, s));
    } catch (const CurvatureError& e) {
      throw CurvatureError(std::string(e.what()) + " at t = " + std::to_string(t));
    } catch (const GeometryError& e) {
      throw GeometryError(std::string(e.what()) + " at t = " + std::to_string(t));
    }
    track.times.push_back(t);
    track.surfaces.push_back(std::move(s));
    if (st.tracked) {
      track.frames.push_back({st.px, st.py, st.pz, st.lam1, st.lam2});
    }
  };

  record(0);
  for (long k = 1; k <= n; ++k) {
    const double t = static_cast<double>(k - 1) * dt;
    try {
      st = detail::heun(profile, *grid, st, dt, options.cfl);
    } catch (const CurvatureError& e) {
      throw CurvatureError(std::string(e.what()) + " at t = " + std::to_string(t));
    } catch (const StabilityError& e) {
      throw StabilityError(std::string(e.what()) + " at t = " + std::to_string(t));
    } catch (const DomainError& e) {
      throw DomainError(std::string(e.what()) + " at t = " + std::to_string(t));
    } catch (const ProfileError& e) {
      throw ProfileError(std::string(e.what()) + " at t = " + std::to_string(t));
    }
    if (!st.w.allFinite()) throw StabilityError("non-finite state at t = " + std::to_string(t));
    if (k % stride == 0) record(k);
  }

  ClassBounds& b = track.bounds;
  b.H0 = std::numeric_limits<double>::infinity();
  b.H1 = -std::numeric_limits<double>::infinity();
  for (const SurfaceGeometry& g : track.geometries) {
    b.H0 = std::min(b.H0, g.H.minCoeff());
    b.H1 = std::max(b.H1, g.H.maxCoeff());
    b.A1 = std::max(b.A1, std::sqrt(g.A2().maxCoeff()));
  }
  b.r0 = std::sqrt(track.geometries.front().area() / (4.0 * std::numbers::pi));
  return track;
}

}  // namespace imcf
