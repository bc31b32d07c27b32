#pragma once

// Star-shaped surfaces as radial graphs s = u(theta, phi) over a SphereGrid,
// where s is the ambient area radius, and their geometry inside a warped
// product dr^2 + lambda(r)^2 sigma.
//
// With f the same graph in the geodesic radius r (f_a = u_a / lambda'):
//   g_ab = lambda^2 sigma_ab + f_a f_b
//   h_ab = W^-1 (lambda lambda' sigma_ab + 2 (lambda'/lambda) f_a f_b - Hess_sigma(f)_ab)
//   W    = sqrt(1 + |grad_sigma f|^2 / lambda^2)
// Tensor components are stored in the sigma-orthonormal frame
// (d_theta, d_phi / sin theta).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/errors.hpp"
#include "imcf/sphere_grid.hpp"

namespace imcf {

struct GraphSurface {
  GridPtr grid;
  Field u;            // area radius of the graph at each node
  double time = 0.0;  // flow time tag
};

struct SurfaceGeometry {
  GridPtr grid;
  double time = 0.0;
  Field u;        // area radius (lambda at the node)
  Field dlambda;  // lambda' at the node
  Field tilt;     // W >= 1
  Field dmu;      // area element relative to the round sigma form (= u^2 W)
  Field g11, g12, g22;  // induced metric, sigma-orthonormal frame
  Field H, lam1, lam2;  // mean curvature (sum) and principal curvatures, lam1 <= lam2
  Field K;              // intrinsic Gauss curvature
  Field R, Rc_nn, K12;  // ambient curvature along the surface normal
  Field grad_H2;        // |grad H|^2 in the induced metric
  Field dH1, dH2;       // frame components of dH
  Field df1, df2;       // frame components of grad_sigma f (geodesic-radius graph)

  [[nodiscard]] Eigen::Index size() const { return u.size(); }
  [[nodiscard]] double area() const { return grid->integrate(dmu); }
  [[nodiscard]] Field A2() const {
    return (lam1.array().square() + lam2.array().square()).matrix();
  }
};

/// Coordinate sphere of area radius s.
inline GraphSurface make_round(const AmbientProfile& profile, double area_radius, GridPtr grid) {
  (void)profile.at_area_radius(area_radius);  // DomainError / ProfileError
  GraphSurface s;
  s.u = Field::Constant(grid->ntheta(), grid->nphi(), area_radius);
  s.grid = std::move(grid);
  return s;
}

/// Coordinate sphere of geodesic radius r.
inline GraphSurface make_round_at_radius(const AmbientProfile& profile, double r, GridPtr grid) {
  return make_round(profile, profile.area_radius_of(r), std::move(grid));
}

/// Graph u(theta, phi) given as a callable.
inline GraphSurface make_graph(const AmbientProfile& profile, GridPtr grid,
                               const std::function<double(double, double)>& shape) {
  GraphSurface s;
  s.u.resize(grid->ntheta(), grid->nphi());
  for (int i = 0; i < grid->ntheta(); ++i) {
    for (int j = 0; j < grid->nphi(); ++j) {
      const double v = shape(grid->theta(i), grid->phi(j));
      if (!(v > 0.0)) throw DomainError("graph radius must be positive");
      if (!profile.contains_area_radius(v)) {
        throw DomainError("graph radius " + std::to_string(v) + " outside profile domain");
      }
      s.u(i, j) = v;
    }
  }
  s.grid = std::move(grid);
  return s;
}

namespace detail {

// Angular derivatives of u in the sigma-orthonormal frame.
struct GraphJet {
  Field p1, p2;          // gradient
  Field q11, q12, q22;   // covariant Hessian on (S^2, sigma)
  Field u_phi;
};

inline GraphJet graph_jet(const SphereGrid& grid, const Field& u_in) {
  // Differentiating the deviation from the mean keeps the roundoff of the
  // dense operators proportional to the actual variation (zero when round).
  const Field u = (u_in.array() - u_in.mean()).matrix();
  GraphJet j;
  const Field ut = grid.d_theta(u);
  j.u_phi = grid.d_phi(u);
  const Field utt = grid.d_theta2(u);
  const Field upp = grid.d_phi2(u);
  const Field utp = grid.d_theta(j.u_phi);
  const int nt = grid.ntheta(), np = grid.nphi();
  j.p1.resize(nt, np);
  j.p2.resize(nt, np);
  j.q11.resize(nt, np);
  j.q12.resize(nt, np);
  j.q22.resize(nt, np);
  for (int i = 0; i < nt; ++i) {
    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
    const double cot = ct / st;
    for (int k = 0; k < np; ++k) {
      j.p1(i, k) = ut(i, k);
      j.p2(i, k) = j.u_phi(i, k) / st;
      j.q11(i, k) = utt(i, k);
      j.q12(i, k) = (utp(i, k) - cot * j.u_phi(i, k)) / st;
      j.q22(i, k) = upp(i, k) / (st * st) + cot * ut(i, k);
    }
  }
  return j;
}

// Pointwise geometry of a radial graph at one node.
struct NodeGeometry {
  double W, g11, g12, g22, gi11, gi12, gi22, H, lam1, lam2, f1, f2;
};

inline NodeGeometry node_geometry(const WarpSample& w, double p1, double p2, double q11,
                                  double q12, double q22) {
  NodeGeometry n{};
  const double s = w.lambda, l1 = w.dlambda, l2 = w.ddlambda;
  // Graph in the geodesic radius.
  n.f1 = p1 / l1;
  n.f2 = p2 / l1;
  const double c = l2 / (l1 * l1 * l1);
  const double f11 = q11 / l1 - c * p1 * p1;
  const double f12 = q12 / l1 - c * p1 * p2;
  const double f22 = q22 / l1 - c * p2 * p2;
  const double grad2 = n.f1 * n.f1 + n.f2 * n.f2;
  n.W = std::sqrt(1.0 + grad2 / (s * s));
  n.g11 = s * s + n.f1 * n.f1;
  n.g12 = n.f1 * n.f2;
  n.g22 = s * s + n.f2 * n.f2;
  // Inverse of s^2 (I + q q^T), q = f / s.
  const double inv = 1.0 / (s * s);
  const double k = 1.0 / (s * s + grad2);
  n.gi11 = inv * (1.0 - n.f1 * n.f1 * k);
  n.gi12 = -inv * n.f1 * n.f2 * k;
  n.gi22 = inv * (1.0 - n.f2 * n.f2 * k);
  const double a = s * l1;
  const double b = 2.0 * l1 / s;
  const double h11 = (a + b * n.f1 * n.f1 - f11) / n.W;
  const double h12 = (b * n.f1 * n.f2 - f12) / n.W;
  const double h22 = (a + b * n.f2 * n.f2 - f22) / n.W;
  // Shape operator S = g^-1 h.
  const double m11 = n.gi11 * h11 + n.gi12 * h12;
  const double m12 = n.gi11 * h12 + n.gi12 * h22;
  const double m21 = n.gi12 * h11 + n.gi22 * h12;
  const double m22 = n.gi12 * h12 + n.gi22 * h22;
  n.H = m11 + m22;
  const double disc = std::sqrt(std::max(0.0, (m11 - m22) * (m11 - m22) + 4.0 * m12 * m21));
  n.lam1 = 0.5 * (n.H - disc);
  n.lam2 = 0.5 * (n.H + disc);
  return n;
}

}  // namespace detail

/// Mean curvature and tilt only; this is what the flow needs per stage.
struct FlowKinematics {
  Field H, tilt, dlambda;
};

inline FlowKinematics flow_kinematics(const AmbientProfile& profile, const SphereGrid& grid,
                                      const Field& u) {
  const detail::GraphJet jet = detail::graph_jet(grid, u);
  FlowKinematics k;
  k.H.resize(u.rows(), u.cols());
  k.tilt.resize(u.rows(), u.cols());
  k.dlambda.resize(u.rows(), u.cols());
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
      const WarpSample w = profile.at_area_radius(u(i, j));
      const detail::NodeGeometry n =
          detail::node_geometry(w, jet.p1(i, j), jet.p2(i, j), jet.q11(i, j), jet.q12(i, j),
                                jet.q22(i, j));
      k.H(i, j) = n.H;
      k.tilt(i, j) = n.W;
      k.dlambda(i, j) = w.dlambda;
    }
  }
  return k;
}

/// Full extrinsic and intrinsic geometry of a graph surface.
/// Throws GeometryError for a degenerate metric and CurvatureError if H <= 0
/// anywhere (when require_mean_convex is set).
inline SurfaceGeometry geometry(const AmbientProfile& profile, const GraphSurface& surface,
                                bool require_mean_convex = true) {
  const SphereGrid& grid = *surface.grid;
  const Field& u = surface.u;
  const int nt = grid.ntheta(), np = grid.nphi();
  const detail::GraphJet jet = detail::graph_jet(grid, u);

  SurfaceGeometry g;
  g.grid = surface.grid;
  g.time = surface.time;
  g.u = u;
  for (Field* f : {&g.dlambda, &g.tilt, &g.dmu, &g.g11, &g.g12, &g.g22, &g.H, &g.lam1, &g.lam2,
                   &g.K, &g.R, &g.Rc_nn, &g.K12, &g.grad_H2, &g.dH1, &g.dH2, &g.df1, &g.df2}) {
    f->resize(nt, np);
  }
  Field gi11(nt, np), gi12(nt, np), gi22(nt, np);

  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      const double s = u(i, j);
      if (!(s > 0.0) || !std::isfinite(s)) {
        throw GeometryError("non-positive graph radius at node (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
      const WarpSample w = profile.at_area_radius(s);
      const detail::NodeGeometry n = detail::node_geometry(
          w, jet.p1(i, j), jet.p2(i, j), jet.q11(i, j), jet.q12(i, j), jet.q22(i, j));
      const double det = n.g11 * n.g22 - n.g12 * n.g12;
      if (!(det > 0.0) || !std::isfinite(det)) {
        throw GeometryError("degenerate induced metric at node (" + std::to_string(i) + ", " +
                            std::to_string(j) + ")");
      }
      if (require_mean_convex && !(n.H > 0.0)) {
        throw CurvatureError("mean curvature " + std::to_string(n.H) + " <= 0 at node (" +
                             std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      g.dlambda(i, j) = w.dlambda;
      g.tilt(i, j) = n.W;
      g.dmu(i, j) = s * s * n.W;
      g.g11(i, j) = n.g11;
      g.g12(i, j) = n.g12;
      g.g22(i, j) = n.g22;
      gi11(i, j) = n.gi11;
      gi12(i, j) = n.gi12;
      gi22(i, j) = n.gi22;
      g.H(i, j) = n.H;
      g.lam1(i, j) = n.lam1;
      g.lam2(i, j) = n.lam2;
      g.df1(i, j) = n.f1;
      g.df2(i, j) = n.f2;

      // Ambient curvature of the tangent plane, whose normal makes angle
      // alpha with the radial direction (cos^2 alpha = 1 / W^2).
      const double radial = -w.ddlambda / w.lambda;
      const double tangential = (1.0 - w.dlambda * w.dlambda) / (w.lambda * w.lambda);
      const double c2 = 1.0 / (n.W * n.W);
      g.R(i, j) = 4.0 * radial + 2.0 * tangential;
      g.Rc_nn(i, j) = 2.0 * radial * c2 + (radial + tangential) * (1.0 - c2);
      g.K12(i, j) = 0.5 * g.R(i, j) - g.Rc_nn(i, j);
      g.K(i, j) = g.K12(i, j) + n.lam1 * n.lam2;
    }
  }

  const Field h0 = (g.H.array() - g.H.mean()).matrix();
  const Field ht = grid.d_theta(h0);
  const Field hp = grid.d_phi(h0);
  for (int i = 0; i < nt; ++i) {
    const double st = grid.sin_theta(i);
    for (int j = 0; j < np; ++j) {
      const double a = ht(i, j), b = hp(i, j) / st;
      g.dH1(i, j) = a;
      g.dH2(i, j) = b;
      g.grad_H2(i, j) = gi11(i, j) * a * a + 2.0 * gi12(i, j) * a * b + gi22(i, j) * b * b;
    }
  }
  return g;
}

/// Integral of a per-node field over the surface: sum field * dmu * weight.
inline double integrate(const SurfaceGeometry& geom, const Field& field) {
  if (field.rows() != geom.dmu.rows() || field.cols() != geom.dmu.cols()) {
    throw ShapeError("integrate: field shape does not match the grid");
  }
  return geom.grid->integrate((field.array() * geom.dmu.array()).matrix());
}

/// (1 / 2 pi) * integral of K; equals 2 for any graph over the sphere.
inline double euler_characteristic(const SurfaceGeometry& geom) {
  return integrate(geom, geom.K) / (2.0 * std::numbers::pi);
}

/// Upper estimate of the intrinsic diameter: shortest paths on the node graph
/// with a 5x5 longitude/colatitude stencil plus all-pairs links inside the two
/// rings nearest each pole. Edge lengths are induced lengths of the lifted
/// sigma-geodesic segment, sqrt(s^2 d_sigma^2 + du^2 / V).
inline double intrinsic_diameter(const SurfaceGeometry& geom) {
  const SphereGrid& grid = *geom.grid;
  const int nt = grid.ntheta(), np = grid.nphi();
  const int n = nt * np;
  const auto id = [np](int i, int j) { return i * np + j; };

  std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
  const auto add_edge = [&](int i1, int j1, int i2, int j2) {
    const double ds = grid.sphere_distance(i1, j1, i2, j2);
    const double s = 0.5 * (geom.u(i1, j1) + geom.u(i2, j2));
    const double v = 0.25 * (geom.dlambda(i1, j1) + geom.dlambda(i2, j2)) *
                     (geom.dlambda(i1, j1) + geom.dlambda(i2, j2));
    const double du = geom.u(i1, j1) - geom.u(i2, j2);
    const double len = std::sqrt(s * s * ds * ds + du * du / v);
    adj[static_cast<std::size_t>(id(i1, j1))].emplace_back(id(i2, j2), len);
  };
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < np; ++j) {
      for (int di = -2; di <= 2; ++di) {
        const int i2 = i + di;
        if (i2 < 0 || i2 >= nt) continue;
        for (int dj = -2; dj <= 2; ++dj) {
          if (di == 0 && dj == 0) continue;
          add_edge(i, j, i2, (j + dj + np) % np);
        }
      }
    }
  }
  const int cap = std::min(2, nt / 2);
  for (int pole = 0; pole < 2; ++pole) {
    for (int a = 0; a < cap; ++a) {
      for (int b = 0; b < cap; ++b) {
        const int i1 = pole == 0 ? a : nt - 1 - a;
        const int i2 = pole == 0 ? b : nt - 1 - b;
        for (int j1 = 0; j1 < np; ++j1) {
          for (int j2 = 0; j2 < np; ++j2) {
            if (i1 == i2 && j1 == j2) continue;
            add_edge(i1, j1, i2, j2);
          }
        }
      }
    }
  }

  const auto eccentricity = [&](int source, int& farthest) {
    std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[static_cast<std::size_t>(source)] = 0.0;
    heap.emplace(0.0, source);
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[static_cast<std::size_t>(v)]) continue;
      for (const auto& [w, len] : adj[static_cast<std::size_t>(v)]) {
        const double nd = d + len;
        if (nd < dist[static_cast<std::size_t>(w)]) {
          dist[static_cast<std::size_t>(w)] = nd;
          heap.emplace(nd, w);
        }
      }
    }
    farthest = static_cast<int>(std::max_element(dist.begin(), dist.end()) - dist.begin());
    return dist[static_cast<std::size_t>(farthest)];
  };

  double best = 0.0;
  for (int seed : {id(0, 0), id(nt / 2, 0), id(nt / 2, np / 4)}) {
    int far = seed;
    best = std::max(best, eccentricity(seed, far));
    int far2 = far;
    best = std::max(best, eccentricity(far, far2));
  }
  return best;
}

}  // namespace imcf
