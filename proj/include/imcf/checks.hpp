#pragma once

// Hypothesis checks on a computed flow: membership in the bounded-geometry
// class of IMCF solutions and compatibility with the asymptotically
// hyperbolic coordinates.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "imcf/ambient.hpp"
#include "imcf/errors.hpp"
#include "imcf/imcf.hpp"
#include "imcf/mass.hpp"
#include "imcf/surface.hpp"

namespace imcf {

struct DeclaredClass {
  std::optional<double> H0, H1, A1, I0, r0;
};

struct ClassReport {
  double H_min = 0.0, H_max = 0.0, max_A = 0.0;
  double r0 = 0.0;              // observed sqrt(|Sigma_0| / 4 pi)
  bool r0_ok = true;            // matches the declared r0 when given
  double m_H0 = 0.0;
  bool mass_nonnegative = true; // m_H(Sigma_0) >= 0
  bool bounds_ok = true;        // declared H0 <= H <= H1, |A| <= A1
  std::optional<double> I0;     // declared only, never checked
  bool r_floor_ok = true;       // ambient R >= -6 on the swept range
  double min_R = 0.0;
  [[nodiscard]] bool pass() const { return r0_ok && mass_nonnegative && bounds_ok && r_floor_ok; }
};

inline ClassReport check_class_membership(const FlowTrack& track, const DeclaredClass& declared = {},
                                          double tol = 1e-9) {
  ClassReport rep;
  rep.H_min = track.bounds.H0;
  rep.H_max = track.bounds.H1;
  rep.max_A = track.bounds.A1;
  rep.r0 = track.bounds.r0;
  if (declared.r0) rep.r0_ok = std::abs(*declared.r0 - rep.r0) <= 1e-6 * *declared.r0;
  rep.m_H0 = hawking_mass(track.geometries.front());
  rep.mass_nonnegative = rep.m_H0 >= -tol;
  if (declared.H0) rep.bounds_ok = rep.bounds_ok && rep.H_min >= *declared.H0;
  if (declared.H1) rep.bounds_ok = rep.bounds_ok && rep.H_max <= *declared.H1;
  if (declared.A1) rep.bounds_ok = rep.bounds_ok && rep.max_A <= *declared.A1;
  rep.I0 = declared.I0;
  // Sweep the ambient over the area radii the flow visited.
  double s_lo = std::numeric_limits<double>::infinity(), s_hi = 0.0;
  for (const GraphSurface& s : track.surfaces) {
    s_lo = std::min(s_lo, s.u.minCoeff());
    s_hi = std::max(s_hi, s.u.maxCoeff());
  }
  const ProfileReport pr = validate_profile(track.profile, tol, s_lo, s_hi, 2001);
  rep.r_floor_ok = pr.r_floor_ok;
  rep.min_R = pr.min_R;
  return rep;
}

struct CompatReport {
  std::vector<double> t, r_min, r_max;  // per snapshot in [t*, T]
  std::vector<double> grad_f;           // max |grad_sigma f| per snapshot
  double C1 = 0.0, C2 = 0.0, C3 = 0.0;  // fitted over t >= t*
  double ricci_w12 = 0.0;               // W^{1,2} norm of Rc(nu, nu) on Sigma x [a, b]
  bool declared_ok = true;
  [[nodiscard]] bool pass() const {
    return C1 > 0.0 && std::isfinite(C2) && std::isfinite(C3) && std::isfinite(ricci_w12) && declared_ok;
  }
};

struct DeclaredCompat {
  std::optional<double> C1, C2, C3;
};

/// Fits C1 t <= r <= C2 t and |grad f| <= C3 over all snapshots with t >= t_star
/// (t > 0), and the W^{1,2} norm of Rc(nu, nu) over Sigma x [a, b] with respect
/// to d sigma dt: first differences in t, spectral derivatives on the sphere.
/// The two windows are independent.
inline CompatReport check_coordinate_compatibility(const FlowTrack& track, double a, double b, double t_star,
                                                   const DeclaredCompat& declared = {}) {
  const double T = track.final_time();
  const double eps = 1e-9;
  if (!(a >= track.times.front() - eps && a < b && b <= T + eps)) {
    throw WindowError("compat: need t0 <= a < b <= T, got [" + std::to_string(a) + ", " + std::to_string(b) +
                      "] with T = " + std::to_string(T));
  }
  if (!(t_star < T) || !(t_star >= track.times.front() - eps)) {
    throw WindowError("compat: t* = " + std::to_string(t_star) + " must lie in [t0, T)");
  }
  std::size_t ka = 0, kb = 0, ks = 0;
  try {
    ka = track.index_of(a);
    kb = track.index_of(b);
    ks = track.index_of(t_star);
  } catch (const ArgumentError& e) {
    throw WindowError(std::string("compat: ") + e.what());
  }
  const SphereGrid& grid = track.grid();
  CompatReport rep;
  rep.C1 = std::numeric_limits<double>::infinity();
  for (std::size_t k = ks; k < track.size(); ++k) {
    const double t = track.times[k];
    const SurfaceGeometry& g = track.geometries[k];
    const double r_lo = track.profile.radius_of(g.u.minCoeff());
    const double r_hi = track.profile.radius_of(g.u.maxCoeff());
    const double gf = (g.df1.array().square() + g.df2.array().square()).sqrt().maxCoeff();
    rep.t.push_back(t);
    rep.r_min.push_back(r_lo);
    rep.r_max.push_back(r_hi);
    rep.grad_f.push_back(gf);
    rep.C3 = std::max(rep.C3, gf);
    if (t > 0.0) {
      rep.C1 = std::min(rep.C1, r_lo / t);
      rep.C2 = std::max(rep.C2, r_hi / t);
    }
  }
  if (!std::isfinite(rep.C1)) rep.C1 = 0.0;

  // W^{1,2}: int int (Rc^2 + (d_t Rc)^2 + |grad_sigma Rc|^2) d sigma dt.
  const double h = track.dt * track.stride;
  double total = 0.0;
  for (std::size_t k = ka; k <= kb; ++k) {
    const Field& rc = track.geometries[k].Rc_nn;
    const Field dth = grid.d_theta(rc);
    Field dph = grid.d_phi(rc);
    for (int i = 0; i < grid.ntheta(); ++i) dph.row(i) /= grid.sin_theta(i);
    Field dt_rc;
    if (k < kb) {
      dt_rc = (track.geometries[k + 1].Rc_nn - rc) / h;
    } else {
      dt_rc = (rc - track.geometries[k - 1].Rc_nn) / h;
    }
    const Field dens =
        (rc.array().square() + dt_rc.array().square() + dth.array().square() + dph.array().square()).matrix();
    const double w = (k == ka || k == kb) ? 0.5 : 1.0;
    total += w * h * grid.integrate(dens);
  }
  rep.ricci_w12 = std::sqrt(total);
  if (declared.C1) rep.declared_ok = rep.declared_ok && rep.C1 >= *declared.C1;
  if (declared.C2) rep.declared_ok = rep.declared_ok && rep.C2 <= *declared.C2;
  if (declared.C3) rep.declared_ok = rep.declared_ok && rep.C3 <= *declared.C3;
  return rep;
}

}  // namespace imcf
