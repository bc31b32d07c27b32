#pragma once

// Rotationally symmetric ambient 3-metrics
//
//     g = dr^2 + lambda(r)^2 sigma  =  ds^2 / V(s) + s^2 sigma,
//
// where s = lambda(r) is the area radius and V(s) = lambda'(r)^2. The
// mass aspect m(s) is defined by V(s) = 1 - 2 m(s)/s + s^2; hyperbolic space
// is m = 0 and AdS-Schwarzschild is m = const.
//
// All surface computations use the area radius s as the radial graph
// coordinate; the geodesic radius r is available through radius_of().

#include <cmath>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/quadrature.hpp"
#include "imcf/spline.hpp"

namespace imcf {

enum class ProfileKind { Hyperbolic, AdSS, MassAspect, Tabulated };

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Hyperbolic: return "hyperbolic";
    case ProfileKind::AdSS: return "adss";
    case ProfileKind::MassAspect: return "mass_aspect";
    case ProfileKind::Tabulated: return "tabulated";
  }
  return "?";
}

/// lambda and its first two derivatives with respect to the geodesic radius r.
struct WarpSample {
  double lambda = 0.0;
  double dlambda = 0.0;
  double ddlambda = 0.0;
};

/// Ambient curvature seen by a coordinate sphere.
struct CurvatureSample {
  double R = 0.0;      // scalar curvature
  double Rc_nn = 0.0;  // Ricci curvature in the radial direction
  double K12 = 0.0;    // sectional curvature of the coordinate-sphere tangent plane
};

inline CurvatureSample curvature_from_warp(const WarpSample& w) {
  CurvatureSample c;
  const double radial = -w.ddlambda / w.lambda;                                   // K(dr, X)
  const double tangential = (1.0 - w.dlambda * w.dlambda) / (w.lambda * w.lambda);  // K(X, Y)
  c.Rc_nn = 2.0 * radial;
  c.K12 = tangential;
  c.R = 4.0 * radial + 2.0 * tangential;
  return c;
}

class AmbientProfile {
 public:
  static AmbientProfile hyperbolic(double s_floor = 1e-3,
                                   double s_ceil = std::numeric_limits<double>::infinity()) {
    AmbientProfile p(ProfileKind::Hyperbolic);
    p.s_lo_ = s_floor;
    p.s_hi_ = s_ceil;
    return p;
  }

  /// AdS-Schwarzschild of mass m > 0; the default floor is the horizon.
  static AmbientProfile adss(double mass, double s_floor = -1.0,
                             double s_ceil = std::numeric_limits<double>::infinity()) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ParamError("adss: mass must be positive");
    AmbientProfile p(ProfileKind::AdSS);
    p.mass_ = mass;
    p.s_lo_ = s_floor > 0.0 ? s_floor : horizon_radius(mass);
    p.s_hi_ = s_ceil;
    return p;
  }

  /// Mass-aspect profile with m(s) given by monotone interpolation of samples.
  static AmbientProfile mass_aspect(std::span<const double> s, std::span<const double> m) {
    AmbientProfile p(ProfileKind::MassAspect);
    p.aspect_ = std::make_shared<PchipSpline>(s, m);
    p.s_lo_ = s.front();
    p.s_hi_ = s.back();
    if (!(p.s_lo_ > 0.0)) throw ProfileError("mass_aspect: area radius samples must be positive");
    return p;
  }

  /// lambda(r) tabulated on an r-grid, interpolated with a not-a-knot cubic spline.
  static AmbientProfile tabulated(std::span<const double> r, std::span<const double> lambda) {
    AmbientProfile p(ProfileKind::Tabulated);
    p.warp_ = std::make_shared<CubicSpline>(r, lambda);
    p.s_lo_ = lambda.front();
    p.s_hi_ = lambda.back();
    if (!(p.s_lo_ > 0.0) || !(p.s_hi_ > p.s_lo_)) {
      throw ProfileError("tabulated: lambda must be positive and increasing");
    }
    return p;
  }

  /// Root of s^3 + s - 2m = 0.
  static double horizon_radius(double mass) {
    if (mass <= 0.0) return 0.0;
    double s = std::cbrt(2.0 * mass);
    for (int i = 0; i < 60; ++i) {
      const double f = s * s * s + s - 2.0 * mass;
      const double step = f / (3.0 * s * s + 1.0);
      s -= step;
      if (std::abs(step) < 1e-16 * s) break;
    }
    return s;
  }

  [[nodiscard]] ProfileKind kind() const { return kind_; }
  [[nodiscard]] double mass() const { return mass_; }
  [[nodiscard]] double s_min() const { return s_lo_; }
  [[nodiscard]] double s_max() const { return s_hi_; }
  [[nodiscard]] bool contains_area_radius(double s) const { return s >= s_lo_ && s <= s_hi_; }

  /// Same profile restricted to [lo, hi] (intersected with the current domain).
  [[nodiscard]] AmbientProfile restricted(double lo, double hi) const {
    AmbientProfile p = *this;
    p.s_lo_ = std::max(lo, s_lo_);
    p.s_hi_ = std::min(hi, s_hi_);
    if (!(p.s_hi_ > p.s_lo_)) throw DomainError("restricted: empty domain");
    return p;
  }

  /// Warp function and derivatives at area radius s (lambda == s).
  [[nodiscard]] WarpSample at_area_radius(double s) const {
    require_domain(s);
    WarpSample w;
    w.lambda = s;
    switch (kind_) {
      case ProfileKind::Hyperbolic:
        w.dlambda = std::sqrt(1.0 + s * s);
        w.ddlambda = s;
        break;
      case ProfileKind::AdSS:
        w.dlambda = sqrt_lapse(1.0 + s * s - 2.0 * mass_ / s, s);
        w.ddlambda = s + mass_ / (s * s);
        break;
      case ProfileKind::MassAspect: {
        const Jet m = (*aspect_)(s);
        w.dlambda = sqrt_lapse(1.0 + s * s - 2.0 * m.value / s, s);
        w.ddlambda = s - m.d1 / s + m.value / (s * s);
        break;
      }
      case ProfileKind::Tabulated: {
        const Jet j = (*warp_)(invert_warp(s));
        w.dlambda = j.d1;
        w.ddlambda = j.d2;
        break;
      }
    }
    if (!(w.dlambda > 0.0)) {
      throw ProfileError("warp derivative not positive at s = " + std::to_string(s));
    }
    return w;
  }

  /// Warp function and derivatives at geodesic radius r.
  [[nodiscard]] WarpSample at_radius(double r) const {
    if (kind_ == ProfileKind::Hyperbolic) {
      const double s = std::sinh(r);
      require_domain(s);
      return {s, std::cosh(r), s};
    }
    if (kind_ == ProfileKind::Tabulated) {
      if (r < warp_->x_min() || r > warp_->x_max()) {
        throw DomainError("radius " + std::to_string(r) + " outside tabulated range");
      }
      const Jet j = (*warp_)(r);
      if (!(j.value > 0.0) || !(j.d1 > 0.0)) {
        throw ProfileError("tabulated warp not admissible at r = " + std::to_string(r));
      }
      return {j.value, j.d1, j.d2};
    }
    return at_area_radius(area_radius_of(r));
  }

  /// Mass aspect m(s) = (s/2)(1 + s^2 - lambda'^2).
  [[nodiscard]] double mass_aspect_at(double s) const {
    switch (kind_) {
      case ProfileKind::Hyperbolic: require_domain(s); return 0.0;
      case ProfileKind::AdSS: require_domain(s); return mass_;
      case ProfileKind::MassAspect: require_domain(s); return (*aspect_)(s).value;
      case ProfileKind::Tabulated: {
        const WarpSample w = at_area_radius(s);
        return 0.5 * s * (1.0 + s * s - w.dlambda * w.dlambda);
      }
    }
    return 0.0;
  }

  /// Geodesic radius of the coordinate sphere of area radius s.
  /// Mass-aspect kinds are normalised so that r(s_min) = asinh(s_min).
  [[nodiscard]] double radius_of(double s) const {
    require_domain(s);
    switch (kind_) {
      case ProfileKind::Hyperbolic: return std::asinh(s);
      case ProfileKind::Tabulated: return invert_warp(s);
      default: break;
    }
    // s = s_lo + tau^2 removes the square-root singularity at a horizon.
    const double tau_max = std::sqrt(s - s_lo_);
    const auto integrand = [&](double tau) {
      const double x = s_lo_ + tau * tau;
      const double m = kind_ == ProfileKind::AdSS ? mass_ : (*aspect_)(x).value;
      const double v = 1.0 + x * x - 2.0 * m / x;
      if (tau == 0.0 || v <= 0.0) {
        // Horizon limit: V ~ V'(s_lo) tau^2.
        const double dv = 2.0 * x + 2.0 * m / (x * x);
        return 2.0 / std::sqrt(dv);
      }
      return 2.0 * tau / std::sqrt(v);
    };
    return std::asinh(s_lo_) + integrate_gl(integrand, 0.0, tau_max, 64, 10);
  }

  /// Inverse of radius_of.
  [[nodiscard]] double area_radius_of(double r) const {
    if (kind_ == ProfileKind::Hyperbolic) {
      const double s = std::sinh(r);
      require_domain(s);
      return s;
    }
    if (kind_ == ProfileKind::Tabulated) return at_radius(r).lambda;
    const double r_lo = radius_of(s_lo_);
    if (r < r_lo) throw DomainError("radius " + std::to_string(r) + " below domain floor");
    double lo = s_lo_;
    double hi = std::isfinite(s_hi_) ? s_hi_ : std::max(2.0 * s_lo_, 1.0);
    while (!std::isfinite(s_hi_) && radius_of(hi) < r) hi *= 2.0;
    if (radius_of(hi) < r) throw DomainError("radius " + std::to_string(r) + " above domain");
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (radius_of(mid) < r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  explicit AmbientProfile(ProfileKind k) : kind_(k) {}

  void require_domain(double s) const {
    if (!(s >= s_lo_ && s <= s_hi_)) {
      throw DomainError("area radius " + std::to_string(s) + " outside profile domain [" +
                        std::to_string(s_lo_) + ", " + std::to_string(s_hi_) + "]");
    }
  }

  static double sqrt_lapse(double v, double s) {
    if (!(v > 0.0)) throw ProfileError("lambda'^2 <= 0 at s = " + std::to_string(s));
    return std::sqrt(v);
  }

  // r with lambda(r) = s on the tabulated spline.
  [[nodiscard]] double invert_warp(double s) const {
    double lo = warp_->x_min(), hi = warp_->x_max();
    double r = lo + (hi - lo) * (s - s_lo_) / (s_hi_ - s_lo_);
    for (int i = 0; i < 100; ++i) {
      const Jet j = (*warp_)(r);
      const double f = j.value - s;
      if (f > 0.0) hi = r; else lo = r;
      double next = j.d1 > 0.0 ? r - f / j.d1 : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - r) < 1e-15 * (1.0 + std::abs(r))) return next;
      r = next;
    }
    return r;
  }

  ProfileKind kind_;
  double mass_ = 0.0;
  double s_lo_ = 0.0;
  double s_hi_ = std::numeric_limits<double>::infinity();
  std::shared_ptr<const PchipSpline> aspect_;
  std::shared_ptr<const CubicSpline> warp_;
};

/// warp_eval: lambda, lambda', lambda'' at geodesic radius r.
inline WarpSample warp_eval(const AmbientProfile& profile, double r) { return profile.at_radius(r); }

inline CurvatureSample curvature_sample(const AmbientProfile& profile, double r) {
  return curvature_from_warp(profile.at_radius(r));
}

inline CurvatureSample curvature_at_area_radius(const AmbientProfile& profile, double s) {
  return curvature_from_warp(profile.at_area_radius(s));
}

struct ProfileReport {
  double min_R = std::numeric_limits<double>::infinity();
  double argmin_s = 0.0;
  bool r_floor_ok = true;    // R >= -6 - tol everywhere sampled
  bool positivity_ok = true; // lambda > 0 and lambda' > 0 everywhere sampled
  std::size_t samples = 0;
  std::string message;
  [[nodiscard]] bool pass() const { return r_floor_ok && positivity_ok; }
};

/// Samples the scalar curvature on a dense area-radius grid over [s_lo, s_hi]
/// (defaults to the profile domain, truncated to a finite window).
inline ProfileReport validate_profile(const AmbientProfile& profile, double tol,
                                      double s_lo = -1.0, double s_hi = -1.0,
                                      std::size_t samples = 4001) {
  ProfileReport rep;
  double lo = s_lo > 0.0 ? s_lo : profile.s_min();
  double hi = s_hi > 0.0 ? s_hi : profile.s_max();
  if (!std::isfinite(hi)) hi = std::max(10.0 * lo, lo + 50.0);
  lo = std::max(lo, profile.s_min());
  hi = std::min(hi, profile.s_max());
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
    try {
      const CurvatureSample c = curvature_at_area_radius(profile, s);
      ++rep.samples;
      if (c.R < rep.min_R) {
        rep.min_R = c.R;
        rep.argmin_s = s;
      }
    } catch (const ProfileError& e) {
      // A horizon at the domain floor is admissible; elsewhere it is a violation.
      if (i == 0 && profile.kind() == ProfileKind::AdSS) continue;
      rep.positivity_ok = false;
      rep.message = e.what();
    }
  }
  if (rep.min_R < -6.0 - tol) {
    rep.r_floor_ok = false;
    rep.message = "scalar curvature " + std::to_string(rep.min_R) + " below -6 at s = " +
                  std::to_string(rep.argmin_s);
  }
  return rep;
}

}  // namespace imcf
