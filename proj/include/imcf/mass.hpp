#pragma once

// Hawking mass, the monotonicity identities and the integral diagnostics
// along a flow track.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/imcf.hpp"
#include "imcf/sphere_grid.hpp"
#include "imcf/surface.hpp"

namespace imcf {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;
inline constexpr double kSixteenPi = 16.0 * std::numbers::pi;

/// sqrt(|Sigma| / (16 pi)^3) (16 pi - int (H^2 - 4)).
inline double hawking_mass(const SurfaceGeometry& geom) {
  const double area = geom.area();
  const double w = integrate(geom, (geom.H.array().square() - 4.0).matrix());
  return std::sqrt(area / (kSixteenPi * kSixteenPi * kSixteenPi)) * (kSixteenPi - w);
}

/// First derivative of a uniformly sampled series: centered in the interior,
/// second-order one-sided at the ends.
inline std::vector<double> time_derivative(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  if (n == 2) {
    d[0] = d[1] = (y[1] - y[0]) / h;
    return d;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (y[k + 1] - y[k - 1]) / (2.0 * h);
  d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
  d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  return d;
}

struct MassDiagnostics {
  std::vector<double> t, area, m_H, dm_H;
  std::vector<double> I_gradH, I_pinch, I_R, I_Rc, I_K12, I_H2, I_A2, I_prod;
  std::vector<double> chi, Hbar, Hbar2;

  [[nodiscard]] std::size_t size() const { return t.size(); }
};

struct SnapshotIntegrals {
  double area, m_H, I_gradH, I_pinch, I_R, I_Rc, I_K12, I_H2, I_A2, I_prod, chi, Hbar, Hbar2;
};

inline SnapshotIntegrals snapshot_integrals(const SurfaceGeometry& g) {
  SnapshotIntegrals s{};
  const auto I = [&](const auto& expr) { return integrate(g, Field(expr)); };
  const auto H = g.H.array();
  const auto l1 = g.lam1.array(), l2 = g.lam2.array();
  s.area = g.area();
  s.I_gradH = I(g.grad_H2.array() / H.square());
  s.I_pinch = I((l1 - l2).square());
  s.I_R = I(g.R.array() + 6.0);
  s.I_Rc = I(g.Rc_nn.array() + 2.0);
  s.I_K12 = I(g.K12.array() + 1.0);
  s.I_H2 = I(H.square() - 4.0);
  s.I_A2 = I(l1.square() + l2.square() - 2.0);
  s.I_prod = I(l1 * l2 - 1.0);
  s.chi = euler_characteristic(g);
  s.Hbar = I(H) / s.area;
  s.Hbar2 = I(H.square()) / s.area;
  s.m_H = std::sqrt(s.area / (kSixteenPi * kSixteenPi * kSixteenPi)) * (kSixteenPi - s.I_H2);
  return s;
}

inline MassDiagnostics diagnostics(const FlowTrack& track) {
  MassDiagnostics d;
  for (std::size_t k = 0; k < track.size(); ++k) {
    const SnapshotIntegrals s = snapshot_integrals(track.geometries[k]);
    d.t.push_back(track.times[k]);
    d.area.push_back(s.area);
    d.m_H.push_back(s.m_H);
    d.I_gradH.push_back(s.I_gradH);
    d.I_pinch.push_back(s.I_pinch);
    d.I_R.push_back(s.I_R);
    d.I_Rc.push_back(s.I_Rc);
    d.I_K12.push_back(s.I_K12);
    d.I_H2.push_back(s.I_H2);
    d.I_A2.push_back(s.I_A2);
    d.I_prod.push_back(s.I_prod);
    d.chi.push_back(s.chi);
    d.Hbar.push_back(s.Hbar);
    d.Hbar2.push_back(s.Hbar2);
  }
  d.dm_H = time_derivative(d.m_H, track.dt * track.stride);
  return d;
}

/// Largest violation of the four algebraic relations between the integrals.
inline double algebraic_relation_residual(const MassDiagnostics& d) {
  double worst = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    worst = std::max(worst, std::abs(d.I_A2[k] - 0.5 * d.I_H2[k] - 0.5 * d.I_pinch[k]));
    worst = std::max(worst, std::abs(d.I_prod[k] - 0.5 * d.I_H2[k] + 0.5 * d.I_A2[k]));
    worst = std::max(worst, std::abs(d.I_K12[k] - 0.5 * d.I_R[k] + d.I_Rc[k]));
    worst = std::max(worst,
                     std::abs(2.0 * std::numbers::pi * d.chi[k] - d.I_prod[k] - d.I_K12[k]));
  }
  return worst;
}

/// Largest single-step decrease of m_H (0 if nondecreasing).
inline double max_mass_decrease(const std::vector<double>& m_H) {
  double worst = 0.0;
  for (std::size_t k = 1; k < m_H.size(); ++k) worst = std::max(worst, m_H[k - 1] - m_H[k]);
  return worst;
}

struct GerochResidual {
  std::vector<double> t;
  std::vector<double> res22;  // |d/dt int (H^2 - 4) - (16 pi)^{3/2} |Sigma|^{-1/2} (m_H / 2 - m_H')|
  std::vector<double> res23;  // slack of the crucial estimate; equals 4 pi (2 - chi)
};

inline GerochResidual geroch_identity_residual(const FlowTrack& track, const MassDiagnostics& d) {
  if (d.size() < 3) throw ArgumentError("geroch_identity_residual: need at least 3 snapshots");
  const double h = track.dt * track.stride;
  const std::vector<double> dI = time_derivative(d.I_H2, h);
  const double c = std::pow(kSixteenPi, 1.5);
  GerochResidual r;
  r.t = d.t;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double sa = std::sqrt(d.area[k]);
    r.res22.push_back(std::abs(dI[k] - c / sa * (0.5 * d.m_H[k] - d.dm_H[k])));
    const double bulk = 2.0 * d.I_gradH[k] + 0.5 * d.I_pinch[k] + d.I_R[k];
    r.res23.push_back(d.m_H[k] * c / (2.0 * sa) - dI[k] - bulk);
  }
  return r;
}

inline GerochResidual geroch_identity_residual(const FlowTrack& track) {
  return geroch_identity_residual(track, diagnostics(track));
}

/// A test function phi(theta, phi, t) on the graph parameter domain, with its
/// partial time derivative at fixed angle. Angular gradients are taken on the grid.
struct TestFunction {
  std::function<double(double, double, double)> value;
  std::function<double(double, double, double)> dt;
};

struct PairingResult {
  double lhs = 0.0;  // int_a^b int 2 phi Rc(nu, nu)
  double rhs = 0.0;
  [[nodiscard]] double residual() const { return std::abs(lhs - rhs); }
};

/// Weak form of the Ricci term along the flow, evaluated with the trapezoid
/// rule over the snapshots in [a, b]:
///   int_a^b int 2 phi Rc = int_{Sigma_a} phi H^2 - int_{Sigma_b} phi H^2
///     + int_a^b int [ -2 phi |grad H|^2 / H^2 - 2 <grad phi, grad H> / H
///                     + phi (H^2 - 2 |A|^2) + (D_t phi) H^2 ]
/// where D_t phi is the derivative along the normal trajectories.
inline PairingResult weak_ricci_pairing(const FlowTrack& track, const TestFunction& phi, double a,
                                        double b) {
  if (!(a < b)) throw ArgumentError("weak_ricci_pairing: need a < b");
  const std::size_t ka = track.index_of(a), kb = track.index_of(b);
  const SphereGrid& grid = track.grid();
  const int nt = grid.ntheta(), np = grid.nphi();
  const double h = track.dt * track.stride;

  const auto sample = [&](const std::function<double(double, double, double)>& f, double t) {
    Field out(nt, np);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < np; ++j) out(i, j) = f(grid.theta(i), grid.phi(j), t);
    }
    return out;
  };

  PairingResult res;
  double bulk = 0.0, ricci = 0.0;
  for (std::size_t k = ka; k <= kb; ++k) {
    const SurfaceGeometry& g = track.geometries[k];
    const double t = track.times[k];
    const Field p = sample(phi.value, t);
    const Field pt = sample(phi.dt, t);
    const Field p1 = grid.d_theta(p);
    const Field p2 = (grid.d_phi(p).array().colwise() / grid.sin_thetas().array()).matrix();
    Field integrand(nt, np), rc(nt, np);
    for (int i = 0; i < nt; ++i) {
      for (int j = 0; j < np; ++j) {
        const double H = g.H(i, j);
        const double s = g.u(i, j), W = g.tilt(i, j);
        const double det = g.g11(i, j) * g.g22(i, j) - g.g12(i, j) * g.g12(i, j);
        const double gi11 = g.g22(i, j) / det, gi12 = -g.g12(i, j) / det,
                     gi22 = g.g11(i, j) / det;
        const double dot = gi11 * p1(i, j) * g.dH1(i, j) +
                           gi12 * (p1(i, j) * g.dH2(i, j) + p2(i, j) * g.dH1(i, j)) +
                           gi22 * p2(i, j) * g.dH2(i, j);
        const double a2 = g.lam1(i, j) * g.lam1(i, j) + g.lam2(i, j) * g.lam2(i, j);
        // Graph points drift against the normal trajectories.
        const double drift =
            -(g.df1(i, j) * p1(i, j) + g.df2(i, j) * p2(i, j)) / (s * s * W * H);
        const double dphi = pt(i, j) + drift;
        integrand(i, j) = -2.0 * p(i, j) * g.grad_H2(i, j) / (H * H) - 2.0 * dot / H +
                          p(i, j) * (H * H - 2.0 * a2) + dphi * H * H;
        rc(i, j) = 2.0 * p(i, j) * g.Rc_nn(i, j);
      }
    }
    const double w = (k == ka || k == kb) ? 0.5 * h : h;
    bulk += w * integrate(g, integrand);
    ricci += w * integrate(g, rc);
  }
  const auto boundary = [&](std::size_t k) {
    const SurfaceGeometry& g = track.geometries[k];
    const Field p = sample(phi.value, track.times[k]);
    return integrate(g, Field(p.array() * g.H.array().square()));
  };
  res.lhs = ricci;
  res.rhs = boundary(ka) - boundary(kb) + bulk;
  return res;
}

struct PinchReport {
  std::vector<double> t;             // checked times
  std::vector<int> violations;       // violating nodes per checked time
  std::vector<Eigen::MatrixX<bool>> map;  // per checked time, true where violated
  double worst_lower = 0.0;  // most negative normalized slack of the lower bound
  double worst_upper = 0.0;  // ... of the upper bound
  [[nodiscard]] int total() const {
    int n = 0;
    for (int v : violations) n += v;
    return n;
  }
};

namespace detail {

// Particle paths through the stored snapshots. Used to recompute the
// exponents Lambda_i where the advected ones are not trustworthy: lambda_i
// has a conical kink at umbilic points, so spectral advection of Lambda_i
// rings there. Along a path the integrand only needs the smooth scalar
// (lambda_2 - lambda_1)^2, and lambda_1 + lambda_2 = H gives Lambda_1 +
// Lambda_2 = 2t exactly.
class ParticlePaths {
 public:
  explicit ParticlePaths(const FlowTrack& track) : track_(track) {}

  /// Lambda_1, Lambda_2 at snapshot k of the particle with label y. Heun and
  /// trapezoid on the snapshot spacing, Richardson-extrapolated against the
  /// doubled spacing.
  std::pair<double, double> exponents(Eigen::Vector3d y, std::size_t k) {
    const std::size_t even = k - k % 2;
    double D = 0.0;
    if (even >= 2) {
      Eigen::Vector3d y2 = y;
      const double fine = integrate(y, 0, even, 1);
      const double coarse = integrate(y2, 0, even, 2);
      D = (4.0 * fine - coarse) / 3.0;
    }
    if (k % 2 == 1) D += integrate(y, even, k, 1);
    const double t = track_.times[k] - track_.times.front();
    return {t - 0.5 * D, t + 0.5 * D};
  }

 private:
  // Advances y from snapshot a to b in steps of m snapshots; returns int 2 |A0| / H.
  double integrate(Eigen::Vector3d& y, std::size_t a, std::size_t b, std::size_t m) {
    const double h = track_.dt * track_.stride * static_cast<double>(m);
    double D = 0.0;
    double d0 = 0.0;
    Eigen::Vector3d X0 = sample(a, y, d0);
    for (std::size_t n = a; n < b; n += m) {
      double d1 = 0.0;
      const Eigen::Vector3d X1 = sample(n + m, (y + h * X0).normalized(), d1);
      y = (y + 0.5 * h * (X0 + X1)).normalized();
      D += 0.5 * h * (d0 + d1);
      if (n + m < b) X0 = sample(n + m, y, d0);
    }
    return D;
  }

  // Cartesian drift velocity (3), H and (lambda_2 - lambda_1)^2 at snapshot k.
  const std::vector<Field>& fields(std::size_t k) {
    if (cache_.size() < track_.size()) cache_.resize(track_.size());
    std::vector<Field>& out = cache_[k];
    if (!out.empty()) return out;
    const SurfaceGeometry& g = track_.geometries[k];
    const SphereGrid& grid = *g.grid;
    const int nt = grid.ntheta(), np = grid.nphi();
    out.assign(5, Field(nt, np));
    for (int i = 0; i < nt; ++i) {
      const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
      for (int j = 0; j < np; ++j) {
        const double sp = std::sin(grid.phi(j)), cp = std::cos(grid.phi(j));
        const double s = g.u(i, j);
        const double c = -1.0 / (s * s * g.tilt(i, j) * g.H(i, j));
        const double f1 = c * g.df1(i, j), f2 = c * g.df2(i, j);
        out[0](i, j) = f1 * ct * cp - f2 * sp;
        out[1](i, j) = f1 * ct * sp + f2 * cp;
        out[2](i, j) = -f1 * st;
        out[3](i, j) = g.H(i, j);
        const double d = g.lam2(i, j) - g.lam1(i, j);
        out[4](i, j) = d * d;
      }
    }
    return out;
  }

  Eigen::Vector3d sample(std::size_t k, const Eigen::Vector3d& y, double& rate) {
    const std::vector<Field>& f = fields(k);
    const double th = std::acos(std::clamp(y.z(), -1.0, 1.0));
    const double ph = std::atan2(y.y(), y.x());
    const std::vector<double> v =
        track_.grid().interpolate({&f[0], &f[1], &f[2], &f[3], &f[4]}, th, ph);
    rate = 2.0 * std::sqrt(std::max(0.0, v[4])) / v[3];
    Eigen::Vector3d X(v[0], v[1], v[2]);
    return X - X.dot(y) * y;
  }

  const FlowTrack& track_;
  std::vector<std::vector<Field>> cache_;
};

}  // namespace detail

/// Checks, in the normal parameterization carried by the track,
///   exp(int 2 lambda_1 / H) g(0) <= g(t) <= exp(int 2 lambda_2 / H) g(0)
/// at every node. The initial metric is evaluated at each particle's label by
/// spectral interpolation. tol is relative to the bound. Nodes that fail
/// (slack below refine_margin - tol) with the advected exponents are
/// re-checked with exponents integrated along the particle path.
inline PinchReport pinch_bounds_check(const FlowTrack& track, double tol = 1e-9,
                                      std::vector<std::size_t> indices = {},
                                      double refine_margin = 0.0) {
  if (track.frames.empty()) {
    throw ArgumentError("pinch_bounds_check: track was run without normal tracking");
  }
  if (indices.empty()) {
    for (std::size_t k = 0; k < track.size(); ++k) indices.push_back(k);
  }
  const SphereGrid& grid = track.grid();
  const int nt = grid.ntheta(), np = grid.nphi();
  const SurfaceGeometry& g0 = track.geometries.front();

  // Initial metric data as smooth ambient-frame fields: s0 and the Cartesian
  // gradient of the geodesic-radius graph.
  Field gx(nt, np), gy(nt, np), gz(nt, np);
  for (int i = 0; i < nt; ++i) {
    const double st = grid.sin_theta(i), ct = grid.cos_theta(i);
    for (int j = 0; j < np; ++j) {
      const double sp = std::sin(grid.phi(j)), cp = std::cos(grid.phi(j));
      const double f1 = g0.df1(i, j), f2 = g0.df2(i, j);
      gx(i, j) = f1 * ct * cp - f2 * sp;
      gy(i, j) = f1 * ct * sp + f2 * cp;
      gz(i, j) = -f1 * st;
    }
  }
  const std::vector<const Field*> sources{&g0.u, &gx, &gy, &gz};

  PinchReport rep;
  detail::ParticlePaths paths(track);
  for (std::size_t k : indices) {
    const SurfaceGeometry& g = track.geometries[k];
    const NormalFrame& fr = track.frames[k];
    std::vector<Field> dth, dph;
    grid.gradients({&fr.px, &fr.py, &fr.pz}, dth, dph);
    Eigen::MatrixX<bool> bad = Eigen::MatrixX<bool>::Constant(nt, np, false);
    int count = 0;
    for (int i = 0; i < nt; ++i) {
      const double st = grid.sin_theta(i);
      for (int j = 0; j < np; ++j) {
        Eigen::Vector3d y(fr.px(i, j), fr.py(i, j), fr.pz(i, j));
        y.normalize();
        const double th0 = std::acos(std::clamp(y.z(), -1.0, 1.0));
        const double ph0 = std::atan2(y.y(), y.x());
        const std::vector<double> v = grid.interpolate(sources, th0, ph0);
        const Eigen::Vector3d G(v[1], v[2], v[3]);
        Eigen::Vector3d a1(dth[0](i, j), dth[1](i, j), dth[2](i, j));
        Eigen::Vector3d a2(dph[0](i, j), dph[1](i, j), dph[2](i, j));
        a2 /= st;
        a1 -= a1.dot(y) * y;
        a2 -= a2.dot(y) * y;
        const double s0 = v[0];
        Eigen::Matrix2d B;
        B(0, 0) = s0 * s0 * a1.dot(a1) + G.dot(a1) * G.dot(a1);
        B(0, 1) = B(1, 0) = s0 * s0 * a1.dot(a2) + G.dot(a1) * G.dot(a2);
        B(1, 1) = s0 * s0 * a2.dot(a2) + G.dot(a2) * G.dot(a2);
        Eigen::Matrix2d A;
        A << g.g11(i, j), g.g12(i, j), g.g12(i, j), g.g22(i, j);
        const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(A, B,
                                                                           Eigen::EigenvaluesOnly);
        const double rho_min = es.eigenvalues()(0), rho_max = es.eigenvalues()(1);
        double lower = rho_min * std::exp(-fr.lam1(i, j)) - 1.0;
        double upper = 1.0 - rho_max * std::exp(-fr.lam2(i, j));
        if (std::min(lower, upper) < refine_margin - tol) {
          const auto [L1, L2] = paths.exponents(y, k);
          lower = rho_min * std::exp(-L1) - 1.0;
          upper = 1.0 - rho_max * std::exp(-L2);
        }
        rep.worst_lower = std::min(rep.worst_lower, lower);
        rep.worst_upper = std::min(rep.worst_upper, upper);
        if (lower < -tol || upper < -tol) {
          bad(i, j) = true;
          ++count;
        }
      }
    }
    rep.t.push_back(track.times[k]);
    rep.violations.push_back(count);
    rep.map.push_back(std::move(bad));
  }
  return rep;
}

struct AreaParamResidual {
  std::vector<double> t;
  std::vector<double> measure;  // int |dmu_t / (r0^2 e^t dsigma) - 1| dsigma
  std::vector<double> h_var;    // int (H - Hbar)^2 dmu
};

inline AreaParamResidual area_parameterization_residual(const FlowTrack& track) {
  AreaParamResidual r;
  const double r0 = track.bounds.r0;
  for (std::size_t k = 0; k < track.size(); ++k) {
    const SurfaceGeometry& g = track.geometries[k];
    const double t = track.times[k];
    const double scale = r0 * r0 * std::exp(t);
    r.t.push_back(t);
    r.measure.push_back(g.grid->integrate(Field((g.dmu.array() / scale - 1.0).abs())));
    const double hbar = integrate(g, g.H) / g.area();
    r.h_var.push_back(integrate(g, Field((g.H.array() - hbar).square())));
  }
  return r;
}

struct MassFit {
  double m_inf = 0.0;
  double c = 0.0;
  double rms = 0.0;
};

/// Least-squares fit m_H(t) ~ m_inf + c e^{-t/2} on the trailing fraction of
/// the series. FitError when the rms residual exceeds threshold.
inline MassFit mass_at_infinity(const std::vector<double>& t, const std::vector<double>& m_H,
                                double tail_fraction = 0.5, double threshold = 1e-3) {
  if (t.size() != m_H.size() || t.empty()) throw ArgumentError("mass_at_infinity: bad series");
  if (t.back() - t.front() < 2.0 - 1e-12) {
    throw ArgumentError("mass_at_infinity: series must span at least t = 2");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw ArgumentError("mass_at_infinity: tail_fraction must be in (0, 1]");
  }
  const double t_start = t.back() - tail_fraction * (t.back() - t.front());
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] >= t_start - 1e-12) idx.push_back(k);
  }
  if (idx.size() < 3) throw FitError("mass_at_infinity: fewer than 3 samples in the tail");
  Eigen::MatrixXd X(static_cast<Eigen::Index>(idx.size()), 2);
  Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    X(row, 0) = 1.0;
    X(row, 1) = std::exp(-0.5 * t[idx[r]]);
    y(row) = m_H[idx[r]];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(y);
  MassFit fit;
  fit.m_inf = beta(0);
  fit.c = beta(1);
  fit.rms = std::sqrt((X * beta - y).squaredNorm() / static_cast<double>(idx.size()));
  if (!(fit.rms <= threshold)) {
    throw FitError("mass_at_infinity: fit residual " + std::to_string(fit.rms) +
                   " exceeds threshold " + std::to_string(threshold));
  }
  return fit;
}

}  // namespace imcf
