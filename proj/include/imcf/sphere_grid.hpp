#pragma once

// Tensor-product grid on the unit sphere: Gauss-Legendre colatitudes and
// uniform longitudes. Angular derivatives are spectral:
//  - in phi, by the periodic Fourier differentiation matrices;
//  - in theta, along great circles: meridian phi and meridian phi + pi join
//    through both poles into a 2 pi periodic curve, which is differentiated
//    with a trigonometric interpolant on the (non-uniform) node set.
// No node sits on a pole, so no coordinate singularity is ever evaluated.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "imcf/errors.hpp"
#include "imcf/quadrature.hpp"

namespace imcf {

/// Scalar field sampled on a SphereGrid; rows are colatitude rings, columns longitudes.
using Field = Eigen::MatrixXd;

class SphereGrid {
 public:
  SphereGrid(int ntheta, int nphi) : nt_(ntheta), np_(nphi) {
    if (ntheta < 4) throw ArgumentError("SphereGrid: ntheta must be at least 4");
    if (nphi < 4 || nphi % 2 != 0) throw ArgumentError("SphereGrid: nphi must be even and >= 4");
    const GaussLegendre gl = gauss_legendre(ntheta);
    theta_.resize(nt_);
    sin_.resize(nt_);
    cos_.resize(nt_);
    wtheta_.resize(nt_);
    for (int i = 0; i < nt_; ++i) {
      // Nodes ascend in x = cos(theta); reverse so theta ascends from the north pole.
      const auto k = static_cast<std::size_t>(nt_ - 1 - i);
      cos_[i] = gl.nodes[k];
      theta_[i] = std::acos(gl.nodes[k]);
      sin_[i] = std::sqrt(1.0 - cos_[i] * cos_[i]);
      wtheta_[i] = gl.weights[k];
    }
    dphi_ = 2.0 * std::numbers::pi / np_;
    phi_.resize(np_);
    for (int j = 0; j < np_; ++j) phi_[j] = j * dphi_;
    build_meridian_operators();
    build_longitude_operators();
    build_polar_filter();
  }

  [[nodiscard]] int ntheta() const { return nt_; }
  [[nodiscard]] int nphi() const { return np_; }
  [[nodiscard]] Eigen::Index nodes() const { return static_cast<Eigen::Index>(nt_) * np_; }
  [[nodiscard]] double theta(int i) const { return theta_[i]; }
  [[nodiscard]] double phi(int j) const { return phi_[j]; }
  [[nodiscard]] double sin_theta(int i) const { return sin_[i]; }
  [[nodiscard]] double cos_theta(int i) const { return cos_[i]; }
  [[nodiscard]] const Eigen::VectorXd& sin_thetas() const { return sin_; }
  [[nodiscard]] const Eigen::VectorXd& cos_thetas() const { return cos_; }
  /// Quadrature weight of node (i, j) for the round area form; sums to 4 pi.
  [[nodiscard]] double weight(int i) const { return wtheta_[i] * dphi_; }
  /// Nominal angular spacing, used by the CFL guard.
  [[nodiscard]] double spacing() const { return std::numbers::pi / nt_; }

  [[nodiscard]] Field zeros() const { return Field::Zero(nt_, np_); }

  [[nodiscard]] Field d_phi(const Field& f) const { return f * dphi1_.transpose(); }
  [[nodiscard]] Field d_phi2(const Field& f) const { return f * dphi2_.transpose(); }
  [[nodiscard]] Field d_theta(const Field& f) const { return along_meridians(f, dpsi1_, true); }
  [[nodiscard]] Field d_theta2(const Field& f) const { return along_meridians(f, dpsi2_, false); }

  /// d_theta and d_phi of several fields at once (one matrix product each).
  void gradients(const std::vector<const Field*>& fields, std::vector<Field>& dtheta,
                 std::vector<Field>& dphi) const {
    const auto n = static_cast<int>(fields.size());
    Eigen::MatrixXd wide(nt_, n * np_), tall(n * nt_, np_);
    for (int b = 0; b < n; ++b) {
      wide.middleCols(b * np_, np_) = *fields[static_cast<std::size_t>(b)];
      tall.middleRows(b * nt_, nt_) = *fields[static_cast<std::size_t>(b)];
    }
    const Field dt = along_meridians(wide, dpsi1_, true);
    const Field dp = tall * dphi1_.transpose();
    dtheta.resize(static_cast<std::size_t>(n));
    dphi.resize(static_cast<std::size_t>(n));
    for (int b = 0; b < n; ++b) {
      dtheta[static_cast<std::size_t>(b)] = dt.middleCols(b * np_, np_);
      dphi[static_cast<std::size_t>(b)] = dp.middleRows(b * nt_, nt_);
    }
  }

  /// Sum of f * weight over all nodes (fixed reduction order).
  [[nodiscard]] double integrate(const Field& f) const {
    double total = 0.0;
    for (int i = 0; i < nt_; ++i) {
      double ring = 0.0;
      for (int j = 0; j < np_; ++j) ring += f(i, j);
      total += ring * weight(i);
    }
    return total;
  }

  /// Removes longitudinal Fourier modes |k| > sin(theta) * nphi / 2 on each ring.
  /// Keeps explicit time stepping stable near the poles; exact for fields
  /// whose ring spectra are already below the cutoff (e.g. axisymmetric data).
  void filter(Field& f) const {
    for (int i = 0; i < nt_; ++i) {
      if (ring_filter_[i].size() == 0) continue;
      // The projector keeps the ring mean; filtering only the deviation keeps
      // constant rings bitwise constant.
      const double mean = f.row(i).mean();
      f.row(i) = ((f.row(i).array() - mean).matrix() * ring_filter_[i]).array() + mean;
    }
  }

  /// Spectral interpolation of several fields at an arbitrary point.
  [[nodiscard]] std::vector<double> interpolate(const std::vector<const Field*>& fields,
                                                double theta, double phi) const {
    const Eigen::VectorXd wa = cardinal_weights(phi);
    const Eigen::VectorXd wb = cardinal_weights(phi + std::numbers::pi);
    const int m = 2 * nt_;
    Eigen::RowVectorXd basis(m);
    int c = 0;
    basis(c++) = 1.0;
    for (int k = 1; k < nt_; ++k) {
      basis(c++) = std::cos(k * theta);
      basis(c++) = std::sin(k * theta);
    }
    basis(c) = std::sin(nt_ * theta);
    const Eigen::RowVectorXd wm = basis * meridian_inverse_;
    std::vector<double> out;
    out.reserve(fields.size());
    Eigen::VectorXd ext(m);
    for (const Field* f : fields) {
      ext.head(nt_) = *f * wa;
      ext.tail(nt_) = (*f * wb).reverse();
      out.push_back(wm.dot(ext));
    }
    return out;
  }

  /// Great-circle distance between nodes (i1, j1) and (i2, j2).
  [[nodiscard]] double sphere_distance(int i1, int j1, int i2, int j2) const {
    const double c = cos_[i1] * cos_[i2] + sin_[i1] * sin_[i2] * std::cos(phi_[j1] - phi_[j2]);
    return std::acos(std::clamp(c, -1.0, 1.0));
  }

 private:
  // Applies a great-circle differentiation matrix. odd = true for first
  // derivatives, whose second half picks up the sign of d/dpsi = -d/dtheta.
  // f may hold several fields side by side (a multiple of nphi columns).
  Field along_meridians(const Field& f, const Eigen::MatrixXd& op, bool odd) const {
    const int half = np_ / 2;
    const auto blocks = static_cast<int>(f.cols() / np_);
    Eigen::MatrixXd ext(2 * nt_, half * blocks);
    for (int b = 0; b < blocks; ++b) {
      ext.block(0, b * half, nt_, half) = f.middleCols(b * np_, half);
      ext.block(nt_, b * half, nt_, half) = f.middleCols(b * np_ + half, half).colwise().reverse();
    }
    const Eigen::MatrixXd d = op * ext;
    const double sign = odd ? -1.0 : 1.0;
    Field out(nt_, f.cols());
    for (int b = 0; b < blocks; ++b) {
      out.middleCols(b * np_, half) = d.block(0, b * half, nt_, half);
      out.middleCols(b * np_ + half, half) =
          sign * d.block(nt_, b * half, nt_, half).colwise().reverse();
    }
    return out;
  }

  void build_meridian_operators() {
    const int m = 2 * nt_;
    Eigen::VectorXd psi(m);
    for (int k = 0; k < nt_; ++k) {
      psi[k] = theta_[k];
      psi[nt_ + k] = 2.0 * std::numbers::pi - theta_[nt_ - 1 - k];
    }
    // Basis 1, cos k psi, sin k psi (k < n), sin n psi. The node set is symmetric
    // under psi -> -psi, so even and odd parts need n functions each.
    Eigen::MatrixXd e(m, m), e1(m, m), e2(m, m);
    for (int r = 0; r < m; ++r) {
      const double x = psi[r];
      int c = 0;
      e(r, c) = 1.0;
      e1(r, c) = 0.0;
      e2(r, c) = 0.0;
      ++c;
      for (int k = 1; k < nt_; ++k) {
        const double ck = std::cos(k * x), sk = std::sin(k * x);
        e(r, c) = ck;
        e1(r, c) = -k * sk;
        e2(r, c) = -k * k * ck;
        ++c;
        e(r, c) = sk;
        e1(r, c) = k * ck;
        e2(r, c) = -k * k * sk;
        ++c;
      }
      const int n = nt_;
      e(r, c) = std::sin(n * x);
      e1(r, c) = n * std::cos(n * x);
      e2(r, c) = -n * n * std::sin(n * x);
    }
    const Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
    if (!lu.isInvertible()) throw ArgumentError("SphereGrid: singular meridian interpolation");
    const Eigen::MatrixXd inv = lu.inverse();
    meridian_inverse_ = inv;
    dpsi1_ = e1 * inv;
    dpsi2_ = e2 * inv;
    // Constants must differentiate to exactly zero; fixing the diagonal from
    // the off-diagonal sum removes the roundoff of the explicit inverse.
    for (int r = 0; r < m; ++r) {
      dpsi1_(r, r) -= dpsi1_.row(r).sum();
      dpsi2_(r, r) -= dpsi2_.row(r).sum();
    }
  }

  // Periodic cardinal functions sin(N x / 2) cot(x / 2) / N at phi - phi_j.
  [[nodiscard]] Eigen::VectorXd cardinal_weights(double phi) const {
    Eigen::VectorXd w(np_);
    for (int j = 0; j < np_; ++j) {
      const double d = std::remainder(phi - phi_[j], 2.0 * std::numbers::pi);
      if (std::abs(d) < 1e-14) {
        w.setZero();
        w(j) = 1.0;
        return w;
      }
      w(j) = std::sin(0.5 * np_ * d) / (np_ * std::tan(0.5 * d));
    }
    return w;
  }

  void build_longitude_operators() {
    const int n = np_;
    const double h = dphi_;
    dphi1_.setZero(n, n);
    dphi2_.setZero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i == j) {
          dphi2_(i, j) = -std::numbers::pi * std::numbers::pi / (3.0 * h * h) - 1.0 / 6.0;
          continue;
        }
        const int d = i - j;
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        const double half = 0.5 * d * h;
        dphi1_(i, j) = 0.5 * sign / std::tan(half);
        dphi2_(i, j) = -0.5 * sign / (std::sin(half) * std::sin(half));
      }
    }
    for (int i = 0; i < n; ++i) {
      dphi1_(i, i) = 0.0;
      dphi1_(i, i) = -dphi1_.row(i).sum();
      dphi2_(i, i) = 0.0;
      dphi2_(i, i) = -dphi2_.row(i).sum();
    }
  }

  void build_polar_filter() {
    ring_filter_.assign(nt_, Eigen::MatrixXd());
    const int nyquist = np_ / 2;
    for (int i = 0; i < nt_; ++i) {
      const int kmax = std::max(1, static_cast<int>(std::floor(sin_[i] * nyquist)));
      if (kmax >= nyquist) continue;
      // Circulant projector; entry (a, b) depends on (a - b) mod nphi only.
      std::vector<double> kernel(static_cast<std::size_t>(np_));
      for (int d = 0; d < np_; ++d) {
        double v = 1.0;
        for (int k = 1; k <= kmax; ++k) v += 2.0 * std::cos(k * d * dphi_);
        kernel[static_cast<std::size_t>(d)] = v / np_;
      }
      Eigen::MatrixXd p(np_, np_);
      for (int a = 0; a < np_; ++a) {
        for (int b = 0; b < np_; ++b) p(a, b) = kernel[static_cast<std::size_t>((a - b + np_) % np_)];
      }
      ring_filter_[i] = std::move(p);
    }
  }

  int nt_, np_;
  Eigen::VectorXd theta_, sin_, cos_, wtheta_;
  std::vector<double> phi_;
  double dphi_ = 0.0;
  Eigen::MatrixXd dpsi1_, dpsi2_, dphi1_, dphi2_, meridian_inverse_;
  std::vector<Eigen::MatrixXd> ring_filter_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

inline GridPtr make_grid(int ntheta, int nphi) { return std::make_shared<const SphereGrid>(ntheta, nphi); }

}  // namespace imcf
