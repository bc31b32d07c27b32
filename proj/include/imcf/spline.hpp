#pragma once

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "imcf/errors.hpp"

namespace imcf {

/// Value and first two derivatives of a one-dimensional interpolant.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

namespace detail {

inline void check_knots(std::span<const double> x, std::span<const double> y,
                        std::size_t min_points, const char* what) {
  if (x.size() != y.size()) {
    throw ProfileError(std::string(what) + ": knot and value arrays differ in length");
  }
  if (x.size() < min_points) {
    throw ProfileError(std::string(what) + ": need at least " +
                       std::to_string(min_points) + " knots");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw ProfileError(std::string(what) + ": non-finite knot data");
    }
    if (i > 0 && !(x[i] > x[i - 1])) {
      throw ProfileError(std::string(what) + ": knots must be strictly increasing");
    }
  }
}

// Index i with x[i] <= t <= x[i+1]; t is assumed to lie inside [x.front(), x.back()].
inline std::size_t locate(const std::vector<double>& x, double t) {
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  return std::min(i, x.size() - 2);
}

}  // namespace detail

/// C2 cubic spline with not-a-knot end conditions.
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(std::span<const double> x, std::span<const double> y)
      : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    detail::check_knots(x, y, 4, "CubicSpline");
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> entries;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    const auto idx = [](std::size_t k) { return static_cast<int>(k); };

    // Continuity of the third derivative at the first and last interior knots.
    entries.emplace_back(0, 0, h[1]);
    entries.emplace_back(0, 1, -(h[0] + h[1]));
    entries.emplace_back(0, 2, h[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      entries.emplace_back(idx(i), idx(i - 1), h[i - 1]);
      entries.emplace_back(idx(i), idx(i), 2.0 * (h[i - 1] + h[i]));
      entries.emplace_back(idx(i), idx(i + 1), h[i]);
      rhs[idx(i)] = 6.0 * (delta[i] - delta[i - 1]);
    }
    entries.emplace_back(idx(n - 1), idx(n - 3), h[n - 2]);
    entries.emplace_back(idx(n - 1), idx(n - 2), -(h[n - 3] + h[n - 2]));
    entries.emplace_back(idx(n - 1), idx(n - 1), h[n - 3]);

    Eigen::SparseMatrix<double> a(idx(n), idx(n));
    a.setFromTriplets(entries.begin(), entries.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(a);
    if (lu.info() != Eigen::Success) throw ProfileError("CubicSpline: singular system");
    Eigen::VectorXd m = lu.solve(rhs);
    m_.assign(m.data(), m.data() + m.size());
  }

  [[nodiscard]] double x_min() const { return x_.front(); }
  [[nodiscard]] double x_max() const { return x_.back(); }
  [[nodiscard]] bool empty() const { return x_.empty(); }

  [[nodiscard]] Jet operator()(double t) const {
    const std::size_t i = detail::locate(x_, t);
    const double h = x_[i + 1] - x_[i];
    const double a = x_[i + 1] - t;
    const double b = t - x_[i];
    const double ca = y_[i] / h - m_[i] * h / 6.0;
    const double cb = y_[i + 1] / h - m_[i + 1] * h / 6.0;
    Jet j;
    j.value = m_[i] * a * a * a / (6.0 * h) + m_[i + 1] * b * b * b / (6.0 * h) + ca * a + cb * b;
    j.d1 = -m_[i] * a * a / (2.0 * h) + m_[i + 1] * b * b / (2.0 * h) - ca + cb;
    j.d2 = (m_[i] * a + m_[i + 1] * b) / h;
    return j;
  }

 private:
  std::vector<double> x_, y_, m_;
};

/// Monotone piecewise cubic Hermite interpolant (Fritsch-Butland slopes).
/// Monotone data stays monotone; the interpolant is C1.
class PchipSpline {
 public:
  PchipSpline() = default;

  PchipSpline(std::span<const double> x, std::span<const double> y)
      : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
    detail::check_knots(x, y, 2, "PchipSpline");
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = x_[i + 1] - x_[i];
      delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    d_.assign(n, 0.0);
    if (n == 2) {
      d_[0] = d_[1] = delta[0];
      return;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) continue;
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
    d_[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
    d_[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  }

  [[nodiscard]] double x_min() const { return x_.front(); }
  [[nodiscard]] double x_max() const { return x_.back(); }
  [[nodiscard]] bool empty() const { return x_.empty(); }

  [[nodiscard]] Jet operator()(double t) const {
    const std::size_t i = detail::locate(x_, t);
    const double h = x_[i + 1] - x_[i];
    const double s = (t - x_[i]) / h;
    const double y0 = y_[i], y1 = y_[i + 1];
    const double m0 = d_[i] * h, m1 = d_[i + 1] * h;
    const double s2 = s * s, s3 = s2 * s;
    Jet j;
    j.value = (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
              (s3 - s2) * m1;
    j.d1 = ((6 * s2 - 6 * s) * y0 + (3 * s2 - 4 * s + 1) * m0 + (-6 * s2 + 6 * s) * y1 +
            (3 * s2 - 2 * s) * m1) / h;
    j.d2 = ((12 * s - 6) * y0 + (6 * s - 4) * m0 + (-12 * s + 6) * y1 + (6 * s - 2) * m1) /
           (h * h);
    return j;
  }

 private:
  // Three-point end slope, limited to preserve shape.
  static double edge_slope(double h0, double h1, double m0, double m1) {
    double d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if (d * m0 <= 0.0) return 0.0;
    if (m0 * m1 <= 0.0 && std::abs(d) > std::abs(3.0 * m0)) return 3.0 * m0;
    return d;
  }

  std::vector<double> x_, y_, d_;
};

}  // namespace imcf
