// Torus points and translate-minimizing distances for a max-of-two-blocks norm.
#pragma once

#include "anosov/core.hpp"
#include "anosov/hyperbolic_linear.hpp"

#include <vector>

namespace anosov {

// Norm ||x|| = max(|(Wx)_{0..k}|_2, |(Wx)_{k..n}|_2); W = identity, k = 0 gives Euclidean.
class TorusMetric {
 public:
  TorusMetric() = default;
  TorusMetric(const Mat& W, int split) : W_(W), k_(split), n_(static_cast<int>(W.rows())) {
    int total = 1;
    for (int i = 0; i < n_; ++i) total *= 3;
    shifts_.reserve(static_cast<std::size_t>(total));
    Vec t(n_);
    for (int code = 0; code < total; ++code) {
      int c = code;
      bool zero = true;
      for (int i = 0; i < n_; ++i) {
        t[i] = static_cast<double>(c % 3 - 1);
        if (t[i] != 0.0) zero = false;
        c /= 3;
      }
      if (!zero) shifts_.push_back({t, W_ * t});
    }
    euclidean_ = k_ == 0 && W_.isIdentity(0.0);
    euclid_bound_ = euclidean_ ? 1.0 : std::sqrt(2.0) * W_.inverse().operatorNorm();
    const Mat Wi = W_.inverse();
    row_bound_ = Vec(n_);
    for (int i = 0; i < n_; ++i)
      row_bound_[i] = euclidean_ ? 1.0
                      : k_ == 0  ? Wi.row(i).norm()
                                 : Wi.row(i).head(k_).norm() + Wi.row(i).tail(n_ - k_).norm();
    max_row_bound_ = row_bound_.maxCoeff();
  }

  static TorusMetric euclidean(int dim) { return TorusMetric(Mat::Identity(dim, dim), 0); }
  static TorusMetric adapted(const HyperbolicSplitting& s) {
    return TorusMetric(s.coordinates_matrix(), s.stable_dim());
  }

  int dim() const { return n_; }
  const Mat& weights() const { return W_; }

  double coord_norm(const Vec& c) const {
    return k_ == 0 ? c.norm() : std::max(c.head(k_).norm(), c.tail(n_ - k_).norm());
  }
  double norm(const Vec& v) const { return coord_norm(W_ * v); }

  Vec difference(const Vec& x, const Vec& y) const {
    const Vec d = wrap(x - y);
    const Vec c = W_ * d;
    double best = coord_norm(c);
    const Shift* arg = nullptr;
    for (const auto& s : shifts_) {
      const double v = coord_norm(c + s.image);
      if (v < best) {
        best = v;
        arg = &s;
      }
    }
    return arg ? Vec(d + arg->t) : d;
  }

  bool is_euclidean() const { return euclidean_; }
  // ||v||_2 <= euclid_bound * ||v||.
  double euclid_bound() const { return euclid_bound_; }

  // Per-coordinate half-widths of the eps-ball in the standard chart.
  Vec extent(double eps) const { return eps * row_bound_; }

  // distance(x, y) <= eps; when the eps-ball cannot wrap, only the nearest lift counts.
  bool within(const Vec& x, const Vec& y, double eps) const {
    if (max_row_bound_ * eps < 0.5) return coord_norm(W_ * wrap(x - y)) <= eps;
    return distance(x, y) <= eps;
  }

  double distance(const Vec& x, const Vec& y) const {
    const Vec d = wrap(x - y);
    if (euclidean_) return d.norm();
    const Vec c = W_ * d;
    double best = coord_norm(c);
    for (const auto& s : shifts_) best = std::min(best, coord_norm(c + s.image));
    return best;
  }

 private:
  struct Shift {
    Vec t;
    Vec image;
  };
  Mat W_;
  int k_ = 0;
  int n_ = 0;
  std::vector<Shift> shifts_;
  bool euclidean_ = false;
  double euclid_bound_ = 1.0;
  Vec row_bound_;
  double max_row_bound_ = 1.0;
};

struct TorusPoint {
  Vec coords;

  TorusPoint() = default;
  explicit TorusPoint(const Vec& x) : coords(reduce(x)) {}
  int dim() const { return static_cast<int>(coords.size()); }
};

}  // namespace anosov
