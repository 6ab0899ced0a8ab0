// Pseudo-orbit shadowing for hyperbolic automorphisms and the semiconjugacy h
// between a perturbation g and its linear base f.
#pragma once

#include "anosov/core.hpp"
#include "anosov/hyperbolic_linear.hpp"
#include "anosov/parallel.hpp"
#include "anosov/sampling.hpp"
#include "anosov/torus.hpp"
#include "anosov/torus_maps.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace anosov {

// sup_k ||A x_k - x_{k+1}|| for a sequence in R^n.
inline double defect(const ToralAutomorphism& A, const HyperbolicSplitting& s,
                     const std::vector<Vec>& seq) {
  require(seq.size() >= 2, ErrorKind::InvalidArgument, "sequence needs at least two points");
  const Mat M = A.real();
  double r = 0.0;
  for (std::size_t k = 0; k + 1 < seq.size(); ++k) r = std::max(r, s.norm(M * seq[k] - seq[k + 1]));
  return r;
}

class PseudoOrbit {
 public:
  // Points are lifts in R^n; steps are x_{k+1} - A x_k.
  static PseudoOrbit from_lift(const ToralAutomorphism& A, const HyperbolicSplitting& s,
                               std::vector<Vec> points, int first_index) {
    PseudoOrbit po(std::move(points), first_index);
    const Mat M = A.real();
    for (std::size_t k = 0; k + 1 < po.points_.size(); ++k)
      po.steps_.push_back(po.points_[k + 1] - M * po.points_[k]);
    po.finish(s);
    return po;
  }

  // Points are torus points; steps are the minimal translates of x_{k+1} - A x_k.
  static PseudoOrbit from_torus(const ToralAutomorphism& A, const HyperbolicSplitting& s,
                                std::vector<Vec> points, int first_index) {
    PseudoOrbit po(std::move(points), first_index);
    const Mat M = A.real();
    const TorusMetric metric = TorusMetric::adapted(s);
    for (std::size_t k = 0; k + 1 < po.points_.size(); ++k)
      po.steps_.push_back(metric.difference(po.points_[k + 1], M * po.points_[k]));
    po.finish(s);
    return po;
  }

  int first_index() const { return first_; }
  int last_index() const { return first_ + static_cast<int>(points_.size()) - 1; }
  const Vec& point(int k) const { return points_[static_cast<std::size_t>(k - first_)]; }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<Vec>& steps() const { return steps_; }
  double defect() const { return defect_; }

 private:
  PseudoOrbit(std::vector<Vec> pts, int first) : points_(std::move(pts)), first_(first) {
    require(points_.size() >= 2, ErrorKind::InvalidArgument, "pseudo-orbit needs two points");
    require(first_ <= 0 && last_index() >= 0, ErrorKind::InvalidArgument,
            "index range must contain 0");
  }
  void finish(const HyperbolicSplitting& s) {
    defect_ = 0.0;
    for (const auto& e : steps_) defect_ = std::max(defect_, s.norm(e));
  }

  std::vector<Vec> points_;
  std::vector<Vec> steps_;
  int first_ = 0;
  double defect_ = 0.0;
};

// Torus pseudo-orbit x_0..x_{length-1} whose steps have adapted norm at most r.
inline PseudoOrbit random_pseudo_orbit(const ToralAutomorphism& A, const HyperbolicSplitting& s,
                                       int length, double r, Rng& rng) {
  require(length >= 2 && r > 0.0, ErrorKind::InvalidArgument, "need length >= 2 and r > 0");
  const Mat M = A.real();
  const int n = s.dim(), ds = s.stable_dim();
  std::vector<Vec> pts{rng.uniform_vec(n)};
  for (int k = 1; k < length; ++k) {
    Vec c(n);
    for (int i = 0; i < n; ++i) c[i] = rng.uniform(-1.0, 1.0);
    // Each block lands in its Euclidean r-ball.
    const double ns = c.head(ds).norm(), nu = c.tail(n - ds).norm();
    if (ns > 1.0) c.head(ds) /= ns;
    if (nu > 1.0) c.tail(n - ds) /= nu;
    pts.push_back(reduce(M * pts.back() + s.from_coords(r * c)));
  }
  return PseudoOrbit::from_torus(A, s, std::move(pts), 0);
}

struct ShadowResult {
  Vec point;                        // y, a lift near x_0
  double certified_bound = 0.0;     // r/(1-a) + tail
  double tail = 0.0;
  double max_observed_deviation = 0.0;
  std::vector<double> deviations;   // ||A^k y - x_k|| for k = first..last
  int first_index = 0;
};

// Deviations d_m = A^m y - x_m satisfy d_{m+1} = A d_m - e_m. The unstable part is
// accumulated backward from d^u_last = 0, the stable part forward from d^s_first = 0.
inline ShadowResult shadow(const ToralAutomorphism& A, const HyperbolicSplitting& s,
                           const PseudoOrbit& po,
                           double precision = std::numeric_limits<double>::infinity()) {
  (void)A;
  const int n = s.dim(), ds = s.stable_dim(), du = n - ds;
  const std::size_t len = po.points().size();
  const Mat& L = s.block_matrix();
  const Mat& Li = s.block_matrix_inverse();
  const Mat Ls = L.topLeftCorner(ds, ds);
  const Mat Lui = Li.bottomRightCorner(du, du);

  std::vector<Vec> e(len - 1);
  for (std::size_t k = 0; k + 1 < len; ++k) e[k] = s.coords(po.steps()[k]);

  std::vector<Vec> d(len, Vec::Zero(n));
  Vec u = Vec::Zero(du);
  for (std::size_t m = len - 1; m-- > 0;) {
    u = Lui * (u + e[m].tail(du));
    d[m].tail(du) = u;
  }
  Vec st = Vec::Zero(ds);
  for (std::size_t m = 0; m + 1 < len; ++m) {
    st = Ls * st - e[m].head(ds);
    d[m + 1].head(ds) = st;
  }

  ShadowResult res;
  res.first_index = po.first_index();
  const std::size_t zero = static_cast<std::size_t>(-po.first_index());
  res.point = po.point(0) + s.from_coords(d[zero]);
  const double a = s.a(), r = po.defect();
  const int window = std::min(po.last_index(), -po.first_index());
  res.tail = r * std::pow(a, window) / (1.0 - a);
  res.certified_bound = r / (1.0 - a) + res.tail;
  for (const auto& dm : d) {
    res.deviations.push_back(s.coord_norm(dm));
    res.max_observed_deviation = std::max(res.max_observed_deviation, res.deviations.back());
  }
  require(res.tail <= precision, ErrorKind::WindowTooShort,
          "truncation tail " + std::to_string(res.tail) + " exceeds requested precision");
  return res;
}

// h with f o h = h o g, evaluated by shadowing g-orbit segments of length 2N+1 under A.
class SemiconjugacyField {
 public:
  SemiconjugacyField(DAMapPtr g, double precision, int window = 0, int window_cap = 400)
      : g_(std::move(g)), precision_(precision) {
    require(precision > 0, ErrorKind::InvalidArgument, "precision must be positive");
    const auto& s = g_->splitting();
    a_ = s.a();
    r_ = g_->displacement_bound();
    if (window <= 0) {
      window = 0;
      while (tail_for(window) >= precision_) {
        ++window;
        require(window <= window_cap, ErrorKind::PrecisionUnreachable,
                "window cap " + std::to_string(window_cap) + " reached before tail < precision");
      }
    } else {
      require(tail_for(window) < precision_, ErrorKind::PrecisionUnreachable,
              "window " + std::to_string(window) + " too short for the requested precision");
    }
    window_ = window;
    const int ds = s.stable_dim();
    for (int k : g_->central_coordinates()) (k < ds ? stable_central_ : unstable_central_) = true;
  }

  const DAMap& map() const { return *g_; }
  DAMapPtr map_ptr() const { return g_; }
  int window() const { return window_; }
  double precision() const { return precision_; }
  double tail_bound() const { return tail_for(window_); }
  double displacement_bound() const { return r_; }
  double C() const { return 1.0 / (1.0 - a_); }
  double conjugacy_bound() const { return r_ / (1.0 - a_); }

  // Deviation d_0 (eigen-coordinates) with h(x) = x + V d_0.
  Vec deviation_coords(const Vec& x0) const {
    const auto& s = g_->splitting();
    const int n = s.dim(), ds = s.stable_dim(), du = n - ds;
    const Vec x = reduce(x0);
    Vec d = Vec::Zero(n);
    if (unstable_central_) {
      std::vector<Vec> e(static_cast<std::size_t>(window_));
      Vec xk = x;
      for (int k = 0; k < window_; ++k) {
        e[static_cast<std::size_t>(k)] = g_->displacement_coords(xk).tail(du);
        xk = g_->eval(xk);
      }
      const Mat Lui = s.block_matrix_inverse().bottomRightCorner(du, du);
      Vec u = Vec::Zero(du);
      for (int k = window_; k-- > 0;) u = Lui * (u + e[static_cast<std::size_t>(k)]);
      d.tail(du) = u;
    }
    if (stable_central_) {
      std::vector<Vec> e(static_cast<std::size_t>(window_));
      Vec xk = x;
      for (int k = 1; k <= window_; ++k) {
        xk = g_->eval_inverse(xk);
        e[static_cast<std::size_t>(k - 1)] = g_->displacement_coords(xk).head(ds);
      }
      const Mat Ls = s.block_matrix().topLeftCorner(ds, ds);
      Vec st = Vec::Zero(ds);
      for (int k = window_; k >= 1; --k) st = Ls * st - e[static_cast<std::size_t>(k - 1)];
      d.head(ds) = st;
    }
    return d;
  }

  Vec eval_uncached(const Vec& x) const {
    const Vec xr = reduce(x);
    return reduce(xr + g_->splitting().from_coords(deviation_coords(xr)));
  }

  Vec eval(const Vec& x) const {
    const Vec xr = reduce(x);
    const std::string key(reinterpret_cast<const char*>(xr.data()),
                          sizeof(double) * static_cast<std::size_t>(xr.size()));
    {
      std::lock_guard<std::mutex> lock(cache_->mutex);
      auto it = cache_->values.find(key);
      if (it != cache_->values.end()) return it->second;
    }
    Vec v = eval_uncached(xr);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    if (cache_->values.size() < kCacheLimit) cache_->values.emplace(key, v);
    return v;
  }

  std::vector<Vec> eval_many(const std::vector<Vec>& xs) const {
    std::vector<Vec> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = eval(xs[i]); });
    return out;
  }

  // Closed form for a g-periodic orbit y_0..y_{d-1}: the defect sequence is periodic, so
  // the shadowing sums are geometric series.
  Vec eval_periodic(const std::vector<Vec>& orbit) const {
    const auto& s = g_->splitting();
    const int n = s.dim(), ds = s.stable_dim(), du = n - ds;
    const int d = static_cast<int>(orbit.size());
    require(d >= 1, ErrorKind::InvalidArgument, "empty orbit");
    std::vector<Vec> e;
    for (const auto& y : orbit) e.push_back(g_->displacement_coords(reduce(y)));
    const Mat Lui = s.block_matrix_inverse().bottomRightCorner(du, du);
    const Mat Ls = s.block_matrix().topLeftCorner(ds, ds);
    Vec dev = Vec::Zero(n);
    Vec u = Vec::Zero(du);
    Mat P = Mat::Identity(du, du);
    for (int k = 0; k < d; ++k) {
      P = P * Lui;
      u += P * e[static_cast<std::size_t>(k)].tail(du);
    }
    dev.tail(du) = (Mat::Identity(du, du) - P).partialPivLu().solve(u);
    Vec st = Vec::Zero(ds);
    Mat Q = Mat::Identity(ds, ds);
    for (int k = 1; k <= d; ++k) {
      const int idx = ((-k) % d + d) % d;
      st -= Q * e[static_cast<std::size_t>(idx)].head(ds);
      Q = Q * Ls;
    }
    dev.head(ds) = (Mat::Identity(ds, ds) - Q).partialPivLu().solve(st);
    return reduce(reduce(orbit.front()) + s.from_coords(dev));
  }

  // dist(f(h(x)), h(g(x))).
  double residual(const Vec& x) const {
    const Vec hx = eval(x);
    const Vec fhx = reduce(g_->base().real() * hx);
    return g_->metric().distance(fhx, eval(g_->eval(x)));
  }

 private:
  static constexpr std::size_t kCacheLimit = 1u << 20;

  double tail_for(int N) const { return r_ * std::pow(a_, N) / (1.0 - a_); }

  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::string, Vec> values;
  };

  DAMapPtr g_;
  double precision_ = 0.0;
  double a_ = 0.0;
  double r_ = 0.0;
  int window_ = 0;
  bool stable_central_ = false;
  bool unstable_central_ = false;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

inline SemiconjugacyField build_semiconjugacy(const ToralAutomorphism& A, DAMapPtr g, int window,
                                              double precision) {
  require(A == g->base(), ErrorKind::InvalidArgument, "g is not a perturbation of A");
  return SemiconjugacyField(std::move(g), precision, window);
}

struct FiberCheck {
  bool same = true;
  int window = 0;
  double max_distance = 0.0;
  int exit_time = 0;  // iterate at which the distance first exceeded alpha/2 (0 if none)
};

// Finite-window surrogate: orbits of x and y stay alpha/2-close for |k| <= window.
// Offset form: y = x + V*D0 with D0 in eigen-coordinates. Coordinates outside the perturbed
// blocks stay exact, so zero components are never amplified by rounding.
inline FiberCheck same_fiber_offset(const DAMap& g, const Vec& x, const Vec& D0, double alpha,
                                    int window = 60) {
  const auto& s = g.splitting();
  FiberCheck fc;
  fc.window = window;
  const Vec x0 = reduce(x);
  const double lim = alpha / 2.0;
  fc.max_distance = s.coord_norm(D0);
  if (fc.max_distance > lim) {
    fc.same = false;
    return fc;
  }
  Vec xk = x0, D = D0;
  for (int k = 1; k <= window; ++k) {
    D = g.offset_forward(xk, D);
    xk = g.eval(xk);
    const double dist = s.coord_norm(D);
    fc.max_distance = std::max(fc.max_distance, dist);
    if (dist > lim) {
      fc.same = false;
      fc.exit_time = k;
      return fc;
    }
  }
  xk = x0;
  D = D0;
  for (int k = 1; k <= window; ++k) {
    const Vec prev = g.eval_inverse(xk);
    D = g.offset_backward(prev, xk, D);
    xk = prev;
    const double dist = s.coord_norm(D);
    fc.max_distance = std::max(fc.max_distance, dist);
    if (dist > lim) {
      fc.same = false;
      fc.exit_time = -k;
      return fc;
    }
  }
  return fc;
}

inline FiberCheck same_fiber_report(const DAMap& g, const Vec& x, const Vec& y, double alpha,
                                    int window = 60) {
  const Vec x0 = reduce(x);
  return same_fiber_offset(g, x0, g.splitting().coords(g.metric().difference(reduce(y), x0)), alpha,
                           window);
}

inline bool same_fiber(const DAMap& g, const Vec& x, const Vec& y, double alpha, int window = 60) {
  return same_fiber_report(g, x, y, alpha, window).same;
}

}  // namespace anosov
