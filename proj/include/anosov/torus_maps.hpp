// Torus maps: the linear automorphism and local block perturbations of it
// (Mane, mixed and Hopf derived-from-Anosov maps).
#pragma once

#include "anosov/core.hpp"
#include "anosov/hyperbolic_linear.hpp"
#include "anosov/parallel.hpp"
#include "anosov/sampling.hpp"
#include "anosov/torus.hpp"

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace anosov {

class TorusMap {
 public:
  virtual ~TorusMap() = default;
  virtual int dim() const = 0;
  virtual Vec eval_lift(const Vec& x) const = 0;
  virtual Mat derivative(const Vec& x) const = 0;
  virtual bool invertible() const { return false; }
  virtual Vec eval_inverse_lift(const Vec&) const {
    throw Error(ErrorKind::Unimplemented, "map has no inverse");
  }
  virtual std::string describe() const = 0;

  Vec eval(const Vec& x) const { return reduce(eval_lift(x)); }
  Vec eval_inverse(const Vec& y) const { return reduce(eval_inverse_lift(y)); }
};

using MapPtr = std::shared_ptr<const TorusMap>;

class LinearMap final : public TorusMap {
 public:
  explicit LinearMap(ToralAutomorphism m) : m_(std::move(m)), A_(m_.real()), Ai_(m_.real_inverse()) {}
  int dim() const override { return m_.dim(); }
  Vec eval_lift(const Vec& x) const override { return A_ * x; }
  Vec eval_inverse_lift(const Vec& y) const override { return Ai_ * y; }
  Mat derivative(const Vec&) const override { return A_; }
  bool invertible() const override { return true; }
  std::string describe() const override { return "linear"; }
  const ToralAutomorphism& automorphism() const { return m_; }

 private:
  ToralAutomorphism m_;
  Mat A_, Ai_;
};

inline std::shared_ptr<const LinearMap> linear_map(const ToralAutomorphism& m) {
  return std::make_shared<const LinearMap>(m);
}

// x -> f(x) + v.
class TranslatedMap final : public TorusMap {
 public:
  TranslatedMap(MapPtr f, Vec v) : f_(std::move(f)), v_(std::move(v)) {}
  int dim() const override { return f_->dim(); }
  Vec eval_lift(const Vec& x) const override { return f_->eval_lift(x) + v_; }
  Vec eval_inverse_lift(const Vec& y) const override { return f_->eval_inverse_lift(y - v_); }
  Mat derivative(const Vec& x) const override { return f_->derivative(x); }
  bool invertible() const override { return f_->invertible(); }
  std::string describe() const override { return "translated " + f_->describe(); }

 private:
  MapPtr f_;
  Vec v_;
};

// Radial bump beta(rho) = 1 - S(rho) on [0,1), 0 beyond, S(x) = 6x^5 - 15x^4 + 10x^3.
struct SmoothstepProfile {
  static double beta(double rho) {
    if (rho >= 1.0) return 0.0;
    return 1.0 - rho * rho * rho * (10.0 + rho * (-15.0 + 6.0 * rho));
  }
  static double dbeta(double rho) {
    if (rho >= 1.0) return 0.0;
    const double t = rho * (1.0 - rho);
    return -30.0 * t * t;
  }
  // dbeta(rho)/rho, finite at 0.
  static double dbeta_over_rho(double rho) {
    if (rho >= 1.0) return 0.0;
    const double u = 1.0 - rho;
    return -30.0 * rho * u * u;
  }
  struct Extremes {
    double max_rho_beta;      // sup rho*beta(rho)
    double min_slope;         // inf (rho*beta)'
    double max_slope;         // sup (rho*beta)'
  };
  static const Extremes& extremes() {
    static const Extremes e = [] {
      Extremes r{0.0, 1.0, 0.0};
      const int N = 200000;
      for (int i = 0; i <= N; ++i) {
        const double rho = static_cast<double>(i) / N;
        r.max_rho_beta = std::max(r.max_rho_beta, rho * beta(rho));
        const double s = beta(rho) + rho * dbeta(rho);
        r.min_slope = std::min(r.min_slope, s);
        r.max_slope = std::max(r.max_slope, s);
      }
      return r;
    }();
    return e;
  }
};

enum class DAVariant { LINEAR, MANE, MIXED, HOPF };
enum class Profile { SMOOTHSTEP };

inline const char* to_string(DAVariant v) {
  switch (v) {
    case DAVariant::LINEAR: return "linear";
    case DAVariant::MANE: return "mane";
    case DAVariant::MIXED: return "mixed";
    case DAVariant::HOPF: return "hopf";
  }
  return "?";
}

struct DAParams {
  DAVariant variant = DAVariant::MANE;
  Vec center;                     // p
  std::optional<Vec> center_q;    // q (mixed only)
  double radius = 0.05;
  double strength = 0.6;          // s at p
  std::optional<double> strength_q;
  Profile profile = Profile::SMOOTHSTEP;
};

// Inside B(center, radius) the eigen-block `block` is multiplied by (1 + sigma*beta(rho)),
// rho = |local eigen-coordinates| / radius.
struct Bump {
  Vec center;
  double radius = 0.0;
  int block = 0;
  double sigma = 0.0;
};

class DAMap final : public TorusMap {
 public:
  DAMap(const ToralAutomorphism& base, const HyperbolicSplitting& split, std::vector<Bump> bumps,
        DAVariant variant)
      : base_(base), split_(split), metric_(TorusMetric::adapted(split)), bumps_(std::move(bumps)),
        variant_(variant) {
    const int n = base_.dim();
    A_ = base_.real();
    Ai_ = base_.real_inverse();
    const double vnorm = split_.basis().operatorNorm();
    for (const auto& b : bumps_) {
      require(b.block >= 0 && b.block < static_cast<int>(split_.blocks().size()),
              ErrorKind::InvalidArgument, "bump block out of range");
      require(b.center.size() == n, ErrorKind::InvalidArgument, "bump center dimension mismatch");
      require(b.radius > 0 && b.radius * vnorm < 0.5, ErrorKind::InvalidArgument,
              "bump radius must be positive and the ball must not wrap around the torus");
      require(metric_.distance(A_ * b.center, b.center) < 1e-12, ErrorKind::InvalidArgument,
              "bump center must be a fixed point of the base map");
      const auto& eb = split_.blocks()[static_cast<std::size_t>(b.block)];
      require(1.0 + b.sigma > 0.0, ErrorKind::InvalidArgument, "strength must keep 1+sigma > 0");
      require(1.0 + b.sigma * SmoothstepProfile::extremes().min_slope > 0.0,
              ErrorKind::InvalidArgument, "strength too large: perturbed map would not be injective");
      Prepared p;
      p.center = reduce(b.center);
      p.radius = b.radius;
      p.sigma = b.sigma;
      p.offset = eb.offset;
      p.size = eb.size;
      p.lam = split_.block_matrix().block(eb.offset, eb.offset, eb.size, eb.size);
      p.Vb = split_.basis().middleCols(eb.offset, eb.size);
      prepared_.push_back(p);
    }
    for (std::size_t i = 0; i < prepared_.size(); ++i)
      for (std::size_t j = i + 1; j < prepared_.size(); ++j) {
        const Vec d = TorusMetric(split_.coordinates_matrix(), 0)
                          .difference(prepared_[i].center, prepared_[j].center);
        require((split_.coordinates_matrix() * d).norm() > prepared_[i].radius + prepared_[j].radius,
                ErrorKind::InvalidArgument, "perturbation balls overlap");
      }
    for (const auto& p : prepared_)
      for (int k = 0; k < p.size; ++k) central_.push_back(p.offset + k);
    std::sort(central_.begin(), central_.end());
    central_.erase(std::unique(central_.begin(), central_.end()), central_.end());
  }

  static std::shared_ptr<const DAMap> linear(const ToralAutomorphism& base) {
    return std::make_shared<const DAMap>(base, spectral_split(base), std::vector<Bump>{},
                                         DAVariant::LINEAR);
  }

  int dim() const override { return base_.dim(); }
  bool invertible() const override { return true; }
  std::string describe() const override { return to_string(variant_); }

  const ToralAutomorphism& base() const { return base_; }
  const HyperbolicSplitting& splitting() const { return split_; }
  const TorusMetric& metric() const { return metric_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  DAVariant variant() const { return variant_; }
  // Eigen-coordinate indices touched by some perturbation.
  const std::vector<int>& central_coordinates() const { return central_; }

  // Local eigen-coordinates of x relative to the bump center (no wrap-around by construction).
  Vec local_coords(int bump, const Vec& x) const {
    return split_.coordinates_matrix() * wrap(x - prepared_[static_cast<std::size_t>(bump)].center);
  }

  // Displacement G(x) - A x in eigen-coordinates.
  Vec displacement_coords(const Vec& x) const {
    Vec out = Vec::Zero(dim());
    for (std::size_t i = 0; i < prepared_.size(); ++i) {
      const auto& p = prepared_[i];
      const Vec c = local_coords(static_cast<int>(i), x);
      const double rho = c.norm() / p.radius;
      if (rho >= 1.0) continue;
      out.segment(p.offset, p.size) +=
          p.sigma * SmoothstepProfile::beta(rho) * (p.lam * c.segment(p.offset, p.size));
    }
    return out;
  }

  Vec displacement(const Vec& x) const { return split_.basis() * displacement_coords(x); }

  Vec eval_lift(const Vec& x) const override {
    Vec y = A_ * x;
    if (!prepared_.empty()) y += displacement(x);
    return y;
  }

  Mat coord_derivative(const Vec& x) const {
    Mat D = split_.block_matrix();
    for (std::size_t i = 0; i < prepared_.size(); ++i) {
      const auto& p = prepared_[i];
      const Vec c = local_coords(static_cast<int>(i), x);
      const double rho = c.norm() / p.radius;
      if (rho >= 1.0) continue;
      const Vec lc = p.lam * c.segment(p.offset, p.size);
      const double b = SmoothstepProfile::beta(rho);
      const double g = SmoothstepProfile::dbeta_over_rho(rho) / (p.radius * p.radius);
      D.block(p.offset, p.offset, p.size, p.size) += p.sigma * b * p.lam;
      D.middleRows(p.offset, p.size) += p.sigma * g * lc * c.transpose();
    }
    return D;
  }

  Mat derivative(const Vec& x) const override {
    if (prepared_.empty()) return A_;
    return split_.basis() * coord_derivative(x) * split_.coordinates_matrix();
  }

  Vec eval_inverse_lift(const Vec& y) const override {
    const Vec x0 = Ai_ * y;
    for (std::size_t i = 0; i < prepared_.size(); ++i) {
      const auto& p = prepared_[i];
      const Vec c0 = local_coords(static_cast<int>(i), x0);
      const Vec v = c0.segment(p.offset, p.size);
      const double vn = v.norm();
      const double perp2 = std::max(0.0, c0.squaredNorm() - v.squaredNorm());
      if (perp2 >= p.radius * p.radius) continue;
      const double R = solve_radial(p, vn, perp2);
      const double rho = std::sqrt(R * R + perp2) / p.radius;
      if (rho >= 1.0) continue;
      if (vn == 0.0) return x0;
      return x0 + p.Vb * ((R / vn - 1.0) * v);
    }
    return x0;
  }

  // Offset dynamics: a point y = x + V*D maps to g(x) + V*offset_forward(x, D).
  // Coordinates outside the perturbed blocks evolve exactly linearly.
  Vec offset_forward(const Vec& x, const Vec& D) const {
    Vec out = split_.block_matrix() * D;
    if (prepared_.empty()) return out;
    const Vec y = x + split_.basis() * D;
    const Vec dy = displacement_coords(y);
    const Vec dx = displacement_coords(x);
    for (int k : central_) out[k] += dy[k] - dx[k];
    return out;
  }

  // Inverse of offset_forward: x_prev = g^{-1}(x) as a torus point.
  Vec offset_backward(const Vec& x_prev, const Vec& x, const Vec& D) const {
    Vec out = split_.block_matrix_inverse() * D;
    if (prepared_.empty()) return out;
    const Vec z = eval_inverse_lift(x + split_.basis() * D);
    const Vec c = split_.coordinates_matrix() * wrap(z - x_prev);
    for (int k : central_) out[k] = c[k];
    return out;
  }

  // sup |G - A| in the adapted norm, from the profile extremes.
  double displacement_bound() const {
    double m = 0.0;
    for (const auto& p : prepared_) {
      m = std::max(m, block_modulus(p) * std::abs(p.sigma) * p.radius *
                          SmoothstepProfile::extremes().max_rho_beta);
    }
    return m;
  }

  double block_modulus_of(int bump) const { return block_modulus(prepared_[static_cast<std::size_t>(bump)]); }

 private:
  struct Prepared {
    Vec center;
    double radius = 0;
    double sigma = 0;
    int offset = 0;
    int size = 1;
    Mat lam;
    Mat Vb;
  };

  static double block_modulus(const Prepared& p) {
    return std::sqrt(std::abs(p.lam.determinant()));
  }

  // Solve (1 + sigma*beta(sqrt(R^2+perp2)/r)) * R = target for R >= 0; the left side is
  // increasing in R (monotonicity is enforced at construction).
  static double solve_radial(const Prepared& p, double target, double perp2) {
    if (target == 0.0) return 0.0;
    const double f_hi = std::max(1.0, 1.0 + p.sigma), f_lo = std::min(1.0, 1.0 + p.sigma);
    double lo = target / f_hi, hi = target / f_lo;
    double R = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double rho = std::sqrt(R * R + perp2) / p.radius;
      const double b = SmoothstepProfile::beta(rho);
      const double f = (1.0 + p.sigma * b) * R - target;
      if (f > 0) hi = R; else lo = R;
      const double df = 1.0 + p.sigma * (b + R * R * SmoothstepProfile::dbeta_over_rho(rho) /
                                                  (p.radius * p.radius));
      double next = R - f / df;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - R) <= 1e-17 * std::max(1.0, target) || hi - lo <= 1e-17) {
        R = next;
        break;
      }
      R = next;
    }
    return R;
  }

  ToralAutomorphism base_;
  HyperbolicSplitting split_;
  TorusMetric metric_;
  std::vector<Bump> bumps_;
  std::vector<Prepared> prepared_;
  std::vector<int> central_;
  DAVariant variant_;
  Mat A_, Ai_;
};

using DAMapPtr = std::shared_ptr<const DAMap>;

namespace detail {

inline int weak_unstable_block(const HyperbolicSplitting& s) {
  const auto& b = s.blocks();
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].stable) return static_cast<int>(i);
  return -1;
}

inline int weak_stable_block(const HyperbolicSplitting& s) {
  const auto& b = s.blocks();
  int idx = -1;
  for (std::size_t i = 0; i < b.size(); ++i)
    if (b[i].stable) idx = static_cast<int>(i);
  return idx;
}

inline void check_c0(const DAMap& g, double radius) {
  require(g.displacement_bound() < radius, ErrorKind::C0Violation,
          "perturbation displacement bound " + std::to_string(g.displacement_bound()) +
              " is not below the radius " + std::to_string(radius));
}

}  // namespace detail

// Central fixed-point location for a one-dimensional Mane-type bump: the flanking fixed
// points sit where |lambda| (1 - s beta(rho)) = 1.
inline double flank_parameter(double lambda, double s, double radius) {
  const double target = (1.0 - 1.0 / lambda) / s;  // beta value at the flank
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (SmoothstepProfile::beta(mid) > target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi) * radius;
}

inline DAMapPtr mane_da(const ToralAutomorphism& m, const HyperbolicSplitting& split,
                        const DAParams& params) {
  require(m.dim() >= 3, ErrorKind::InvalidArgument, "Mane DA needs dimension >= 3");
  const int bu = detail::weak_unstable_block(split);
  const auto& blocks = split.blocks();
  require(bu >= 0 && blocks[static_cast<std::size_t>(bu)].size == 1, ErrorKind::InvalidArgument,
          "weak unstable direction must be one-dimensional and real");
  require(bu + 1 < static_cast<int>(blocks.size()) &&
              blocks[static_cast<std::size_t>(bu) + 1].modulus >
                  blocks[static_cast<std::size_t>(bu)].modulus + 1e-6,
          ErrorKind::InvalidArgument, "need a strictly stronger unstable direction");
  const double lam = blocks[static_cast<std::size_t>(bu)].re;
  const double s = params.strength;
  require(s > 0.0 && s < 1.0, ErrorKind::InvalidArgument, "strength must lie in (0,1)");
  require(lam > 0.0 && lam * (1.0 - s) < 1.0, ErrorKind::StrengthTooWeak,
          "central line through p does not carry three fixed points");
  auto g = std::make_shared<const DAMap>(
      m, split, std::vector<Bump>{{params.center, params.radius, bu, -s}}, DAVariant::MANE);
  detail::check_c0(*g, params.radius);
  return g;
}

inline DAMapPtr mixed_da(const ToralAutomorphism& m, const HyperbolicSplitting& split,
                         const DAParams& params) {
  require(m.dim() >= 4, ErrorKind::InvalidArgument, "mixed DA needs dimension >= 4");
  require(params.center_q.has_value(), ErrorKind::InvalidArgument, "mixed DA needs a second center q");
  const auto& blocks = split.blocks();
  const int bs = detail::weak_stable_block(split);
  const int bu = detail::weak_unstable_block(split);
  require(bs >= 1 && blocks[static_cast<std::size_t>(bs)].size == 1 &&
              blocks[static_cast<std::size_t>(bs) - 1].modulus <
                  blocks[static_cast<std::size_t>(bs)].modulus - 1e-6,
          ErrorKind::InvalidArgument, "need 1-dim weak stable direction and a stronger one");
  require(bu >= 0 && blocks[static_cast<std::size_t>(bu)].size == 1 &&
              bu + 1 < static_cast<int>(blocks.size()) &&
              blocks[static_cast<std::size_t>(bu) + 1].modulus >
                  blocks[static_cast<std::size_t>(bu)].modulus + 1e-6,
          ErrorKind::InvalidArgument, "need 1-dim weak unstable direction and a stronger one");
  const double ls = blocks[static_cast<std::size_t>(bs)].re;
  const double lu = blocks[static_cast<std::size_t>(bu)].re;
  const double sp = params.strength;
  const double sq = params.strength_q.value_or(params.strength);
  require(ls > 0.0 && ls * (1.0 + sp) > 1.0, ErrorKind::StrengthTooWeak,
          "p is not repelling along the weak stable direction");
  require(sq > 0.0 && sq < 1.0, ErrorKind::InvalidArgument, "strength at q must lie in (0,1)");
  require(lu > 0.0 && lu * (1.0 - sq) < 1.0, ErrorKind::StrengthTooWeak,
          "q is not attracting along the weak unstable direction");
  auto g = std::make_shared<const DAMap>(
      m, split,
      std::vector<Bump>{{params.center, params.radius, bs, sp}, {*params.center_q, params.radius, bu, -sq}},
      DAVariant::MIXED);
  detail::check_c0(*g, params.radius);
  return g;
}

inline DAMapPtr hopf_da(const ToralAutomorphism& m, const HyperbolicSplitting& split,
                        const DAParams& params) {
  require(m.dim() == 3, ErrorKind::InvalidArgument, "Hopf DA needs dimension 3");
  const auto& blocks = split.blocks();
  require(blocks.front().stable && blocks.front().size == 2, ErrorKind::InvalidArgument,
          "base needs a complex stable pair");
  const double mod = blocks.front().modulus;
  const double s = params.strength;
  require(s > 0.0 && mod * (1.0 + s) > 1.0, ErrorKind::StrengthTooWeak,
          "p is not a repeller in the stable plane");
  auto g = std::make_shared<const DAMap>(
      m, split, std::vector<Bump>{{params.center, params.radius, 0, s}}, DAVariant::HOPF);
  detail::check_c0(*g, params.radius);
  return g;
}

inline DAMapPtr build_da(const ToralAutomorphism& m, const DAParams& params) {
  const HyperbolicSplitting split = spectral_split(m);
  switch (params.variant) {
    case DAVariant::LINEAR: return DAMap::linear(m);
    case DAVariant::MANE: return mane_da(m, split, params);
    case DAVariant::MIXED: return mixed_da(m, split, params);
    case DAVariant::HOPF: return hopf_da(m, split, params);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown variant");
}

// Radius of the invariant circle of a Hopf bump: |lambda| (1 + s beta(R/r)) = 1.
inline double hopf_circle_radius(double modulus, double s, double radius) {
  const double target = (1.0 / modulus - 1.0) / s;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (SmoothstepProfile::beta(mid) > target) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi) * radius;
}

// Sup of dist(f(x), g(x)) over a Halton sample (a lower bound on the C0 distance).
inline double c0_distance(const TorusMap& f, const TorusMap& g, std::size_t samples,
                          const TorusMetric& metric) {
  std::vector<double> d(samples);
  parallel_for(samples, [&](std::size_t i) {
    const Vec x = halton_point(i + 1, f.dim());
    d[i] = metric.distance(f.eval(x), g.eval(x));
  });
  return d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
}

// Sampled C0 distance concentrated on the perturbation balls plus a global sample.
inline double c0_distance(const DAMap& g, std::size_t samples) {
  LinearMap f(g.base());
  double best = c0_distance(f, g, samples, g.metric());
  const auto& split = g.splitting();
  const int n = g.dim();
  for (const auto& b : g.bumps()) {
    std::vector<double> d(samples);
    parallel_for(samples, [&](std::size_t i) {
      const Vec u = halton_point(i + 1, n);
      Vec c = (2.0 * u.array() - 1.0).matrix() * b.radius;
      const Vec x = reduce(b.center + split.basis() * c);
      d[i] = g.metric().distance(f.eval(x), g.eval(x));
    });
    for (double v : d) best = std::max(best, v);
  }
  return best;
}

struct DerivativeCheck {
  double max_error = 0.0;       // step h
  double max_error_half = 0.0;  // step h/2
  double step = 0.0;
  std::size_t samples = 0;
  bool ok = false;
};

// Analytic Dg against central differences on points inside and around the bumps.
inline DerivativeCheck derivative_check(const DAMap& g, std::size_t samples, double h = 1e-6,
                                        double tol = 1e-6) {
  const int n = g.dim();
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < samples; ++i) pts.push_back(halton_point(i + 1, n));
  for (const auto& b : g.bumps())
    for (std::size_t i = 0; i < samples; ++i) {
      const Vec u = halton_point(i + 1, n);
      pts.push_back(reduce(b.center + g.splitting().basis() * ((2.0 * u.array() - 1.0).matrix() * 1.2 * b.radius)));
    }
  auto fd_error = [&](const Vec& x, double step) {
    const Mat D = g.derivative(x);
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      Vec e = Vec::Zero(n);
      e[j] = step;
      const Vec col = wrap(g.eval(x + e) - g.eval(x - e)) / (2.0 * step);
      err = std::max(err, (col - D.col(j)).cwiseAbs().maxCoeff());
    }
    return err;
  };
  std::vector<double> e1(pts.size()), e2(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    e1[i] = fd_error(pts[i], h);
    e2[i] = fd_error(pts[i], h / 2.0);
  });
  DerivativeCheck c;
  c.step = h;
  c.samples = pts.size();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    c.max_error = std::max(c.max_error, e1[i]);
    c.max_error_half = std::max(c.max_error_half, e2[i]);
  }
  // Truncation error is O(h^2); below 1e-9 rounding dominates and the ratio is meaningless.
  c.ok = c.max_error <= tol && (c.max_error < 1e-9 || c.max_error_half <= c.max_error);
  return c;
}

// Norm of Dg restricted to the central block of a bump, in eigen-coordinates (exactly
// invariant for this perturbation family: the block columns only change block rows).
inline double central_derivative_norm(const DAMap& g, int bump, const Vec& x) {
  const auto& b = g.bumps()[static_cast<std::size_t>(bump)];
  const auto& eb = g.splitting().blocks()[static_cast<std::size_t>(b.block)];
  const Mat D = g.coord_derivative(x).block(eb.offset, eb.offset, eb.size, eb.size);
  return eb.size == 1 ? std::abs(D(0, 0)) : D.operatorNorm();
}

// Minimum singular value of the central block (the conorm).
inline double central_derivative_conorm(const DAMap& g, int bump, const Vec& x) {
  const auto& b = g.bumps()[static_cast<std::size_t>(bump)];
  const auto& eb = g.splitting().blocks()[static_cast<std::size_t>(b.block)];
  const Mat D = g.coord_derivative(x).block(eb.offset, eb.offset, eb.size, eb.size);
  if (eb.size == 1) return std::abs(D(0, 0));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(D)};
  return svd.singularValues().minCoeff();
}

}  // namespace anosov
