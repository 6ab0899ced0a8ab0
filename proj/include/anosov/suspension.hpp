// Suspension flow with constant height over a torus map; Abramov entropy.
#pragma once

#include "anosov/core.hpp"
#include "anosov/measures.hpp"
#include "anosov/torus_maps.hpp"

#include <cmath>
#include <memory>
#include <vector>

namespace anosov {

class SuspensionSpace {
 public:
  explicit SuspensionSpace(MapPtr base, double height = 1.0) : base_(std::move(base)), height_(height) {
    require(base_ != nullptr, ErrorKind::InvalidArgument, "suspension needs a base map");
    require(std::isfinite(height) && height > 0.0, ErrorKind::NonpositiveHeight, "height must be positive");
  }

  // Non-constant roof functions are not supported.
  template <class F>
  static SuspensionSpace with_height_function(MapPtr, F&&) {
    throw Error(ErrorKind::Unimplemented, "only constant height functions are supported");
  }

  const TorusMap& base() const { return *base_; }
  double height() const { return height_; }

 private:
  MapPtr base_;
  double height_;
};

struct FlowPoint {
  Vec base_point;
  double height = 0.0;
};

inline FlowPoint flow(const SuspensionSpace& Y, const FlowPoint& pt, double t) {
  require(std::isfinite(t), ErrorKind::InvalidArgument, "flow time must be finite");
  const double tau = Y.height();
  const double s = pt.height + t;
  auto k = static_cast<long long>(std::floor(s / tau));
  double h = s - static_cast<double>(k) * tau;
  if (h >= tau) {
    h -= tau;
    ++k;
  }
  if (h < 0.0) h = 0.0;
  Vec x = reduce(pt.base_point);
  for (long long i = 0; i < k; ++i) x = Y.base().eval(x);
  for (long long i = 0; i > k; --i) x = Y.base().eval_inverse(x);
  return {x, h};
}

// Distance on the mapping torus: (x, tau) and (f(x), 0) are identified.
inline double flow_distance(const SuspensionSpace& Y, const FlowPoint& a, const FlowPoint& b) {
  auto d = [](const Vec& x, double hx, const Vec& y, double hy) { return wrap(x - y).norm() + std::abs(hx - hy); };
  const double tau = Y.height();
  double best = d(a.base_point, a.height, b.base_point, b.height);
  best = std::min(best, d(Y.base().eval(a.base_point), a.height - tau, b.base_point, b.height));
  best = std::min(best, d(a.base_point, a.height, Y.base().eval(b.base_point), b.height - tau));
  return best;
}

struct FlowMeasure {
  EmpiricalMeasure base;
  double height = 1.0;
  double normalization = 1.0;  // eta(tau)
};

inline FlowMeasure lift_measure(const SuspensionSpace& Y, const EmpiricalMeasure& eta) {
  require(std::abs(eta.total_weight() - 1.0) <= 1e-12, ErrorKind::InvalidArgument, "measure must be normalized");
  FlowMeasure m;
  m.base = eta;
  m.height = Y.height();
  m.normalization = Y.height();  // eta(tau) for a constant roof and a probability eta
  return m;
}

// Test function continuous on the mapping torus: interpolates psi(x) at s = 0 and psi(f(x)) at s = tau.
inline double flow_test_function(const SuspensionSpace& Y, const std::vector<int>& k, const FlowPoint& p) {
  auto psi = [&](const Vec& x) {
    double t = 0.0;
    for (std::size_t d = 0; d < k.size(); ++d) t += k[d] * x[static_cast<Eigen::Index>(d)];
    return std::cos(2.0 * M_PI * t);
  };
  const double u = p.height / Y.height();
  return (1.0 - u) * psi(p.base_point) + u * psi(Y.base().eval(p.base_point));
}

// |integral of phi o flow_t - integral of phi| under the lifted measure, midpoint rule in height.
inline double flow_invariance_defect(const SuspensionSpace& Y, const FlowMeasure& m, double t,
                                     const std::vector<int>& k, int levels = 64) {
  double before = 0.0, after = 0.0;
  const double tau = Y.height();
  for (std::size_t j = 0; j < m.base.size(); ++j) {
    double b = 0.0, a = 0.0;
    for (int l = 0; l < levels; ++l) {
      const FlowPoint p{m.base.atoms[j], (l + 0.5) * tau / levels};
      b += flow_test_function(Y, k, p);
      a += flow_test_function(Y, k, flow(Y, p, t));
    }
    before += m.base.weights[j] * b / levels;
    after += m.base.weights[j] * a / levels;
  }
  return std::abs(after - before);
}

inline double abramov_entropy(double h_base, double mean_height) {
  require(mean_height > 0.0, ErrorKind::NonpositiveHeight, "mean height must be positive");
  return h_base / mean_height;
}

struct SuspensionReport {
  double height = 1.0;
  double normalization = 1.0;
  double base_entropy = 0.0;
  double flow_entropy = 0.0;
  std::size_t atoms = 0;
  bool base_marginal_exact = false;
};

inline SuspensionReport suspension_mme_report(const SuspensionSpace& Y, const EmpiricalMeasure& nu, double h_g) {
  require(Y.height() == 1.0, ErrorKind::Unimplemented, "the entropy report assumes unit height");
  const FlowMeasure lift = lift_measure(Y, nu);
  SuspensionReport r;
  r.height = Y.height();
  r.normalization = lift.normalization;
  r.base_entropy = h_g;
  r.flow_entropy = abramov_entropy(h_g, lift.normalization);
  r.atoms = nu.size();
  r.base_marginal_exact = lift.base.weights == nu.weights && lift.base.atoms.size() == nu.atoms.size();
  for (std::size_t i = 0; r.base_marginal_exact && i < nu.size(); ++i)
    r.base_marginal_exact = lift.base.atoms[i] == nu.atoms[i];
  return r;
}

}  // namespace anosov
