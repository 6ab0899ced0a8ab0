// Periodic points: exact enumeration for linear automorphisms, Newton refinement for
// perturbations, and fiber-class exploration.
#pragma once

#include "anosov/core.hpp"
#include "anosov/hyperbolic_linear.hpp"
#include "anosov/integer.hpp"
#include "anosov/parallel.hpp"
#include "anosov/shadowing.hpp"
#include "anosov/torus_maps.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace anosov {

using Numerators = std::array<std::int64_t, kMaxDim>;

// Per_n(f) as exact rationals num/den with a common denominator.
struct PeriodicSet {
  int period = 0;
  int dim = 0;
  std::int64_t den = 1;
  std::vector<Numerators> numerators;          // sorted lexicographically
  std::vector<int> orbit_of;                   // point index -> orbit index
  std::vector<std::vector<int>> orbits;        // each starts at its smallest index, then f-order
  BigInt determinant;                          // det(A^n - I)
  std::vector<std::int64_t> invariant_factors;

  std::size_t count() const { return numerators.size(); }

  Vec point(std::size_t i) const {
    Vec x(dim);
    for (int k = 0; k < dim; ++k)
      x[k] = static_cast<double>(numerators[i][static_cast<std::size_t>(k)]) / static_cast<double>(den);
    return x;
  }

  // Index of the point with these numerators, or -1.
  long find(const Numerators& num) const {
    auto it = std::lower_bound(numerators.begin(), numerators.end(), num);
    if (it == numerators.end() || *it != num) return -1;
    return static_cast<long>(it - numerators.begin());
  }

  // Index of the point within `tol` (sup-norm, in units of 1/den) of x, or -1.
  long locate(const Vec& x, double tol = 1e-3) const {
    Numerators num{};
    for (int k = 0; k < dim; ++k) {
      const double v = x[k] * static_cast<double>(den);
      const double r = std::nearbyint(v);
      if (std::abs(v - r) > tol) return -1;
      std::int64_t q = static_cast<std::int64_t>(r) % den;
      if (q < 0) q += den;
      num[static_cast<std::size_t>(k)] = q;
    }
    return find(num);
  }
};

inline PeriodicSet per_n_linear(const ToralAutomorphism& M, int n, std::int64_t cap = 1000000) {
  require(n >= 1, ErrorKind::InvalidArgument, "period must be positive");
  const int dim = M.dim();
  const BigMat A = BigMat::from(M.matrix());
  BigMat An = power(A, n);
  for (int i = 0; i < dim; ++i) An(i, i) -= 1;
  PeriodicSet ps;
  ps.period = n;
  ps.dim = dim;
  ps.determinant = bareiss_det(An);
  require(ps.determinant != 0, ErrorKind::InvalidArgument, "A^n - I is singular");
  const BigInt count = abs(ps.determinant);
  require(count <= cap, ErrorKind::Overflow,
          "|Per_" + std::to_string(n) + "| = " + count.str() + " exceeds cap " + std::to_string(cap));

  const SmithForm snf = smith_normal_form(An);
  BigInt prod = 1;
  for (const auto& d : snf.diagonal) prod *= d;
  require(prod == count, ErrorKind::Overflow, "normal form does not reproduce the determinant");
  std::vector<std::int64_t> d;
  for (const auto& v : snf.diagonal) d.push_back(to_i64(v));
  ps.invariant_factors = d;
  const std::int64_t D = d.back();
  ps.den = D;

  std::vector<std::int64_t> Vm(static_cast<std::size_t>(dim * dim));
  std::vector<std::int64_t> Mm(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      Vm[static_cast<std::size_t>(i * dim + j)] = mod_floor(snf.V(i, j), D);
      Mm[static_cast<std::size_t>(i * dim + j)] = mod_floor(An(i, j), D);
    }

  // x = V (j_i / d_i) mod 1, j_i in [0, d_i).
  const std::size_t total = static_cast<std::size_t>(count);
  ps.numerators.resize(total);
  std::vector<char> exact(total, 1);
  parallel_for(total, [&](std::size_t idx) {
    std::size_t k = idx;
    std::array<std::int64_t, kMaxDim> z{};
    for (int i = 0; i < dim; ++i) {
      const auto di = static_cast<std::size_t>(d[static_cast<std::size_t>(i)]);
      z[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(k % di) * (D / d[static_cast<std::size_t>(i)]);
      k /= di;
    }
    Numerators num{};
    for (int i = 0; i < dim; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < dim; ++j)
        acc += static_cast<__int128>(Vm[static_cast<std::size_t>(i * dim + j)]) * z[static_cast<std::size_t>(j)];
      num[static_cast<std::size_t>(i)] = mod_floor(acc, D);
    }
    for (int i = 0; i < dim; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < dim; ++j)
        acc += static_cast<__int128>(Mm[static_cast<std::size_t>(i * dim + j)]) * num[static_cast<std::size_t>(j)];
      if (mod_floor(acc, D) != 0) exact[idx] = 0;
    }
    ps.numerators[idx] = num;
  });
  require(std::all_of(exact.begin(), exact.end(), [](char c) { return c != 0; }), ErrorKind::Overflow,
          "enumerated point fails (A^n - I) x = 0 mod 1");
  std::sort(ps.numerators.begin(), ps.numerators.end());
  require(std::adjacent_find(ps.numerators.begin(), ps.numerators.end()) == ps.numerators.end(),
          ErrorKind::Overflow, "duplicate periodic points in enumeration");

  // f acts on numerators by A mod den.
  std::vector<std::int64_t> Am(static_cast<std::size_t>(dim * dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) Am[static_cast<std::size_t>(i * dim + j)] = mod_floor(A(i, j), D);
  std::vector<long> image(total);
  parallel_for(total, [&](std::size_t idx) {
    const auto& x = ps.numerators[idx];
    Numerators y{};
    for (int i = 0; i < dim; ++i) {
      __int128 acc = 0;
      for (int j = 0; j < dim; ++j)
        acc += static_cast<__int128>(Am[static_cast<std::size_t>(i * dim + j)]) * x[static_cast<std::size_t>(j)];
      y[static_cast<std::size_t>(i)] = mod_floor(acc, D);
    }
    image[idx] = ps.find(y);
  });
  ps.orbit_of.assign(total, -1);
  for (std::size_t i = 0; i < total; ++i) {
    if (ps.orbit_of[i] >= 0) continue;
    std::vector<int> orb;
    long j = static_cast<long>(i);
    while (j >= 0 && ps.orbit_of[static_cast<std::size_t>(j)] < 0) {
      ps.orbit_of[static_cast<std::size_t>(j)] = static_cast<int>(ps.orbits.size());
      orb.push_back(static_cast<int>(j));
      j = image[static_cast<std::size_t>(j)];
    }
    require(j == static_cast<long>(i) && n % static_cast<int>(orb.size()) == 0, ErrorKind::Overflow,
            "orbit structure inconsistent with period");
    ps.orbits.push_back(std::move(orb));
  }
  return ps;
}

inline std::vector<int> proper_divisors(int n) {
  std::vector<int> out;
  for (int k = 1; k < n; ++k)
    if (n % k == 0) out.push_back(k);
  return out;
}

enum class RefinementStatus { OK, REFINEMENT_FAILED, PERIOD_MISMATCH };

inline const char* to_string(RefinementStatus s) {
  switch (s) {
    case RefinementStatus::OK: return "ok";
    case RefinementStatus::REFINEMENT_FAILED: return "RefinementFailed";
    case RefinementStatus::PERIOD_MISMATCH: return "PeriodMismatch";
  }
  return "?";
}

struct RefinedOrbit {
  int f_orbit = 0;                 // index into base PeriodicSet::orbits
  int length = 0;                  // orbit length d (divides n)
  Vec start;                       // base point x0
  Vec point;                       // refined g-periodic point y
  std::vector<Vec> orbit;          // y, g(y), ..., g^{d-1}(y)
  double residual = 0.0;           // adapted torus norm of g^d(y) - y
  int iterations = 0;
  long label = -1;                 // Per_n index of h(y)
  RefinementStatus status = RefinementStatus::OK;
};

struct SelectedPeriodicFamily {
  int period = 0;
  std::vector<RefinedOrbit> orbits;

  std::size_t succeeded() const {
    return static_cast<std::size_t>(std::count_if(orbits.begin(), orbits.end(), [](const RefinedOrbit& o) {
      return o.status == RefinementStatus::OK;
    }));
  }
  double max_residual() const {
    double m = 0;
    for (const auto& o : orbits)
      if (o.status == RefinementStatus::OK) m = std::max(m, o.residual);
    return m;
  }
  // Distinct selected g-orbits map to distinct f-orbits.
  bool injective(const PeriodicSet& base) const {
    std::set<int> seen;
    for (const auto& o : orbits) {
      if (o.status != RefinementStatus::OK) continue;
      if (o.label < 0) return false;
      if (!seen.insert(base.orbit_of[static_cast<std::size_t>(o.label)]).second) return false;
    }
    return true;
  }
};

struct NewtonOptions {
  int max_iterations = 60;
  double guard_radius = 0.0;  // 0 = 2Cr from the semiconjugacy
};

// Damped Newton on y -> wrap(g^d(y) - y) started at x0, staying within the guard radius.
inline RefinedOrbit refine_periodic_point(const DAMap& g, const Vec& x0, int d, double tol,
                                          double guard) {
  const auto& metric = g.metric();
  const int n = g.dim();
  RefinedOrbit out;
  out.length = d;
  out.start = x0;
  auto residual_vec = [&](const Vec& y, Mat* J) {
    Vec z = y;
    Mat P = Mat::Identity(n, n);
    for (int k = 0; k < d; ++k) {
      if (J) P = g.derivative(z) * P;
      z = g.eval_lift(z);
    }
    if (J) *J = P - Mat::Identity(n, n);
    return wrap(z - y);
  };
  Vec y = reduce(x0);
  Mat J;
  Vec F = residual_vec(y, nullptr);
  double fn = metric.norm(F);
  int it = 0;
  while (fn > tol * 1e-3 && it < 60) {
    residual_vec(y, &J);
    const Vec step = -J.fullPivLu().solve(F);
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h < 40; ++h, t *= 0.5) {
      const Vec cand = reduce(y + t * step);
      if (metric.distance(cand, x0) > guard) continue;
      const Vec Fc = residual_vec(cand, nullptr);
      const double fc = metric.norm(Fc);
      if (fc < fn) {
        y = cand;
        F = Fc;
        fn = fc;
        accepted = true;
        break;
      }
    }
    ++it;
    if (!accepted) break;
  }
  out.iterations = it;
  out.point = y;
  out.residual = fn;
  if (!(fn <= tol)) {
    out.status = RefinementStatus::REFINEMENT_FAILED;
    return out;
  }
  Vec z = y;
  out.orbit.push_back(y);
  for (int k = 1; k < d; ++k) {
    z = g.eval(z);
    out.orbit.push_back(z);
  }
  for (int k : proper_divisors(d))
    if (metric.distance(out.orbit[static_cast<std::size_t>(k)], y) <= 1e-9) {
      out.status = RefinementStatus::PERIOD_MISMATCH;
      return out;
    }
  return out;
}

// One g-periodic point per f-orbit of Per_n, refined by Newton inside the fiber neighborhood.
inline SelectedPeriodicFamily per_n_da(const DAMap& g, const PeriodicSet& base,
                                       const SemiconjugacyField& h, double tol,
                                       NewtonOptions opt = {}) {
  const double guard = opt.guard_radius > 0 ? opt.guard_radius : 2.0 * h.conjugacy_bound();
  SelectedPeriodicFamily fam;
  fam.period = base.period;
  fam.orbits.resize(base.orbits.size());
  parallel_for(base.orbits.size(), [&](std::size_t i) {
    const auto& orb = base.orbits[i];
    const Vec x0 = base.point(static_cast<std::size_t>(orb.front()));
    RefinedOrbit r = refine_periodic_point(g, x0, static_cast<int>(orb.size()), tol, guard);
    r.f_orbit = static_cast<int>(i);
    if (r.status == RefinementStatus::OK) r.label = base.locate(h.eval_periodic(r.orbit));
    fam.orbits[i] = std::move(r);
  });
  return fam;
}

// g-periodic points on the central line through an f-periodic point z, for maps whose
// perturbations all act on a single one-dimensional central coordinate. Returns offsets tau
// with z + tau e_c periodic, sorted, plus the central offset trajectory check.
struct CentralLine {
  int coord = -1;       // eigen-coordinate index of e_c
  double lambda = 0.0;  // linear factor on that coordinate
};

inline std::optional<CentralLine> single_central_line(const DAMap& g) {
  const auto& c = g.central_coordinates();
  if (c.size() != 1) return std::nullopt;
  const int k = c.front();
  return CentralLine{k, g.splitting().block_matrix()(k, k)};
}

// tau -> tau_d along the f-orbit z_0..z_{d-1}; returns NaN if some |tau_k| exceeds bound.
inline double central_return(const DAMap& g, const CentralLine& cl, const std::vector<Vec>& zorbit,
                             double tau, double bound) {
  const Vec ec = g.splitting().basis().col(cl.coord);
  for (const auto& z : zorbit) {
    const Vec y = z + tau * ec;
    tau = cl.lambda * tau + g.displacement_coords(y)[cl.coord];
    if (std::abs(tau) > bound) return std::numeric_limits<double>::quiet_NaN();
  }
  return tau;
}

inline std::vector<double> central_periodic_offsets(const DAMap& g, const CentralLine& cl,
                                                    const std::vector<Vec>& zorbit, double bound,
                                                    int samples = 256) {
  // The return map is increasing, so offsets leaving the bound keep the sign of R(t) - t.
  auto F = [&](double t) { return central_return(g, cl, zorbit, t, std::numeric_limits<double>::infinity()) - t; };
  std::vector<double> roots;
  double prev_t = -bound, prev_f = F(prev_t);
  for (int i = 1; i <= samples; ++i) {
    const double t = -bound + 2.0 * bound * i / samples;
    const double f = F(t);
    if (f == 0.0) {
      roots.push_back(t);
    } else if ((prev_f < 0 && f > 0) || (prev_f > 0 && f < 0)) {
      double lo = prev_t, hi = t, flo = prev_f;
      for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = F(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_t = t;
    prev_f = f;
  }
  return roots;
}

enum class ClassStructure { TRIVIAL, CS_SEGMENT, CU_SEGMENT, SQUARE, DISC };

inline const char* to_string(ClassStructure s) {
  switch (s) {
    case ClassStructure::TRIVIAL: return "TRIVIAL";
    case ClassStructure::CS_SEGMENT: return "CS_SEGMENT";
    case ClassStructure::CU_SEGMENT: return "CU_SEGMENT";
    case ClassStructure::SQUARE: return "SQUARE";
    case ClassStructure::DISC: return "DISC";
  }
  return "?";
}

struct FiberClass {
  Vec representative;
  std::vector<Vec> members;    // torus points
  std::vector<Vec> offsets;    // eigen-coordinates relative to the representative
  std::vector<char> boundary;  // member has a rejected grid neighbor
  double diameter = 0.0;
  double resolution = 0.0;
  int window = 0;
  std::vector<double> singular_values;
  ClassStructure structure = ClassStructure::TRIVIAL;
  bool periodic = false;
  std::optional<int> period;
};

namespace detail {

// Exact max over pairs of the adapted norm: the max of the stable and unstable Euclidean
// diameters, taken over the boundary subset when available.
inline double offset_diameter(const HyperbolicSplitting& s, const std::vector<Vec>& pts,
                              const std::vector<char>* mask = nullptr) {
  std::vector<const Vec*> use;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (!mask || (*mask)[i]) use.push_back(&pts[i]);
  double best = 0.0;
  for (std::size_t i = 0; i < use.size(); ++i)
    for (std::size_t j = i + 1; j < use.size(); ++j)
      best = std::max(best, s.coord_norm(*use[i] - *use[j]));
  return best;
}

}  // namespace detail

inline std::optional<int> detect_period(const DAMap& g, const Vec& x, int max_period = 12,
                                        double tol = 1e-9) {
  Vec z = reduce(x);
  for (int d = 1; d <= max_period; ++d) {
    z = g.eval(z);
    if (g.metric().distance(z, x) <= tol) return d;
  }
  return std::nullopt;
}

inline FiberClass class_members(const DAMap& g, const Vec& x, double alpha, int window,
                                double resolution, std::size_t cap = 100000) {
  require(resolution > 0 && resolution <= alpha / 10.0 * (1.0 + 1e-12), ErrorKind::InvalidArgument,
          "resolution must be positive and at most alpha/10");
  const auto& s = g.splitting();
  const std::vector<int>& K = g.central_coordinates();
  const int k = static_cast<int>(K.size());
  FiberClass fc;
  fc.representative = reduce(x);
  fc.resolution = resolution;
  fc.window = window;
  fc.period = detect_period(g, fc.representative);
  fc.periodic = fc.period.has_value();

  auto offset_of = [&](const std::vector<int>& node) {
    Vec D = Vec::Zero(s.dim());
    for (int i = 0; i < k; ++i) D[K[static_cast<std::size_t>(i)]] = resolution * node[static_cast<std::size_t>(i)];
    return D;
  };
  std::map<std::vector<int>, char> visited;  // 1 = accepted, 0 = rejected
  std::vector<std::vector<int>> frontier{std::vector<int>(static_cast<std::size_t>(k), 0)};
  visited[frontier.front()] = 1;
  std::vector<std::vector<int>> accepted{frontier.front()};
  while (!frontier.empty() && k > 0) {
    std::vector<std::vector<int>> cand;
    for (const auto& node : frontier)
      for (int i = 0; i < k; ++i)
        for (int sgn : {-1, 1}) {
          auto nb = node;
          nb[static_cast<std::size_t>(i)] += sgn;
          if (visited.count(nb)) continue;
          visited[nb] = 0;
          cand.push_back(nb);
        }
    std::sort(cand.begin(), cand.end());
    std::vector<char> ok(cand.size(), 0);
    parallel_for(cand.size(), [&](std::size_t i) {
      const Vec D = offset_of(cand[i]);
      if (s.coord_norm(D) > alpha / 2.0) return;
      ok[i] = same_fiber_offset(g, fc.representative, D, alpha, window).same ? 1 : 0;
    });
    frontier.clear();
    for (std::size_t i = 0; i < cand.size(); ++i)
      if (ok[i]) {
        visited[cand[i]] = 1;
        frontier.push_back(cand[i]);
        accepted.push_back(cand[i]);
      }
    require(accepted.size() <= cap, ErrorKind::ExplosionGuard,
            "class exceeded " + std::to_string(cap) + " members; alpha too large");
  }
  std::sort(accepted.begin(), accepted.end());
  for (const auto& node : accepted) {
    const Vec D = offset_of(node);
    fc.offsets.push_back(D);
    fc.members.push_back(reduce(fc.representative + s.from_coords(D)));
    bool edge = false;
    for (int i = 0; i < k && !edge; ++i)
      for (int sgn : {-1, 1}) {
        auto nb = node;
        nb[static_cast<std::size_t>(i)] += sgn;
        auto it = visited.find(nb);
        if (it == visited.end() || it->second == 0) edge = true;
      }
    fc.boundary.push_back(edge || k == 0 ? 1 : 0);
  }
  // Endpoints of a periodic central segment are g-periodic and lie off the grid.
  if (fc.period && k == 1) {
    const CentralLine cl{K.front(), s.block_matrix()(K.front(), K.front())};
    std::vector<Vec> zorb{fc.representative};
    for (int i = 1; i < *fc.period; ++i) zorb.push_back(g.eval(zorb.back()));
    const auto roots = central_periodic_offsets(g, cl, zorb, alpha / 2.0);
    for (double tau : {roots.empty() ? 0.0 : roots.front(), roots.empty() ? 0.0 : roots.back()}) {
      if (std::abs(tau) < resolution) continue;
      Vec D = Vec::Zero(s.dim());
      D[K.front()] = tau;
      if (!same_fiber_offset(g, fc.representative, D, alpha, window).same) continue;
      fc.offsets.push_back(D);
      fc.members.push_back(reduce(fc.representative + s.from_coords(D)));
      fc.boundary.push_back(1);
    }
  }
  fc.diameter = detail::offset_diameter(s, fc.offsets, &fc.boundary);
  if (fc.diameter < 3.0 * resolution || k == 0) {
    fc.structure = ClassStructure::TRIVIAL;
    return fc;
  }
  Eigen::MatrixXd X(static_cast<Eigen::Index>(fc.offsets.size()), k);
  for (std::size_t i = 0; i < fc.offsets.size(); ++i)
    for (int j = 0; j < k; ++j) X(static_cast<Eigen::Index>(i), j) = fc.offsets[i][K[static_cast<std::size_t>(j)]];
  X.rowwise() -= X.colwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(X, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i) fc.singular_values.push_back(sv[i]);
  const int ds = s.stable_dim();
  if (k == 1 || sv[1] < 0.05 * sv[0]) {
    Eigen::Index arg = 0;
    svd.matrixV().col(0).cwiseAbs().maxCoeff(&arg);
    fc.structure = K[static_cast<std::size_t>(arg)] < ds ? ClassStructure::CS_SEGMENT
                                                          : ClassStructure::CU_SEGMENT;
  } else {
    bool has_s = false, has_u = false;
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < k; ++i)
        if (std::abs(svd.matrixV()(i, j)) > 0.05) (K[static_cast<std::size_t>(i)] < ds ? has_s : has_u) = true;
    fc.structure = has_s && has_u ? ClassStructure::SQUARE : ClassStructure::DISC;
  }
  return fc;
}

// diam(g^n(members)), n = 0..horizon, tracked through offsets from the representative.
inline std::vector<double> class_diameter_series(const DAMap& g, const FiberClass& cls, int horizon) {
  const auto& s = g.splitting();
  std::vector<Vec> offs;
  for (std::size_t i = 0; i < cls.offsets.size(); ++i)
    if (cls.boundary.empty() || cls.boundary[i]) offs.push_back(cls.offsets[i]);
  std::vector<double> series;
  Vec x = cls.representative;
  for (int n = 0; n <= horizon; ++n) {
    series.push_back(offs.size() < 2 ? 0.0 : detail::offset_diameter(s, offs));
    if (n == horizon) break;
    std::vector<Vec> next(offs.size());
    parallel_for(offs.size(), [&](std::size_t i) { next[i] = g.offset_forward(x, offs[i]); });
    offs = std::move(next);
    x = g.eval(x);
  }
  return series;
}

struct TrivialFiberReport {
  double fraction = 1.0;
  std::size_t trivial = 0;
  std::size_t total = 0;
  std::vector<double> orbit_diameters;  // per f-orbit
  std::string method;
};

// Fraction of mu_n-mass whose fiber h^{-1}(z) has diameter < tol.
inline TrivialFiberReport trivial_fiber_fraction(const DAMap& g, const SemiconjugacyField& h,
                                                 const PeriodicSet& base, double tol) {
  TrivialFiberReport rep;
  rep.total = base.count();
  rep.orbit_diameters.assign(base.orbits.size(), 0.0);
  if (g.central_coordinates().empty()) {
    rep.trivial = rep.total;
    rep.fraction = 1.0;
    rep.method = "linear";
    return rep;
  }
  const double bound = h.conjugacy_bound();
  if (auto cl = single_central_line(g)) {
    rep.method = "central-line";
    parallel_for(base.orbits.size(), [&](std::size_t i) {
      std::vector<Vec> zorb;
      bool near = false;
      for (int idx : base.orbits[i]) {
        zorb.push_back(base.point(static_cast<std::size_t>(idx)));
        for (std::size_t b = 0; b < g.bumps().size(); ++b)
          if (g.local_coords(static_cast<int>(b), zorb.back()).norm() < g.bumps()[b].radius + bound + 1e-12)
            near = true;
      }
      if (!near) return;
      const auto roots = central_periodic_offsets(g, *cl, zorb, bound);
      if (roots.size() >= 2) rep.orbit_diameters[i] = roots.back() - roots.front();
    });
  } else {
    rep.method = "class-exploration";
    const double alpha = g.splitting().expansivity_constant();
    const auto fam = per_n_da(g, base, h, 1e-10);
    parallel_for(base.orbits.size(), [&](std::size_t i) {
      const auto& r = fam.orbits[i];
      if (r.status != RefinementStatus::OK) return;
      const FiberClass fc = class_members(g, r.point, alpha, 60, std::min(alpha / 10.0, tol));
      rep.orbit_diameters[i] = fc.diameter;
    });
  }
  rep.trivial = 0;
  for (std::size_t i = 0; i < base.orbits.size(); ++i)
    if (rep.orbit_diameters[i] < tol) rep.trivial += base.orbits[i].size();
  rep.fraction = rep.total ? static_cast<double>(rep.trivial) / static_cast<double>(rep.total) : 1.0;
  return rep;
}

}  // namespace anosov
