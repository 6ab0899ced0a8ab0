// Empirical measures on the torus, Fourier diagnostics and pushforwards.
#pragma once

#include "anosov/core.hpp"
#include "anosov/parallel.hpp"
#include "anosov/periodic.hpp"
#include "anosov/shadowing.hpp"
#include "anosov/torus_maps.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace anosov {

using Complex = std::complex<double>;

struct EmpiricalMeasure {
  int dim = 0;
  std::vector<Vec> atoms;
  std::vector<double> weights;
  // Exact rational coordinates (numerators over den) when den > 0.
  std::int64_t den = 0;
  std::vector<Numerators> numerators;
  // Fraction of the intended atoms actually present (periodic refinement failures).
  double completeness = 1.0;

  std::size_t size() const { return atoms.size(); }
  bool exact() const { return den > 0 && numerators.size() == atoms.size(); }
  double total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
  }
};

inline EmpiricalMeasure uniform_measure(std::vector<Vec> atoms) {
  require(!atoms.empty(), ErrorKind::InvalidArgument, "measure needs at least one atom");
  EmpiricalMeasure mu;
  mu.dim = static_cast<int>(atoms.front().size());
  mu.weights.assign(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  for (auto& a : atoms) a = reduce(a);
  mu.atoms = std::move(atoms);
  return mu;
}

inline EmpiricalMeasure dirac(const Vec& x) { return uniform_measure({x}); }

// Uniform measure on Per_n(f).
inline EmpiricalMeasure mu_n(const PeriodicSet& ps) {
  EmpiricalMeasure mu;
  mu.dim = ps.dim;
  mu.den = ps.den;
  mu.numerators = ps.numerators;
  for (std::size_t i = 0; i < ps.count(); ++i) mu.atoms.push_back(ps.point(i));
  mu.weights.assign(ps.count(), 1.0 / static_cast<double>(ps.count()));
  return mu;
}

inline EmpiricalMeasure mu_n(const ToralAutomorphism& M, int n) { return mu_n(per_n_linear(M, n)); }

// Uniform measure on the full g-orbits of the selected periodic points.
inline EmpiricalMeasure nu_n(const SelectedPeriodicFamily& fam) {
  EmpiricalMeasure nu;
  std::size_t intended = 0;
  std::vector<Vec> atoms;
  for (const auto& o : fam.orbits) {
    intended += static_cast<std::size_t>(o.length);
    if (o.status != RefinementStatus::OK) continue;
    for (const auto& y : o.orbit) atoms.push_back(reduce(y));
  }
  require(!atoms.empty(), ErrorKind::RefinementFailed, "no periodic orbit was refined");
  nu = uniform_measure(std::move(atoms));
  nu.completeness = static_cast<double>(nu.size()) / static_cast<double>(intended);
  return nu;
}

struct FourierDiagnostics {
  int dim = 0;
  int kmax = 0;
  std::vector<std::vector<int>> modes;  // lexicographic over [-kmax, kmax]^dim
  std::vector<Complex> coefficients;

  std::size_t index_of(const std::vector<int>& k) const {
    std::size_t idx = 0;
    for (int v : k) idx = idx * static_cast<std::size_t>(2 * kmax + 1) + static_cast<std::size_t>(v + kmax);
    return idx;
  }
  Complex at(const std::vector<int>& k) const { return coefficients[index_of(k)]; }
};

inline std::vector<std::vector<int>> fourier_modes(int dim, int kmax) {
  std::vector<std::vector<int>> modes;
  std::vector<int> k(static_cast<std::size_t>(dim), -kmax);
  while (true) {
    modes.push_back(k);
    int i = dim - 1;
    while (i >= 0 && k[static_cast<std::size_t>(i)] == kmax) k[static_cast<std::size_t>(i--)] = -kmax;
    if (i < 0) break;
    ++k[static_cast<std::size_t>(i)];
  }
  return modes;
}

namespace detail {

// Pairwise (tree) summation of term(i) over [lo, hi); fixed tree shape for reproducibility.
template <class Term>
Complex pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo <= 32) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = lo; i < hi; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

}  // namespace detail

inline FourierDiagnostics fourier(const EmpiricalMeasure& mu, int kmax) {
  require(kmax >= 0 && kmax <= 8, ErrorKind::InvalidArgument, "kmax must lie in [0, 8]");
  FourierDiagnostics F;
  F.dim = mu.dim;
  F.kmax = kmax;
  F.modes = fourier_modes(mu.dim, kmax);
  F.coefficients.assign(F.modes.size(), Complex(0.0, 0.0));
  const std::size_t half = F.modes.size() / 2;  // index of the zero mode
  const bool exact = mu.exact();
  // Modes after the zero mode are the negatives of those before it, in reverse order.
  parallel_for(half + 1, [&](std::size_t mi) {
    const auto& k = F.modes[half + mi];
    auto term = [&](std::size_t j) {
      double turns;
      if (exact) {
        __int128 acc = 0;
        for (int d = 0; d < mu.dim; ++d)
          acc += static_cast<__int128>(k[static_cast<std::size_t>(d)]) *
                 mu.numerators[j][static_cast<std::size_t>(d)];
        turns = static_cast<double>(mod_floor(acc, mu.den)) / static_cast<double>(mu.den);
      } else {
        double t = 0.0;
        for (int d = 0; d < mu.dim; ++d) t += k[static_cast<std::size_t>(d)] * mu.atoms[j][d];
        turns = t - std::floor(t);
      }
      const double ang = 2.0 * M_PI * turns;
      return mu.weights[j] * Complex(std::cos(ang), std::sin(ang));
    };
    F.coefficients[half + mi] = detail::pairwise_sum(0, mu.size(), term);
  });
  for (std::size_t mi = 1; mi <= half; ++mi) F.coefficients[half - mi] = std::conj(F.coefficients[half + mi]);
  F.coefficients[half] = Complex(F.coefficients[half].real(), 0.0);
  return F;
}

// sum_k 2^{-|k|_1} |F(k) - G(k)|.
inline double weak_star_distance(const FourierDiagnostics& F, const FourierDiagnostics& G) {
  require(F.dim == G.dim && F.kmax == G.kmax, ErrorKind::InvalidArgument, "Fourier tables differ in shape");
  double d = 0.0;
  for (std::size_t i = 0; i < F.modes.size(); ++i) {
    int l1 = 0;
    for (int v : F.modes[i]) l1 += std::abs(v);
    d += std::ldexp(std::abs(F.coefficients[i] - G.coefficients[i]), -l1);
  }
  return d;
}

// max over k != 0 of |F(k) - G(k)|.
inline double max_mode_gap(const FourierDiagnostics& F, const FourierDiagnostics& G) {
  double d = 0.0;
  for (std::size_t i = 0; i < F.modes.size(); ++i) d = std::max(d, std::abs(F.coefficients[i] - G.coefficients[i]));
  return d;
}

inline constexpr double kMergeTolerance = 1e-8;

// Merge atoms closer than tol (Euclidean torus distance), summing weights; output sorted.
inline EmpiricalMeasure merge_atoms(const EmpiricalMeasure& in, double tol = kMergeTolerance) {
  const std::size_t N = in.size();
  const int n = in.dim;
  const double cells = std::floor(1.0 / tol);
  auto cell_of = [&](const Vec& x) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) c[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(std::floor(x[d] * cells));
    return c;
  };
  struct Hash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
      std::size_t h = 1469598103934665603ull;
      for (auto x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(in.atoms[a].data(), in.atoms[a].data() + n, in.atoms[b].data(),
                                        in.atoms[b].data() + n);
  });
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, Hash> grid;
  std::vector<std::size_t> rep(N);
  std::vector<std::size_t> reps;
  const auto ncell = static_cast<std::int64_t>(cells);
  int shifts = 1;
  for (int d = 0; d < n; ++d) shifts *= 3;
  for (std::size_t idx : order) {
    const Vec& x = in.atoms[idx];
    const auto c = cell_of(x);
    std::size_t found = N;
    for (int code = 0; code < shifts && found == N; ++code) {
      auto nb = c;
      int cc = code;
      for (int d = 0; d < n; ++d) {
        auto& v = nb[static_cast<std::size_t>(d)];
        v = ((v + cc % 3 - 1) % ncell + ncell) % ncell;
        cc /= 3;
      }
      auto it = grid.find(nb);
      if (it == grid.end()) continue;
      for (std::size_t r : it->second)
        if (wrap(in.atoms[r] - x).norm() < tol) {
          found = r;
          break;
        }
    }
    if (found == N) {
      grid[c].push_back(idx);
      reps.push_back(idx);
      rep[idx] = idx;
    } else {
      rep[idx] = found;
    }
  }
  std::unordered_map<std::size_t, double> mass;
  for (std::size_t i = 0; i < N; ++i) mass[rep[i]] += in.weights[i];
  EmpiricalMeasure out;
  out.dim = n;
  out.completeness = in.completeness;
  const bool keep_exact = in.exact();
  if (keep_exact) out.den = in.den;
  for (std::size_t r : reps) {
    out.atoms.push_back(in.atoms[r]);
    out.weights.push_back(mass[r]);
    if (keep_exact) out.numerators.push_back(in.numerators[r]);
  }
  const double total = out.total_weight();
  for (auto& w : out.weights) w /= total;
  return out;
}

inline EmpiricalMeasure pushforward(const SemiconjugacyField& h, const EmpiricalMeasure& mu,
                                    double tol = kMergeTolerance) {
  EmpiricalMeasure img;
  img.dim = mu.dim;
  img.weights = mu.weights;
  img.completeness = mu.completeness;
  img.atoms = h.eval_many(mu.atoms);
  return merge_atoms(img, tol);
}

inline EmpiricalMeasure pushforward(const TorusMap& g, const EmpiricalMeasure& mu,
                                    double tol = kMergeTolerance) {
  EmpiricalMeasure img;
  img.dim = mu.dim;
  img.weights = mu.weights;
  img.completeness = mu.completeness;
  img.atoms.resize(mu.size());
  parallel_for(mu.size(), [&](std::size_t i) { img.atoms[i] = g.eval(mu.atoms[i]); });
  return merge_atoms(img, tol);
}

struct ConvergenceReport {
  int kmax = 0;
  std::vector<FourierDiagnostics> tables;
  std::vector<double> distances;       // d(seq[i], seq[i+1])
  std::vector<double> max_nonzero_mode;  // per measure, max |coef| over k != 0
  bool monotone = false;               // distances nonincreasing
  double trend_slope = 0.0;            // least-squares slope of log distance against index
  double final_to_first = 0.0;
};

inline ConvergenceReport convergence_report(const std::vector<EmpiricalMeasure>& seq, int kmax) {
  require(seq.size() >= 3, ErrorKind::InvalidArgument, "convergence report needs at least 3 measures");
  ConvergenceReport rep;
  rep.kmax = kmax;
  for (const auto& mu : seq) {
    rep.tables.push_back(fourier(mu, kmax));
    const auto& F = rep.tables.back();
    double m = 0.0;
    const std::size_t zero = F.modes.size() / 2;
    for (std::size_t i = 0; i < F.modes.size(); ++i)
      if (i != zero) m = std::max(m, std::abs(F.coefficients[i]));
    rep.max_nonzero_mode.push_back(m);
  }
  for (std::size_t i = 0; i + 1 < rep.tables.size(); ++i)
    rep.distances.push_back(weak_star_distance(rep.tables[i], rep.tables[i + 1]));
  rep.monotone = true;
  for (std::size_t i = 0; i + 1 < rep.distances.size(); ++i)
    if (rep.distances[i + 1] > rep.distances[i]) rep.monotone = false;
  const double m = static_cast<double>(rep.distances.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < rep.distances.size(); ++i) {
    const double x = static_cast<double>(i), y = std::log(rep.distances[i] + 1e-300);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.trend_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  rep.final_to_first = rep.distances.front() > 0 ? rep.distances.back() / rep.distances.front() : 0.0;
  return rep;
}

}  // namespace anosov
