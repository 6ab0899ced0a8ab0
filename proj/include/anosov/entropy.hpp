// Entropy estimators: (n, eps)-separated sets, class scans, periodic growth and the
// inequality dashboard.
#pragma once

#include "anosov/core.hpp"
#include "anosov/parallel.hpp"
#include "anosov/periodic.hpp"
#include "anosov/torus.hpp"
#include "anosov/torus_maps.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

namespace anosov {

struct SeparatedCount {
  int n = 0;
  double epsilon = 0.0;
  std::size_t count = 0;
  std::size_t sample_size = 0;
};

// Orbit table: row i holds g^j(K_i) for j < steps.
class OrbitTable {
 public:
  OrbitTable(const TorusMap& g, const std::vector<Vec>& K, int steps) : steps_(steps), size_(K.size()) {
    table_.resize(K.size() * static_cast<std::size_t>(steps));
    parallel_for(K.size(), [&](std::size_t i) {
      Vec x = reduce(K[i]);
      for (int j = 0; j < steps; ++j) {
        table_[i * static_cast<std::size_t>(steps) + static_cast<std::size_t>(j)] = x;
        if (j + 1 < steps) x = g.eval(x);
      }
    });
  }

  int steps() const { return steps_; }
  std::size_t size() const { return size_; }
  const Vec& at(std::size_t i, int j) const { return table_[i * static_cast<std::size_t>(steps_) + static_cast<std::size_t>(j)]; }

 private:
  int steps_;
  std::size_t size_;
  std::vector<Vec> table_;
};

namespace detail {

// Greedy separated sets nested in n: the set for n seeds the set for n+1, which keeps the
// counts nondecreasing in n. Candidates are compared only against chosen points in the
// neighbor cells listed for them.
inline std::vector<std::size_t> nested_greedy(std::size_t N, int n_max, std::size_t stop_above,
                                              const std::function<bool(std::size_t, std::size_t, int)>& close,
                                              const std::vector<std::size_t>& cell_of,
                                              const std::vector<std::vector<std::size_t>>& neighbors,
                                              std::size_t cell_count) {
  std::vector<std::size_t> counts;
  std::vector<char> chosen(N, 0);
  std::vector<std::vector<std::size_t>> grid(cell_count);
  std::size_t total = 0;
  for (int n = 1; n <= n_max; ++n) {
    for (std::size_t i = 0; i < N; ++i) {
      if (chosen[i]) continue;
      bool separated = true;
      for (std::size_t c : neighbors[i]) {
        for (std::size_t s : grid[c]) {
          bool apart = false;
          for (int j = n - 1; j >= 0 && !apart; --j) apart = !close(i, s, j);
          if (!apart) {
            separated = false;
            break;
          }
        }
        if (!separated) break;
      }
      if (!separated) continue;
      chosen[i] = 1;
      grid[cell_of[i]].push_back(i);
      ++total;
    }
    counts.push_back(total);
    if (total > stop_above) break;
  }
  return counts;
}

}  // namespace detail

// Counts for n = 1..n_max of nested greedy (n, eps)-separated subsets of K.
// Stops after the first n whose count exceeds stop_above.
inline std::vector<SeparatedCount> separated_counts(const OrbitTable& T, int n_max, double eps,
                                                    const TorusMetric& metric,
                                                    std::size_t stop_above = static_cast<std::size_t>(-1)) {
  require(n_max >= 1 && n_max <= T.steps(), ErrorKind::InvalidArgument, "n_max exceeds the orbit table");
  require(eps > 0, ErrorKind::InvalidArgument, "epsilon must be positive");
  const std::size_t N = T.size();
  const int dim = N ? static_cast<int>(T.at(0, 0).size()) : 1;
  // Cells at least as wide as the eps-ball in each coordinate.
  const Vec ext = metric.extent(eps);
  std::vector<std::int64_t> ncell(static_cast<std::size_t>(dim));
  std::size_t cell_count = 1;
  for (int d = 0; d < dim; ++d) {
    ncell[static_cast<std::size_t>(d)] =
        std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(1.0 / std::min(1.0, ext[d]))), 1, 4096);
    cell_count *= static_cast<std::size_t>(ncell[static_cast<std::size_t>(d)]);
  }
  int shifts = 1;
  for (int d = 0; d < dim; ++d) shifts *= 3;
  std::vector<std::size_t> cell_of(N);
  std::vector<std::vector<std::size_t>> neighbors(N);
  parallel_for(N, [&](std::size_t i) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(dim));
    const Vec& x = T.at(i, 0);
    for (int d = 0; d < dim; ++d) {
      const auto m = ncell[static_cast<std::size_t>(d)];
      c[static_cast<std::size_t>(d)] = std::min<std::int64_t>(m - 1, static_cast<std::int64_t>(x[d] * static_cast<double>(m)));
    }
    auto flat = [&](const std::vector<std::int64_t>& v) {
      std::size_t id = 0;
      for (int d = 0; d < dim; ++d)
        id = id * static_cast<std::size_t>(ncell[static_cast<std::size_t>(d)]) + static_cast<std::size_t>(v[static_cast<std::size_t>(d)]);
      return id;
    };
    cell_of[i] = flat(c);
    auto& out = neighbors[i];
    for (int code = 0; code < shifts; ++code) {
      auto nb = c;
      int cc = code;
      for (int d = 0; d < dim; ++d) {
        auto& v = nb[static_cast<std::size_t>(d)];
        const auto m = ncell[static_cast<std::size_t>(d)];
        v = ((v + cc % 3 - 1) % m + m) % m;
        cc /= 3;
      }
      out.push_back(flat(nb));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  });
  auto close = [&](std::size_t a, std::size_t b, int j) { return metric.within(T.at(a, j), T.at(b, j), eps); };
  const auto raw = detail::nested_greedy(N, n_max, stop_above, close, cell_of, neighbors, cell_count);
  std::vector<SeparatedCount> out;
  for (std::size_t i = 0; i < raw.size(); ++i) out.push_back({static_cast<int>(i) + 1, eps, raw[i], N});
  return out;
}

inline SeparatedCount separated_count(const TorusMap& g, const std::vector<Vec>& K, int n, double eps,
                                      const TorusMetric& metric) {
  const OrbitTable T(g, K, n);
  return separated_counts(T, n, eps, metric).back();
}

inline SeparatedCount separated_count(const DAMap& g, const std::vector<Vec>& K, int n, double eps) {
  return separated_count(g, K, n, eps, g.metric());
}

struct EpsilonFit {
  double epsilon = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of the log-count fit
  int n_lo = 0, n_hi = 0;
  int points = 0;
};

struct EntropyEstimate {
  double value = 0.0;  // nats
  double epsilon_used = 0.0;
  std::vector<EpsilonFit> fits;
  std::vector<SeparatedCount> counts;
  std::size_t sample_size = 0;
  int n_min = 1, n_max = 0;
};

// Least-squares fit of log count against n over the stable range (count <= N/8, n >= n_min),
// before the finite sample depletes.
inline EpsilonFit fit_growth(const std::vector<SeparatedCount>& counts, int n_min, std::size_t N) {
  EpsilonFit f;
  if (counts.empty()) return f;
  f.epsilon = counts.front().epsilon;
  std::vector<double> xs, ys;
  for (const auto& c : counts)
    if (c.n >= n_min && c.count * 8 <= N && c.count > 0) {
      xs.push_back(c.n);
      ys.push_back(std::log(static_cast<double>(c.count)));
    }
  f.points = static_cast<int>(xs.size());
  if (f.points < 2) return f;
  f.n_lo = static_cast<int>(xs.front());
  f.n_hi = static_cast<int>(xs.back());
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  f.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / m;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.intercept + f.slope * xs[i]);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / m);
  return f;
}

inline EntropyEstimate h_top_estimate(const TorusMap& g, const std::vector<Vec>& K, int n_min, int n_max,
                                      std::vector<double> eps_list, const TorusMetric& metric,
                                      std::size_t budget = 200000000) {
  require(!eps_list.empty(), ErrorKind::InvalidArgument, "empty epsilon list");
  require(n_min >= 1 && n_max >= n_min, ErrorKind::InvalidArgument, "invalid n range");
  require(static_cast<double>(K.size()) * n_max <= static_cast<double>(budget), ErrorKind::BudgetExceeded,
          "sample size times n exceeds the compute budget");
  std::sort(eps_list.begin(), eps_list.end());
  EntropyEstimate est;
  est.sample_size = K.size();
  est.n_min = n_min;
  est.n_max = n_max;
  const OrbitTable T(g, K, n_max);
  std::vector<std::vector<SeparatedCount>> per_eps(eps_list.size());
  parallel_for(eps_list.size(), [&](std::size_t e) { per_eps[e] = separated_counts(T, n_max, eps_list[e], metric, K.size() / 8); });
  for (const auto& c : per_eps) {
    est.counts.insert(est.counts.end(), c.begin(), c.end());
    est.fits.push_back(fit_growth(c, n_min, K.size()));
  }
  const EpsilonFit* chosen = nullptr;
  for (int need : {3, 2}) {
    for (const auto& f : est.fits)
      if (f.points >= need) {
        chosen = &f;
        break;
      }
    if (chosen) break;
  }
  require(chosen != nullptr, ErrorKind::BudgetExceeded,
          "no epsilon has a stable range; enlarge the sample or epsilon");
  est.value = std::max(0.0, chosen->slope);
  est.epsilon_used = chosen->epsilon;
  return est;
}

// Dynamical metric built on the adapted torus distance of the map.
inline EntropyEstimate h_top_estimate(const DAMap& g, const std::vector<Vec>& K, int n_min, int n_max,
                                      std::vector<double> eps_list, std::size_t budget = 200000000) {
  return h_top_estimate(g, K, n_min, n_max, std::move(eps_list), g.metric(), budget);
}

struct ClassScanEntry {
  SeparatedCount count;
  std::size_t envelope = 0;  // ceil(n 2Cr / eps) + 1
  bool within = true;
};

// Separated counts inside a class, distances measured on tracked offsets (adapted norm).
inline std::vector<ClassScanEntry> class_entropy_scan(const DAMap& g, const FiberClass& cls, int n_max,
                                                      double eps, double two_cr) {
  const auto& s = g.splitting();
  const std::size_t N = cls.offsets.size();
  std::vector<std::vector<Vec>> offs(static_cast<std::size_t>(n_max));
  offs[0] = cls.offsets;
  Vec x = cls.representative;
  for (int j = 1; j < n_max; ++j) {
    offs[static_cast<std::size_t>(j)].resize(N);
    parallel_for(N, [&](std::size_t i) {
      offs[static_cast<std::size_t>(j)][i] = g.offset_forward(x, offs[static_cast<std::size_t>(j - 1)][i]);
    });
    x = g.eval(x);
  }
  auto close = [&](std::size_t a, std::size_t b, int j) {
    return s.coord_norm(offs[static_cast<std::size_t>(j)][a] - offs[static_cast<std::size_t>(j)][b]) <= eps;
  };
  const std::vector<std::size_t> cell_of(N, 0);
  const std::vector<std::vector<std::size_t>> neighbors(N, std::vector<std::size_t>{0});
  const auto raw = detail::nested_greedy(N, n_max, static_cast<std::size_t>(-1), close, cell_of, neighbors, 1);
  std::vector<ClassScanEntry> out;
  for (int n = 1; n <= n_max; ++n) {
    ClassScanEntry e;
    e.count = {n, eps, raw[static_cast<std::size_t>(n - 1)], N};
    e.envelope = static_cast<std::size_t>(std::ceil(n * two_cr / eps)) + 1;
    e.within = e.count.count <= e.envelope;
    out.push_back(e);
  }
  return out;
}

struct GrowthRate {
  double value = 0.0;
  std::vector<std::pair<int, double>> per_n;  // (n, log(count)/n)
};

inline GrowthRate periodic_growth_rate(const std::vector<std::pair<int, double>>& counts) {
  require(counts.size() >= 3, ErrorKind::InvalidArgument, "growth rate needs at least 3 entries");
  GrowthRate g;
  int best = 0;
  for (const auto& [n, c] : counts) {
    require(n >= 1 && c >= 1, ErrorKind::InvalidArgument, "counts must be positive");
    g.per_n.emplace_back(n, std::log(c) / n);
    if (n > best) {
      best = n;
      g.value = std::log(c) / n;
    }
  }
  return g;
}

struct InequalityDashboard {
  double h_f = 0.0;
  double h_g = 0.0;
  double class_rate = 0.0;       // max class growth rate
  double pushforward_gap = 0.0;
  double tolerance = 0.0;
  double bowen_slack = 0.0;      // h_f + class_rate - h_g
  double lw_gap = 0.0;           // h_g - h_f
  double lw_slack = 0.0;         // class_rate - (h_g - h_f)
  double symmetric_gap = 0.0;    // |h_g - h_f|
  bool violation = false;
};

inline InequalityDashboard inequality_dashboard(double f_est, double g_est, const std::vector<double>& class_rates,
                                                double pushforward_gap, double rel_tolerance = 0.15) {
  InequalityDashboard d;
  d.h_f = f_est;
  d.h_g = g_est;
  for (double r : class_rates) d.class_rate = std::max(d.class_rate, r);
  d.pushforward_gap = pushforward_gap;
  d.tolerance = rel_tolerance * std::max(f_est, 1e-12);
  d.bowen_slack = f_est + d.class_rate - g_est;
  d.lw_gap = g_est - f_est;
  d.lw_slack = d.class_rate - d.lw_gap;
  d.symmetric_gap = std::abs(d.lw_gap);
  d.violation = d.bowen_slack < -d.tolerance || d.lw_slack < -d.tolerance;
  return d;
}

// Growth rate of a class scan: slope of log count against n over the second half of the range.
inline double class_growth_rate(const std::vector<ClassScanEntry>& scan) {
  if (scan.size() < 2) return 0.0;
  const auto& a = scan[scan.size() / 2].count;
  const auto& b = scan.back().count;
  if (b.n == a.n) return 0.0;
  return std::max(0.0, (std::log(static_cast<double>(b.count)) - std::log(static_cast<double>(a.count))) / (b.n - a.n));
}

}  // namespace anosov
