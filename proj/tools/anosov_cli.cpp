// Batch front-end: one subcommand per pipeline stage, flat config in, CSV/JSON out.
//
// Config keys (key = value, '#' starts a comment):
//   base_matrix   rows separated by ';', entries by ','        default 2,1;1,1
//   variant       linear | mane | mixed | hopf                  default linear
//   center, center_q   comma-separated torus points              default origin
//   radius        (0, 0.5]        strength  (0, 10]    strength_q (0, 1]
//   seed          unsigned 64-bit                               default 1
//   n_min, n_max  period / time ranges                          command defaults
//   points_max    periodic: write Per_n points for n <= this    default 0
//   pseudo_orbits, length, defect      shadow
//   grid_side, precision, window       semiconj
//   samples       da-build, verify-h, entropy sample sizes
//   tol, h3_n_max, scan_n, scan_eps    verify-h
//   kmax          measure: Fourier cutoff (0..8)
//   eps           entropy: comma-separated epsilon list
//   budget        entropy: max pair checks per epsilon
//   height, triples, measure_n         suspend
//   periodic_n_max                     entropy: periodic growth range

#include "anosov/config.hpp"
#include "anosov/core.hpp"
#include "anosov/entropy.hpp"
#include "anosov/hyperbolic_linear.hpp"
#include "anosov/hypotheses.hpp"
#include "anosov/integer.hpp"
#include "anosov/measures.hpp"
#include "anosov/parallel.hpp"
#include "anosov/periodic.hpp"
#include "anosov/sampling.hpp"
#include "anosov/shadowing.hpp"
#include "anosov/suspension.hpp"
#include "anosov/torus_maps.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace anosov;

namespace {

constexpr const char* kVersion = "1.0.0";

struct Run {
  Config cfg;
  std::string hash;
  fs::path out;
  bool verbose = false;
  json report = json::object();
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, double>> timings;

  CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
    outputs.push_back(name);
    return CsvWriter((out / name).string(), hash, header);
  }

  template <class F>
  auto timed(const std::string& label, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if (verbose) std::cerr << "[" << label << "]\n";
    auto result = f();
    timings.emplace_back(label, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return result;
  }
};

std::vector<std::string> coord_headers(const std::string& prefix, int dim) {
  std::vector<std::string> h;
  for (int i = 0; i < dim; ++i) h.push_back(prefix + std::to_string(i));
  return h;
}

void append(std::vector<std::string>& row, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(fmt(v[i]));
}

struct MapSetup {
  ToralAutomorphism A;
  HyperbolicSplitting split;
  DAParams params;
  DAMapPtr g;
};

MapSetup map_setup(const Config& c) {
  const ToralAutomorphism A = c.get_matrix("base_matrix", "2,1;1,1");
  const HyperbolicSplitting split = spectral_split(A);
  const DAParams p = da_params(c, A.dim());
  return {A, split, p, build_da(A, p)};
}

// ---- spectrum ----

void cmd_spectrum(Run& run) {
  const ToralAutomorphism A = run.cfg.get_matrix("base_matrix", "2,1;1,1");
  const HyperbolicSplitting s = spectral_split(A);
  auto csv = run.csv("spectrum.csv", {"index", "re", "im", "modulus", "stable"});
  const auto& ev = s.eigenvalues();
  for (std::size_t i = 0; i < ev.size(); ++i)
    csv.write_row({std::to_string(i), fmt(ev[i].real()), fmt(ev[i].imag()), fmt(std::abs(ev[i])),
                   std::abs(ev[i]) < 1.0 ? "1" : "0"});
  run.report = {{"dim", s.dim()},
                {"det_sign", A.det_sign()},
                {"stable_dim", s.stable_dim()},
                {"unstable_dim", s.unstable_dim()},
                {"lambda_s", s.lambda_s()},
                {"lambda_u", s.lambda_u()},
                {"a", s.a()},
                {"C", 1.0 / (1.0 - s.a())},
                {"expansivity_constant", s.expansivity_constant()}};
}

// ---- periodic ----

void cmd_periodic(Run& run) {
  const ToralAutomorphism A = run.cfg.get_matrix("base_matrix", "2,1;1,1");
  const int n_min = static_cast<int>(run.cfg.get_int("n_min", 1, 1, 64));
  const int n_max = static_cast<int>(run.cfg.get_int("n_max", 10, n_min, 64));
  const int points_max = static_cast<int>(run.cfg.get_int("points_max", 0, 0, 64));
  const auto cap = static_cast<std::int64_t>(run.cfg.get_int("cap", 1000000, 1, 100000000));
  const HyperbolicSplitting s = spectral_split(A);
  auto counts = run.csv("periodic_counts.csv", {"n", "count", "det_oracle", "eigen_oracle", "orbits", "prime_orbits"});
  std::vector<std::string> ph{"n", "index", "orbit"};
  for (int i = 0; i < A.dim(); ++i) ph.push_back("num" + std::to_string(i));
  ph.push_back("den");
  auto points = run.csv("periodic_points.csv", ph);
  json rows = json::array();
  for (int n = n_min; n <= n_max; ++n) {
    const PeriodicSet ps = run.timed("per_n " + std::to_string(n), [&] { return per_n_linear(A, n, cap); });
    BigMat P = power(BigMat::from(A.matrix()), n);
    for (int i = 0; i < P.rows; ++i) P(i, i) -= 1;
    const BigInt det = abs(bareiss_det(P));
    long double eig = 1.0L;
    for (const auto& l : s.eigenvalues()) eig *= std::abs(std::pow(std::complex<long double>(l.real(), l.imag()), n) - 1.0L);
    std::size_t prime = 0;
    for (const auto& o : ps.orbits)
      if (static_cast<int>(o.size()) == n) ++prime;
    counts.write_row({std::to_string(n), std::to_string(ps.count()), det.str(),
                      std::to_string(static_cast<long long>(std::llround(static_cast<double>(eig)))),
                      std::to_string(ps.orbits.size()), std::to_string(prime)});
    if (n <= points_max)
      for (std::size_t i = 0; i < ps.count(); ++i) {
        std::vector<std::string> row{std::to_string(n), std::to_string(i), std::to_string(ps.orbit_of[i])};
        for (int k = 0; k < A.dim(); ++k) row.push_back(std::to_string(ps.numerators[i][static_cast<std::size_t>(k)]));
        row.push_back(std::to_string(ps.den));
        points.write_row(row);
      }
    json inv = json::array();
    for (auto f : ps.invariant_factors) inv.push_back(f);
    rows.push_back({{"n", n}, {"count", ps.count()}, {"invariant_factors", inv}});
  }
  run.report = {{"periods", rows}};
}

// ---- shadow ----

void cmd_shadow(Run& run) {
  const ToralAutomorphism A = run.cfg.get_matrix("base_matrix", "2,1;1,1");
  const int count = static_cast<int>(run.cfg.get_int("pseudo_orbits", 100, 1, 100000));
  const int length = static_cast<int>(run.cfg.get_int("length", 400, 2, 1000000));
  const double r = run.cfg.get_double("defect", 0.01, 1e-12, 0.5);
  Rng rng(run.cfg.get_u64("seed", 1));
  const HyperbolicSplitting s = spectral_split(A);
  auto csv = run.csv("shadow.csv", {"instance", "defect", "max_deviation", "bound", "certified"});
  int certified = 0;
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const PseudoOrbit po = random_pseudo_orbit(A, s, length, r, rng);
    const ShadowResult res = shadow(A, s, po);
    const double bound = r / (1.0 - s.a()) + 1e-9;
    const bool ok = res.max_observed_deviation <= bound;
    certified += ok;
    worst = std::max(worst, res.max_observed_deviation / bound);
    csv.write_row({std::to_string(i), fmt(po.defect()), fmt(res.max_observed_deviation), fmt(bound), ok ? "1" : "0"});
  }
  run.report = {{"instances", count}, {"certified", certified}, {"worst_ratio", worst}, {"a", s.a()}};
}

// ---- semiconj ----

void cmd_semiconj(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const int side = static_cast<int>(run.cfg.get_int("grid_side", m.A.dim() == 2 ? 100 : 22, 1, 1000));
  const double precision = run.cfg.get_double("precision", 1e-9, 1e-14, 1e-2);
  const int window = static_cast<int>(run.cfg.get_int("window", 0, 0, 400));
  const SemiconjugacyField h = run.timed("build", [&] { return build_semiconjugacy(m.A, m.g, window, precision); });
  const auto grid = grid_points(side, m.A.dim());
  std::vector<double> res(grid.size()), disp(grid.size());
  run.timed("evaluate", [&] {
    parallel_for(grid.size(), [&](std::size_t i) {
      res[i] = h.residual(grid[i]);
      disp[i] = m.g->metric().distance(h.eval(grid[i]), grid[i]);
    });
    return 0;
  });
  auto header = coord_headers("x", m.A.dim());
  header.insert(header.begin(), "index");
  header.push_back("residual");
  header.push_back("displacement");
  auto csv = run.csv("semiconj.csv", header);
  double sup_res = 0.0, sup_disp = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<std::string> row{std::to_string(i)};
    append(row, grid[i]);
    row.push_back(fmt(res[i]));
    row.push_back(fmt(disp[i]));
    csv.write_row(row);
    sup_res = std::max(sup_res, res[i]);
    sup_disp = std::max(sup_disp, disp[i]);
  }
  run.report = {{"variant", to_string(m.params.variant)},
                {"window", h.window()},
                {"displacement_bound", h.displacement_bound()},
                {"C", h.C()},
                {"conjugacy_bound", h.conjugacy_bound()},
                {"sup_residual", sup_res},
                {"sup_displacement", sup_disp},
                {"grid_points", grid.size()}};
}

// ---- da-build ----

void cmd_da_build(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const auto samples = static_cast<std::size_t>(run.cfg.get_int("samples", 2000, 1, 10000000));
  const double c0 = run.timed("c0", [&] { return c0_distance(*m.g, samples); });
  const DerivativeCheck dc = run.timed("derivative", [&] { return derivative_check(*m.g, samples / 4 + 1); });
  auto header = std::vector<std::string>{"bump", "block", "sigma", "radius"};
  for (const auto& c : coord_headers("center", m.A.dim())) header.push_back(c);
  auto csv = run.csv("da_bumps.csv", header);
  for (std::size_t b = 0; b < m.g->bumps().size(); ++b) {
    const Bump& bp = m.g->bumps()[b];
    std::vector<std::string> row{std::to_string(b), std::to_string(bp.block), fmt(bp.sigma), fmt(bp.radius)};
    append(row, bp.center);
    csv.write_row(row);
  }
  run.report = {{"variant", to_string(m.params.variant)},
                {"c0_distance", c0},
                {"displacement_bound", m.g->displacement_bound()},
                {"derivative_max_error", dc.max_error},
                {"derivative_max_error_half_step", dc.max_error_half},
                {"derivative_ok", dc.ok},
                {"central_coordinates", m.g->central_coordinates()}};
}

// ---- verify-h ----

void cmd_verify_h(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const int n_max = static_cast<int>(run.cfg.get_int("n_max", 6, 1, 12));
  const int h3_n_max = static_cast<int>(run.cfg.get_int("h3_n_max", 8, 2, 12));
  const int scan_n = static_cast<int>(run.cfg.get_int("scan_n", 30, 1, 1000));
  const double tol = run.cfg.get_double("tol", 1e-4, 1e-12, 1.0);
  const auto samples = static_cast<std::size_t>(run.cfg.get_int("samples", 20000, 100, 10000000));
  const double precision = run.cfg.get_double("precision", 1e-9, 1e-14, 1e-2);
  const SemiconjugacyField h = run.timed("semiconjugacy", [&] { return SemiconjugacyField(m.g, precision); });
  const double alpha = m.split.expansivity_constant();
  const double two_cr = 2.0 * h.conjugacy_bound();
  const double scan_eps = run.cfg.get_double("scan_eps", h.conjugacy_bound() / 5.0, 1e-9, 1.0);

  // H1: class of the perturbation center and its separated-count envelope.
  const FiberClass cls = run.timed("class", [&] {
    return class_members(*m.g, m.params.center, alpha, 60, alpha / 10.0 * 0.05);
  });
  const auto scan = run.timed("h1 scan", [&] { return class_entropy_scan(*m.g, cls, scan_n, scan_eps, two_cr); });
  auto h1 = run.csv("verify_h1.csv", {"n", "count", "envelope", "within"});
  bool h1_ok = true;
  for (std::size_t i = 0; i < scan.size(); ++i) {
    h1.write_row({std::to_string(i + 1), std::to_string(scan[i].count.count), std::to_string(scan[i].envelope),
                  scan[i].within ? "1" : "0"});
    h1_ok = h1_ok && scan[i].within;
  }

  // H2: one refined g-orbit per f-orbit.
  auto h2 = run.csv("verify_h2.csv", {"n", "f_orbit", "length", "status", "residual", "iterations", "label"});
  json h2_summary = json::array();
  bool h2_ok = true;
  for (int n = 1; n <= n_max; ++n) {
    const PeriodicSet ps = per_n_linear(m.A, n);
    const auto fam = run.timed("h2 n=" + std::to_string(n), [&] { return per_n_da(*m.g, ps, h, 1e-10); });
    for (const auto& r : fam.orbits)
      h2.write_row({std::to_string(n), std::to_string(r.f_orbit), std::to_string(r.length), to_string(r.status),
                    fmt(r.residual), std::to_string(r.iterations), std::to_string(r.label)});
    const bool ok = fam.succeeded() == ps.orbits.size() && fam.injective(ps);
    h2_ok = h2_ok && ok;
    h2_summary.push_back({{"n", n}, {"f_orbits", ps.orbits.size()}, {"selected", fam.succeeded()},
                          {"max_residual", fam.max_residual()}, {"injective", fam.injective(ps)}});
  }

  // H3 surrogate: trivial-fiber mass.
  auto h3 = run.csv("verify_h3.csv", {"n", "fraction", "trivial", "total", "method"});
  std::vector<double> fractions;
  for (int n = 2; n <= h3_n_max; ++n) {
    const PeriodicSet ps = per_n_linear(m.A, n);
    const auto rep = run.timed("h3 n=" + std::to_string(n), [&] { return trivial_fiber_fraction(*m.g, h, ps, tol); });
    h3.write_row({std::to_string(n), fmt(rep.fraction), std::to_string(rep.trivial), std::to_string(rep.total),
                  rep.method});
    fractions.push_back(rep.fraction);
  }
  bool nondecreasing = true;
  for (std::size_t i = 1; i < fractions.size(); ++i) nondecreasing = nondecreasing && fractions[i] >= fractions[i - 1];

  json setup;
  if (m.g->bumps().empty()) {
    setup = {{"applicable", false}};
  } else {
    const H3Setup su = run.timed("setup", [&] { return verify_h3_setup(*m.g, h.displacement_bound(), samples); });
    const bool item1 = std::isfinite(su.sigma) && su.sigma > 0.0;
    const bool item2 = su.m >= 1;
    const bool item3 = su.rho > 0.0 && adapted_ball_volume(m.split, su.rho) <= 1.0 / (2.0 * su.m) + 1e-12;
    const bool item4 = 2.0 * su.C * su.r < su.rho / 2.0;
    setup = {{"applicable", true}, {"sigma", su.sigma}, {"m", su.m},    {"rho", su.rho},     {"C", su.C},
             {"r", su.r},          {"item1_ok", item1}, {"item2_ok", item2}, {"item3_ok", item3}, {"item4_ok", item4},
             {"ok", su.ok}};
  }
  run.report = {{"variant", to_string(m.params.variant)},
                {"h1", {{"class_size", cls.members.size()},
                        {"class_diameter", cls.diameter},
                        {"structure", to_string(cls.structure)},
                        {"epsilon", scan_eps},
                        {"two_Cr", two_cr},
                        {"within_envelope", h1_ok}}},
                {"h2", {{"ok", h2_ok}, {"periods", h2_summary}}},
                {"h3", {{"fractions", fractions}, {"nondecreasing", nondecreasing}, {"tol", tol}}},
                {"setup", setup}};
}

// ---- measure ----

void cmd_measure(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const int n_min = static_cast<int>(run.cfg.get_int("n_min", 1, 1, 12));
  const int n_max = static_cast<int>(run.cfg.get_int("n_max", 6, n_min + 2, 12));
  const int kmax = static_cast<int>(run.cfg.get_int("kmax", 3, 0, 8));
  const double precision = run.cfg.get_double("precision", 1e-9, 1e-14, 1e-2);
  const SemiconjugacyField h(m.g, precision);
  const int dim = m.A.dim();
  auto fh = std::vector<std::string>{"n", "kind"};
  for (const auto& c : coord_headers("k", dim)) fh.push_back(c);
  fh.push_back("re");
  fh.push_back("im");
  auto four = run.csv("measure_fourier.csv", fh);
  auto summ = run.csv("measure_summary.csv", {"n", "mu_atoms", "nu_atoms", "completeness", "pushforward_gap",
                                              "pushforward_distance", "invariance_defect"});
  std::vector<EmpiricalMeasure> nus;
  double worst_gap = 0.0;
  for (int n = n_min; n <= n_max; ++n) {
    const PeriodicSet ps = per_n_linear(m.A, n);
    const EmpiricalMeasure mu = mu_n(ps);
    const auto fam = run.timed("refine n=" + std::to_string(n), [&] { return per_n_da(*m.g, ps, h, 1e-10); });
    const EmpiricalMeasure nu = nu_n(fam);
    const EmpiricalMeasure push = pushforward(h, nu);
    const FourierDiagnostics Fm = fourier(mu, kmax), Fn = fourier(nu, kmax), Fp = fourier(push, kmax);
    const FourierDiagnostics Fg = fourier(pushforward(*m.g, nu), kmax);
    const double gap = max_mode_gap(Fm, Fp);
    worst_gap = std::max(worst_gap, gap);
    summ.write_row({std::to_string(n), std::to_string(mu.size()), std::to_string(nu.size()), fmt(nu.completeness),
                    fmt(gap), fmt(weak_star_distance(Fm, Fp)), fmt(max_mode_gap(Fn, Fg))});
    for (const auto& [kind, F] : {std::pair<const char*, const FourierDiagnostics*>{"mu", &Fm}, {"nu", &Fn}, {"push", &Fp}})
      for (std::size_t i = 0; i < F->modes.size(); ++i) {
        std::vector<std::string> row{std::to_string(n), kind};
        for (int k : F->modes[i]) row.push_back(std::to_string(k));
        row.push_back(fmt(F->coefficients[i].real()));
        row.push_back(fmt(F->coefficients[i].imag()));
        four.write_row(row);
      }
    nus.push_back(nu);
  }
  const ConvergenceReport conv = run.timed("convergence", [&] { return convergence_report(nus, kmax); });
  auto cc = run.csv("measure_convergence.csv", {"step", "distance", "max_nonzero_mode"});
  for (std::size_t i = 0; i < conv.distances.size(); ++i)
    cc.write_row({std::to_string(n_min + static_cast<int>(i)), fmt(conv.distances[i]), fmt(conv.max_nonzero_mode[i + 1])});
  run.report = {{"variant", to_string(m.params.variant)},
                {"kmax", kmax},
                {"max_pushforward_gap", worst_gap},
                {"convergence", {{"distances", conv.distances},
                                 {"monotone", conv.monotone},
                                 {"trend_slope", conv.trend_slope},
                                 {"final_to_first", conv.final_to_first}}}};
}

// ---- entropy ----

void write_estimate(CsvWriter& counts, CsvWriter& fits, const std::string& map, const EntropyEstimate& e) {
  for (const auto& c : e.counts)
    counts.write_row({map, fmt(c.epsilon), std::to_string(c.n), std::to_string(c.count), std::to_string(c.sample_size)});
  for (const auto& f : e.fits)
    fits.write_row({map, fmt(f.epsilon), fmt(f.slope), fmt(f.intercept), fmt(f.residual), std::to_string(f.n_lo),
                    std::to_string(f.n_hi), std::to_string(f.points)});
}

void cmd_entropy(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const int dim = m.A.dim();
  const auto samples = static_cast<std::size_t>(run.cfg.get_int("samples", dim == 2 ? 10000 : 20000, 10, 10000000));
  const int n_min = static_cast<int>(run.cfg.get_int("n_min", 1, 1, 1000));
  const int n_max = static_cast<int>(run.cfg.get_int("n_max", dim == 2 ? 16 : 8, n_min + 1, 1000));
  const auto eps = run.cfg.get_doubles("eps", dim == 2 ? std::vector<double>{0.02, 0.03, 0.04, 0.05}
                                                       : std::vector<double>{0.1, 0.15, 0.2, 0.25},
                                       1e-6, 0.5);
  const auto budget = static_cast<std::size_t>(run.cfg.get_int("budget", 200000000, 1000, 1000000000000LL));
  const int per_max = static_cast<int>(run.cfg.get_int("periodic_n_max", dim == 2 ? 10 : 6, 3, 40));
  const auto K = halton_points(samples, dim);
  const auto f = DAMap::linear(m.A);
  const EntropyEstimate ef = run.timed("h(f)", [&] { return h_top_estimate(*f, K, n_min, n_max, eps, budget); });
  const EntropyEstimate eg = m.g->bumps().empty()
                                 ? ef
                                 : run.timed("h(g)", [&] { return h_top_estimate(*m.g, K, n_min, n_max, eps, budget); });
  auto counts = run.csv("entropy_counts.csv", {"map", "epsilon", "n", "count", "sample_size"});
  auto fits = run.csv("entropy_fits.csv", {"map", "epsilon", "slope", "intercept", "residual", "n_lo", "n_hi", "points"});
  write_estimate(counts, fits, "f", ef);
  write_estimate(counts, fits, "g", eg);

  std::vector<std::pair<int, double>> per;
  for (int n = 1; n <= per_max; ++n) per.emplace_back(n, static_cast<double>(per_n_linear(m.A, n).count()));
  const GrowthRate gr = periodic_growth_rate(per);
  auto pg = run.csv("entropy_periodic.csv", {"n", "count", "rate"});
  for (std::size_t i = 0; i < per.size(); ++i)
    pg.write_row({std::to_string(per[i].first), fmt(per[i].second), fmt(gr.per_n[i].second)});

  double log_spectral = 0.0;
  for (const auto& l : m.split.eigenvalues()) log_spectral += std::max(0.0, std::log(std::abs(l)));

  std::vector<double> class_rates;
  double gap = 0.0;
  if (!m.g->bumps().empty()) {
    const SemiconjugacyField h(m.g, 1e-9);
    const double alpha = m.split.expansivity_constant();
    const FiberClass cls = class_members(*m.g, m.params.center, alpha, 60, alpha / 10.0 * 0.05);
    class_rates.push_back(class_growth_rate(
        class_entropy_scan(*m.g, cls, 30, h.conjugacy_bound() / 5.0, 2.0 * h.conjugacy_bound())));
    const PeriodicSet ps = per_n_linear(m.A, 3);
    const auto fam = per_n_da(*m.g, ps, h, 1e-10);
    gap = max_mode_gap(fourier(mu_n(ps), 3), fourier(pushforward(h, nu_n(fam)), 3));
  }
  const InequalityDashboard d = inequality_dashboard(ef.value, eg.value, class_rates, gap);
  run.report = {{"variant", to_string(m.params.variant)},
                {"h_f", ef.value},
                {"h_g", eg.value},
                {"epsilon_used_f", ef.epsilon_used},
                {"epsilon_used_g", eg.epsilon_used},
                {"periodic_growth_rate", gr.value},
                {"log_spectral_radius_sum", log_spectral},
                {"dashboard", {{"class_rate", d.class_rate},
                               {"pushforward_gap", d.pushforward_gap},
                               {"tolerance", d.tolerance},
                               {"bowen_slack", d.bowen_slack},
                               {"lw_gap", d.lw_gap},
                               {"lw_slack", d.lw_slack},
                               {"symmetric_gap", d.symmetric_gap},
                               {"violation", d.violation}}}};
}

// ---- suspend ----

void cmd_suspend(Run& run) {
  MapSetup m = map_setup(run.cfg);
  const int dim = m.A.dim();
  const double height = run.cfg.get_double("height", 1.0, 1e-6, 1e6);
  const int triples = static_cast<int>(run.cfg.get_int("triples", 100, 1, 1000000));
  const auto samples = static_cast<std::size_t>(run.cfg.get_int("samples", dim == 2 ? 10000 : 20000, 10, 10000000));
  const int n_max = static_cast<int>(run.cfg.get_int("n_max", dim == 2 ? 16 : 8, 2, 1000));
  const auto eps = run.cfg.get_doubles("eps", dim == 2 ? std::vector<double>{0.02, 0.03, 0.04, 0.05}
                                                       : std::vector<double>{0.1, 0.15, 0.2, 0.25},
                                       1e-6, 0.5);
  const int per_n = static_cast<int>(run.cfg.get_int("measure_n", dim == 2 ? 6 : 3, 1, 10));
  Rng rng(run.cfg.get_u64("seed", 1));
  const SuspensionSpace Y(m.g, height);

  auto flow_csv = run.csv("suspend_flow.csv", {"triple", "s", "t", "error"});
  double worst = 0.0;
  for (int i = 0; i < triples; ++i) {
    const FlowPoint p{rng.uniform_vec(dim), rng.uniform(0.0, height)};
    const double s = rng.uniform(-3.0, 3.0) * height, t = rng.uniform(-3.0, 3.0) * height;
    const double err = flow_distance(Y, flow(Y, flow(Y, p, s), t), flow(Y, p, s + t));
    worst = std::max(worst, err);
    flow_csv.write_row({std::to_string(i), fmt(s), fmt(t), fmt(err)});
  }

  const EntropyEstimate e = run.timed("h(g)", [&] {
    return h_top_estimate(*m.g, halton_points(samples, dim), 1, n_max, eps);
  });
  const SemiconjugacyField h(m.g, 1e-9);
  const auto fam = per_n_da(*m.g, per_n_linear(m.A, per_n), h, 1e-10);
  const EmpiricalMeasure nu = nu_n(fam);
  const FlowMeasure lift = lift_measure(Y, nu);
  auto inv = run.csv("suspend_invariance.csv", {"t", "defect"});
  for (double t : {0.25, 0.5, 1.0, 2.0}) inv.write_row({fmt(t * height), fmt(flow_invariance_defect(Y, lift, t * height, std::vector<int>(static_cast<std::size_t>(dim), 1)))});

  json rep = {{"height", height},
              {"normalization", lift.normalization},
              {"base_entropy", e.value},
              {"abramov_entropy", abramov_entropy(e.value, lift.normalization)},
              {"flow_property_max_error", worst},
              {"atoms", nu.size()}};
  if (height == 1.0) {
    const SuspensionReport r = suspension_mme_report(Y, nu, e.value);
    rep["report"] = {{"flow_entropy", r.flow_entropy}, {"base_marginal_exact", r.base_marginal_exact}};
  }
  run.report = rep;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ConfigError: return 2;
    case ErrorKind::BudgetExceeded: return 4;
    default: return 3;
  }
}

void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  out << j.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anosov and DA torus map experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out_dir = "out";
  int nthreads = 1;
  std::uint64_t seed = 0;
  bool verbose = false;
  app.add_option("--config", config_path, "config file (key = value)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", nthreads, "worker threads")->check(CLI::Range(1, 1024));
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (overrides config)");
  app.add_flag("--verbose", verbose, "log stages to stderr");

  const std::vector<std::pair<std::string, std::function<void(Run&)>>> commands{
      {"spectrum", cmd_spectrum}, {"periodic", cmd_periodic}, {"shadow", cmd_shadow},
      {"semiconj", cmd_semiconj}, {"da-build", cmd_da_build}, {"verify-h", cmd_verify_h},
      {"measure", cmd_measure},   {"entropy", cmd_entropy},   {"suspend", cmd_suspend}};
  for (const auto& [name, fn] : commands) app.add_subcommand(name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string command;
  std::function<void(Run&)> fn;
  for (const auto& [name, f] : commands)
    if (app.got_subcommand(name)) command = name, fn = f;

  Run run;
  run.out = out_dir;
  run.verbose = verbose;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::error_code ec;
    fs::create_directories(run.out, ec);
    require(!ec, ErrorKind::IoError, "cannot create output directory '" + out_dir + "'");
    set_threads(nthreads);
    if (!config_path.empty()) run.cfg = Config::load(config_path);
    if (*seed_opt) run.cfg.set("seed", std::to_string(seed));
    run.hash = run.cfg.hash();
    fn(run);
    const auto unused = run.cfg.unused();
    for (const auto& k : unused) std::cerr << "warning: unused config key '" << k << "'\n";
    json timings = json::object();
    for (const auto& [label, secs] : run.timings) timings[label] = secs;
    timings["total"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_json(run.out / (command + ".json"), run.report);
    run.outputs.push_back(command + ".json");
    write_json(run.out / "manifest.json", {{"command", command},
                                           {"version", kVersion},
                                           {"config_hash", run.hash},
                                           {"inputs", run.cfg.values()},
                                           {"threads", nthreads},
                                           {"unused_keys", unused},
                                           {"outputs", run.outputs},
                                           {"timings", timings}});
    if (verbose) std::cerr << run.report.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    const int rc = exit_code(e.kind());
    const json err = {{"command", command}, {"error", to_string(e.kind())}, {"message", e.what()},
                      {"exit_code", rc}, {"config_hash", run.hash}};
    std::cerr << err.dump() << "\n";
    std::error_code ec;
    if (fs::is_directory(run.out, ec)) write_json(run.out / "error.json", err);
    return rc;
  } catch (const std::exception& e) {
    const json err = {{"command", command}, {"error", "InternalError"}, {"message", e.what()}, {"exit_code", 3}};
    std::cerr << err.dump() << "\n";
    return 3;
  }
}
