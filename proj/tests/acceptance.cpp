// Acceptance suite: runs every acceptance criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/fokker_planck_1d.hpp"
#include "simplexdiff/histogram.hpp"
#include "simplexdiff/jump_process.hpp"
#include "simplexdiff/langevin.hpp"
#include "simplexdiff/onsager.hpp"
#include "simplexdiff/special_functions.hpp"
#include "simplexdiff/wright_fisher.hpp"

using namespace simplexdiff;

namespace {

constexpr uint64_t kSeed = 20240817;
int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %2d: %-34s %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
              name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

void run(int id, const char* name, const std::function<std::pair<bool, std::string>()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    std::tie(pass, detail) = fn();
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(id, name, pass, detail, secs);
}

ReactionNetwork sym2() {
  return ReactionNetwork::build(QMatrix::from_rows({{-1, 1}, {1, -1}}));
}

ReactionNetwork sym2_unit_omega() {
  return ReactionNetwork::build(QMatrix::from_rows({{-2, 2}, {2, -2}}));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// ---- criterion 1: geometry identities ------------------------------------
std::pair<bool, std::string> criterion_geometry() {
  bool pass = true;
  double worst_eig = 0.0, worst_det = 0.0;
  for (int d = 2; d <= 8; ++d) {
    const auto rep = geometry_check(d, 200, kSeed + d, MeanFunction::kl());
    pass = pass && rep.pass;
    worst_eig = std::max({worst_eig, rep.worst.eig, rep.worst.orthonormal,
                          rep.worst.mean_zero, rep.worst.sigma});
    worst_det = std::max(worst_det, rep.worst.det_rel);
  }
  return {pass, "eig residual " + fmt(worst_eig) + " (tol 1e-10), det_g rel " +
                    fmt(worst_det) + " (tol 1e-8)"};
}

// ---- criterion 2: gradient flow ------------------------------------------
std::pair<bool, std::string> criterion_gradient_flow() {
  const auto net = sym2();
  const auto mf = MeanFunction::kl();
  const auto traj =
      solve_gradient_flow(net, mf, SimplexState::create({0.99, 0.01}), 1.0, 1e-4);
  const double analytic = 0.5 + 0.49 * std::exp(-2.0);
  const double err = std::abs(traj.states.back()[0] - analytic);
  bool pass = err <= 1e-6;

  RngStream rng(kSeed, rng_tags::kTests, 1);
  int monotone = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;  // d in {2,...,5}
    const auto rnet = random_db_network(d, rng);
    const auto x0 = random_interior_state(d, rng);
    const auto t = solve_gradient_flow(rnet, mf, x0, 1.0, 1e-2);
    bool ok = true;
    double prev = free_energy(rnet, mf, SimplexState::create(t.states.front())).value;
    for (size_t k = 1; k < t.states.size(); ++k) {
      const double cur = free_energy(rnet, mf, SimplexState::create(t.states[k])).value;
      ok = ok && cur <= prev + 1e-12;
      prev = cur;
    }
    monotone += ok ? 1 : 0;
  }
  pass = pass && monotone == 20;
  return {pass, "analytic err " + fmt(err) + " (tol 1e-6), dissipation " +
                    std::to_string(monotone) + "/20 monotone"};
}

// ---- criterion 3: stationary HJE ------------------------------------------
std::pair<bool, std::string> criterion_hje() {
  RngStream rng(kSeed, rng_tags::kTests, 2);
  double worst = 0.0;
  for (int d : {2, 3, 4}) {
    const auto net = random_db_network(d, rng);
    auto kl_grad = [&](const Vec& x) {
      Vec g(x.size());
      for (size_t i = 0; i < x.size(); ++i) g[i] = std::log(x[i] / net.x_stat()[i]);
      return g;
    };
    for (int s = 0; s < 50; ++s) {
      const auto x = random_interior_state(d, rng);
      worst = std::max(worst, std::abs(hje_residual(net, kl_grad, x)));
    }
  }
  return {worst <= 1e-10, "max |residual| " + fmt(worst) + " (tol 1e-10)"};
}

// ---- criterion 4: SSA vs CME ----------------------------------------------
std::pair<bool, std::string> criterion_ssa_cme() {
  const auto net = sym2();
  bool pass = true;
  double worst_sigma = 0.0;
  for (int64_t n_mol : {1, 2}) {
    SimplexLattice lat(2, n_mol);
    std::vector<int64_t> c0(2, 0);
    c0[0] = n_mol;
    const int n_paths = 100000;
    const Vec times{0.5, 1.0, 2.0};
    std::vector<std::vector<double>> freq(times.size(),
                                          std::vector<double>(n_mol + 1, 0.0));
    for (int p = 0; p < n_paths; ++p) {
      const auto traj = simulate_ssa(net, n_mol, c0, 2.0,
                                     RngStream(kSeed + n_mol, rng_tags::kSsa, p));
      for (size_t k = 0; k < times.size(); ++k)
        freq[k][static_cast<size_t>(traj.counts_at(times[k])[0])] += 1.0;
    }
    auto p = LatticeDistribution::point_mass(lat, c0);
    double t_prev = 0.0;
    for (size_t k = 0; k < times.size(); ++k) {
      p = solve_cme(net, n_mol, p, times[k] - t_prev, 0.002).dist;
      t_prev = times[k];
      const Vec marg = lattice_marginal(p, 0);
      for (int64_t c = 0; c <= n_mol; ++c) {
        const double want = marg[static_cast<size_t>(c)];
        const double got = freq[k][static_cast<size_t>(c)] / n_paths;
        const double se = std::sqrt(std::max(want * (1.0 - want), 1e-12) / n_paths);
        const double sigmas = std::abs(got - want) / se;
        worst_sigma = std::max(worst_sigma, sigmas);
        pass = pass && sigmas <= 4.0;
      }
    }
  }
  return {pass, "worst deviation " + fmt(worst_sigma) + " SE (tol 4)"};
}

// ---- criterion 5: thermodynamic-limit trend --------------------------------
std::pair<bool, std::string> criterion_thermo_limit() {
  const auto net = sym2();
  const auto mf = MeanFunction::kl();
  Vec grid;
  for (int k = 0; k <= 10; ++k) grid.push_back(k / 10.0);
  const auto ode = solve_gradient_flow(net, mf, SimplexState::create({0.9, 0.1}), 1.0, 1e-3);
  std::vector<double> gaps;
  for (int64_t n_mol : {100, 1000, 10000}) {
    std::vector<int64_t> c0{static_cast<int64_t>(0.9 * n_mol),
                            static_cast<int64_t>(0.1 * n_mol)};
    const auto mean = ssa_ensemble_mean(net, n_mol, c0, grid, 1000, kSeed + n_mol, 2);
    double sup = 0.0;
    for (size_t k = 0; k < grid.size(); ++k) {
      const size_t idx = static_cast<size_t>(std::llround(grid[k] / 1e-3));
      sup = std::max(sup, std::abs(mean[k][0] - ode.states[idx][0]));
    }
    gaps.push_back(sup);
  }
  const bool pass = gaps[0] > gaps[1] && gaps[1] > gaps[2];
  return {pass, "sup gaps " + fmt(gaps[0]) + " > " + fmt(gaps[1]) + " > " + fmt(gaps[2])};
}

// ---- criterion 6: noise-form equivalence -----------------------------------
std::pair<bool, std::string> criterion_noise_forms() {
  RngStream rng(kSeed, rng_tags::kTests, 3);
  bool pass = true;
  double worst_ratio = 0.0;
  for (int d : {2, 3}) {
    const auto net = random_db_network(d, rng);
    const auto mf = MeanFunction::kl();
    const auto x0 = SimplexState::create(Vec(d, 1.0 / d));
    EnsembleConfig ec;
    ec.base.h = 0.05;
    ec.base.dt = 1e-4;
    ec.base.t_end = 1.0;
    ec.n_paths = 20000;
    ec.threads = 2;
    ec.snapshot_times = {1.0};
    ec.base.noise_form = NoiseForm::kEigen;
    ec.base.seed = kSeed + 10 + d;
    const auto eigen = simulate_ensemble(net, mf, x0, ec);
    ec.base.noise_form = NoiseForm::kEdge;
    ec.base.seed = kSeed + 20 + d;
    const auto edge = simulate_ensemble(net, mf, x0, ec);
    const double crit = ks_critical_two_sample(ec.n_paths, ec.n_paths);
    for (int i = 0; i < d; ++i) {
      Vec a(ec.n_paths), b(ec.n_paths);
      for (int p = 0; p < ec.n_paths; ++p) {
        a[p] = eigen.sample(p, 0, i);
        b[p] = edge.sample(p, 0, i);
      }
      const double ks = ks_two_sample(a, b);
      worst_ratio = std::max(worst_ratio, ks / crit);
      pass = pass && ks < crit;
    }
  }
  return {pass, "worst KS/critical " + fmt(worst_ratio) + " (tol < 1)"};
}

// ---- criterion 7: closed-form reproduction ---------------------------------
std::pair<bool, std::string> criterion_closed_forms() {
  const auto profile = ThetaProfile::sqrt_canonical();
  const auto net = sym2_unit_omega();
  const auto geo = MeanFunction::geometric();

  // (a) stationary histogram vs pi = x^{-1/4}(1-x)^{-1/4}/B(3/4,3/4).
  // dt is fixed so that reflections stay below 1% of steps (they scale
  // like sqrt(dt); 2.5e-4 sits right at the 1% line).
  EnsembleConfig ec;
  ec.base.h = 1.0;
  ec.base.dt = 2e-4;
  ec.base.t_end = 10.0;
  ec.base.seed = kSeed + 7;
  ec.n_paths = 100000;
  ec.n_bins = 50;
  ec.threads = 2;
  ec.snapshot_times = {10.0};
  const auto ens = simulate_ensemble(net, geo, SimplexState::create({0.5, 0.5}), ec);
  const double refl_rate =
      static_cast<double>(ens.reflection_count) /
      (static_cast<double>(ec.n_paths) * std::llround(ec.base.t_end / ec.base.dt));
  const auto pi = stationary_density(profile, Potential::zero(), 1.0, 400);
  const double l1_sde = l1_histogram_density(ens.histograms[0][0].counts, pi);
  bool pass = l1_sde <= 0.05 && refl_rate < 0.01;

  // (b) FP solver vs Green-function evolution at M = 400 (and the M = 1600
  // refinement of the same comparison).
  const auto spec = GreenFunctionSpec::build(profile);
  FpOptions opt;
  opt.t_end = 0.3;
  const auto fp400 =
      solve_fp(profile, Potential::zero(), 1.0, 1.0, DensityGrid1D::uniform(400), opt);
  const auto green400 = evolve_via_green(spec, DensityGrid1D::uniform(400), 0.3);
  const double l1_400 = l1_density_density(fp400.density, green400);
  const auto fp1600 =
      solve_fp(profile, Potential::zero(), 1.0, 1.0, DensityGrid1D::uniform(1600), opt);
  const auto green1600 = evolve_via_green(spec, DensityGrid1D::uniform(1600), 0.3);
  const double l1_1600 = l1_density_density(fp1600.density, green1600);
  pass = pass && l1_400 <= 2e-3 && l1_1600 <= 5e-4;

  // (c) slowest decay rate from the first-mode projection, fitted on the FP
  // solver output from a one-sided initial density.
  const int m_cells = 400;
  DensityGrid1D p0;
  p0.M = m_cells;
  p0.values.assign(m_cells, 0.0);
  for (int m = 0; m < m_cells / 2; ++m) p0.values[m] = 2.0;
  const auto wc = wasserstein_coordinate(profile);
  Vec y(m_cells);
  for (int m = 0; m < m_cells; ++m) y[m] = wc.y((m + 0.5) / m_cells);
  const auto pi_disc = stationary_density(profile, Potential::zero(), 1.0, m_cells);
  FpOptions fit_opt;
  fit_opt.t_end = 0.5;
  fit_opt.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5};
  const auto fit_run = solve_fp(profile, Potential::zero(), 1.0, 1.0, p0, fit_opt);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [t, snap] : fit_run.snapshots) {
    double proj = 0.0;
    for (int m = 0; m < m_cells; ++m)
      proj += (snap.values[m] - pi_disc.values[m]) * std::cos(M_PI * y[m]) / m_cells;
    const double ly = std::log(std::abs(proj));
    sx += t; sy += ly; sxx += t * t; sxy += t * ly;
  }
  const double n_fit = static_cast<double>(fit_run.snapshots.size());
  const double slope = (n_fit * sxy - sx * sy) / (n_fit * sxx - sx * sx);
  const double want_rate = (M_PI / spec.Z) * (M_PI / spec.Z);
  const double rate_rel = std::abs(-slope - want_rate) / want_rate;
  pass = pass && rate_rel <= 0.02;

  return {pass, "L1(sde,pi) " + fmt(l1_sde) + " (tol 0.05, refl " + fmt(refl_rate) +
                    "), L1(fp,green) " + fmt(l1_400) + "/" + fmt(l1_1600) +
                    " (tol 2e-3/5e-4), rate rel err " + fmt(rate_rel) + " (tol 0.02)"};
}

// ---- criterion 8: Wright-Fisher correspondence -----------------------------
std::pair<bool, std::string> criterion_wright_fisher() {
  const auto profile = ThetaProfile::sqrt_canonical();
  const auto tr = build_transform(profile);

  const auto rep = pushforward_check(profile, tr, 0.3, 20000, 0.5, 2.5e-4, kSeed + 8, 2);

  double worst_res = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.02 + 0.96 * i / 99.0;
    worst_res = std::max(worst_res, std::abs(wf_defining_residual(tr, x)));
  }

  const double a = 0.5 * std::sqrt(tr.gamma);
  auto integrand = [&](double r) { return 1.0 / std::sqrt(profile.theta(r)); };
  auto diff = [&](double x) {
    const double w = quad_singular(integrand, x, profile.certificate, 1e-12);
    const double psi = std::sin(a * w) * std::sin(a * w);
    const double psi_prime = a * std::sin(2.0 * a * w) / std::sqrt(profile.theta(x));
    const double pushed = psi_prime / (M_PI * std::sqrt(psi * (1.0 - psi)));
    return std::abs(pushed - 1.0 / (tr.Z * std::sqrt(profile.theta(x))));
  };
  const double l1_stat = quad_singular(diff, 1.0, profile.certificate, 1e-9);

  const bool pass = rep.pass && worst_res <= 1e-8 && l1_stat <= 1e-6;
  return {pass, "KS " + fmt(rep.ks_statistic) + " (crit " + fmt(rep.ks_critical) +
                    "), residual " + fmt(worst_res) + " (tol 1e-8), stationary L1 " +
                    fmt(l1_stat) + " (tol 1e-6)"};
}

// ---- criterion 9: special functions ----------------------------------------
std::pair<bool, std::string> criterion_special_functions() {
  double worst = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double x = static_cast<double>(i) / 1001.0;
    worst = std::max(worst,
                     std::abs(incomplete_beta(x, 0.5, 0.5) - 2.0 * std::asin(std::sqrt(x))));
  }
  // Independent gamma oracle (Spouge a = 16, a Lanczos-family series).
  auto gamma_oracle = [](double z) {
    constexpr int a = 16;
    const double zm = z - 1.0;
    double sum = std::sqrt(2.0 * M_PI);
    double factorial = 1.0;
    for (int k = 1; k < a; ++k) {
      if (k > 1) factorial *= k - 1;
      sum += ((k % 2 == 1) ? 1.0 : -1.0) / factorial *
             std::pow(static_cast<double>(a - k), k - 0.5) *
             std::exp(static_cast<double>(a - k)) / (zm + k);
    }
    return std::pow(zm + a, zm + 0.5) * std::exp(-(zm + a)) * sum;
  };
  const double oracle = gamma_oracle(0.75) * gamma_oracle(0.75) / gamma_oracle(1.5);
  const double quad = quad_singular(
      [](double t) { return std::pow(t, -0.25) * std::pow(1.0 - t, -0.25); }, 1.0,
      QuadCertificate::kSqrtEndpoint, 1e-12);
  const double beta_err = std::abs(quad - oracle);
  const bool pass = worst <= 1e-12 && beta_err <= 1e-10;
  return {pass, "arcsine gap " + fmt(worst) + " (tol 1e-12), beta route gap " +
                    fmt(beta_err) + " (tol 1e-10)"};
}

// ---- criterion 10: conservation and reproducibility ------------------------
std::pair<bool, std::string> criterion_conservation() {
  bool pass = true;
  std::string detail;

  // Simplex-sum conservation along SDE paths, both noise forms.
  RngStream rng(kSeed, rng_tags::kTests, 4);
  const auto net3 = random_db_network(3, rng);
  double worst_sum = 0.0;
  for (auto form : {NoiseForm::kEigen, NoiseForm::kEdge}) {
    SdeConfig cfg;
    cfg.h = 0.05;
    cfg.dt = 1e-3;
    cfg.t_end = 1.0;
    cfg.noise_form = form;
    cfg.seed = kSeed + 30;
    const auto traj =
        simulate_sde(net3, MeanFunction::kl(), SimplexState::create(Vec(3, 1.0 / 3.0)), cfg);
    for (const auto& s : traj.states) {
      double sum = 0.0;
      for (double v : s) sum += v;
      worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
    }
  }
  pass = pass && worst_sum <= 1e-12;

  // SSA integer conservation and CME/FP mass conservation.
  const auto net = sym2();
  const auto traj = simulate_ssa(net, 500, std::vector<int64_t>{400, 100}, 2.0,
                                 RngStream(kSeed, rng_tags::kSsa, 99));
  for (const auto& c : traj.counts) pass = pass && (c[0] + c[1] == 500);

  auto p = LatticeDistribution::point_mass(SimplexLattice(2, 30), {30, 0});
  double worst_mass = 0.0;
  for (int chunk = 0; chunk < 5; ++chunk) {
    p = solve_cme(net, 30, p, 0.2, 0.0).dist;
    worst_mass = std::max(worst_mass, std::abs(p.mass() - 1.0));
  }
  auto dens = DensityGrid1D::uniform(128);
  const auto profile = ThetaProfile::sqrt_canonical();
  for (int chunk = 0; chunk < 5; ++chunk) {
    FpOptions opt;
    opt.t_end = 0.05;
    dens = solve_fp(profile, Potential::zero(), 1.0, 1.0, dens, opt).density;
    worst_mass = std::max(worst_mass, std::abs(dens.mass() - 1.0));
  }
  pass = pass && worst_mass <= 1e-12;

  // Deterministic parallel ensembles: identical seeds, identical samples.
  EnsembleConfig ec;
  ec.base.h = 0.1;
  ec.base.dt = 1e-3;
  ec.base.t_end = 0.5;
  ec.base.seed = kSeed + 40;
  ec.n_paths = 500;
  ec.threads = 2;
  ec.snapshot_times = {0.5};
  const auto run1 = simulate_ensemble(net3, MeanFunction::kl(),
                                      SimplexState::create(Vec(3, 1.0 / 3.0)), ec);
  const auto run2 = simulate_ensemble(net3, MeanFunction::kl(),
                                      SimplexState::create(Vec(3, 1.0 / 3.0)), ec);
  pass = pass && run1.samples == run2.samples;

  // CLI level: identical seeds give byte-identical CSV artifacts.
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "simplexdiff_acceptance_csv";
  fs::remove_all(dir);
  fs::create_directories(dir / "a");
  fs::create_directories(dir / "b");
  const std::string cli = SIMPLEXDIFF_CLI_PATH;
  bool cli_ok = true;
  auto shell = [&](const std::string& cmd) {
    return WEXITSTATUS(std::system((cmd + " >/dev/null 2>&1").c_str()));
  };
  // Inline config so the acceptance binary does not depend on repo paths.
  const fs::path cfg_path = dir / "wf.toml";
  std::ofstream(cfg_path.string())
      << "schema = \"simplexdiff-1\"\n[model]\ntheta = \"sqrt\"\nh = 1.0\n"
      << "[run]\nseed = 3\nt_end = 0.5\ndt = 1e-3\nn_paths = 200\n";
  cli_ok = cli_ok && shell(cli + " wf --config " + cfg_path.string() + " --out " +
                           (dir / "a").string()) == 0;
  cli_ok = cli_ok && shell(cli + " wf --config " + cfg_path.string() + " --out " +
                           (dir / "b").string()) == 0;
  for (const char* name : {"run_wf_transform.csv", "run_wf_trajectory.csv", "run_wf_hist.csv"}) {
    std::ifstream fa((dir / "a" / name).string(), std::ios::binary);
    std::ifstream fb((dir / "b" / name).string(), std::ios::binary);
    std::stringstream sa, sb;
    sa << fa.rdbuf();
    sb << fb.rdbuf();
    cli_ok = cli_ok && !sa.str().empty() && sa.str() == sb.str();
  }
  pass = pass && cli_ok;

  return {pass, "sum err " + fmt(worst_sum) + ", mass err " + fmt(worst_mass) +
                    " (tol 1e-12), ensembles identical: " +
                    (run1.samples == run2.samples ? "yes" : "no") +
                    ", CSV byte-identical: " + (cli_ok ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);
  auto want = [&](int id) { return only == 0 || only == id; };

  std::printf("simplexdiff acceptance suite (seed %llu)\n",
              static_cast<unsigned long long>(kSeed));
  if (want(1)) run(1, "geometry identities", criterion_geometry);
  if (want(2)) run(2, "gradient-flow correctness", criterion_gradient_flow);
  if (want(3)) run(3, "stationary HJE", criterion_hje);
  if (want(4)) run(4, "SSA vs CME marginals", criterion_ssa_cme);
  if (want(5)) run(5, "thermodynamic-limit trend", criterion_thermo_limit);
  if (want(6)) run(6, "noise-form equivalence", criterion_noise_forms);
  if (want(7)) run(7, "closed-form reproduction", criterion_closed_forms);
  if (want(8)) run(8, "Wright-Fisher correspondence", criterion_wright_fisher);
  if (want(9)) run(9, "special functions", criterion_special_functions);
  if (want(10)) run(10, "conservation and reproducibility", criterion_conservation);
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
