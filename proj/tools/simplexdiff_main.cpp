// Command-line harness: parses experiment configs, runs the solvers and
// writes CSV artifacts with a provenance header (config hash + seed).
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "simplexdiff/config.hpp"
#include "simplexdiff/csv.hpp"
#include "simplexdiff/diagnostics.hpp"
#include "simplexdiff/errors.hpp"
#include "simplexdiff/fokker_planck_1d.hpp"
#include "simplexdiff/histogram.hpp"
#include "simplexdiff/jump_process.hpp"
#include "simplexdiff/langevin.hpp"
#include "simplexdiff/onsager.hpp"
#include "simplexdiff/parallel.hpp"
#include "simplexdiff/wright_fisher.hpp"

namespace sd = simplexdiff;

namespace {

struct Context {
  sd::ExperimentConfig cfg;
  std::string out_dir = ".";
  std::string prefix = "run";
  uint64_t seed = 0;
  uint64_t hash = 0;
  int threads = 1;
  std::string subcommand;

  std::string path(const std::string& name) const {
    return (std::filesystem::path(out_dir) / (prefix + "_" + name)).string();
  }
};

int resolve_threads(int flag_value, const sd::ExperimentConfig& cfg) {
  int t = flag_value;
  if (t < 0) t = static_cast<int>(cfg.integer("run.threads", -1));
  if (t < 0) {
    if (const char* env = std::getenv("SIMPLEXDIFF_THREADS")) t = std::atoi(env);
  }
  if (t < 0) t = 1;
  if (t == 0) t = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, t);
}

sd::ReactionNetwork make_network(const sd::ExperimentConfig& cfg, bool allow_raw) {
  const auto rows = cfg.matrix("network.q_rows");
  const sd::QMatrix q = sd::QMatrix::from_rows(rows);
  try {
    return sd::ReactionNetwork::build(q);
  } catch (const sd::Error& e) {
    if (allow_raw && e.kind() == "NotDetailedBalanced") {
      std::cerr << "note: network lacks detailed balance; running in raw mode\n";
      return sd::ReactionNetwork::build_raw(q);
    }
    throw;
  }
}

sd::MeanFunction make_mean(const sd::ExperimentConfig& cfg) {
  const std::string kind = cfg.text("model.mean", "kl");
  if (kind == "kl") return sd::MeanFunction::kl();
  if (kind == "geometric") return sd::MeanFunction::geometric();
  throw sd::ConfigError("model.mean must be \"kl\" or \"geometric\"");
}

sd::ThetaProfile make_profile(const sd::ExperimentConfig& cfg) {
  const std::string kind = cfg.text("model.theta", "sqrt");
  if (kind == "sqrt") return sd::ThetaProfile::sqrt_canonical();
  if (kind == "const")
    return sd::ThetaProfile::constant(cfg.number("model.theta_const", 1.0));
  if (kind == "network")
    return sd::ThetaProfile::from_network_d2(make_network(cfg, false), make_mean(cfg));
  throw sd::ConfigError("model.theta must be \"sqrt\", \"const\" or \"network\"");
}

sd::Potential make_potential(const sd::ExperimentConfig& cfg) {
  const std::string kind = cfg.text("model.potential", "zero");
  if (kind == "zero") return sd::Potential::zero();
  if (kind == "quadratic")
    return sd::Potential::quadratic(cfg.number("model.potential_a", 1.0),
                                    cfg.number("model.potential_center", 0.5));
  throw sd::ConfigError("model.potential must be \"zero\" or \"quadratic\"");
}

sd::SimplexState make_x0(const sd::ExperimentConfig& cfg, int d) {
  auto x0 = cfg.number_list("run.x0");
  if (x0.empty()) x0.assign(d, 1.0 / d);
  if (static_cast<int>(x0.size()) != d)
    throw sd::ConfigError("run.x0 has wrong dimension");
  return sd::SimplexState::create(x0);
}

void write_trajectory(const Context& ctx, const std::string& name, const sd::Vec& times,
                      const std::vector<sd::Vec>& states) {
  sd::CsvWriter csv(ctx.path(name), ctx.subcommand, ctx.hash, ctx.seed);
  std::vector<std::string> cols{"t"};
  for (size_t i = 0; i < states.front().size(); ++i)
    cols.push_back("x_" + std::to_string(i + 1));
  csv.columns(cols);
  std::vector<double> row(cols.size());
  for (size_t k = 0; k < times.size(); ++k) {
    row[0] = times[k];
    for (size_t i = 0; i < states[k].size(); ++i) row[i + 1] = states[k][i];
    csv.row(row);
  }
}

void write_histogram(const Context& ctx, const std::string& name,
                     const std::vector<int64_t>& counts) {
  sd::CsvWriter csv(ctx.path(name), ctx.subcommand, ctx.hash, ctx.seed);
  csv.columns({"bin_left", "bin_right", "count", "frequency"});
  int64_t total = 0;
  for (int64_t c : counts) total += c;
  const int b = static_cast<int>(counts.size());
  for (int i = 0; i < b; ++i)
    csv.row({static_cast<double>(i) / b, static_cast<double>(i + 1) / b,
             static_cast<double>(counts[i]),
             static_cast<double>(counts[i]) / static_cast<double>(total)});
}

void write_density(const Context& ctx, const std::string& name,
                   const sd::DensityGrid1D& p) {
  sd::CsvWriter csv(ctx.path(name), ctx.subcommand, ctx.hash, ctx.seed);
  csv.columns({"x_center", "p"});
  for (int m = 0; m < p.M; ++m) csv.row({p.cell_center(m), p.values[m]});
}

std::vector<int64_t> histogram_counts(const std::vector<double>& samples, int bins) {
  std::vector<int64_t> counts(bins, 0);
  for (double v : samples) {
    int b = static_cast<int>(v * bins);
    b = std::min(std::max(b, 0), bins - 1);
    ++counts[b];
  }
  return counts;
}

// --- subcommands ----------------------------------------------------------

int run_ssa(const Context& ctx) {
  const auto net = make_network(ctx.cfg, true);
  const int64_t N = ctx.cfg.integer("run.N", 0);
  if (N < 1) throw sd::ConfigError("ssa requires run.N >= 1");
  const double t_end = ctx.cfg.required_number("run.t_end");
  const int n_paths = static_cast<int>(ctx.cfg.integer("run.n_paths", 1));
  const auto x0 = make_x0(ctx.cfg, net.dim());

  const auto traj =
      sd::simulate_ssa(net, N, x0, t_end, sd::RngStream(ctx.seed, sd::rng_tags::kSsa, 0));
  std::vector<sd::Vec> states;
  states.reserve(traj.times.size());
  for (size_t k = 0; k < traj.times.size(); ++k) states.push_back(traj.state_at(traj.times[k]));
  write_trajectory(ctx, "ssa_trajectory.csv", traj.times, states);

  if (n_paths > 1) {
    const int bins = static_cast<int>(ctx.cfg.integer("run.bins", 50));
    std::vector<double> finals(n_paths);
    sd::parallel_chunks(n_paths, ctx.threads, [&](int lo, int hi) {
      for (int p = lo; p < hi; ++p) {
        const auto t = sd::simulate_ssa(
            net, N, x0, t_end, sd::RngStream(ctx.seed, sd::rng_tags::kSsa, p));
        finals[p] = t.state_at(t_end)[0];
      }
    });
    write_histogram(ctx, "ssa_hist_x1.csv", histogram_counts(finals, bins));
  }
  std::cout << "ssa: " << traj.times.size() - 1 << " records, N=" << N << "\n";
  return 0;
}

int run_cme(const Context& ctx) {
  const auto net = make_network(ctx.cfg, true);
  const int64_t N = ctx.cfg.integer("run.N", 0);
  if (N < 1) throw sd::ConfigError("cme requires run.N >= 1");
  const double t_end = ctx.cfg.required_number("run.t_end");
  const double dt = ctx.cfg.number("run.dt", 0.0);
  const auto x0 = make_x0(ctx.cfg, net.dim());
  sd::SimplexLattice lattice(net.dim(), N);
  std::vector<int64_t> l(net.dim());
  for (int i = 0; i < net.dim(); ++i) l[i] = std::llround(x0.x[i] * N);
  const auto p0 = sd::LatticeDistribution::point_mass(lattice, l);
  const auto res = sd::solve_cme(net, N, p0, t_end, dt);

  sd::CsvWriter csv(ctx.path("cme.csv"), ctx.subcommand, ctx.hash, ctx.seed);
  std::vector<std::string> cols;
  for (int i = 0; i < net.dim(); ++i) cols.push_back("l_" + std::to_string(i + 1));
  cols.push_back("p");
  csv.columns(cols);
  std::vector<double> row(cols.size());
  for (size_t s = 0; s < res.dist.probs.size(); ++s) {
    const auto state = lattice.unrank(s);
    for (int i = 0; i < net.dim(); ++i) row[i] = static_cast<double>(state[i]);
    row[net.dim()] = res.dist.probs[s];
    csv.row(row);
  }
  std::cout << "cme: " << res.dist.probs.size() << " states, mass=" << res.dist.mass()
            << ", clipped=" << res.clip_count << "\n";
  return 0;
}

int run_ode(const Context& ctx) {
  const auto net = make_network(ctx.cfg, false);
  const auto mf = make_mean(ctx.cfg);
  const double t_end = ctx.cfg.required_number("run.t_end");
  const double dt = ctx.cfg.number("run.dt", 1e-3);
  const auto traj = sd::solve_gradient_flow(net, mf, make_x0(ctx.cfg, net.dim()), t_end, dt);
  write_trajectory(ctx, "ode_trajectory.csv", traj.times, traj.states);
  std::cout << "ode: " << traj.times.size() << " steps\n";
  return 0;
}

int run_sde(const Context& ctx) {
  const auto net = make_network(ctx.cfg, false);
  const auto mf = make_mean(ctx.cfg);
  sd::EnsembleConfig ec;
  ec.base.h = ctx.cfg.required_number("model.h");
  ec.base.dt = ctx.cfg.number("run.dt", 1e-3);
  ec.base.t_end = ctx.cfg.required_number("run.t_end");
  ec.base.seed = ctx.seed;
  const std::string form = ctx.cfg.text("run.noise_form", "eigen");
  if (form != "eigen" && form != "edge")
    throw sd::ConfigError("run.noise_form must be \"eigen\" or \"edge\"");
  ec.base.noise_form = form == "eigen" ? sd::NoiseForm::kEigen : sd::NoiseForm::kEdge;
  ec.base.reflection = ctx.cfg.boolean("run.reflection", true);
  ec.base.divergence_term = ctx.cfg.boolean("run.divergence_term", true);
  ec.n_paths = static_cast<int>(ctx.cfg.integer("run.n_paths", 1));
  ec.n_bins = static_cast<int>(ctx.cfg.integer("run.bins", 50));
  ec.threads = ctx.threads;
  ec.snapshot_times = ctx.cfg.number_list("run.snapshot_times");
  const auto x0 = make_x0(ctx.cfg, net.dim());

  // Path 0 trajectory with a readable stride.
  sd::SdeConfig tc = ec.base;
  const long long steps = std::llround(tc.t_end / tc.dt);
  tc.record_stride = std::max(1ll, steps / 2000);
  const auto traj = sd::simulate_sde(net, mf, x0, tc);
  write_trajectory(ctx, "sde_trajectory.csv", traj.times, traj.states);

  const auto ens = sd::simulate_ensemble(net, mf, x0, ec);
  const size_t last = ens.snapshot_times.size() - 1;
  for (int i = 0; i < net.dim(); ++i)
    write_histogram(ctx, "sde_hist_x" + std::to_string(i + 1) + ".csv",
                    ens.histograms[last][i].counts);
  std::cout << "sde: " << ec.n_paths << " paths, reflections=" << ens.reflection_count;
  for (int i = 0; i < net.dim(); ++i)
    std::cout << " mean_x" << i + 1 << "=" << ens.mean[last][i];
  std::cout << "\n";
  return 0;
}

int run_fp(const Context& ctx) {
  const auto profile = make_profile(ctx.cfg);
  const auto pot = make_potential(ctx.cfg);
  const double h = ctx.cfg.required_number("model.h");
  const double omega = ctx.cfg.number("model.omega", 1.0);
  const int M = static_cast<int>(ctx.cfg.integer("run.grid", 400));
  sd::FpOptions opt;
  opt.t_end = ctx.cfg.required_number("run.t_end");
  opt.dt = ctx.cfg.number("run.dt", 0.0);
  opt.snapshot_times = ctx.cfg.number_list("run.snapshot_times");
  const auto res = sd::solve_fp(profile, pot, h, omega, sd::DensityGrid1D::uniform(M), opt);
  write_density(ctx, "fp_density.csv", res.density);
  for (size_t s = 0; s < res.snapshots.size(); ++s)
    write_density(ctx, "fp_density_snap" + std::to_string(s) + ".csv",
                  res.snapshots[s].second);
  std::cout << "fp: M=" << M << " mass=" << res.density.mass()
            << " clipped=" << res.clip_count << "\n";
  return 0;
}

int run_green(const Context& ctx) {
  const auto profile = make_profile(ctx.cfg);
  const double t = ctx.cfg.required_number("run.t");
  const int M = static_cast<int>(ctx.cfg.integer("run.grid", 50));
  const auto spec =
      sd::GreenFunctionSpec::build(profile, static_cast<int>(ctx.cfg.integer("run.k_max", 100000)));
  sd::CsvWriter csv(ctx.path("green.csv"), ctx.subcommand, ctx.hash, ctx.seed);
  csv.columns({"x", "z", "G"});
  for (int a = 0; a < M; ++a) {
    const double x = (a + 0.5) / M;
    for (int b = 0; b < M; ++b) {
      const double z = (b + 0.5) / M;
      csv.row({x, z, sd::green_function(spec, t, x, z)});
    }
  }
  std::cout << "green: " << M << "x" << M << " grid at t=" << t << "\n";
  return 0;
}

int run_wf(const Context& ctx) {
  const auto profile = make_profile(ctx.cfg);
  const auto tr = sd::build_transform(profile);
  const int M = static_cast<int>(ctx.cfg.integer("run.grid", 200));
  {
    sd::CsvWriter csv(ctx.path("wf_transform.csv"), ctx.subcommand, ctx.hash, ctx.seed);
    csv.columns({"x", "psi"});
    for (int m = 0; m <= M; ++m) {
      const double x = static_cast<double>(m) / M;
      csv.row({x, tr.psi(x)});
    }
  }
  const double t_end = ctx.cfg.required_number("run.t_end");
  const double dt = ctx.cfg.number("run.dt", 1e-4);
  const double y0 = ctx.cfg.number("run.y0", 0.5);
  const int n_paths = static_cast<int>(ctx.cfg.integer("run.n_paths", 1));
  const auto traj = sd::simulate_wf(tr.gamma, y0, t_end, dt,
                                    sd::RngStream(ctx.seed, sd::rng_tags::kWrightFisher, 0));
  {
    sd::CsvWriter csv(ctx.path("wf_trajectory.csv"), ctx.subcommand, ctx.hash, ctx.seed);
    csv.columns({"t", "y"});
    const long long stride = std::max<long long>(1, static_cast<long long>(traj.y.size()) / 2000);
    for (size_t k = 0; k < traj.y.size(); k += stride) csv.row({traj.times[k], traj.y[k]});
  }
  if (n_paths > 1) {
    const int bins = static_cast<int>(ctx.cfg.integer("run.bins", 50));
    std::vector<double> finals(n_paths);
    sd::parallel_chunks(n_paths, ctx.threads, [&](int lo, int hi) {
      for (int p = lo; p < hi; ++p)
        finals[p] = sd::simulate_wf_final(
            tr.gamma, y0, t_end, dt,
            sd::RngStream(ctx.seed, sd::rng_tags::kWrightFisher, p));
    });
    write_histogram(ctx, "wf_hist.csv", histogram_counts(finals, bins));
  }
  std::cout << "wf: gamma=" << tr.gamma << " paths=" << n_paths << "\n";
  return 0;
}

int run_geometry_check(const Context& ctx, int d_flag, int samples_flag) {
  std::vector<double> dims = ctx.cfg.number_list("run.dims");
  if (d_flag > 0) dims = {static_cast<double>(d_flag)};
  if (dims.empty()) dims = {4};
  int samples = samples_flag > 0
                    ? samples_flag
                    : static_cast<int>(ctx.cfg.integer("run.samples", 200));
  bool all_pass = true;
  for (double dd : dims) {
    const int d = static_cast<int>(dd);
    // Per-sample diagnostics (point, eigenvalues, det g, residuals).
    sd::CsvWriter csv(ctx.path("geometry_check_d" + std::to_string(d) + ".csv"),
                      ctx.subcommand, ctx.hash, ctx.seed);
    std::vector<std::string> cols;
    for (int i = 1; i <= d; ++i) cols.push_back("x_" + std::to_string(i));
    for (int l = 1; l < d; ++l) cols.push_back("lambda_" + std::to_string(l));
    for (const char* name : {"det_g", "eig_resid", "orthonormal_resid",
                             "mean_zero_resid", "sigma_resid", "row_sum_resid",
                             "det_rel_err", "metric_inv_resid"})
      cols.push_back(name);
    csv.columns(cols);
    sd::RngStream rng(ctx.seed, sd::rng_tags::kTests, static_cast<uint64_t>(d));
    const auto net = sd::random_db_network(d, rng);
    for (const auto& row : sd::geometry_samples(net, sd::MeanFunction::kl(), samples, rng)) {
      std::vector<double> vals(row.x.x);
      vals.insert(vals.end(), row.lambdas.begin(), row.lambdas.end());
      const auto& r = row.residuals;
      for (double v : {row.det_g, r.eig, r.orthonormal, r.mean_zero, r.sigma,
                       r.row_sum, r.det_rel, r.metric_inv})
        vals.push_back(v);
      csv.row(vals);
    }
    const auto rep = sd::geometry_check(d, samples, ctx.seed, sd::MeanFunction::kl());
    all_pass = all_pass && rep.pass;
    std::cout << "geometry-check d=" << d << ": " << (rep.pass ? "pass" : "FAIL")
              << " (eig " << rep.worst.eig << ", det " << rep.worst.det_rel << ")\n";
  }
  return all_pass ? 0 : 1;
}

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sd::ConfigError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    if (table.columns.empty()) {
      while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::atof(cell.c_str()));
    table.rows.push_back(std::move(row));
  }
  return table;
}

int run_compare(const Context& ctx, const std::string& samples_path,
                const std::string& density_path) {
  const CsvTable a = read_csv(samples_path);
  const CsvTable b = read_csv(density_path);
  if (b.columns.size() < 2 || b.columns[0] != "x_center")
    throw sd::ConfigError("density file must have columns x_center,p");
  sd::DensityGrid1D dens;
  dens.M = static_cast<int>(b.rows.size());
  for (const auto& r : b.rows) dens.values.push_back(r[1]);

  const double l1_threshold = ctx.cfg.number("compare.l1_threshold", 0.05);
  const double alpha = ctx.cfg.number("compare.alpha", 0.01);

  double l1 = 0.0;
  bool pass = false;
  if (!a.columns.empty() && a.columns[0] == "x_center") {
    // density-vs-density mode
    sd::DensityGrid1D other;
    other.M = static_cast<int>(a.rows.size());
    for (const auto& r : a.rows) other.values.push_back(r[1]);
    l1 = sd::l1_density_density(other, dens);
    pass = l1 <= l1_threshold;
    sd::CsvWriter csv(ctx.path("compare.csv"), ctx.subcommand, ctx.hash, ctx.seed);
    csv.columns({"l1", "l1_threshold", "pass"});
    csv.row({l1, l1_threshold, pass ? 1.0 : 0.0});
    std::cout << "compare (density-density): L1=" << l1 << " threshold=" << l1_threshold
              << (pass ? " pass" : " FAIL") << "\n";
  } else {
    if (a.columns.size() < 3 || a.columns[0] != "bin_left")
      throw sd::ConfigError("samples file must have histogram columns");
    std::vector<int64_t> counts;
    for (const auto& r : a.rows) counts.push_back(static_cast<int64_t>(r[2]));
    const auto rep = sd::compare_distributions(counts, dens, l1_threshold, alpha);
    pass = rep.pass_l1;
    sd::CsvWriter csv(ctx.path("compare.csv"), ctx.subcommand, ctx.hash, ctx.seed);
    csv.columns({"l1", "l1_threshold", "ks", "ks_critical", "sample_mean",
                 "sample_variance", "density_mean", "density_variance", "pass"});
    csv.row({rep.l1, rep.l1_threshold, rep.ks, rep.ks_critical, rep.sample_moments.mean,
             rep.sample_moments.variance, rep.density_moments.mean,
             rep.density_moments.variance, pass ? 1.0 : 0.0});
    std::cout << "compare: L1=" << rep.l1 << " (threshold " << l1_threshold << "), KS="
              << rep.ks << " (critical " << rep.ks_critical << ")"
              << (pass ? " pass" : " FAIL") << "\n";
  }
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simplexdiff: Wasserstein diffusion on the probability simplex"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir = ".", samples_path, density_path;
  int64_t seed_flag = -1;
  int threads_flag = -1, d_flag = 0, samples_flag = 0;
  double dt_flag = 0.0, t_end_flag = 0.0;
  int64_t paths_flag = 0, grid_flag = 0;

  app.add_option("--config", config_path, "experiment config (.toml or .json)");
  app.add_option("--seed", seed_flag, "override run.seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads_flag, "worker threads (0 = hardware)");
  app.add_option("--dt", dt_flag, "override run.dt");
  app.add_option("--t-end", t_end_flag, "override run.t_end");
  app.add_option("--paths", paths_flag, "override run.n_paths");
  app.add_option("--grid", grid_flag, "override run.grid");

  auto* c_ssa = app.add_subcommand("ssa", "exact jump-process sampling");
  auto* c_cme = app.add_subcommand("cme", "chemical master equation solve");
  auto* c_ode = app.add_subcommand("ode", "Onsager gradient-flow ODE");
  auto* c_sde = app.add_subcommand("sde", "Langevin diffusion on the simplex");
  auto* c_fp = app.add_subcommand("fp", "two-point Fokker-Planck solve");
  auto* c_green = app.add_subcommand("green", "Wasserstein Green function grid");
  auto* c_wf = app.add_subcommand("wf", "Wright-Fisher transform and sampling");
  auto* c_geo = app.add_subcommand("geometry-check", "metric identity diagnostics");
  c_geo->add_option("--d", d_flag, "single dimension to check");
  c_geo->add_option("--samples", samples_flag, "points per dimension");
  auto* c_cmp = app.add_subcommand("compare", "histogram/density comparison");
  c_cmp->add_option("--samples", samples_path, "histogram CSV")->required();
  c_cmp->add_option("--density", density_path, "density CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  try {
    Context ctx;
    if (!config_path.empty()) {
      ctx.cfg = sd::ExperimentConfig::load(config_path);
    } else {
      ctx.cfg = sd::ExperimentConfig::from_json({{"schema", sd::ExperimentConfig::kSchema}});
      const bool needs_config = !(c_geo->parsed() || c_cmp->parsed());
      if (needs_config) throw sd::ConfigError("--config is required for this subcommand");
    }
    if (dt_flag > 0.0) ctx.cfg.set("run.dt", dt_flag);
    if (t_end_flag > 0.0) ctx.cfg.set("run.t_end", t_end_flag);
    if (paths_flag > 0) ctx.cfg.set("run.n_paths", paths_flag);
    if (grid_flag > 0) ctx.cfg.set("run.grid", grid_flag);
    ctx.seed = seed_flag >= 0 ? static_cast<uint64_t>(seed_flag)
                              : static_cast<uint64_t>(ctx.cfg.integer("run.seed", 0));
    ctx.threads = resolve_threads(threads_flag, ctx.cfg);
    ctx.out_dir = out_dir;
    ctx.prefix = ctx.cfg.text("output.prefix", "run");
    if (ctx.cfg.has("output.dir") && out_dir == ".")
      ctx.out_dir = ctx.cfg.text("output.dir", ".");
    std::filesystem::create_directories(ctx.out_dir);
    ctx.hash = ctx.cfg.hash();

    if (c_ssa->parsed()) { ctx.subcommand = "ssa"; return run_ssa(ctx); }
    if (c_cme->parsed()) { ctx.subcommand = "cme"; return run_cme(ctx); }
    if (c_ode->parsed()) { ctx.subcommand = "ode"; return run_ode(ctx); }
    if (c_sde->parsed()) { ctx.subcommand = "sde"; return run_sde(ctx); }
    if (c_fp->parsed()) { ctx.subcommand = "fp"; return run_fp(ctx); }
    if (c_green->parsed()) { ctx.subcommand = "green"; return run_green(ctx); }
    if (c_wf->parsed()) { ctx.subcommand = "wf"; return run_wf(ctx); }
    if (c_geo->parsed()) {
      ctx.subcommand = "geometry-check";
      return run_geometry_check(ctx, d_flag, samples_flag);
    }
    if (c_cmp->parsed()) {
      ctx.subcommand = "compare";
      return run_compare(ctx, samples_path, density_path);
    }
  } catch (const sd::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const sd::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
