#include "mixspec/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mixspec/errors.hpp"
#include "mixspec/experiments.hpp"
#include "mixspec/io.hpp"
#include "mixspec/version.hpp"

namespace mixspec::cli {

namespace {

using nlohmann::json;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> sizes;
  std::optional<std::string> output;
  std::optional<int> threads;
  bool verbose = false;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file: " + path);
  json cfg;
  in >> cfg;
  return cfg;
}

void apply_threads(const Options& opts) {
  int threads = 0;
  if (opts.threads) {
    threads = *opts.threads;
  } else if (const char* env = std::getenv("MIXSPEC_THREADS")) {
    threads = std::atoi(env);
  }
  if (threads > 0) omp_set_num_threads(threads);
}

std::vector<SizePair> parse_sizes_override(const std::string& text) {
  std::vector<SizePair> sizes;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
    const std::size_t x = item.find('x');
    if (x == std::string::npos) throw ParameterError("sizes override expects NxN pairs");
    sizes.push_back({std::stoi(item.substr(0, x)), std::stoi(item.substr(x + 1))});
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return sizes;
}

ExperimentConfig experiment_config(const json& cfg, const Options& opts) {
  ExperimentConfig ec;
  ec.spec = ProcessSpec::from_json(cfg.at("process"));
  for (const auto& item : cfg.at("sizes"))
    ec.sizes.push_back({item.at(0).get<int>(), item.at(1).get<int>()});
  if (cfg.contains("replicates")) ec.replicates = cfg.at("replicates").get<int>();
  if (cfg.contains("z_grid")) {
    ec.z_grid.clear();
    for (const auto& item : cfg.at("z_grid"))
      ec.z_grid.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
  }
  if (cfg.contains("base_seed")) ec.base_seed = cfg.at("base_seed").get<std::uint64_t>();
  if (cfg.contains("blocks")) {
    const auto& b = cfg.at("blocks");
    if (b.contains("m_ladder")) ec.blocks.m_ladder = b.at("m_ladder").get<std::vector<int>>();
    if (b.contains("a_m")) ec.blocks.a_m = b.at("a_m").get<int>();
    if (b.contains("M_ladder")) ec.blocks.M_ladder = b.at("M_ladder").get<std::vector<double>>();
  }
  if (cfg.contains("gamma_lags")) ec.gamma_lags = cfg.at("gamma_lags").get<int>();
  if (cfg.contains("v")) ec.v = cfg.at("v").get<double>();
  if (cfg.contains("solver")) {
    const auto& s = cfg.at("solver");
    if (s.contains("quad_nodes")) ec.solver.quad_nodes = s.at("quad_nodes").get<int>();
    if (s.contains("tol")) ec.solver.tol = s.at("tol").get<double>();
    if (s.contains("max_iter")) ec.solver.max_iter = s.at("max_iter").get<int>();
  }
  if (cfg.contains("envelope_alpha")) ec.envelope_alpha = cfg.at("envelope_alpha").get<double>();

  if (opts.seed) ec.base_seed = *opts.seed;
  if (opts.sizes) ec.sizes = parse_sizes_override(*opts.sizes);
  ec.validate();
  return ec;
}

std::string output_dir(const json& cfg, const Options& opts) {
  if (opts.output) return *opts.output;
  if (cfg.contains("output_dir")) return cfg.at("output_dir").get<std::string>();
  throw ParameterError("config needs an output_dir (or use --output)");
}

int cmd_simulate(const json& cfg, const Options& opts) {
  const ProcessSpec spec = ProcessSpec::from_json(cfg.at("process"));
  const long length = cfg.at("length").get<long>();
  std::uint64_t seed = cfg.value("seed", 1ull);
  if (opts.seed) seed = *opts.seed;
  const long margin = cfg.value("margin", -1L);
  const Trajectory traj = sample_trajectory(spec, length, seed, margin);

  std::string out = opts.output ? *opts.output : cfg.at("output").get<std::string>();
  io::write_file_atomic(out, io::trajectory_csv(traj));
  if (opts.verbose) std::cerr << "wrote " << out << " (" << length << " values)\n";
  return 0;
}

int cmd_spectrum(const json& cfg, const Options& opts) {
  const auto& ens_json = cfg.at("ensemble");
  const std::string kind = ens_json.at("kind").get<std::string>();
  const EnsembleConfig ens{ens_json.at("N").get<int>(), ens_json.at("n").get<int>()};
  std::uint64_t seed = cfg.value("seed", 1ull);
  if (opts.seed) seed = *opts.seed;

  Eigen::MatrixXd gram;
  MatrixKind mk = MatrixKind::unspecified;
  if (kind == "Bn") {
    mk = MatrixKind::Bn_source;
    Trajectory traj;
    if (cfg.contains("trajectory_csv")) {
      traj.values = io::read_single_column_csv(cfg.at("trajectory_csv").get<std::string>(), "x");
      traj.spec = iid_spec(1.0);  // provenance unknown for imported samples
    } else {
      traj = sample_trajectory(ProcessSpec::from_json(cfg.at("process")),
                               static_cast<long>(ens.N) * ens.n, seed);
    }
    gram = build_Bn(traj, ens).gram;
  } else if (kind == "An") {
    mk = MatrixKind::An_source;
    gram = build_An(ProcessSpec::from_json(cfg.at("process")), ens, seed);
  } else if (kind == "Gn") {
    mk = MatrixKind::Gn_source;
    const ProcessSpec spec = ProcessSpec::from_json(cfg.at("process"));
    const int lags = cfg.value("gamma_lags", ens.N - 1);
    gram = build_Gn(autocovariance_closed_form(spec, lags), ens, seed);
  } else {
    throw ParameterError("ensemble kind must be Bn, An or Gn");
  }

  const GramSpectrum spectrum = eig_sym(gram, ens.n, mk);
  std::string out = opts.output ? *opts.output : cfg.at("output").get<std::string>();
  io::write_file_atomic(out, io::spectrum_csv(spectrum));
  if (opts.verbose) std::cerr << "wrote " << out << " (" << spectrum.eigenvalues.size() << " eigenvalues)\n";
  return 0;
}

int cmd_lsd(const json& cfg, const Options& opts) {
  const double c = cfg.at("c").get<double>();
  const double v = cfg.value("v", 1e-3);

  SpectralDensityFn f = [&] {
    if (cfg.contains("f_constant")) return SpectralDensityFn::constant(cfg.at("f_constant").get<double>());
    const ProcessSpec spec = ProcessSpec::from_json(cfg.at("process"));
    const int lags = cfg.value("gamma_lags", default_gamma_lags(spec));
    return SpectralDensityFn::from_autocov(autocovariance_closed_form(spec, lags));
  }();

  SolverOptions solver;
  if (cfg.contains("solver")) {
    const auto& s = cfg.at("solver");
    if (s.contains("quad_nodes")) solver.quad_nodes = s.at("quad_nodes").get<int>();
    if (s.contains("tol")) solver.tol = s.at("tol").get<double>();
    if (s.contains("max_iter")) solver.max_iter = s.at("max_iter").get<int>();
  }
  solver.warm_start = true;

  const double x_max = cfg.contains("x_max") ? cfg.at("x_max").get<double>()
                                             : 1.05 * support_upper_bound(f, c) + 10.0 * v;
  const auto grid = density_grid(x_max, v);
  const StieltjesSolution solution = solve_grid(f, c, grid, solver);
  const auto density = density_from_stieltjes(solution, v);

  const std::filesystem::path dir = output_dir(cfg, opts);
  io::write_file_atomic(dir / "stieltjes.csv", io::stieltjes_csv(solution));
  io::write_file_atomic(dir / "density.csv", io::density_csv(density));
  if (opts.verbose)
    std::cerr << "wrote " << (dir / "stieltjes.csv") << " and " << (dir / "density.csv") << '\n';
  return 0;
}

int cmd_experiment(const std::string& which, const json& cfg, const Options& opts) {
  const ExperimentConfig ec = experiment_config(cfg, opts);
  ExperimentReport report;
  if (which == "universality") report = run_universality(ec);
  else if (which == "concentrate") report = run_concentration(ec);
  else report = run_approximation_chain(ec);
  write_report(report, output_dir(cfg, opts));
  if (opts.verbose)
    std::cerr << report.experiment << " finished in " << report.wall_clock_seconds << " s\n";
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Gram-matrix spectra of dependent stationary processes"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Options opts;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_path, "JSON config file")->required();
    sub->add_option("--seed", opts.seed, "override the config seed");
    sub->add_option("--sizes", opts.sizes, "override sizes, e.g. 150x150,300x300");
    sub->add_option("--output", opts.output, "override the output file/directory");
    sub->add_option("--threads", opts.threads, "worker thread cap (default: MIXSPEC_THREADS or all cores)");
    sub->add_flag("-v,--verbose", opts.verbose, "progress output on stderr");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "sample a trajectory to CSV");
  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of one ensemble draw");
  CLI::App* lsd = app.add_subcommand("lsd", "solve the limiting law and invert to a density");
  CLI::App* universality = app.add_subcommand("universality", "B_n vs matched Gaussian ensemble");
  CLI::App* concentrate = app.add_subcommand("concentrate", "replicate spread of the Stieltjes transform");
  CLI::App* blocks = app.add_subcommand("blocks", "block/truncation approximation ladder");
  for (CLI::App* sub : {simulate, spectrum, lsd, universality, concentrate, blocks})
    add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    apply_threads(opts);
    const json cfg = load_config(opts.config_path);  // parse fully before any computation
    if (simulate->parsed()) return cmd_simulate(cfg, opts);
    if (spectrum->parsed()) return cmd_spectrum(cfg, opts);
    if (lsd->parsed()) return cmd_lsd(cfg, opts);
    if (universality->parsed()) return cmd_experiment("universality", cfg, opts);
    if (concentrate->parsed()) return cmd_experiment("concentrate", cfg, opts);
    if (blocks->parsed()) return cmd_experiment("blocks", cfg, opts);
    return 1;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mixspec::cli
