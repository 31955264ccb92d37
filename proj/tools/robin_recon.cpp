// Command-line front end for the Robin coefficient reconstruction studies.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "robin/config.hpp"
#include "robin/field_io.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kNonConvergence = 3,
  kSolverFailure = 4,
};

struct Options {
  std::string config;
  std::string data;
  std::string out;
  std::string trace;
  int threads = 1;
};

robin::ExperimentConfig load(const Options& opt) {
  return opt.config.empty() ? robin::parse_config("{}") : robin::load_config(opt.config);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw robin::ConfigError("cannot open output file '" + path + "'");
  return out;
}

void log_line(const std::string& msg) { std::cerr << msg << '\n'; }

int cmd_simulate(const Options& opt) {
  const auto cfg = load(opt);
  const robin::FemField q =
      robin::simulate_measurement(cfg.n_fine, cfg.data, cfg.a_true, cfg.omega, cfg.solver);
  robin::write_field_file(opt.out, q);
  const auto [lo, hi] = std::minmax_element(q.values.begin(), q.values.end());
  std::cout << "N_fine=" << cfg.n_fine << " min=" << robin::format_number(*lo)
            << " max=" << robin::format_number(*hi) << '\n';
  return kOk;
}

int cmd_reconstruct(const Options& opt) {
  const auto cfg = load(opt);
  robin::FemField data;
  try {
    data = robin::read_field_file(opt.data);
  } catch (const robin::FieldFormatError& e) {
    throw robin::ConfigError(std::string("--data: ") + e.what());
  }
  if (data.n % cfg.n != 0) {
    throw robin::ConfigError("config key 'mesh.n': " + std::to_string(cfg.n) +
                             " does not divide the data mesh " + std::to_string(data.n));
  }
  const robin::Mesh mesh = robin::Mesh::unit_square(cfg.n);
  robin::FemField q = data.n == cfg.n ? data : robin::restrict_fine_to_coarse(data, cfg.n);

  robin::InverseProblem problem(mesh, cfg.data, std::move(q), cfg.omega, cfg.solver);
  problem.set_threads(opt.threads);
  const auto result = robin::newton_reconstruct(problem, cfg.basis, cfg.x0, cfg.newton, &cfg.a_true);

  auto out = open_output(opt.out);
  const auto print_list = [&out](const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << robin::format_number(v[i]);
    out << '\n';
  };
  out << "converged=" << (result.converged ? "true" : "false") << '\n';
  out << "status=" << robin::to_string(result.status) << '\n';
  out << "iterations=" << result.iterations << '\n';
  out << "N=" << cfg.n << '\n';
  out << "h=" << robin::format_number(mesh.h()) << '\n';
  out << "j1=" << cfg.basis.j1 << '\n';
  out << "j2=" << cfg.basis.j2 << '\n';
  out << "alpha=";
  print_list(result.a_h.alpha());
  out << "beta=";
  print_list(result.a_h.beta());
  const double residual =
      result.trace.steps.empty() ? result.trace.initial_residual : result.trace.steps.back().residual_norm;
  out << "res_norm=" << robin::format_number(residual) << '\n';
  out << "c1_error=" << robin::format_number(robin::c1_distance(result.a_h, cfg.a_true)) << '\n';

  if (!opt.trace.empty()) {
    auto trace = open_output(opt.trace);
    robin::write_trace_csv(trace, result.trace);
  }
  std::cout << result.message << '\n';
  switch (result.status) {
    case robin::NewtonStatus::converged: return kOk;
    case robin::NewtonStatus::max_iterations:
    case robin::NewtonStatus::backtrack_exhausted: return kNonConvergence;
    case robin::NewtonStatus::singular_jacobian: return kSolverFailure;
  }
  return kSolverFailure;
}

robin::StudySetup setup_for(const robin::ExperimentConfig& cfg, const Options& opt) {
  robin::StudySetup setup = cfg.study_setup();
  setup.threads = opt.threads;
  setup.log = log_line;
  return setup;
}

int cmd_eoc(const Options& opt) {
  const auto cfg = load(opt);
  const auto setup = setup_for(cfg, opt);
  const auto rows = robin::run_eoc_study(setup, cfg.n_list);
  auto out = open_output(opt.out);
  robin::write_eoc_csv(out, rows);
  const bool any = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
  return any ? kOk : kNonConvergence;
}

int cmd_noise(const Options& opt) {
  const auto cfg = load(opt);
  const auto setup = setup_for(cfg, opt);
  const auto rows = robin::run_noise_study(setup, cfg.n_list, cfg.sigma_list, cfg.noise);
  auto out = open_output(opt.out);
  robin::write_noise_csv(out, rows);
  const bool any = std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.converged; });
  return any ? kOk : kNonConvergence;
}

int cmd_subspace(const Options& opt) {
  const auto cfg = load(opt);
  const auto setup = setup_for(cfg, opt);
  const auto result = robin::run_subspace_study(setup, cfg.n, cfg.subspace_pairs, cfg.subspace_samples);
  auto out = open_output(opt.out);
  robin::write_subspace_csv(out, result);
  const bool any = std::any_of(result.curves.begin(), result.curves.end(),
                               [](const auto& c) { return c.converged; });
  return any || result.curves.empty() ? kOk : kNonConvergence;
}

int cmd_condition(const Options& opt) {
  const auto cfg = load(opt);
  robin::StudySetup setup = cfg.condition_setup();
  setup.threads = opt.threads;
  const auto rows = robin::run_condition_study(
      setup, cfg.condition_n, robin::condition_schedule(cfg.condition_start, cfg.condition_end));
  auto out = open_output(opt.out);
  robin::write_condition_csv(out, rows);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-element Newton reconstruction of a Robin boundary coefficient"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--threads", opt.threads, "Worker threads for Jacobian columns (0 = auto)")
      ->check(CLI::NonNegativeNumber);

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Experiment configuration (JSON)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output file")->required();
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate measurement data on the fine mesh");
  add_common(simulate);
  auto* reconstruct = app.add_subcommand("reconstruct", "Run the Newton reconstruction");
  add_common(reconstruct);
  reconstruct->add_option("--data", opt.data, "Field file written by 'simulate'")->required();
  reconstruct->add_option("--trace", opt.trace, "Per-iteration trace CSV");
  auto* eoc = app.add_subcommand("eoc", "Convergence-order study over mesh.n_list");
  add_common(eoc);
  auto* noise = app.add_subcommand("noise", "Noisy-data study over mesh.n_list and noise.sigma");
  add_common(noise);
  auto* subspace = app.add_subcommand("subspace", "Reconstructions in truncated bases");
  add_common(subspace);
  auto* condition = app.add_subcommand("condition", "Jacobian condition numbers at the truth");
  add_common(condition);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(opt);
    if (reconstruct->parsed()) return cmd_reconstruct(opt);
    if (eoc->parsed()) return cmd_eoc(opt);
    if (noise->parsed()) return cmd_noise(opt);
    if (subspace->parsed()) return cmd_subspace(opt);
    if (condition->parsed()) return cmd_condition(opt);
  } catch (const robin::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const robin::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailure;
  }
  return kConfigError;
}
