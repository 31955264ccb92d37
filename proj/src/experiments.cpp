#include "robin/experiments.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace robin {

RobinParameter paper_truth() {
  return RobinParameter({6, 6}, {10.0, 1.0, -0.5, 2.0, 1.0, -0.5}, {0.2, 1.0, -0.5, 2.0, 1.0, -0.5});
}

RobinParameter paper_truth_extended() {
  return RobinParameter({8, 8}, {10.0, 1.0, -0.5, 2.0, 1.0, -0.5, 1.0, 1.0},
                        {0.2, 1.0, -0.5, 2.0, 1.0, -0.5, 1.0, 1.0});
}

// ---------------------------------------------------------------------------
// Data

double noise_value(const NoiseSpec& spec, Point2 x) {
  double sum = 0.0;
  for (const Disc& d : spec.discs.discs) {
    const double dx = x.x - d.center.x;
    const double dy = x.y - d.center.y;
    if (!(dx * dx + dy * dy < d.radius * d.radius)) continue;
    const std::complex<double> phase = dx * spec.z[0] + dy * spec.z[1];
    sum += std::exp(std::complex<double>(0.0, 1.0) * phase).real();
  }
  return spec.sigma * sum;
}

FemField simulate_measurement(int n_fine, const ProblemData& data, const RobinParameter& a_true,
                              const SubdomainSpec& omega, LinearSolverOptions solver) {
  if (n_fine < 64) {
    throw std::invalid_argument("simulate_measurement: data mesh needs N_fine >= 64, got " +
                                std::to_string(n_fine));
  }
  validate(omega);
  const Mesh mesh = Mesh::unit_square(n_fine);
  return solve_forward(RobinSystem(mesh, a_true, solver), data);
}

FemField apply_noise(const FemField& q, const NoiseSpec& spec) {
  FemField out = q;
  if (spec.sigma == 0.0) return out;
  for (int j = 0; j <= q.n; ++j) {
    for (int i = 0; i <= q.n; ++i) {
      const Point2 x{static_cast<double>(i) / q.n, static_cast<double>(j) / q.n};
      out.values[static_cast<std::size_t>(j) * (q.n + 1) + i] += noise_value(spec, x);
    }
  }
  return out;
}

int data_mesh_for(const StudySetup& setup, int n) {
  const int n_fine = setup.n_fine > 0 ? setup.n_fine : setup.fine_factor * n;
  if (n_fine % n != 0) {
    throw std::invalid_argument("mesh N=" + std::to_string(n) + " does not divide data mesh " +
                                std::to_string(n_fine));
  }
  return n_fine;
}

std::vector<double> initial_guess(const StudySetup& setup, const BasisSpec& spec) {
  if (setup.x0.empty()) return RobinParameter::constant(spec, 1.0).coefficients();
  const auto x0 = RobinParameter::from_coefficients(setup.spec, setup.x0);
  return x0.resized(spec).coefficients();
}

const FemField& MeasurementBank::fine(int n_fine) {
  auto it = fine_.find(n_fine);
  if (it == fine_.end()) {
    it = fine_
             .emplace(n_fine, simulate_measurement(n_fine, setup_->data, setup_->a_true,
                                                   setup_->omega, setup_->solver))
             .first;
  }
  return it->second;
}

FemField MeasurementBank::on_mesh(int n) {
  const int n_fine = data_mesh_for(*setup_, n);
  const FemField& q = fine(n_fine);
  return n_fine == n ? q : restrict_fine_to_coarse(q, n);
}

// ---------------------------------------------------------------------------
// Studies

CellResult reconstruct_cell(const StudySetup& setup, int n, const Mesh& mesh, const FemField& q,
                            const BasisSpec& spec) {
  InverseProblem problem(mesh, setup.data, q, setup.omega, setup.solver);
  problem.set_threads(setup.threads);
  const auto x0 = initial_guess(setup, spec);
  ReconstructionResult r = newton_reconstruct(problem, spec, x0, setup.newton, &setup.a_true);

  CellResult cell;
  cell.n = n;
  cell.h = mesh.h();
  cell.converged = r.converged;
  cell.status = r.status;
  cell.iterations = r.iterations;
  cell.error = c1_distance(r.a_h, setup.a_true);
  cell.a_h = std::move(r.a_h);
  cell.trace = std::move(r.trace);
  if (setup.log) {
    setup.log("N=" + std::to_string(n) + " (" + std::to_string(spec.j1) + "," +
              std::to_string(spec.j2) + "): " + r.message + ", c1 error " +
              format_number(cell.error));
  }
  return cell;
}

void fill_eoc(std::vector<EocRow>& rows) {
  const EocRow* prev = nullptr;
  for (EocRow& row : rows) {
    row.eoc.reset();
    if (!row.error) continue;
    if (prev) row.eoc = std::log(*prev->error / *row.error) / std::log(prev->h / row.h);
    prev = &row;
  }
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& error) {
  if (h.size() != error.size() || h.size() < 2) {
    throw std::invalid_argument("loglog_slope: need at least two (h, error) pairs");
  }
  const double m = static_cast<double>(h.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]);
    const double y = std::log(error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<EocRow> run_eoc_study(const StudySetup& setup, const std::vector<int>& n_list,
                                  MeasurementBank* bank, std::vector<CellResult>* cells) {
  MeasurementBank local(setup);
  MeasurementBank& data = bank ? *bank : local;
  std::vector<EocRow> rows;
  for (int n : n_list) {
    const Mesh mesh = Mesh::unit_square(n);
    CellResult cell = reconstruct_cell(setup, n, mesh, data.on_mesh(n), setup.spec);
    EocRow row;
    row.n = n;
    row.h = cell.h;
    row.iterations = cell.iterations;
    row.converged = cell.converged;
    if (cell.converged) row.error = cell.error;
    rows.push_back(row);
    if (cells) cells->push_back(std::move(cell));
  }
  fill_eoc(rows);
  return rows;
}

std::vector<NoiseRow> run_noise_study(const StudySetup& setup, const std::vector<int>& n_list,
                                      const std::vector<double>& sigma_list,
                                      const NoiseSpec& noise_template, MeasurementBank* bank) {
  MeasurementBank local(setup);
  MeasurementBank& data = bank ? *bank : local;
  std::vector<NoiseRow> rows;
  for (double sigma : sigma_list) {
    if (!(sigma >= 0.0)) throw std::invalid_argument("noise sigma must be non-negative");
  }
  for (int n : n_list) {
    const Mesh mesh = Mesh::unit_square(n);
    const FemField q = data.on_mesh(n);
    for (double sigma : sigma_list) {
      NoiseSpec noise = noise_template;
      noise.sigma = sigma;
      if (noise.discs.discs.empty()) noise.discs = setup.omega;
      NoiseRow row;
      row.n = n;
      row.h = mesh.h();
      row.sigma = sigma;
      try {
        const CellResult cell = reconstruct_cell(setup, n, mesh, apply_noise(q, noise), setup.spec);
        row.iterations = cell.iterations;
        row.converged = cell.converged;
        if (cell.converged) row.error = cell.error;
      } catch (const SolverError&) {
        row.converged = false;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

SubspaceResult run_subspace_study(const StudySetup& setup, int n,
                                  const std::vector<BasisSpec>& pairs, int n_samples,
                                  MeasurementBank* bank) {
  MeasurementBank local(setup);
  MeasurementBank& data = bank ? *bank : local;
  const Mesh mesh = Mesh::unit_square(n);
  const FemField q = data.on_mesh(n);

  SubspaceResult result;
  for (int k = 0; k < n_samples; ++k) {
    const double t = 4.0 * k / n_samples;
    result.t.push_back(t);
    result.a_true.push_back(setup.a_true.value(t));
  }
  for (const BasisSpec& spec : pairs) {
    validate(spec);
    SubspaceCurve curve;
    curve.spec = spec;
    try {
      CellResult cell = reconstruct_cell(setup, n, mesh, q, spec);
      curve.converged = cell.converged;
      if (cell.converged) curve.error = cell.error;
      curve.a_h = std::move(cell.a_h);
      for (double t : result.t) curve.values.push_back(curve.a_h.value(t));
    } catch (const SolverError&) {
      curve.converged = false;
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

std::vector<BasisSpec> condition_schedule(BasisSpec start, BasisSpec end) {
  validate(start);
  if (end.j1 < start.j1 || end.j2 < start.j2) {
    throw std::invalid_argument("condition_schedule: end must not be smaller than start");
  }
  std::vector<BasisSpec> out{start};
  BasisSpec cur = start;
  bool raise_first = true;
  while (!(cur == end)) {
    if ((raise_first && cur.j1 < end.j1) || cur.j2 == end.j2) {
      ++cur.j1;
    } else {
      ++cur.j2;
    }
    raise_first = !raise_first;
    out.push_back(cur);
  }
  return out;
}

std::vector<ConditionRow> run_condition_study(const StudySetup& setup, int n,
                                              const std::vector<BasisSpec>& schedule) {
  const Mesh mesh = Mesh::unit_square(n);
  const FemField q = solve_forward(RobinSystem(mesh, setup.a_true, setup.solver), setup.data);
  InverseProblem problem(mesh, setup.data, q, setup.omega, setup.solver);
  problem.set_threads(setup.threads);
  const ForwardState state = evaluate_state(problem, setup.a_true);

  std::vector<ConditionRow> rows;
  for (const BasisSpec& spec : schedule) {
    validate(spec);
    rows.push_back({spec, condition_number_2(compute_jacobian(problem, state, spec))});
  }
  return rows;
}

std::vector<ConsistencyRow> run_consistency_study(const StudySetup& setup,
                                                  const std::vector<int>& n_list,
                                                  MeasurementBank* bank) {
  MeasurementBank local(setup);
  MeasurementBank& data = bank ? *bank : local;
  std::vector<ConsistencyRow> rows;
  for (int n : n_list) {
    const Mesh mesh = Mesh::unit_square(n);
    InverseProblem problem(mesh, setup.data, data.on_mesh(n), setup.omega, setup.solver);
    rows.push_back({n, mesh.h(), norm2(compute_F(problem, setup.a_true, setup.spec))});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : "NA";
}

}  // namespace

void write_eoc_csv(std::ostream& out, const std::vector<EocRow>& rows) {
  out << "h,error,eoc\n";
  for (const EocRow& r : rows) {
    out << format_number(r.h) << ',' << format_optional(r.error) << ',' << format_optional(r.eoc)
        << '\n';
  }
}

void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows) {
  out << "h,sigma,error\n";
  for (const NoiseRow& r : rows) {
    out << format_number(r.h) << ',' << format_number(r.sigma) << ',' << format_optional(r.error)
        << '\n';
  }
}

void write_subspace_csv(std::ostream& out, const SubspaceResult& result) {
  out << "t,a_true";
  for (const SubspaceCurve& c : result.curves) {
    out << ",\"a_(" << c.spec.j1 << ',' << c.spec.j2 << ")\"";
  }
  out << '\n';
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    out << format_number(result.t[k]) << ',' << format_number(result.a_true[k]);
    for (const SubspaceCurve& c : result.curves) {
      out << ',' << (c.converged ? format_number(c.values[k]) : std::string("NA"));
    }
    out << '\n';
  }
}

void write_condition_csv(std::ostream& out, const std::vector<ConditionRow>& rows) {
  out << "J,kappa\n";
  for (const ConditionRow& r : rows) out << r.spec.size() << ',' << format_number(r.kappa) << '\n';
}

void write_trace_csv(std::ostream& out, const NewtonTrace& trace) {
  out << "k,res_norm,step,c1_error\n";
  for (const NewtonStep& s : trace.steps) {
    out << s.k << ',' << format_number(s.residual_norm) << ',' << format_number(s.step) << ','
        << format_optional(s.c1_error) << '\n';
  }
}

}  // namespace robin
