#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "robin/inverse_newton.hpp"

namespace robin {

/// Ground-truth coefficient used throughout the numerical studies (J1 = J2 = 6).
RobinParameter paper_truth();
/// paper_truth() prolonged by two unit coefficients in each block (J1 = J2 = 8).
RobinParameter paper_truth_extended();

/// Deterministic harmonic perturbation sigma * sum_i Re(exp(i (x - x_i) . z)) 1_{disc_i}(x).
struct NoiseSpec {
  double sigma = 0.0;
  std::array<std::complex<double>, 2> z{std::complex<double>(10.0, 0.0),
                                        std::complex<double>(0.0, 10.0)};
  SubdomainSpec discs;
};

double noise_value(const NoiseSpec& spec, Point2 x);

FemField simulate_measurement(int n_fine, const ProblemData& data, const RobinParameter& a_true,
                              const SubdomainSpec& omega, LinearSolverOptions solver = {});

FemField apply_noise(const FemField& q, const NoiseSpec& spec);

/// Shared configuration of the reconstruction studies.
struct StudySetup {
  ProblemData data = ProblemData::paper();
  SubdomainSpec omega = SubdomainSpec::paper();
  RobinParameter a_true = paper_truth();
  BasisSpec spec{6, 6};
  std::vector<double> x0;  ///< empty: constant initial guess a = 1
  NewtonConfig newton;
  LinearSolverOptions solver;
  int threads = 1;
  /// Data mesh. n_fine > 0 fixes it for every row; otherwise fine_factor * N.
  int n_fine = 0;
  int fine_factor = 4;
  /// Optional hook called after every finished reconstruction.
  std::function<void(const std::string&)> log;
};

int data_mesh_for(const StudySetup& setup, int n);
std::vector<double> initial_guess(const StudySetup& setup, const BasisSpec& spec);

/// Caches fine-mesh measurements by data-mesh size.
class MeasurementBank {
 public:
  explicit MeasurementBank(const StudySetup& setup) : setup_(&setup) {}

  const FemField& fine(int n_fine);
  /// Measurement on the N-mesh (restricted from the data mesh, or the data
  /// itself when both coincide).
  FemField on_mesh(int n);

 private:
  const StudySetup* setup_;
  std::map<int, FemField> fine_;
};

struct CellResult {
  int n = 0;
  double h = 0.0;
  bool converged = false;
  NewtonStatus status = NewtonStatus::max_iterations;
  int iterations = 0;
  double error = 0.0;  ///< C1 distance to the truth
  RobinParameter a_h;
  NewtonTrace trace;
};

/// One reconstruction on the N-mesh from measurement q (already on that mesh).
CellResult reconstruct_cell(const StudySetup& setup, int n, const Mesh& mesh, const FemField& q,
                            const BasisSpec& spec);

struct EocRow {
  int n = 0;
  double h = 0.0;
  std::optional<double> error;  ///< absent when the reconstruction failed
  std::optional<double> eoc;
  int iterations = 0;
  bool converged = false;
};

/// log(err_prev / err) / log(h_prev / h) between consecutive successful rows.
void fill_eoc(std::vector<EocRow>& rows);

/// Least-squares slope of log(error) against log(h).
double loglog_slope(const std::vector<double>& h, const std::vector<double>& error);

std::vector<EocRow> run_eoc_study(const StudySetup& setup, const std::vector<int>& n_list,
                                  MeasurementBank* bank = nullptr,
                                  std::vector<CellResult>* cells = nullptr);

struct NoiseRow {
  int n = 0;
  double h = 0.0;
  double sigma = 0.0;
  std::optional<double> error;
  int iterations = 0;
  bool converged = false;
};

std::vector<NoiseRow> run_noise_study(const StudySetup& setup, const std::vector<int>& n_list,
                                      const std::vector<double>& sigma_list,
                                      const NoiseSpec& noise_template,
                                      MeasurementBank* bank = nullptr);

struct SubspaceCurve {
  BasisSpec spec;
  bool converged = false;
  std::optional<double> error;
  RobinParameter a_h;
  std::vector<double> values;  ///< a_h sampled on SubspaceResult::t
};

struct SubspaceResult {
  std::vector<double> t;
  std::vector<double> a_true;
  std::vector<SubspaceCurve> curves;
};

SubspaceResult run_subspace_study(const StudySetup& setup, int n,
                                  const std::vector<BasisSpec>& pairs, int n_samples = 512,
                                  MeasurementBank* bank = nullptr);

/// (2,2) -> (3,2) -> (3,3) -> ... -> (end.j1, end.j2), raising j1 first.
std::vector<BasisSpec> condition_schedule(BasisSpec start = {2, 2}, BasisSpec end = {8, 8});

struct ConditionRow {
  BasisSpec spec;
  double kappa = 0.0;
};

/// Condition numbers of the Jacobian at setup.a_true with inverse-crime data
/// (q = u_h on the same N-mesh), restricted to each basis of the schedule.
std::vector<ConditionRow> run_condition_study(const StudySetup& setup, int n,
                                              const std::vector<BasisSpec>& schedule);

struct ConsistencyRow {
  int n = 0;
  double h = 0.0;
  double residual = 0.0;  ///< |F_h(a_true)|
};

std::vector<ConsistencyRow> run_consistency_study(const StudySetup& setup,
                                                  const std::vector<int>& n_list,
                                                  MeasurementBank* bank = nullptr);

// CSV output. Numbers use the shortest round-trip decimal form; failed cells
// are written as NA.
std::string format_number(double v);
void write_eoc_csv(std::ostream& out, const std::vector<EocRow>& rows);
void write_noise_csv(std::ostream& out, const std::vector<NoiseRow>& rows);
void write_subspace_csv(std::ostream& out, const SubspaceResult& result);
void write_condition_csv(std::ostream& out, const std::vector<ConditionRow>& rows);
void write_trace_csv(std::ostream& out, const NewtonTrace& trace);

}  // namespace robin
