#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "robin/experiments.hpp"

namespace robin {

/// Invalid experiment configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Declarative description of an experiment. Every key of the JSON file is
/// optional; the defaults give the reference setup (f = -10 x e^{sin 4 pi y},
/// g = 0, two-disc omega, J1 = J2 = 6, a = 1 initial guess).
struct ExperimentConfig {
  ProblemData data = ProblemData::paper();
  std::string f_id = "paper";
  std::string g_id = "zero";
  SubdomainSpec omega = SubdomainSpec::paper();
  BasisSpec basis{6, 6};
  RobinParameter a_true = paper_truth();
  std::vector<double> x0;  ///< length basis.size()

  int n = 128;
  std::vector<int> n_list{16, 32, 64, 128, 256};
  int n_fine = 1024;
  int fine_factor = 0;  ///< > 0: data mesh is fine_factor * N per row

  NewtonConfig newton;
  LinearSolverOptions solver;

  std::vector<double> sigma_list{1e-4, 1e-5, 1e-6};
  NoiseSpec noise;

  std::vector<BasisSpec> subspace_pairs{{3, 3}, {4, 4}, {5, 5}};
  int subspace_samples = 512;

  int condition_n = 64;
  BasisSpec condition_start{2, 2};
  BasisSpec condition_end{8, 8};
  RobinParameter condition_a_true = paper_truth_extended();

  StudySetup study_setup() const;
  StudySetup condition_setup() const;
};

/// Parses and validates a JSON configuration. Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace robin
