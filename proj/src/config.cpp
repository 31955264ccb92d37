#include "robin/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace robin {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(join(path, key), "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& key) {
  if (!v.is_number()) fail(key, "expected a number");
  return v.get<double>();
}

int get_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) fail(key, "expected an integer");
  return v.get<int>();
}

bool get_bool(const json& v, const std::string& key) {
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

std::string get_string(const json& v, const std::string& key) {
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_numbers(const json& v, const std::string& key) {
  if (!v.is_array()) fail(key, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_number(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<int> get_ints(const json& v, const std::string& key) {
  if (!v.is_array()) fail(key, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_int(v[i], key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

BasisSpec get_pair(const json& v, const std::string& key) {
  const auto p = get_ints(v, key);
  if (p.size() != 2) fail(key, "expected [j1, j2]");
  const BasisSpec spec{p[0], p[1]};
  if (spec.j1 < 1 || spec.j2 < 0) fail(key, "need j1 >= 1 and j2 >= 0");
  return spec;
}

Point2 get_point(const json& v, const std::string& key) {
  const auto p = get_numbers(v, key);
  if (p.size() != 2) fail(key, "expected [x, y]");
  return {p[0], p[1]};
}

RobinParameter get_robin(const json& v, const std::string& key) {
  check_keys(v, key, {"alpha", "beta"});
  std::vector<double> alpha = v.contains("alpha") ? get_numbers(v["alpha"], key + ".alpha")
                                                  : std::vector<double>{};
  std::vector<double> beta =
      v.contains("beta") ? get_numbers(v["beta"], key + ".beta") : std::vector<double>{};
  if (alpha.empty()) fail(key + ".alpha", "needs at least the constant mode");
  const BasisSpec spec{static_cast<int>(alpha.size()), static_cast<int>(beta.size())};
  return RobinParameter(spec, std::move(alpha), std::move(beta));
}

void require_positive_robin(const RobinParameter& a, int samples, const std::string& key) {
  const double lo = min_on_boundary(a, samples);
  if (!(lo > 0.0)) {
    fail(key, "Robin coefficient violates positivity on the boundary (minimum " +
                  format_number(lo) + ")");
  }
}

}  // namespace

StudySetup ExperimentConfig::study_setup() const {
  StudySetup s;
  s.data = data;
  s.omega = omega;
  s.a_true = a_true;
  s.spec = basis;
  s.x0 = x0;
  s.newton = newton;
  s.solver = solver;
  if (fine_factor > 0) {
    s.n_fine = 0;
    s.fine_factor = fine_factor;
  } else {
    s.n_fine = n_fine;
  }
  return s;
}

StudySetup ExperimentConfig::condition_setup() const {
  StudySetup s = study_setup();
  s.a_true = condition_a_true;
  return s;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"problem", "omega", "basis", "a_true", "x0", "mesh", "newton", "solver",
                        "noise", "subspace", "condition"});
  ExperimentConfig cfg;

  if (root.contains("newton")) {
    const json& v = root["newton"];
    check_keys(v, "newton", {"tol", "max_iter", "max_backtracks", "positivity_samples"});
    if (v.contains("tol")) cfg.newton.tol = get_number(v["tol"], "newton.tol");
    if (v.contains("max_iter")) cfg.newton.max_iter = get_int(v["max_iter"], "newton.max_iter");
    if (v.contains("max_backtracks")) {
      cfg.newton.max_backtracks = get_int(v["max_backtracks"], "newton.max_backtracks");
    }
    if (v.contains("positivity_samples")) {
      cfg.newton.positivity_samples =
          get_int(v["positivity_samples"], "newton.positivity_samples");
    }
    if (!(cfg.newton.tol > 0.0)) fail("newton.tol", "must be positive");
    if (cfg.newton.max_iter < 1) fail("newton.max_iter", "must be >= 1");
    if (cfg.newton.max_backtracks < 0) fail("newton.max_backtracks", "must be >= 0");
    if (cfg.newton.positivity_samples < 256) fail("newton.positivity_samples", "must be >= 256");
  }

  if (root.contains("a_true")) cfg.a_true = get_robin(root["a_true"], "a_true");
  require_positive_robin(cfg.a_true, cfg.newton.positivity_samples, "a_true");

  if (root.contains("problem")) {
    const json& v = root["problem"];
    check_keys(v, "problem", {"f", "g"});
    if (v.contains("f")) cfg.f_id = get_string(v["f"], "problem.f");
    if (v.contains("g")) cfg.g_id = get_string(v["g"], "problem.g");
  }
  try {
    cfg.data.f = SourceTerm::parse(cfg.f_id);
  } catch (const std::invalid_argument& e) {
    fail("problem.f", e.what());
  }
  if (cfg.g_id == "a_true") {
    cfg.data.g = BoundaryDatum::robin(cfg.a_true);
  } else {
    try {
      cfg.data.g = BoundaryDatum::parse(cfg.g_id);
    } catch (const std::invalid_argument& e) {
      fail("problem.g", e.what());
    }
  }

  if (root.contains("omega")) {
    const json& v = root["omega"];
    if (!v.is_array()) fail("omega", "expected an array of discs");
    cfg.omega.discs.clear();
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string key = "omega[" + std::to_string(i) + "]";
      check_keys(v[i], key, {"center", "radius"});
      if (!v[i].contains("center") || !v[i].contains("radius")) {
        fail(key, "disc needs 'center' and 'radius'");
      }
      cfg.omega.discs.push_back(
          {get_point(v[i]["center"], key + ".center"), get_number(v[i]["radius"], key + ".radius")});
    }
    try {
      validate(cfg.omega);
    } catch (const std::invalid_argument& e) {
      fail("omega", e.what());
    }
  }

  if (root.contains("basis")) {
    const json& v = root["basis"];
    check_keys(v, "basis", {"j1", "j2"});
    if (v.contains("j1")) cfg.basis.j1 = get_int(v["j1"], "basis.j1");
    if (v.contains("j2")) cfg.basis.j2 = get_int(v["j2"], "basis.j2");
    if (cfg.basis.j1 < 1) fail("basis.j1", "must be >= 1");
    if (cfg.basis.j2 < 0) fail("basis.j2", "must be >= 0");
  }

  if (root.contains("x0")) {
    const RobinParameter x0 = get_robin(root["x0"], "x0");
    if (x0.spec().j1 > cfg.basis.j1 || x0.spec().j2 > cfg.basis.j2) {
      fail("x0", "has more coefficients than the basis");
    }
    cfg.x0 = x0.resized(cfg.basis).coefficients();
  } else {
    cfg.x0 = RobinParameter::constant(cfg.basis, 1.0).coefficients();
  }
  require_positive_robin(RobinParameter::from_coefficients(cfg.basis, cfg.x0),
                         cfg.newton.positivity_samples, "x0");

  bool n_fine_given = false;
  if (root.contains("mesh")) {
    const json& v = root["mesh"];
    check_keys(v, "mesh", {"n", "n_list", "n_fine", "fine_factor"});
    if (v.contains("n")) cfg.n = get_int(v["n"], "mesh.n");
    if (v.contains("n_list")) cfg.n_list = get_ints(v["n_list"], "mesh.n_list");
    if (v.contains("n_fine")) {
      cfg.n_fine = get_int(v["n_fine"], "mesh.n_fine");
      n_fine_given = true;
    }
    if (v.contains("fine_factor")) {
      cfg.fine_factor = get_int(v["fine_factor"], "mesh.fine_factor");
      if (cfg.fine_factor < 2) fail("mesh.fine_factor", "must be >= 2");
      if (n_fine_given) fail("mesh.fine_factor", "cannot be combined with mesh.n_fine");
    }
  }
  if (cfg.n < 2) fail("mesh.n", "must be >= 2");
  if (cfg.n_list.empty()) fail("mesh.n_list", "must not be empty");
  for (int n : cfg.n_list) {
    if (n < 2) fail("mesh.n_list", "entries must be >= 2");
  }
  if (!n_fine_given) {
    const int largest = std::max(cfg.n, *std::max_element(cfg.n_list.begin(), cfg.n_list.end()));
    cfg.n_fine = 4 * largest;
  }
  if (cfg.fine_factor == 0) {
    if (cfg.n_fine < 64) fail("mesh.n_fine", "must be >= 64");
    if (cfg.n_fine % cfg.n != 0) fail("mesh.n_fine", "must be a multiple of mesh.n");
    for (int n : cfg.n_list) {
      if (cfg.n_fine % n != 0) {
        fail("mesh.n_fine", "must be a multiple of every mesh.n_list entry (" + std::to_string(n) + ")");
      }
    }
  }

  if (root.contains("solver")) {
    const json& v = root["solver"];
    check_keys(v, "solver", {"kind", "tol", "max_iter", "jacobi"});
    if (v.contains("kind")) {
      const std::string kind = get_string(v["kind"], "solver.kind");
      if (kind == "cholesky") {
        cfg.solver.kind = LinearSolverKind::cholesky;
      } else if (kind == "cg") {
        cfg.solver.kind = LinearSolverKind::cg;
      } else {
        fail("solver.kind", "expected 'cholesky' or 'cg'");
      }
    }
    if (v.contains("tol")) cfg.solver.cg_tol = get_number(v["tol"], "solver.tol");
    if (v.contains("max_iter")) cfg.solver.cg_max_iter = get_int(v["max_iter"], "solver.max_iter");
    if (v.contains("jacobi")) cfg.solver.cg_jacobi = get_bool(v["jacobi"], "solver.jacobi");
    if (!(cfg.solver.cg_tol > 0.0 && cfg.solver.cg_tol < 1.0)) fail("solver.tol", "must lie in (0, 1)");
  }

  if (root.contains("noise")) {
    const json& v = root["noise"];
    check_keys(v, "noise", {"sigma", "z"});
    if (v.contains("sigma")) cfg.sigma_list = get_numbers(v["sigma"], "noise.sigma");
    if (v.contains("z")) {
      const json& z = v["z"];
      if (!z.is_array() || z.size() != 2) fail("noise.z", "expected [[re, im], [re, im]]");
      for (int i = 0; i < 2; ++i) {
        const auto c = get_numbers(z[i], "noise.z[" + std::to_string(i) + "]");
        if (c.size() != 2) fail("noise.z[" + std::to_string(i) + "]", "expected [re, im]");
        cfg.noise.z[i] = {c[0], c[1]};
      }
    }
    for (double s : cfg.sigma_list) {
      if (!(s >= 0.0)) fail("noise.sigma", "entries must be non-negative");
    }
  }
  cfg.noise.discs = cfg.omega;

  if (root.contains("subspace")) {
    const json& v = root["subspace"];
    check_keys(v, "subspace", {"pairs", "samples"});
    if (v.contains("pairs")) {
      const json& p = v["pairs"];
      if (!p.is_array()) fail("subspace.pairs", "expected an array of [j1, j2]");
      cfg.subspace_pairs.clear();
      for (std::size_t i = 0; i < p.size(); ++i) {
        cfg.subspace_pairs.push_back(get_pair(p[i], "subspace.pairs[" + std::to_string(i) + "]"));
      }
    }
    if (v.contains("samples")) cfg.subspace_samples = get_int(v["samples"], "subspace.samples");
    if (cfg.subspace_samples < 2) fail("subspace.samples", "must be >= 2");
  }

  if (root.contains("condition")) {
    const json& v = root["condition"];
    check_keys(v, "condition", {"n", "start", "end", "a_true"});
    if (v.contains("n")) cfg.condition_n = get_int(v["n"], "condition.n");
    if (v.contains("start")) cfg.condition_start = get_pair(v["start"], "condition.start");
    if (v.contains("end")) cfg.condition_end = get_pair(v["end"], "condition.end");
    if (v.contains("a_true")) cfg.condition_a_true = get_robin(v["a_true"], "condition.a_true");
    if (cfg.condition_n < 2) fail("condition.n", "must be >= 2");
    if (cfg.condition_end.j1 < cfg.condition_start.j1 ||
        cfg.condition_end.j2 < cfg.condition_start.j2) {
      fail("condition.end", "must not be smaller than condition.start");
    }
    require_positive_robin(cfg.condition_a_true, cfg.newton.positivity_samples,
                           "condition.a_true");
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace robin
