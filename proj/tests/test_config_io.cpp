#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "robin/config.hpp"
#include "robin/field_io.hpp"

using namespace robin;

namespace {

std::string error_of(std::string_view json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("config defaults") {
  const auto cfg = parse_config("{}");
  CHECK(cfg.f_id == "paper");
  CHECK(cfg.g_id == "zero");
  CHECK(cfg.basis == BasisSpec{6, 6});
  CHECK(cfg.omega.discs.size() == 2);
  CHECK(cfg.a_true.coefficients() == paper_truth().coefficients());
  CHECK(cfg.x0 == RobinParameter::constant({6, 6}, 1.0).coefficients());
  CHECK(cfg.n_list == std::vector<int>{16, 32, 64, 128, 256});
  CHECK(cfg.n_fine == 1024);
  CHECK(cfg.newton.tol == 1e-10);
  CHECK(cfg.newton.max_iter == 300);
  CHECK(cfg.solver.kind == LinearSolverKind::cholesky);
  CHECK(cfg.sigma_list == std::vector<double>{1e-4, 1e-5, 1e-6});
  CHECK(cfg.condition_a_true.spec() == BasisSpec{8, 8});

  const auto setup = cfg.study_setup();
  CHECK(setup.n_fine == 1024);
  CHECK(setup.spec == BasisSpec{6, 6});
  CHECK(cfg.condition_setup().a_true.spec() == BasisSpec{8, 8});
}

TEST_CASE("config overrides") {
  const auto cfg = parse_config(R"json({
    "problem": {"f": "constant(2)", "g": "a_true"},
    "omega": [{"center": [0.5, 0.5], "radius": 0.2}],
    "basis": {"j1": 2, "j2": 1},
    "a_true": {"alpha": [4, 1], "beta": [0.5]},
    "x0": {"alpha": [3]},
    "mesh": {"n": 8, "n_list": [8, 16], "fine_factor": 4},
    "newton": {"tol": 1e-8, "max_iter": 20},
    "solver": {"kind": "cg", "tol": 1e-10},
    "noise": {"sigma": [0.001]},
    "subspace": {"pairs": [[1, 1], [2, 1]], "samples": 64},
    "condition": {"n": 16, "start": [1, 1], "end": [2, 2]}
  })json");
  CHECK(cfg.data.f({0.3, 0.3}) == 2.0);
  CHECK(cfg.data.g(0.0) == doctest::Approx(cfg.a_true.value(0.0)));
  CHECK(cfg.omega.discs.size() == 1);
  CHECK(cfg.noise.discs.discs.size() == 1);
  CHECK(cfg.x0 == std::vector<double>{3.0, 0.0, 0.0});
  CHECK(cfg.study_setup().fine_factor == 4);
  CHECK(cfg.study_setup().n_fine == 0);
  CHECK(cfg.solver.kind == LinearSolverKind::cg);
  CHECK(cfg.newton.max_iter == 20);
  CHECK(cfg.subspace_pairs.size() == 2);
  CHECK(cfg.condition_end == BasisSpec{2, 2});
}

TEST_CASE("config errors name the key") {
  CHECK(error_of(R"({"bogus": 1})").find("'bogus'") != std::string::npos);
  CHECK(error_of(R"({"newton": {"tolerance": 1}})").find("newton.tolerance") != std::string::npos);
  CHECK(error_of(R"({"newton": {"tol": -1}})").find("newton.tol") != std::string::npos);
  CHECK(error_of(R"json({"problem": {"f": "sine"}})json").find("problem.f") != std::string::npos);
  CHECK(error_of(R"({"solver": {"kind": "lu"}})").find("solver.kind") != std::string::npos);
  CHECK(error_of(R"({"x0": {"alpha": [-2]}})").find("x0") != std::string::npos);
  CHECK(error_of(R"({"a_true": {"alpha": [0]}})").find("a_true") != std::string::npos);
  CHECK(error_of(R"({"omega": [{"center": [0.95, 0.5], "radius": 0.1}]})").find("omega") !=
        std::string::npos);
  CHECK(error_of(R"({"mesh": {"n_list": [16, 24], "n_fine": 64}})").find("mesh.n_fine") !=
        std::string::npos);
  CHECK(error_of(R"({"mesh": {"n_fine": 64, "fine_factor": 2}})").find("fine_factor") !=
        std::string::npos);
  CHECK(error_of("{not json").find("JSON") != std::string::npos);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("field round trip is bit-identical") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  FemField field = FemField::zeros(7);
  for (double& v : field.values) v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
  field.values[3] = 0.1;
  field.values[4] = -0.0;

  std::stringstream buf;
  write_field(buf, field);
  const auto back = read_field(buf);
  CHECK(back.n == 7);
  REQUIRE(back.values.size() == field.values.size());
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    CHECK(std::signbit(back.values[i]) == std::signbit(field.values[i]));
    CHECK(back.values[i] == field.values[i]);
  }

  const auto path = std::filesystem::temp_directory_path() / "robin_field_roundtrip.txt";
  write_field_file(path, field);
  CHECK(read_field_file(path).values == field.values);
  std::filesystem::remove(path);
}

TEST_CASE("malformed field files") {
  std::stringstream wrong_header("mesh v1\nN 2\n");
  CHECK_THROWS_AS(read_field(wrong_header), FieldFormatError);
  std::stringstream short_data("field v1\nN 1\n0\n1\n2\n");
  CHECK_THROWS_AS(read_field(short_data), FieldFormatError);
  std::stringstream bad_number("field v1\nN 1\n0\n1\nx\n3\n");
  CHECK_THROWS_AS(read_field(bad_number), FieldFormatError);
  CHECK_THROWS_AS(read_field_file("/nonexistent/field.txt"), FieldFormatError);
}
