#include "instances.hpp"

#include <binoed/io/bundle.hpp>
#include <binoed/io/csv.hpp>
#include <binoed/io/experiment.hpp>
#include <binoed/solve/solver.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

namespace binoed {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("binoed_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Csv, DoubleRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(Csv, MatrixAndVectorRoundTripWithProvenance) {
  fs::path dir = scratch("csv");
  auto gen = make_stream(1, "csv");
  Matrix a = gaussian_matrix(4, 3, gen);
  Provenance prov{0xabcdef, 9, "unit"};
  write_matrix_csv(dir / "a.csv", a, prov);
  EXPECT_EQ(read_matrix_csv(dir / "a.csv"), a);
  EXPECT_EQ(slurp(dir / "a.csv").rfind("# config_hash=0000000000abcdef,seed=9,command=unit", 0), 0u);
  Vector v = gaussian_vector(5, gen);
  write_vector_csv(dir / "v.csv", "w", v, prov);
  EXPECT_EQ(read_vector_csv(dir / "v.csv"), v);
  EXPECT_THROW(read_matrix_csv(dir / "missing.csv"), ConfigError);
}

TEST(Bundle, RoundTripPreservesObjective) {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.synthetic.seed = 3;
  BuiltModel model = build_model(cfg);
  fs::path dir = scratch("bundle");
  save_bundle(dir, model.to_bundle());
  Bundle b = load_bundle(dir);
  EXPECT_EQ(b.config_hash, cfg.hash());
  EXPECT_EQ(b.qr.R, model.qr.R);
  LowRankObjective obj = b.objective();
  Vector w = Vector::Constant(model.m, 0.4);
  EXPECT_EQ(obj.objective(w), model.objective.objective(w));
  EXPECT_THROW(load_bundle(dir / "nope"), ConfigError);
}

TEST(Config, DefaultsAndCanonicalHash) {
  ExperimentConfig a = ExperimentConfig::from_json(json::parse(R"({"model": "synthetic"})"));
  EXPECT_EQ(a.kind, ModelKind::synthetic);
  EXPECT_EQ(a.synthetic.n, 20);
  EXPECT_EQ(a.synthetic.m, 12);
  ExperimentConfig b = ExperimentConfig::from_json(a.to_json());
  EXPECT_EQ(a.hash(), b.hash());
  ExperimentConfig c = ExperimentConfig::from_json(json::parse(R"({"model": "synthetic", "seed": 2})"));
  EXPECT_NE(a.hash(), c.hash());
}

TEST(Config, HelmholtzDefaults) {
  ExperimentConfig c = ExperimentConfig::from_json(json::parse(R"({"model": "helmholtz"})"));
  EXPECT_EQ(c.helmholtz.wavenumbers.size(), 7u);
  EXPECT_NEAR(c.prior_beta(), std::sqrt(0.01125) / 1.42, 1e-15);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const char* text) {
    try {
      ExperimentConfig::from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"modle": "synthetic"})").find("modle"), std::string::npos);
  EXPECT_NE(message(R"({"model": "fem"})").find("model"), std::string::npos);
  EXPECT_NE(message(R"({"model": "helmholtz", "helmholtz": {"rings": [{"radius": 0.3, "cnt": 2}]}})")
                .find("helmholtz.rings[0].cnt"),
            std::string::npos);
  EXPECT_NE(message(R"({"synthetic": {"n": "ten"}})").find("synthetic.n"), std::string::npos);
  EXPECT_NE(message(R"({"lowrank": {"method": "svd"}})").find("lowrank.method"), std::string::npos);
  EXPECT_NE(message(R"({"solver": {"delta": 1.5}})").find("solver.delta"), std::string::npos);
  EXPECT_NE(message(R"({"prior": {"alpha": -1}})").find("prior.alpha"), std::string::npos);
}

TEST(BuildModel, SameSeedIsBitIdentical) {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"({"model": "synthetic", "seed": 5})"));
  BuiltModel a = build_model(cfg), b = build_model(cfg);
  EXPECT_EQ(a.qr.R, b.qr.R);
  EXPECT_EQ(a.objective.chat(), b.objective.chat());
}

TEST(BuildModel, ExactAndRandomizedAgreeOnFullRank) {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"({"model": "synthetic", "seed": 6})"));
  BuiltModel r = build_model(cfg);
  cfg.lowrank.exact = true;
  BuiltModel e = build_model(cfg);
  Vector w = Vector::Constant(r.m, 0.5);
  EXPECT_LE(testing::rel_err(r.objective.objective(w), e.objective.objective(w)), 1e-8);
}

TEST(BuildModel, HelmholtzBuildsWithCalibratedNoise) {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"({
    "model": "helmholtz", "seed": 1,
    "helmholtz": {"grid": 21, "wavenumbers": [8, 12], "rings": [{"radius": 0.3, "count": 8}]},
    "noise": {"samples": 200}
  })"));
  BuiltModel m = build_model(cfg);
  EXPECT_EQ(m.m, 8);
  EXPECT_EQ(m.m_obs, 4);
  EXPECT_GT(m.noise.sigma(0), 0.0);
  EXPECT_TRUE(m.helmholtz.has_value());
  EXPECT_LT(adjoint_mismatch(m.preconditioned, 5, 1), 1e-8);
}

TEST(Reconstruction, FourBumpSourceRecovered) {
  ExperimentConfig cfg = ExperimentConfig::from_json(json::parse(R"({
    "model": "helmholtz", "seed": 2,
    "helmholtz": {"grid": 31, "wavenumbers": [20, 30, 40]},
    "noise": {"samples": 200}
  })"));
  BuiltModel model = build_model(cfg);
  ContinuationResult design = p_continuation(model.objective, 24, 0.05, cfg.solver);
  Vector f = model.helmholtz->four_bump_source();
  Vector g = model.forward.apply(f);
  Vector mean = posterior_mean(model.objective, model.qr, model.prior, model.noise, design.w_binary, g,
                               Vector::Zero(f.size()));
  Vector mass = model.prior.mass_diag();
  auto norm = [&](const Vector& x) { return std::sqrt(x.cwiseProduct(x).dot(mass)); };
  EXPECT_LT(norm(mean - f), norm(f));
  EXPECT_GT(mean.dot(mass.cwiseProduct(f)), 0.0);
}

}  // namespace
}  // namespace binoed
