#pragma once

#include <binoed/aoptimal/objective.hpp>
#include <binoed/io/bundle.hpp>
#include <binoed/lowrank/qr.hpp>
#include <binoed/model/helmholtz.hpp>
#include <binoed/model/noise.hpp>
#include <binoed/model/synthetic.hpp>
#include <binoed/solve/solver.hpp>

#include <nlohmann/json.hpp>

#include <optional>

namespace binoed {

enum class ModelKind { synthetic, helmholtz };

struct LowRankSettings {
  bool exact = false;
  std::optional<Index> rank;  // default: min(n, m m_obs)
  int subspace_iterations = 2;
  double drop_tol = 1e-6;
};

struct NoiseSettings {
  std::optional<double> sigma;  // fixed standard deviation; otherwise calibrated
  double fraction = 0.01;
  Index samples = 1000;
  bool through_prior = false;
};

struct ExperimentConfig {
  ModelKind kind = ModelKind::synthetic;
  std::uint64_t seed = 0;
  SyntheticConfig synthetic;
  HelmholtzConfig helmholtz;
  double alpha = 0.01125;
  std::optional<double> beta;  // default sqrt(alpha) / 1.42
  NoiseSettings noise;
  LowRankSettings lowrank;
  SolverConfig solver;
  double delta = 0.05;
  bool uncorrected_lipschitz = false;

  // Throws ConfigError naming the offending field.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  std::uint64_t hash() const;
  double prior_beta() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);

struct BuiltModel {
  ExperimentConfig config;
  std::optional<HelmholtzModel> helmholtz;
  LinearMap forward;
  PriorModel prior;
  DiagonalNoise noise;
  LinearMap preconditioned;
  QRModel qr;
  LowRankObjective objective;
  Index m = 0;
  Index m_obs = 1;
  double build_seconds = 0.0;

  Bundle to_bundle() const;
};

BuiltModel build_model(const ExperimentConfig& config);

}  // namespace binoed
