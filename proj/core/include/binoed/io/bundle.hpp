#pragma once

#include <binoed/aoptimal/objective.hpp>
#include <binoed/lowrank/qr.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>

namespace binoed {

// On-disk model: header.json plus Q.csv, R.csv and Chat.csv.
struct Bundle {
  nlohmann::json config;  // canonical experiment configuration
  std::uint64_t config_hash = 0;
  QRModel qr;
  double trace_C0 = 0.0;
  Matrix chat;
  double build_seconds = 0.0;

  LowRankObjective objective() const;
};

void save_bundle(const std::filesystem::path& dir, const Bundle& bundle);
Bundle load_bundle(const std::filesystem::path& dir);

}  // namespace binoed
