#pragma once

#include <binoed/io/bundle.hpp>
#include <binoed/io/csv.hpp>
#include <binoed/optimality/certificate.hpp>
#include <binoed/solve/solver.hpp>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace binoed::cli {

using nlohmann::json;

// Per-run record: config snapshot, seeds, model hash, results and timings.
struct ExperimentRecord {
  std::string command;
  json config;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  json results = json::object();
  json timings = json::object();
  std::vector<std::string> warnings;

  json to_json() const;
  void write(const std::filesystem::path& out_dir) const;
};

std::string hex(std::uint64_t x);
std::string join(const IndexList& idx, char sep = ' ');
IndexList ones_of(const Vector& w);
std::string label_of(const Classification& c, Index k);

json classification_json(const Classification& c);
json report_json(const OptimalityReport& r);
json vector_json(const Vector& v);

void write_design(const std::filesystem::path& path, const Vector& w, const Provenance& prov);
void write_sorted_gradient(const std::filesystem::path& path, const Vector& w, const Vector& grad,
                           const Classification& c, const Provenance& prov);
void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& trace,
                 const Provenance& prov);
void write_json(const std::filesystem::path& path, const json& j);

}  // namespace binoed::cli
