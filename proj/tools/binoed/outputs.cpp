#include "outputs.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace binoed::cli {

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::string join(const IndexList& idx, char sep) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(idx[i]);
  }
  return out;
}

IndexList ones_of(const Vector& w) {
  IndexList out;
  for (Index k = 0; k < w.size(); ++k) {
    if (w(k) == 1.0) out.push_back(k);
  }
  return out;
}

std::string label_of(const Classification& c, Index k) {
  auto has = [k](const IndexList& l) { return std::find(l.begin(), l.end(), k) != l.end(); };
  if (has(c.dominant)) return "dominant";
  if (has(c.redundant)) return "redundant";
  return "free";
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json classification_json(const Classification& c) {
  return {{"case", to_string(c.gap_case)},
          {"dominant", c.dominant},
          {"redundant", c.redundant},
          {"free", c.free},
          {"m0_lower", c.m0_lower},
          {"m0_upper", c.m0_upper},
          {"tie_tol", c.tie_tol}};
}

json report_json(const OptimalityReport& r) {
  return {{"is_global", r.is_global},
          {"fw_gap", r.fw_gap},
          {"sum_w", r.sum_w},
          {"violations", r.violations},
          {"classification", classification_json(r.classification)}};
}

json ExperimentRecord::to_json() const {
  return {{"command", command},
          {"config", config},
          {"config_hash", hex(config_hash)},
          {"seed", seed},
          {"results", results},
          {"timings", timings},
          {"warnings", warnings}};
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
}

void ExperimentRecord::write(const std::filesystem::path& out_dir) const {
  write_json(out_dir / (command + "_record.json"), to_json());
}

void write_design(const std::filesystem::path& path, const Vector& w, const Provenance& prov) {
  write_vector_csv(path, "w", w, prov);
}

void write_sorted_gradient(const std::filesystem::path& path, const Vector& w, const Vector& grad,
                           const Classification& c, const Provenance& prov) {
  CsvWriter out(path, prov, {"position", "index", "grad", "w", "label"});
  for (std::size_t j = 0; j < c.order.size(); ++j) {
    Index k = c.order[j];
    out.cell(static_cast<Index>(j + 1)).cell(k).cell(grad(k)).cell(w(k)).cell(label_of(c, k));
    out.end_row();
  }
}

void write_trace(const std::filesystem::path& path, const std::vector<TraceRow>& trace,
                 const Provenance& prov) {
  CsvWriter out(path, prov, {"outer", "iter", "p", "J", "gap", "step"});
  for (const auto& r : trace) {
    out.cell(r.outer).cell(r.iter).cell(r.p).cell(r.J).cell(r.gap).cell(r.step);
    out.end_row();
  }
}

}  // namespace binoed::cli
