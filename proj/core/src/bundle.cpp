#include <binoed/io/bundle.hpp>
#include <binoed/io/csv.hpp>

#include <fstream>

namespace binoed {

LowRankObjective Bundle::objective() const {
  return LowRankObjective(qr.R, chat, trace_C0, qr.m, qr.m_obs);
}

void save_bundle(const std::filesystem::path& dir, const Bundle& b) {
  std::filesystem::create_directories(dir);
  std::uint64_t seed = b.config.value("seed", std::uint64_t{0});
  Provenance prov{b.config_hash, seed, "build"};
  nlohmann::json header = {
      {"format", "binoed-bundle/1"},
      {"n", b.qr.n()},
      {"m", b.qr.m},
      {"m_obs", b.qr.m_obs},
      {"ell", b.qr.rank()},
      {"seed", b.qr.seed},
      {"q", b.qr.subspace_iterations},
      {"drop_tol", b.qr.drop_tol},
      {"exact", b.qr.exact},
      {"residual_estimate", b.qr.residual_estimate},
      {"trace_C0", b.trace_C0},
      {"config_hash", b.config_hash},
      {"build_seconds", b.build_seconds},
      {"warnings", b.qr.warnings},
      {"config", b.config},
  };
  std::ofstream out(dir / "header.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "header.json").string());
  out << header.dump(2) << '\n';
  write_matrix_csv(dir / "Q.csv", b.qr.Q, prov);
  write_matrix_csv(dir / "R.csv", b.qr.R, prov);
  write_matrix_csv(dir / "Chat.csv", b.chat, prov);
}

Bundle load_bundle(const std::filesystem::path& dir) {
  std::ifstream in(dir / "header.json");
  if (!in) throw ConfigError("bundle not found: " + (dir / "header.json").string());
  nlohmann::json header;
  try {
    in >> header;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bundle header is not valid JSON: " + std::string(e.what()));
  }
  Bundle b;
  try {
    b.config = header.at("config");
    b.config_hash = header.at("config_hash").get<std::uint64_t>();
    b.trace_C0 = header.at("trace_C0").get<double>();
    b.build_seconds = header.value("build_seconds", 0.0);
    b.qr.seed = header.at("seed").get<std::uint64_t>();
    b.qr.subspace_iterations = header.at("q").get<int>();
    b.qr.drop_tol = header.at("drop_tol").get<double>();
    b.qr.exact = header.at("exact").get<bool>();
    b.qr.residual_estimate = header.at("residual_estimate").get<double>();
    b.qr.warnings = header.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("bundle header is missing fields: " + std::string(e.what()));
  }
  b.qr.Q = read_matrix_csv(dir / "Q.csv");
  b.qr.R = read_matrix_csv(dir / "R.csv");
  b.chat = read_matrix_csv(dir / "Chat.csv");
  b.qr.set_layout(header.at("m").get<Index>(), header.at("m_obs").get<Index>());
  if (b.qr.Q.rows() != header.at("n").get<Index>() || b.qr.rank() != header.at("ell").get<Index>()) {
    throw ConfigError("bundle matrices do not match header dimensions");
  }
  return b;
}

}  // namespace binoed
