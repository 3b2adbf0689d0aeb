#pragma once

#include <binoed/types.hpp>

#include <filesystem>
#include <string>

namespace binoed {

// Shortest round-trip representation with 17 significant digits.
std::string format_double(double x);

// Provenance line written as the first line ("# key=value,...") of every CSV.
struct Provenance {
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::string command;
  std::string line() const;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Provenance& prov,
            const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& cell(const std::string& s);
  CsvWriter& cell(double x);
  CsvWriter& cell(Index x);
  CsvWriter& cell(int x) { return cell(static_cast<Index>(x)); }
  void end_row();

 private:
  struct Impl;
  Impl* impl_;
};

void write_matrix_csv(const std::filesystem::path& path, const Matrix& a, const Provenance& prov);
Matrix read_matrix_csv(const std::filesystem::path& path);

void write_vector_csv(const std::filesystem::path& path, const std::string& column, const Vector& v,
                      const Provenance& prov);
Vector read_vector_csv(const std::filesystem::path& path);

}  // namespace binoed
