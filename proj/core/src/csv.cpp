#include <binoed/io/csv.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace binoed {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Provenance::line() const {
  std::ostringstream os;
  os << "# config_hash=" << std::hex << std::setw(16) << std::setfill('0') << config_hash << std::dec
     << ",seed=" << seed;
  if (!command.empty()) os << ",command=" << command;
  return os.str();
}

struct CsvWriter::Impl {
  std::ofstream out;
  bool first = true;
};

CsvWriter::CsvWriter(const std::filesystem::path& path, const Provenance& prov,
                     const std::vector<std::string>& columns)
    : impl_(new Impl) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  impl_->out.open(path);
  if (!impl_->out) {
    delete impl_;
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  impl_->out << prov.line() << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) impl_->out << (i ? "," : "") << columns[i];
  impl_->out << '\n';
}

CsvWriter::~CsvWriter() { delete impl_; }

CsvWriter& CsvWriter::cell(const std::string& s) {
  if (!impl_->first) impl_->out << ',';
  impl_->out << s;
  impl_->first = false;
  return *this;
}

CsvWriter& CsvWriter::cell(double x) { return cell(format_double(x)); }

CsvWriter& CsvWriter::cell(Index x) { return cell(std::to_string(x)); }

void CsvWriter::end_row() {
  impl_->out << '\n';
  impl_->first = true;
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& a, const Provenance& prov) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << prov.line() << '\n';
  out << "# rows=" << a.rows() << ",cols=" << a.cols() << '\n';
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) out << (j ? "," : "") << format_double(a(i, j));
    out << '\n';
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  Index rows = -1;
  Index cols = -1;
  std::vector<double> data;
  Index seen = 0;
  while (std::getline(in, line)) {
    if (line.rfind("# rows=", 0) == 0) {
      if (std::sscanf(line.c_str(), "# rows=%ld,cols=%ld", &rows, &cols) != 2) {
        throw ConfigError(path.string() + ": malformed shape line");
      }
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) data.push_back(std::stod(cell));
    ++seen;
  }
  if (rows < 0 || cols < 0) throw ConfigError(path.string() + ": missing shape line");
  if (seen != rows || static_cast<Index>(data.size()) != rows * cols) {
    throw ConfigError(path.string() + ": data does not match the declared shape");
  }
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) a(i, j) = data[static_cast<std::size_t>(i * cols + j)];
  return a;
}

void write_vector_csv(const std::filesystem::path& path, const std::string& column, const Vector& v,
                      const Provenance& prov) {
  CsvWriter w(path, prov, {"index", column});
  for (Index i = 0; i < v.size(); ++i) {
    w.cell(i).cell(v(i));
    w.end_row();
  }
}

Vector read_vector_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  bool header = false;
  std::vector<double> values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError(path.string() + ": expected index,value rows");
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return Eigen::Map<Vector>(values.data(), static_cast<Index>(values.size()));
}

}  // namespace binoed
