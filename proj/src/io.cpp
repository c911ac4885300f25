#include "hwlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hwlab {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

void write_header(std::ostream& os, const Grid& g, const Metadata& meta) {
  os << "# n = " << g.size() << "\n# L = " << format_double(g.length()) << "\n";
  for (const auto& [k, v] : meta) os << "# " << k << " = " << v << "\n";
}

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) throw std::runtime_error("malformed number '" + s + "'");
  return v;
}

}  // namespace

void write_field(std::ostream& os, const Field& f, const Metadata& meta, bool with_imag) {
  write_header(os, f.grid, meta);
  for (std::size_t j = 0; j < f.size(); ++j) {
    os << format_double(f.grid.point(j)) << ' ' << format_double(f[j].real());
    if (with_imag) os << ' ' << format_double(f[j].imag());
    os << '\n';
  }
}

void write_field(std::ostream& os, const RealField& f, const Metadata& meta) {
  write_header(os, f.grid, meta);
  for (std::size_t j = 0; j < f.size(); ++j)
    os << format_double(f.grid.point(j)) << ' ' << format_double(f[j]) << '\n';
}

void write_field(const std::filesystem::path& path, const Field& f, const Metadata& meta, bool with_imag) {
  auto os = open_out(path);
  write_field(os, f, meta, with_imag);
}

void write_field(const std::filesystem::path& path, const RealField& f, const Metadata& meta) {
  auto os = open_out(path);
  write_field(os, f, meta);
}

FieldFile read_field(std::istream& is) {
  std::map<std::string, std::string> meta;
  std::vector<cplx> values;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq != std::string::npos) meta[trim(line.substr(1, eq - 1))] = trim(line.substr(eq + 1));
      continue;
    }
    std::istringstream row(line);
    std::string x, re, im;
    row >> x >> re >> im;
    if (re.empty()) throw std::runtime_error("field row needs at least two columns");
    values.emplace_back(parse_double(re), im.empty() ? 0.0 : parse_double(im));
  }
  if (!meta.count("n") || !meta.count("L")) throw std::runtime_error("field file lacks n or L header");
  const Grid g(static_cast<std::size_t>(std::stoull(meta["n"])), parse_double(meta["L"]));
  if (values.size() != g.size()) throw std::runtime_error("field file row count does not match n");
  return FieldFile{Field(g, std::move(values)), std::move(meta)};
}

FieldFile read_field(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_field(is);
}

CsvWriter::CsvWriter(std::ostream& os, const std::vector<std::string>& header) : os_(os), columns_(header.size()) {
  row_text(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row_text(cells);
}

void CsvWriter::row_text(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::invalid_argument("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
  os_ << '\n';
}

SummaryWriter& SummaryWriter::put(const std::string& key, double v) {
  os_ << key << " = " << format_double(v) << '\n';
  return *this;
}

SummaryWriter& SummaryWriter::put(const std::string& key, const std::string& v) {
  os_ << key << " = " << v << '\n';
  return *this;
}

SummaryWriter& SummaryWriter::put(const std::string& key, long long v) {
  os_ << key << " = " << v << '\n';
  return *this;
}

SummaryWriter& SummaryWriter::put(const std::string& key, bool v) {
  os_ << key << " = " << (v ? "true" : "false") << '\n';
  return *this;
}

SummaryWriter& SummaryWriter::put(const std::string& key, std::optional<double> v) {
  if (v) return put(key, *v);
  return put(key, std::string("none"));
}

}  // namespace hwlab
