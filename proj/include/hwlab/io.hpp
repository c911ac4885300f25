#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hwlab/field.hpp"

namespace hwlab {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Text field format: '# key = value' header lines (n and L always written first),
// then one row per sample: x re  or  x re im.
void write_field(std::ostream& os, const Field& f, const Metadata& meta = {}, bool with_imag = true);
void write_field(std::ostream& os, const RealField& f, const Metadata& meta = {});
void write_field(const std::filesystem::path& path, const Field& f, const Metadata& meta = {}, bool with_imag = true);
void write_field(const std::filesystem::path& path, const RealField& f, const Metadata& meta = {});

struct FieldFile {
  Field field;
  std::map<std::string, std::string> meta;
};

// Reads two- or three-column files; the grid comes from the n and L header keys.
FieldFile read_field(const std::filesystem::path& path);
FieldFile read_field(std::istream& is);

class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void row_text(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

// 'key = value' lines.
class SummaryWriter {
 public:
  explicit SummaryWriter(std::ostream& os) : os_(os) {}
  SummaryWriter& put(const std::string& key, double v);
  SummaryWriter& put(const std::string& key, const std::string& v);
  SummaryWriter& put(const std::string& key, long long v);
  SummaryWriter& put(const std::string& key, bool v);
  SummaryWriter& put(const std::string& key, std::optional<double> v);  // "none" when empty

 private:
  std::ostream& os_;
};

}  // namespace hwlab
