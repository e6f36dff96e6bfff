#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace lemur {

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}
  bool next(std::vector<std::string>& row);

 private:
  std::istream& in_;
};

std::string csv_escape(std::string_view field);
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace lemur
