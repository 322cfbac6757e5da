#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qrobust {

// Float formatting used across all interchange files: 9 significant digits.
std::string format_double(double x);

// RFC-4180 field quoting (quotes doubled, CRLF row terminator).
std::string csv_escape(const std::string& field);

class CsvWriter {
public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void row(const std::vector<std::string>& fields);

private:
  std::ostream& out_;
};

}  // namespace qrobust
