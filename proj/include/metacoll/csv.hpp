#ifndef METACOLL_CSV_HPP
#define METACOLL_CSV_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace metacoll {

// Minimal numeric CSV table: one header row, then rows of doubles.
// Blank lines and lines starting with '#' are skipped. Parse errors carry
// the 1-based line number.
class CsvTable {
 public:
  static CsvTable read(std::istream& in, const std::string& source = "<stream>");
  static CsvTable read_file(const std::string& path);

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return data_.size(); }
  std::optional<std::size_t> column(const std::string& name) const;
  std::size_t require_column(const std::string& name) const;
  double at(std::size_t row, std::size_t col) const { return data_[row][col]; }
  // 1-based source line of a data row, for diagnostics.
  std::size_t line_of(std::size_t row) const { return lines_[row]; }
  const std::string& source() const { return source_; }

 private:
  std::string source_;
  std::vector<std::string> header_;
  std::vector<std::vector<double>> data_;
  std::vector<std::size_t> lines_;
};

// Shortest round-trip representation; keeps output byte-stable.
std::string format_double(double v);

}  // namespace metacoll

#endif
