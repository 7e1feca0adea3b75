#pragma once

#include <complex>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cylbem/scaled_complex.hpp"

namespace cylbem::io {

/// %.17g: round-trips every double.
std::string format_double(double x);
/// Quotes a field when it holds a comma, quote or line break (RFC 4180).
std::string csv_field(const std::string& text);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}
  void header(const std::vector<std::string>& names);

  CsvWriter& operator<<(const std::string& field);
  CsvWriter& operator<<(const char* field) { return *this << std::string(field); }
  CsvWriter& operator<<(double value) { return *this << format_double(value); }
  CsvWriter& operator<<(int value) { return *this << std::to_string(value); }
  CsvWriter& operator<<(long value) { return *this << std::to_string(value); }
  CsvWriter& operator<<(unsigned value) { return *this << std::to_string(value); }
  void end_row();

 private:
  std::ostream& out_;
  bool row_started_ = false;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  /// Column index by name; throws UsageError when missing.
  std::size_t column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::filesystem::path& path);

/// `key = value` lines, `#` starts a comment, blank lines ignored.
std::map<std::string, std::string> parse_config(std::istream& in);
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);

/// One row of the checked-in Bessel reference table.
struct BesselReference {
  int q = 0;
  std::complex<double> z;
  ScaledComplex j;
  ScaledComplex h2;
};

void write_bessel_reference(std::ostream& out, const std::vector<BesselReference>& rows);
std::vector<BesselReference> read_bessel_reference(std::istream& in);

/// Writes to a temporary sibling and renames on commit; an uncommitted file
/// is removed by the destructor.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream();
  void commit();
  const std::filesystem::path& target() const { return target_; }

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::unique_ptr<std::ofstream> out_;
  bool committed_ = false;
};

}  // namespace cylbem::io
