#include "cylbem/io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "cylbem/errors.hpp"

namespace cylbem::io {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::header(const std::vector<std::string>& names) {
  for (const auto& n : names) *this << n;
  end_row();
}

CsvWriter& CsvWriter::operator<<(const std::string& field) {
  if (row_started_) out_ << ',';
  out_ << csv_field(field);
  row_started_ = true;
  return *this;
}

void CsvWriter::end_row() {
  out_ << '\n';
  row_started_ = false;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw UsageError("CSV has no column '" + name + "'");
}

CsvTable read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false, any = false;
  char c;
  auto end_record = [&] {
    record.push_back(field);
    field.clear();
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
    any = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    any = true;
    if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      record.push_back(field);
      field.clear();
    } else if (c == '\n') {
      end_record();
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw UsageError("CSV ends inside a quoted field");
  if (any || !field.empty() || !record.empty()) end_record();
  CsvTable t;
  if (records.empty()) throw UsageError("CSV is empty");
  t.header = std::move(records.front());
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size())
      throw UsageError("CSV row " + std::to_string(i + 1) + " has " +
                       std::to_string(records[i].size()) + " fields, expected " +
                       std::to_string(t.header.size()));
    t.rows.push_back(std::move(records[i]));
  }
  return t;
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  return read_csv(in);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw UsageError("not a number: '" + s + "'");
  return v;
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw UsageError("config line " + std::to_string(lineno) + ": empty key");
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  return parse_config(in);
}

void write_bessel_reference(std::ostream& out, const std::vector<BesselReference>& rows) {
  CsvWriter w(out);
  w.header({"q", "re_z", "im_z", "re_j", "im_j", "exp2_j", "re_h2", "im_h2", "exp2_h2"});
  for (const auto& r : rows) {
    w << r.q << r.z.real() << r.z.imag() << r.j.mantissa().real() << r.j.mantissa().imag()
      << r.j.exp2() << r.h2.mantissa().real() << r.h2.mantissa().imag() << r.h2.exp2();
    w.end_row();
  }
}

std::vector<BesselReference> read_bessel_reference(std::istream& in) {
  const CsvTable t = read_csv(in);
  const std::size_t cq = t.column("q"), czr = t.column("re_z"), czi = t.column("im_z"),
                    cjr = t.column("re_j"), cji = t.column("im_j"), cje = t.column("exp2_j"),
                    chr = t.column("re_h2"), chi = t.column("im_h2"), che = t.column("exp2_h2");
  std::vector<BesselReference> out;
  for (const auto& r : t.rows) {
    BesselReference b;
    b.q = static_cast<int>(to_double(r[cq]));
    b.z = {to_double(r[czr]), to_double(r[czi])};
    b.j = ScaledComplex({to_double(r[cjr]), to_double(r[cji])},
                        static_cast<long>(to_double(r[cje])));
    b.h2 = ScaledComplex({to_double(r[chr]), to_double(r[chi])},
                         static_cast<long>(to_double(r[che])));
    out.push_back(b);
  }
  return out;
}

AtomicFile::AtomicFile(std::filesystem::path target) : target_(std::move(target)) {
  temp_ = target_;
  temp_ += ".partial";
  out_ = std::make_unique<std::ofstream>(temp_, std::ios::binary | std::ios::trunc);
  if (!*out_) throw Error("cannot write " + temp_.string());
}

AtomicFile::~AtomicFile() {
  if (!committed_) {
    out_.reset();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
  }
}

std::ostream& AtomicFile::stream() { return *out_; }

void AtomicFile::commit() {
  out_->flush();
  if (!*out_) throw Error("write failed for " + target_.string());
  out_->close();
  std::filesystem::rename(temp_, target_);
  committed_ = true;
}

}  // namespace cylbem::io
