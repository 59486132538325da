#include "simplexdiff/csv.hpp"

#include <cstdio>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

CsvWriter::CsvWriter(const std::string& path, const std::string& subcommand,
                     uint64_t config_hash, uint64_t seed)
    : out_(path) {
  if (!out_) throw Error("IoError", "cannot open output file '" + path + "'");
  char head[160];
  std::snprintf(head, sizeof(head),
                "# simplexdiff %s schema=simplexdiff-1 config_hash=%016llx seed=%llu",
                subcommand.c_str(), static_cast<unsigned long long>(config_hash),
                static_cast<unsigned long long>(seed));
  out_ << head << "\n";
}

void CsvWriter::columns(const std::vector<std::string>& names) {
  for (size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<double>& values) {
  for (size_t i = 0; i < values.size(); ++i)
    out_ << (i ? "," : "") << format_double(values[i]);
  out_ << "\n";
}

void CsvWriter::raw_line(const std::string& line) { out_ << line << "\n"; }

std::string CsvWriter::format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace simplexdiff
