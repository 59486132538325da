#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace simplexdiff {

// CSV emission with a provenance header comment. Doubles are printed with
// %.17g so identical runs produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& subcommand, uint64_t config_hash,
            uint64_t seed);

  void columns(const std::vector<std::string>& names);
  void row(const std::vector<double>& values);
  void raw_line(const std::string& line);

  static std::string format_double(double v);

 private:
  std::ofstream out_;
};

}  // namespace simplexdiff
