#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace simplexdiff {

// Experiment configuration: TOML (flat tables, scalar/array values) or JSON,
// both loaded into the same tree. The schema key is required and unknown
// keys are rejected so typos fail loudly.
class ExperimentConfig {
 public:
  static constexpr const char* kSchema = "simplexdiff-1";

  static ExperimentConfig load(const std::string& path);
  static ExperimentConfig from_json(nlohmann::json j);
  static ExperimentConfig from_toml_text(const std::string& text);

  const nlohmann::json& root() const { return root_; }
  uint64_t hash() const;  // FNV-1a over the canonical dump

  bool has(const std::string& dotted) const;
  double number(const std::string& dotted, double fallback) const;
  double required_number(const std::string& dotted) const;
  int64_t integer(const std::string& dotted, int64_t fallback) const;
  bool boolean(const std::string& dotted, bool fallback) const;
  std::string text(const std::string& dotted, const std::string& fallback) const;
  std::vector<double> number_list(const std::string& dotted) const;  // empty if absent
  std::vector<std::vector<double>> matrix(const std::string& dotted) const;

  // Merge a command-line override such as run.dt = 1e-4.
  void set(const std::string& dotted, const nlohmann::json& value);

 private:
  const nlohmann::json* find(const std::string& dotted) const;
  void validate() const;

  nlohmann::json root_;
};

// Minimal TOML reader covering this project's configs: [tables], key = value
// with strings, numbers, booleans and (nested, possibly multiline) arrays.
nlohmann::json parse_toml_subset(const std::string& text);

}  // namespace simplexdiff
