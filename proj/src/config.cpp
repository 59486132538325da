#include "simplexdiff/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "simplexdiff/errors.hpp"

namespace simplexdiff {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Strip a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  explicit ValueParser(const std::string& text) : s_(text) {}

  nlohmann::json parse() {
    skip_ws();
    nlohmann::json v = value();
    skip_ws();
    if (pos_ != s_.size())
      throw ConfigError("trailing characters in value: '" + s_.substr(pos_) + "'");
    return v;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  nlohmann::json value() {
    skip_ws();
    if (pos_ >= s_.size()) throw ConfigError("missing value");
    const char c = s_[pos_];
    if (c == '[') return array();
    if (c == '"') return string();
    if (s_.compare(pos_, 4, "true") == 0 && boundary(pos_ + 4)) {
      pos_ += 4;
      return true;
    }
    if (s_.compare(pos_, 5, "false") == 0 && boundary(pos_ + 5)) {
      pos_ += 5;
      return false;
    }
    return number();
  }

  bool boundary(size_t p) const {
    return p >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[p]));
  }

  nlohmann::json array() {
    ++pos_;  // '['
    nlohmann::json arr = nlohmann::json::array();
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return arr;
    }
    for (;;) {
      arr.push_back(value());
      skip_ws();
      if (pos_ >= s_.size()) throw ConfigError("unterminated array");
      if (s_[pos_] == ',') {
        ++pos_;
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == ']') {  // trailing comma
          ++pos_;
          return arr;
        }
        continue;
      }
      if (s_[pos_] == ']') {
        ++pos_;
        return arr;
      }
      throw ConfigError("expected ',' or ']' in array");
    }
  }

  nlohmann::json string() {
    ++pos_;  // '"'
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) throw ConfigError("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json number() {
    const size_t start = pos_;
    while (pos_ < s_.size() && std::string("+-0123456789.eE_xXabcdefABCDEF").find(
                                   s_[pos_]) != std::string::npos)
      ++pos_;
    std::string tok = s_.substr(start, pos_ - start);
    tok.erase(std::remove(tok.begin(), tok.end(), '_'), tok.end());
    if (tok.empty()) throw ConfigError("bad numeric literal");
    try {
      if (tok.find('.') == std::string::npos && tok.find('e') == std::string::npos &&
          tok.find('E') == std::string::npos)
        return static_cast<int64_t>(std::stoll(tok, nullptr, 0));
      return std::stod(tok);
    } catch (const std::exception&) {
      throw ConfigError("bad numeric literal '" + tok + "'");
    }
  }

  const std::string& s_;
  size_t pos_ = 0;
};

bool brackets_balanced(const std::string& s) {
  int depth = 0;
  bool in_str = false;
  for (char c : s) {
    if (c == '"') in_str = !in_str;
    if (in_str) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth <= 0;
}

// Allowed key tree; unknown keys are configuration errors.
const std::vector<std::pair<std::string, std::vector<std::string>>> kAllowedKeys = {
    {"", {"schema"}},
    {"network", {"q_rows"}},
    {"model",
     {"mean", "theta", "theta_const", "h", "omega", "potential", "potential_a",
      "potential_center"}},
    {"run",
     {"seed", "n_paths", "dt", "t_end", "N", "grid", "bins", "x0", "y0", "noise_form",
      "reflection", "snapshot_times", "threads", "t", "samples", "dims",
      "divergence_term", "record_stride", "k_max"}},
    {"compare", {"l1_threshold", "alpha"}},
    {"output", {"dir", "prefix"}},
};

}  // namespace

nlohmann::json parse_toml_subset(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* table = &root;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed table header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty table name");
      table = &root;
      std::istringstream parts(name);
      std::string part;
      while (std::getline(parts, part, '.')) table = &((*table)[trim(part)]);
      if (table->is_null()) *table = nlohmann::json::object();
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    while (!brackets_balanced(value)) {  // multiline array
      std::string more;
      if (!std::getline(in, more))
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated array");
      ++lineno;
      value += " " + trim(strip_comment(more));
    }
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    (*table)[key] = ValueParser(value).parse();
  }
  return root;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    try {
      return from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("JSON parse error in '" + path + "': " + e.what());
    }
  }
  return from_toml_text(text);
}

ExperimentConfig ExperimentConfig::from_toml_text(const std::string& text) {
  return from_json(parse_toml_subset(text));
}

ExperimentConfig ExperimentConfig::from_json(nlohmann::json j) {
  ExperimentConfig cfg;
  cfg.root_ = std::move(j);
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (!root_.is_object()) throw ConfigError("config root must be a table");
  if (!root_.contains("schema") || !root_["schema"].is_string() ||
      root_["schema"].get<std::string>() != kSchema)
    throw ConfigError(std::string("config must declare schema = \"") + kSchema + "\"");
  for (auto it = root_.begin(); it != root_.end(); ++it) {
    const std::string& section = it.key();
    if (section == "schema") continue;
    auto found =
        std::find_if(kAllowedKeys.begin(), kAllowedKeys.end(),
                     [&](const auto& e) { return e.first == section; });
    if (found == kAllowedKeys.end() || !it.value().is_object())
      throw ConfigError("unknown config section '" + section + "'");
    for (auto kit = it.value().begin(); kit != it.value().end(); ++kit) {
      if (std::find(found->second.begin(), found->second.end(), kit.key()) ==
          found->second.end())
        throw ConfigError("unknown key '" + section + "." + kit.key() + "'");
    }
  }
}

uint64_t ExperimentConfig::hash() const {
  const std::string dump = root_.dump();
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

const nlohmann::json* ExperimentConfig::find(const std::string& dotted) const {
  const nlohmann::json* node = &root_;
  std::istringstream parts(dotted);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

bool ExperimentConfig::has(const std::string& dotted) const {
  return find(dotted) != nullptr;
}

double ExperimentConfig::number(const std::string& dotted, double fallback) const {
  const nlohmann::json* n = find(dotted);
  if (!n) return fallback;
  if (!n->is_number()) throw ConfigError("'" + dotted + "' must be a number");
  return n->get<double>();
}

double ExperimentConfig::required_number(const std::string& dotted) const {
  const nlohmann::json* n = find(dotted);
  if (!n) throw ConfigError("missing required config key '" + dotted + "'");
  if (!n->is_number()) throw ConfigError("'" + dotted + "' must be a number");
  return n->get<double>();
}

int64_t ExperimentConfig::integer(const std::string& dotted, int64_t fallback) const {
  const nlohmann::json* n = find(dotted);
  if (!n) return fallback;
  if (!n->is_number_integer()) throw ConfigError("'" + dotted + "' must be an integer");
  return n->get<int64_t>();
}

bool ExperimentConfig::boolean(const std::string& dotted, bool fallback) const {
  const nlohmann::json* n = find(dotted);
  if (!n) return fallback;
  if (!n->is_boolean()) throw ConfigError("'" + dotted + "' must be a boolean");
  return n->get<bool>();
}

std::string ExperimentConfig::text(const std::string& dotted,
                                   const std::string& fallback) const {
  const nlohmann::json* n = find(dotted);
  if (!n) return fallback;
  if (!n->is_string()) throw ConfigError("'" + dotted + "' must be a string");
  return n->get<std::string>();
}

std::vector<double> ExperimentConfig::number_list(const std::string& dotted) const {
  const nlohmann::json* n = find(dotted);
  if (!n) return {};
  if (!n->is_array()) throw ConfigError("'" + dotted + "' must be an array");
  std::vector<double> out;
  for (const auto& v : *n) {
    if (!v.is_number()) throw ConfigError("'" + dotted + "' must contain numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::vector<double>> ExperimentConfig::matrix(
    const std::string& dotted) const {
  const nlohmann::json* n = find(dotted);
  if (!n) throw ConfigError("missing required config key '" + dotted + "'");
  if (!n->is_array()) throw ConfigError("'" + dotted + "' must be an array of rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : *n) {
    if (!row.is_array()) throw ConfigError("'" + dotted + "' rows must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ConfigError("'" + dotted + "' entries must be numbers");
      r.push_back(v.get<double>());
    }
    out.push_back(std::move(r));
  }
  return out;
}

void ExperimentConfig::set(const std::string& dotted, const nlohmann::json& value) {
  nlohmann::json* node = &root_;
  std::istringstream parts(dotted);
  std::string part, prev;
  std::vector<std::string> chain;
  while (std::getline(parts, part, '.')) chain.push_back(part);
  for (size_t i = 0; i + 1 < chain.size(); ++i) node = &(*node)[chain[i]];
  (*node)[chain.back()] = value;
  validate();
}

}  // namespace simplexdiff
