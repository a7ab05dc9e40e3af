#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace spotlab {

struct ConfigError : std::runtime_error {
  int line = 0;
  ConfigError(int line_no, const std::string& message)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
};

// Flat `key = value` configuration, one pair per line, `#` starts a comment.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string trimmed = trim(line);
      if (trimmed.empty()) continue;
      const auto eq = trimmed.find('=');
      if (eq == std::string::npos) throw ConfigError(line_no, "expected `key = value`");
      const std::string key = trim(trimmed.substr(0, eq));
      const std::string value = trim(trimmed.substr(eq + 1));
      if (key.empty()) throw ConfigError(line_no, "empty key");
      if (cfg.entries_.count(key)) throw ConfigError(line_no, "duplicate key `" + key + "`");
      cfg.entries_[key] = {value, line_no};
    }
    return cfg;
  }

  static KeyValueConfig parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    return parse(in);
  }

  static KeyValueConfig parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
  }

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::string get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(0, "missing required key `" + key + "`");
    return it->second.value;
  }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  long long get_int(const std::string& key) const {
    return parse_number<long long>(key, "integer");
  }
  long long get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
  }

  std::uint64_t get_uint64(const std::string& key) const {
    return parse_number<std::uint64_t>(key, "unsigned integer");
  }
  std::uint64_t get_uint64(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_uint64(key) : fallback;
  }

  double get_double(const std::string& key) const { return parse_number<double>(key, "number"); }
  double get_double(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
  }

  std::vector<std::string> get_list(const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
      const std::string t = trim(item);
      if (!t.empty()) out.push_back(t);
    }
    return out;
  }

  std::vector<int> get_int_list(const std::string& key) const {
    std::vector<int> out;
    for (const auto& item : get_list(key)) {
      try {
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("");
        out.push_back(v);
      } catch (...) {
        throw ConfigError(line_of(key), "`" + key + "`: `" + item + "` is not an integer");
      }
    }
    return out;
  }

  std::vector<double> get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : get_list(key)) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("");
        out.push_back(v);
      } catch (...) {
        throw ConfigError(line_of(key), "`" + key + "`: `" + item + "` is not a number");
      }
    }
    return out;
  }

  // Rejects keys outside the documented set (typo guard).
  void require_known(const std::vector<std::string>& known) const {
    for (const auto& [key, entry] : entries_) {
      bool ok = false;
      for (const auto& k : known) ok = ok || k == key;
      if (!ok) throw ConfigError(entry.line, "unknown key `" + key + "`");
    }
  }

  std::map<std::string, std::string> echo() const {
    std::map<std::string, std::string> out;
    for (const auto& [k, e] : entries_) out[k] = e.value;
    return out;
  }

 private:
  struct Entry {
    std::string value;
    int line = 0;
  };

  int line_of(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  template <typename T>
  T parse_number(const std::string& key, const char* what) const {
    const std::string text = get_string(key);
    std::istringstream ss(text);
    T value{};
    ss >> value;
    if (ss.fail() || !ss.eof()) {
      throw ConfigError(line_of(key), "`" + key + "`: `" + text + "` is not a valid " + what);
    }
    return value;
  }

  static std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace spotlab
