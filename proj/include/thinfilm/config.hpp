#pragma once

// Flat "key = value" run manifests. '#' starts a comment; blank lines are
// ignored; each key may appear once; keys outside the allowed set are
// rejected with the offending line number.

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "thinfilm/error.hpp"

namespace thinfilm {

class Config {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static Config parse(std::istream& is, const std::set<std::string>& allowed) {
    Config cfg;
    std::string raw;
    int line_no = 0;
    std::vector<std::string> problems;
    while (std::getline(is, raw)) {
      ++line_no;
      std::string line = raw.substr(0, raw.find('#'));
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        problems.push_back(at(line_no) + "expected 'key = value'");
        continue;
      }
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        problems.push_back(at(line_no) + "missing key");
      } else if (!allowed.count(key)) {
        problems.push_back(at(line_no) + "unknown key '" + key + "'");
      } else if (value.empty()) {
        problems.push_back(at(line_no) + "missing value for '" + key + "'");
      } else if (cfg.entries_.count(key)) {
        problems.push_back(at(line_no) + "duplicate key '" + key + "' (first on line " +
                           std::to_string(cfg.entries_[key].line) + ")");
      } else {
        cfg.entries_[key] = {value, line_no};
      }
    }
    if (!problems.empty()) {
      std::string msg;
      for (const auto& p : problems) msg += (msg.empty() ? "" : "\n") + p;
      throw Error(ErrorKind::config, msg);
    }
    return cfg;
  }

  static Config parse_string(const std::string& text, const std::set<std::string>& allowed) {
    std::istringstream is(text);
    return parse(is, allowed);
  }

  static Config load(const std::string& path, const std::set<std::string>& allowed) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorKind::io, "cannot open config " + path);
    return parse(is, allowed);
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  void set_default(const std::string& key, const std::string& value) {
    if (!has(key)) entries_[key] = {value, 0};
  }

  std::string get_string(const std::string& key) const { return entry(key).value; }
  std::string get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
  }

  double get_real(const std::string& key) const {
    const Entry& e = entry(key);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(e.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != e.value.size()) fail(e, "'" + e.value + "' is not a number");
    return v;
  }
  double get_real(const std::string& key, double fallback) const { return has(key) ? get_real(key) : fallback; }

  long get_int(const std::string& key) const {
    const Entry& e = entry(key);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(e.value, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != e.value.size()) fail(e, "'" + e.value + "' is not an integer");
    return v;
  }
  long get_int(const std::string& key, long fallback) const { return has(key) ? get_int(key) : fallback; }

  bool get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Entry& e = entry(key);
    if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
    if (e.value == "false" || e.value == "0" || e.value == "no") return false;
    fail(e, "'" + e.value + "' is not a boolean");
  }

  std::vector<double> get_list(const std::string& key) const {
    std::vector<double> out;
    if (!has(key)) return out;
    const Entry& e = entry(key);
    std::stringstream ss(e.value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(item, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (item.empty() || used != item.size()) fail(e, "'" + item + "' is not a number");
      out.push_back(v);
    }
    return out;
  }

  /// Wraps errors raised while interpreting a value with its line number.
  template <class F>
  auto interpret(const std::string& key, F&& f) const {
    const Entry& e = entry(key);
    try {
      return f(e.value);
    } catch (const Error& err) {
      fail(e, err.what());
    }
  }

  int line_of(const std::string& key) const { return has(key) ? entries_.at(key).line : 0; }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
  }
  static std::string at(int line) { return "line " + std::to_string(line) + ": "; }

  [[noreturn]] static void fail(const Entry& e, const std::string& what) {
    throw Error(ErrorKind::config, (e.line > 0 ? at(e.line) : std::string()) + what);
  }

  const Entry& entry(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw Error(ErrorKind::config, "missing required key '" + key + "'");
    return it->second;
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace thinfilm
