// Flat key = value run configuration, content hashing and CSV output.
#pragma once

#include "anosov/core.hpp"
#include "anosov/hyperbolic_linear.hpp"
#include "anosov/torus_maps.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace anosov {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Shortest round-trip decimal form used in every output file.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Config {
 public:
  Config() = default;

  static Config parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      require(eq != std::string::npos, ErrorKind::ConfigError,
              "line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      require(!key.empty(), ErrorKind::ConfigError, "line " + std::to_string(lineno) + ": empty key");
      require(!c.values_.count(key), ErrorKind::ConfigError, "duplicate key '" + key + "'");
      c.values_[key] = trim(line.substr(eq + 1));
    }
    return c;
  }

  static Config load(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::ConfigError, "cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  // Canonical text: sorted key = value lines.
  std::string canonical() const {
    std::string s;
    for (const auto& [k, v] : values_) s += k + " = " + v + "\n";
    return s;
  }
  std::string hash() const { return hex64(fnv1a(canonical())); }

  std::string get_string(const std::string& key, const std::string& def) const {
    used_.insert(key);
    auto it = values_.find(key);
    return it == values_.end() ? def : it->second;
  }

  double get_double(const std::string& key, double def, double lo, double hi) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    const double v = to_double(key, it->second);
    require(v >= lo && v <= hi, ErrorKind::ConfigError,
            key + " = " + it->second + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
    return v;
  }

  long long get_int(const std::string& key, long long def, long long lo, long long hi) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos == it->second.size() && pos > 0, ErrorKind::ConfigError, key + ": not an integer: " + it->second);
    require(v >= lo && v <= hi, ErrorKind::ConfigError,
            key + " = " + it->second + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos == it->second.size() && pos > 0, ErrorKind::ConfigError, key + ": not an unsigned integer");
    return v;
  }

  std::vector<double> get_doubles(const std::string& key, std::vector<double> def, double lo, double hi) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return def;
    std::vector<double> out;
    for (const auto& part : split(it->second, ',')) {
      const double v = to_double(key, part);
      require(v >= lo && v <= hi, ErrorKind::ConfigError, key + ": entry " + part + " out of range");
      out.push_back(v);
    }
    require(!out.empty(), ErrorKind::ConfigError, key + ": empty list");
    return out;
  }

  std::optional<Vec> get_vec(const std::string& key, int dim) const {
    used_.insert(key);
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    const auto parts = split(it->second, ',');
    require(static_cast<int>(parts.size()) == dim, ErrorKind::ConfigError,
            key + ": expected " + std::to_string(dim) + " components");
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = to_double(key, parts[static_cast<std::size_t>(i)]);
    return v;
  }

  // Rows separated by ';', entries by ','.
  ToralAutomorphism get_matrix(const std::string& key, const std::string& def) const {
    const std::string text = get_string(key, def);
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& r : split(text, ';')) {
      std::vector<std::int64_t> row;
      for (const auto& e : split(r, ',')) {
        std::size_t pos = 0;
        long long v = 0;
        try {
          v = std::stoll(e, &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        require(pos == e.size() && pos > 0, ErrorKind::ConfigError, key + ": bad entry '" + e + "'");
        row.push_back(v);
      }
      rows.push_back(row);
    }
    try {
      return ToralAutomorphism::from_rows(rows);
    } catch (const Error& err) {
      throw Error(ErrorKind::ConfigError, key + ": " + err.what());
    }
  }

  std::vector<std::string> unused() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : values_)
      if (!used_.count(k)) out.push_back(k);
    return out;
  }

 private:
  static double to_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    require(pos == s.size() && pos > 0 && std::isfinite(v), ErrorKind::ConfigError, key + ": not a number: " + s);
    return v;
  }

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

inline DAVariant parse_variant(const std::string& s) {
  if (s == "linear") return DAVariant::LINEAR;
  if (s == "mane") return DAVariant::MANE;
  if (s == "mixed") return DAVariant::MIXED;
  if (s == "hopf") return DAVariant::HOPF;
  throw Error(ErrorKind::ConfigError, "unknown variant '" + s + "'");
}

// Map parameters from the documented keys: base_matrix, variant, center, center_q, radius,
// strength, strength_q.
inline DAParams da_params(const Config& c, int dim) {
  DAParams p;
  p.variant = parse_variant(c.get_string("variant", "linear"));
  p.center = c.get_vec("center", dim).value_or(Vec::Zero(dim));
  p.center_q = c.get_vec("center_q", dim);
  p.radius = c.get_double("radius", 0.05, 1e-6, 0.5);
  p.strength = c.get_double("strength", 0.6, 1e-6, 10.0);
  if (c.has("strength_q")) p.strength_q = c.get_double("strength_q", 0.6, 1e-6, 1.0);
  return p;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& config_hash, const std::vector<std::string>& header)
      : out_(path), columns_(header.size()) {
    require(out_.good(), ErrorKind::IoError, "cannot write '" + path + "'");
    out_ << "# config_hash=" << config_hash << "\n";
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    require(cells.size() == columns_, ErrorKind::IoError, "CSV row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << "\n";
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace anosov
