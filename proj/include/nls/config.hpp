#pragma once

// key=value experiment configuration: '#' starts a comment, later
// assignments override earlier ones, and each subcommand declares the keys
// it accepts.

#include <cstdint>
#include <initializer_list>
#include <istream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nls {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Config {
 public:
  void parse(std::istream& is, const std::string& origin = "<config>");
  void load(const std::string& path);
  /// "key=value", as given to --set.
  void set(const std::string& assignment);
  void set(const std::string& key, const std::string& value) { values_[key] = value; }

  /// Throws ConfigError naming the first key not in `allowed`.
  void restrict_to(std::initializer_list<const char*> allowed, const std::string& who) const;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const;
  int get_int(const std::string& key, int fallback) const;
  std::int64_t get_int64(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Comma-separated list.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace nls
