#include "nls/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace nls {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T, class F>
T convert(const std::string& key, const std::string& text, F&& f) {
  try {
    std::size_t used = 0;
    T v = f(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: bad value '" + text + "' for key '" + key + "'");
  }
}

}  // namespace

void Config::parse(std::istream& is, const std::string& origin) {
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    values_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
}

void Config::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  parse(is, path);
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("--set expects key=value, got '" + assignment + "'");
  }
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

void Config::restrict_to(std::initializer_list<const char*> allowed, const std::string& who) const {
  for (const auto& [key, value] : values_) {
    const bool ok =
        std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) throw ConfigError(who + ": unknown key '" + key + "'");
  }
}

std::string Config::get(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

int Config::get_int(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  return convert<int>(key, get(key, ""),
                      [](const std::string& s, std::size_t* n) { return std::stoi(s, n); });
}

std::int64_t Config::get_int64(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  return convert<std::int64_t>(key, get(key, ""),
                               [](const std::string& s, std::size_t* n) { return std::stoll(s, n); });
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return fallback;
  return convert<double>(key, get(key, ""),
                         [](const std::string& s, std::size_t* n) { return std::stod(s, n); });
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get(key, "");
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config: bad boolean '" + v + "' for key '" + key + "'");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  std::stringstream ss(get(key, ""));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(convert<double>(
        key, item, [](const std::string& s, std::size_t* n) { return std::stod(s, n); }));
  }
  if (out.empty()) throw ConfigError("config: empty list for key '" + key + "'");
  return out;
}

}  // namespace nls
