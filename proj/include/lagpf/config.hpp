#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lagpf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;  // 0 for command-line overrides
};

// key=value per line; blank lines and '#' comments ignored.
std::vector<ConfigEntry> parse_config_file(const std::string& path);

// key=value tokens, e.g. from argv.
std::vector<ConfigEntry> parse_overrides(const std::vector<std::string>& tokens);

// Typed readers; every failure names the key (and line, when it came from a file).
double entry_as_double(const ConfigEntry& e);
int entry_as_int(const ConfigEntry& e);
std::vector<int> entry_as_int_list(const ConfigEntry& e);
std::vector<double> entry_as_double_list(const ConfigEntry& e);

[[noreturn]] void config_fail(const ConfigEntry& e, const std::string& what);

}  // namespace lagpf
