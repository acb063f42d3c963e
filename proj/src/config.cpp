#include "lagpf/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace lagpf {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

ConfigEntry split_pair(const std::string& raw, int line) {
  auto eq = raw.find('=');
  if (eq == std::string::npos) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << "expected key=value, got '" << raw << "'";
    throw ConfigError(os.str());
  }
  ConfigEntry e;
  e.key = trim(raw.substr(0, eq));
  e.value = trim(raw.substr(eq + 1));
  e.line = line;
  if (e.key.empty()) {
    std::ostringstream os;
    if (line > 0) os << "line " << line << ": ";
    os << "empty key in '" << raw << "'";
    throw ConfigError(os.str());
  }
  return e;
}

}  // namespace

std::vector<ConfigEntry> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<ConfigEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    entries.push_back(split_pair(line, line_no));
  }
  return entries;
}

std::vector<ConfigEntry> parse_overrides(const std::vector<std::string>& tokens) {
  std::vector<ConfigEntry> entries;
  entries.reserve(tokens.size());
  for (const auto& t : tokens) entries.push_back(split_pair(t, 0));
  return entries;
}

void config_fail(const ConfigEntry& e, const std::string& what) {
  std::ostringstream os;
  if (e.line > 0) os << "line " << e.line << ": ";
  os << "key '" << e.key << "': " << what;
  throw ConfigError(os.str());
}

double entry_as_double(const ConfigEntry& e) {
  const char* s = e.value.c_str();
  char* end = nullptr;
  double v = std::strtod(s, &end);
  if (end == s || *end != '\0') config_fail(e, "'" + e.value + "' is not a number");
  return v;
}

int entry_as_int(const ConfigEntry& e) {
  const char* s = e.value.c_str();
  char* end = nullptr;
  long v = std::strtol(s, &end, 10);
  if (end == s || *end != '\0') config_fail(e, "'" + e.value + "' is not an integer");
  return static_cast<int>(v);
}

std::vector<int> entry_as_int_list(const ConfigEntry& e) {
  std::vector<int> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ConfigEntry piece{e.key, trim(item), e.line};
    out.push_back(entry_as_int(piece));
  }
  if (out.empty()) config_fail(e, "empty list");
  return out;
}

std::vector<double> entry_as_double_list(const ConfigEntry& e) {
  std::vector<double> out;
  std::stringstream ss(e.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    ConfigEntry piece{e.key, trim(item), e.line};
    out.push_back(entry_as_double(piece));
  }
  if (out.empty()) config_fail(e, "empty list");
  return out;
}

}  // namespace lagpf
