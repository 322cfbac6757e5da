#include "qrobust/config_file.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qrobust {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigInvalid("line " + std::to_string(lineno) +
                          ": expected `key = value`");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw ConfigInvalid("line " + std::to_string(lineno) + ": empty key");
    }
    if (out.count(key)) {
      throw ConfigInvalid("duplicate key `" + key + "`");
    }
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_key_values_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("cannot open config file: " + path);
  return parse_key_values(in);
}

double parse_double_field(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("field `" + key + "`: expected a number, got `" + raw +
                        "`");
  }
}

long parse_int_field(const std::string& key, const std::string& raw) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(raw, &pos);
    if (pos != raw.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigInvalid("field `" + key + "`: expected an integer, got `" +
                        raw + "`");
  }
}

bool parse_bool_field(const std::string& key, const std::string& raw) {
  if (raw == "true" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "0" || raw == "no") return false;
  throw ConfigInvalid("field `" + key + "`: expected true/false, got `" + raw +
                      "`");
}

std::vector<double> parse_double_list_field(const std::string& key,
                                            const std::string& raw) {
  std::vector<double> out;
  std::istringstream ss(raw);
  std::string token;
  while (ss >> token) out.push_back(parse_double_field(key, token));
  if (out.empty()) {
    throw ConfigInvalid("field `" + key + "`: expected at least one number");
  }
  return out;
}

}  // namespace qrobust
