#pragma once

#include <istream>
#include <map>
#include <string>
#include <vector>

#include "qrobust/errors.hpp"

namespace qrobust {

// Flat `key = value` text format: one assignment per line, '#' comments,
// blank lines ignored. Duplicate keys are rejected so a typo cannot silently
// override an earlier setting.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> parse_key_values_file(const std::string& path);

// Typed accessors with field-level error messages.
double parse_double_field(const std::string& key, const std::string& raw);
long parse_int_field(const std::string& key, const std::string& raw);
bool parse_bool_field(const std::string& key, const std::string& raw);
std::vector<double> parse_double_list_field(const std::string& key,
                                            const std::string& raw);

}  // namespace qrobust
