#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace rbeam {

// Parses the configuration subset of TOML used by the scenario and sweep
// files and lowers it onto a JSON document: tables, arrays of tables, dotted
// keys, basic and literal strings, booleans, integers, floats, arrays (with
// newlines inside the brackets), and comments. Dates, inline tables, and
// hex/octal/binary integers are rejected with a ConfigError naming the line.
nlohmann::json parse_toml_lite(const std::string& text);

}  // namespace rbeam
