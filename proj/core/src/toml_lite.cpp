#include "rbeam/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "rbeam/errors.hpp"

namespace rbeam {
namespace {

bool is_bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' ||
         c == '-';
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  nlohmann::json parse() {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* table = &root;
    skip_trivia();
    while (!eof()) {
      if (peek() == '[') {
        table = parse_header(root);
      } else {
        parse_assignment(*table);
      }
      skip_trivia();
    }
    return root;
  }

 private:
  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  [[noreturn]] void fail(const std::string& message) const {
    size_t line = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') ++line;
    }
    throw ConfigError("toml: line " + std::to_string(line) + ": " + message);
  }

  // Spaces and tabs only; stays on the current line.
  void skip_inline_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
  }

  // Whitespace, newlines, and comments.
  void skip_trivia() {
    while (!eof()) {
      const char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (!eof() && peek() != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Everything after a header or value up to the line break must be blank or
  // a comment.
  void expect_end_of_line() {
    skip_inline_ws();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos_;
    }
    if (eof()) return;
    if (peek() == '\r') ++pos_;
    if (eof()) return;
    if (peek() != '\n') fail("expected end of line");
    ++pos_;
  }

  std::string parse_key_part() {
    if (eof()) fail("expected a key");
    if (peek() == '"' || peek() == '\'') {
      const nlohmann::json s = parse_string();
      return s.get<std::string>();
    }
    const size_t start = pos_;
    while (!eof() && is_bare_key_char(peek())) ++pos_;
    if (pos_ == start) fail("expected a key");
    return text_.substr(start, pos_ - start);
  }

  std::vector<std::string> parse_key_path() {
    std::vector<std::string> parts;
    parts.push_back(parse_key_part());
    skip_inline_ws();
    while (!eof() && peek() == '.') {
      ++pos_;
      skip_inline_ws();
      parts.push_back(parse_key_part());
      skip_inline_ws();
    }
    return parts;
  }

  // Walks `node` down a dotted path, creating tables as needed. A path step
  // that lands on an array of tables continues inside its last element.
  nlohmann::json* descend(nlohmann::json* node,
                          const std::vector<std::string>& path, size_t count) {
    for (size_t i = 0; i < count; ++i) {
      nlohmann::json& slot = (*node)[path[i]];
      if (slot.is_null()) slot = nlohmann::json::object();
      if (slot.is_array()) {
        if (slot.empty() || !slot.back().is_object()) {
          fail("key '" + path[i] + "' is not a table");
        }
        node = &slot.back();
      } else if (slot.is_object()) {
        node = &slot;
      } else {
        fail("key '" + path[i] + "' already holds a value");
      }
    }
    return node;
  }

  nlohmann::json* parse_header(nlohmann::json& root) {
    ++pos_;
    const bool array_of_tables = !eof() && peek() == '[';
    if (array_of_tables) ++pos_;
    skip_inline_ws();
    const std::vector<std::string> path = parse_key_path();
    skip_inline_ws();
    if (eof() || peek() != ']') fail("expected ']' after table name");
    ++pos_;
    if (array_of_tables) {
      if (eof() || peek() != ']') fail("expected ']]' after table array name");
      ++pos_;
    }
    expect_end_of_line();

    nlohmann::json* parent = descend(&root, path, path.size() - 1);
    nlohmann::json& slot = (*parent)[path.back()];
    if (array_of_tables) {
      if (slot.is_null()) slot = nlohmann::json::array();
      if (!slot.is_array()) {
        fail("table array '" + path.back() + "' clashes with a value");
      }
      slot.push_back(nlohmann::json::object());
      return &slot.back();
    }
    if (slot.is_null()) slot = nlohmann::json::object();
    if (!slot.is_object()) {
      fail("table '" + path.back() + "' clashes with a value");
    }
    return &slot;
  }

  void parse_assignment(nlohmann::json& table) {
    const std::vector<std::string> path = parse_key_path();
    if (eof() || peek() != '=') fail("expected '=' after key");
    ++pos_;
    skip_inline_ws();
    nlohmann::json value = parse_value();
    expect_end_of_line();

    nlohmann::json* parent = descend(&table, path, path.size() - 1);
    if (parent->contains(path.back())) {
      fail("duplicate key '" + path.back() + "'");
    }
    (*parent)[path.back()] = std::move(value);
  }

  nlohmann::json parse_value() {
    if (eof()) fail("expected a value");
    const char c = peek();
    if (c == '"' || c == '\'') return parse_string();
    if (c == '[') return parse_array();
    if (c == '{') fail("inline tables are not supported");
    if (text_.compare(pos_, 4, "true") == 0 && boundary(pos_ + 4)) {
      pos_ += 4;
      return true;
    }
    if (text_.compare(pos_, 5, "false") == 0 && boundary(pos_ + 5)) {
      pos_ += 5;
      return false;
    }
    return parse_number();
  }

  bool boundary(size_t at) const {
    return at >= text_.size() || !is_bare_key_char(text_[at]);
  }

  nlohmann::json parse_string() {
    const char quote = peek();
    ++pos_;
    std::string out;
    if (quote == '\'') {
      while (!eof() && peek() != '\'') {
        if (peek() == '\n') fail("unterminated string");
        out.push_back(peek());
        ++pos_;
      }
      if (eof()) fail("unterminated string");
      ++pos_;
      return out;
    }
    while (!eof() && peek() != '"') {
      char ch = peek();
      if (ch == '\n') fail("unterminated string");
      if (ch == '\\') {
        ++pos_;
        if (eof()) fail("unterminated escape");
        switch (peek()) {
          case '"': ch = '"'; break;
          case '\\': ch = '\\'; break;
          case 'n': ch = '\n'; break;
          case 't': ch = '\t'; break;
          case 'r': ch = '\r'; break;
          case 'b': ch = '\b'; break;
          case 'f': ch = '\f'; break;
          default: fail("unsupported escape sequence");
        }
      }
      out.push_back(ch);
      ++pos_;
    }
    if (eof()) fail("unterminated string");
    ++pos_;
    return out;
  }

  nlohmann::json parse_array() {
    ++pos_;
    nlohmann::json out = nlohmann::json::array();
    skip_trivia();
    while (!eof() && peek() != ']') {
      out.push_back(parse_value());
      skip_trivia();
      if (!eof() && peek() == ',') {
        ++pos_;
        skip_trivia();
      } else {
        break;
      }
    }
    if (eof() || peek() != ']') fail("expected ']' to close an array");
    ++pos_;
    return out;
  }

  nlohmann::json parse_number() {
    const size_t start = pos_;
    bool is_float = false;
    if (!eof() && (peek() == '+' || peek() == '-')) ++pos_;
    while (!eof()) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '_') {
        ++pos_;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos_;
        if (!eof() && (peek() == '+' || peek() == '-')) ++pos_;
      } else {
        break;
      }
    }
    std::string digits;
    for (size_t i = start; i < pos_; ++i) {
      if (text_[i] != '_') digits.push_back(text_[i]);
    }
    if (digits.empty() || digits == "+" || digits == "-") {
      fail("expected a value");
    }
    const char* begin = digits.c_str();
    char* end = nullptr;
    if (is_float) {
      const double v = std::strtod(begin, &end);
      if (end != begin + digits.size()) fail("malformed number");
      return v;
    }
    const long long v = std::strtoll(begin, &end, 10);
    if (end != begin + digits.size()) fail("malformed number");
    return v;
  }

  const std::string& text_;
  size_t pos_ = 0;
};

}  // namespace

nlohmann::json parse_toml_lite(const std::string& text) {
  return Parser(text).parse();
}

}  // namespace rbeam
