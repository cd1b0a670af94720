#include "core/toml_lite.hpp"

#include <cctype>
#include <cstdlib>

#include "core/types.hpp"

namespace g2k {

namespace {

using nlohmann::json;

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  int line = 1;

  bool done() const { return i >= s.size(); }
  char peek() const { return i < s.size() ? s[i] : '\0'; }
  char get() {
    const char c = s[i++];
    if (c == '\n') ++line;
    return c;
  }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t')) ++i;
  }
  void skip_ws_comment() {
    skip_ws();
    if (peek() == '#') {
      while (!done() && peek() != '\n') ++i;
    }
  }
  [[noreturn]] void err(const std::string& what) const {
    fail(ErrorCode::ParseError,
         "toml parse error at line " + std::to_string(line) + ": " + what);
  }
};

std::string parse_key_part(Cursor& c) {
  c.skip_ws();
  if (c.peek() == '"' || c.peek() == '\'') {
    const char quote = c.get();
    std::string out;
    while (!c.done() && c.peek() != quote) out.push_back(c.get());
    if (c.done()) c.err("unterminated quoted key");
    c.get();
    return out;
  }
  std::string out;
  while (!c.done() && (std::isalnum(static_cast<unsigned char>(c.peek())) ||
                       c.peek() == '_' || c.peek() == '-'))
    out.push_back(c.get());
  if (out.empty()) c.err("expected key");
  return out;
}

std::vector<std::string> parse_dotted_key(Cursor& c) {
  std::vector<std::string> parts{parse_key_part(c)};
  c.skip_ws();
  while (c.peek() == '.') {
    c.get();
    parts.push_back(parse_key_part(c));
    c.skip_ws();
  }
  return parts;
}

json parse_value(Cursor& c);

json parse_array(Cursor& c) {
  json arr = json::array();
  c.get();  // '['
  while (true) {
    c.skip_ws_comment();
    if (c.peek() == '\n') {
      c.get();
      continue;
    }
    if (c.peek() == ']') {
      c.get();
      return arr;
    }
    arr.push_back(parse_value(c));
    c.skip_ws_comment();
    while (c.peek() == '\n') {
      c.get();
      c.skip_ws_comment();
    }
    if (c.peek() == ',') {
      c.get();
      continue;
    }
    if (c.peek() == ']') {
      c.get();
      return arr;
    }
    c.err("expected ',' or ']' in array");
  }
}

json parse_inline_table(Cursor& c) {
  json obj = json::object();
  c.get();  // '{'
  c.skip_ws();
  if (c.peek() == '}') {
    c.get();
    return obj;
  }
  while (true) {
    const auto key = parse_dotted_key(c);
    c.skip_ws();
    if (c.peek() != '=') c.err("expected '=' in inline table");
    c.get();
    c.skip_ws();
    json* slot = &obj;
    for (std::size_t k = 0; k + 1 < key.size(); ++k) slot = &(*slot)[key[k]];
    (*slot)[key.back()] = parse_value(c);
    c.skip_ws();
    if (c.peek() == ',') {
      c.get();
      c.skip_ws();
      continue;
    }
    if (c.peek() == '}') {
      c.get();
      return obj;
    }
    c.err("expected ',' or '}' in inline table");
  }
}

json parse_value(Cursor& c) {
  c.skip_ws();
  const char ch = c.peek();
  if (ch == '[') return parse_array(c);
  if (ch == '{') return parse_inline_table(c);
  if (ch == '"' || ch == '\'') {
    const char quote = c.get();
    std::string out;
    while (!c.done() && c.peek() != quote) {
      char x = c.get();
      if (x == '\\' && quote == '"' && !c.done()) {
        const char esc = c.get();
        switch (esc) {
          case 'n': x = '\n'; break;
          case 't': x = '\t'; break;
          case '"': x = '"'; break;
          case '\\': x = '\\'; break;
          default: c.err("unsupported escape");
        }
      }
      out.push_back(x);
    }
    if (c.done()) c.err("unterminated string");
    c.get();
    return out;
  }
  std::string tok;
  while (!c.done() && c.peek() != ',' && c.peek() != ']' && c.peek() != '}' &&
         c.peek() != '\n' && c.peek() != '#' && c.peek() != ' ' &&
         c.peek() != '\t')
    tok.push_back(c.get());
  if (tok == "true") return true;
  if (tok == "false") return false;
  if (tok.empty()) c.err("expected value");
  // number: integer when it looks like one, float otherwise
  const bool is_int = tok.find_first_of(".eE") == std::string::npos &&
                      tok != "inf" && tok != "-inf" && tok != "nan";
  char* end = nullptr;
  if (is_int) {
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end && *end == '\0') return v;
  }
  const double d = std::strtod(tok.c_str(), &end);
  if (!end || *end != '\0') c.err("bad number: " + tok);
  return d;
}

}  // namespace

nlohmann::json parse_toml(const std::string& text) {
  json root = json::object();
  Cursor c{text};
  json* table = &root;

  while (!c.done()) {
    c.skip_ws_comment();
    if (c.done()) break;
    if (c.peek() == '\n') {
      c.get();
      continue;
    }
    if (c.peek() == '[') {
      c.get();
      const bool array_table = c.peek() == '[';
      if (array_table) c.get();
      const auto path = parse_dotted_key(c);
      c.skip_ws();
      if (c.peek() != ']') c.err("expected ']'");
      c.get();
      if (array_table) {
        if (c.peek() != ']') c.err("expected ']]'");
        c.get();
      }
      json* slot = &root;
      for (std::size_t k = 0; k < path.size(); ++k) {
        json& next = (*slot)[path[k]];
        if (k + 1 == path.size() && array_table) {
          if (!next.is_array()) next = json::array();
          next.push_back(json::object());
          slot = &next.back();
        } else {
          if (next.is_array()) {
            if (next.empty()) next.push_back(json::object());
            slot = &next.back();
          } else {
            if (!next.is_object()) next = json::object();
            slot = &next;
          }
        }
      }
      table = slot;
      c.skip_ws_comment();
      continue;
    }
    const auto key = parse_dotted_key(c);
    c.skip_ws();
    if (c.peek() != '=') c.err("expected '=' after key");
    c.get();
    json* slot = table;
    for (std::size_t k = 0; k + 1 < key.size(); ++k) slot = &(*slot)[key[k]];
    (*slot)[key.back()] = parse_value(c);
    c.skip_ws_comment();
    if (!c.done() && c.peek() != '\n') c.err("trailing characters after value");
  }
  return root;
}

nlohmann::json parse_config_text(const std::string& text) {
  for (char ch : text) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
    if (ch == '{') {
      try {
        return nlohmann::json::parse(text);
      } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, std::string("json parse error: ") + e.what());
      }
    }
    break;
  }
  return parse_toml(text);
}

}  // namespace g2k
