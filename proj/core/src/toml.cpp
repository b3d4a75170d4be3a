#include "hogmt/toml.hpp"

#include <cctype>
#include <cmath>

#include "hogmt/error.hpp"
#include "hogmt/io.hpp"

namespace hogmt::toml {

namespace {

[[noreturn]] void parse_fail(int line, const std::string& what) {
  fail("config_parse", "line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void type_fail(const Value& v, const std::string& want) {
  fail("config_type",
       "line " + std::to_string(v.line) + ": expected " + want);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

// Drop a trailing comment, respecting quoted strings.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (s[i] == '#' && !in_string) {
      return s.substr(0, i);
    }
  }
  return s;
}

bool valid_key(std::string_view key) {
  if (key.empty()) {
    return false;
  }
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' &&
        c != '-' && c != '.') {
      return false;
    }
  }
  return true;
}

std::string unescape(std::string_view body, int line) {
  std::string out;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '\\') {
      out.push_back(body[i]);
      continue;
    }
    if (++i == body.size()) {
      parse_fail(line, "dangling escape in string");
    }
    switch (body[i]) {
      case '"': out.push_back('"'); break;
      case '\\': out.push_back('\\'); break;
      case 'n': out.push_back('\n'); break;
      case 't': out.push_back('\t'); break;
      default: parse_fail(line, std::string("unsupported escape \\") + body[i]);
    }
  }
  return out;
}

bool looks_integer(std::string_view s) {
  std::size_t i = (s.front() == '+' || s.front() == '-') ? 1 : 0;
  if (i == s.size()) {
    return false;
  }
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return true;
}

Value parse_scalar(std::string_view text, int line) {
  Value v;
  v.line = line;
  if (text.empty()) {
    parse_fail(line, "empty value");
  }
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      parse_fail(line, "unterminated string");
    }
    v.kind = Value::Kind::string;
    v.str = unescape(text.substr(1, text.size() - 2), line);
    return v;
  }
  if (text == "true" || text == "false") {
    v.kind = Value::Kind::boolean;
    v.boolean = text == "true";
    return v;
  }
  if (looks_integer(text)) {
    v.kind = Value::Kind::integer;
    try {
      v.integer = parse_int(text);
    } catch (const Error&) {
      parse_fail(line, "integer out of range: '" + std::string(text) + "'");
    }
    return v;
  }
  v.kind = Value::Kind::real;
  try {
    v.real = parse_double(text);
  } catch (const Error&) {
    parse_fail(line, "cannot parse value '" + std::string(text) + "'");
  }
  return v;
}

Value parse_value(std::string_view text, int line) {
  if (text.empty()) {
    parse_fail(line, "missing value");
  }
  if (text.front() != '[') {
    return parse_scalar(text, line);
  }
  if (text.back() != ']') {
    parse_fail(line, "unterminated array");
  }
  Value v;
  v.line = line;
  v.kind = Value::Kind::array;
  std::string_view body = trim(text.substr(1, text.size() - 2));
  if (body.empty()) {
    return v;
  }
  bool in_string = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    bool at_end = i == body.size();
    if (!at_end && body[i] == '"' && (i == 0 || body[i - 1] != '\\')) {
      in_string = !in_string;
    }
    if (at_end || (body[i] == ',' && !in_string)) {
      std::string_view item = trim(body.substr(start, i - start));
      if (item.empty()) {
        parse_fail(line, "empty array element");
      }
      v.array.push_back(parse_scalar(item, line));
      start = i + 1;
    }
  }
  return v;
}

}  // namespace

const std::string& Value::as_string() const {
  if (kind != Kind::string) {
    type_fail(*this, "a string");
  }
  return str;
}

long long Value::as_int() const {
  if (kind != Kind::integer) {
    type_fail(*this, "an integer");
  }
  return integer;
}

double Value::as_real() const {
  if (kind == Kind::integer) {
    return static_cast<double>(integer);
  }
  if (kind != Kind::real) {
    type_fail(*this, "a number");
  }
  return real;
}

bool Value::as_bool() const {
  if (kind != Kind::boolean) {
    type_fail(*this, "true or false");
  }
  return boolean;
}

const std::vector<Value>& Value::as_array() const {
  if (kind != Kind::array) {
    type_fail(*this, "an array");
  }
  return array;
}

const Value* Document::find(const std::string& key) const {
  auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

const Value& Document::at(const std::string& key) const {
  const Value* v = find(key);
  if (!v) {
    fail("config_missing", "required key '" + key + "' is missing");
  }
  return *v;
}

Document parse(const std::string& text) {
  Document doc;
  std::string section;        // dotted prefix for root-level keys
  Table* array_table = nullptr;  // active [[...]] block, if any

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) {
      eol = text.size();
    }
    ++line_no;
    std::string_view line =
        trim(strip_comment(std::string_view(text).substr(pos, eol - pos)));
    pos = eol + 1;
    if (line.empty()) {
      if (pos > text.size()) {
        break;
      }
      continue;
    }

    if (line.starts_with("[[")) {
      if (!line.ends_with("]]") || line.size() < 5) {
        parse_fail(line_no, "malformed table array header");
      }
      std::string name(trim(line.substr(2, line.size() - 4)));
      if (!valid_key(name)) {
        parse_fail(line_no, "invalid table array name '" + name + "'");
      }
      doc.table_arrays[name].emplace_back();
      array_table = &doc.table_arrays[name].back();
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        parse_fail(line_no, "malformed section header");
      }
      std::string name(trim(line.substr(1, line.size() - 2)));
      if (!valid_key(name)) {
        parse_fail(line_no, "invalid section name '" + name + "'");
      }
      section = name + ".";
      array_table = nullptr;
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      parse_fail(line_no, "expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    if (!valid_key(key)) {
      parse_fail(line_no, "invalid key '" + key + "'");
    }
    Value value = parse_value(trim(line.substr(eq + 1)), line_no);
    Table& target = array_table ? *array_table : doc.values;
    std::string full = array_table ? key : section + key;
    if (!target.emplace(full, std::move(value)).second) {
      parse_fail(line_no, "duplicate key '" + full + "'");
    }
  }
  return doc;
}

Document parse_file(const std::string& path) {
  return parse(read_text_file(path));
}

}  // namespace hogmt::toml
