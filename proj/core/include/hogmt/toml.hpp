#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hogmt::toml {

// Minimal TOML-style reader covering the subset the tools' config files
// use: bare keys, [section] and [section.sub] headers, [[array-of-table]]
// headers, strings, integers, floats, booleans, inf, and flat arrays of
// numbers or strings. Section scoping flattens to dotted keys
// ("precoder.power"). Parse and schema errors carry the source line.
struct Value {
  enum class Kind { string, integer, real, boolean, array };
  Kind kind = Kind::string;
  std::string str;
  long long integer = 0;
  double real = 0.0;
  bool boolean = false;
  std::vector<Value> array;
  int line = 0;

  // Checked accessors; throw Error("config_type") naming the expectation.
  const std::string& as_string() const;
  long long as_int() const;
  double as_real() const;  // accepts integer values too
  bool as_bool() const;
  const std::vector<Value>& as_array() const;
};

using Table = std::map<std::string, Value>;

struct Document {
  Table values;                               // dotted keys
  std::map<std::string, std::vector<Table>> table_arrays;  // [[name]] blocks

  bool has(const std::string& key) const { return values.count(key) != 0; }
  const Value* find(const std::string& key) const;
  // Throws Error("config_missing") with the key name if absent.
  const Value& at(const std::string& key) const;
};

// Error("config_parse") with "line N: ..." diagnostics.
Document parse(const std::string& text);
Document parse_file(const std::string& path);

}  // namespace hogmt::toml
