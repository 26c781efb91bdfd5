#include "retlab/train_config_file.hpp"

#include <charconv>
#include <set>
#include <sstream>
#include <string_view>

#include "retlab/errors.hpp"
#include "retlab/io.hpp"

namespace retlab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

int parse_int(std::string_view value, int line, std::string_view key) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    fail(line, std::string(key) + " wants an integer, got '" + std::string(value) + "'");
  }
  return out;
}

double parse_real(std::string_view value, int line, std::string_view key) {
  double out = 0.0;
  if (!parse_double(std::string(value), out)) {
    fail(line, std::string(key) + " wants a number, got '" + std::string(value) + "'");
  }
  return out;
}

void expect_value(std::string_view key, std::string_view value, std::string_view want,
                  int line) {
  if (value != want) {
    fail(line, std::string(key) + " supports only '" + std::string(want) + "', got '" +
                   std::string(value) + "'");
  }
}

}  // namespace

void apply_config_text(const std::string& text, TrainConfig& cfg) {
  std::istringstream stream(text);
  std::string raw_line;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(stream, raw_line)) {
    ++line_no;
    const std::string_view line = trim(raw_line);
    if (line.empty() || line.front() == '#') continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (!seen.insert(key).second) fail(line_no, "duplicate key '" + key + "'");

    if (key == "max_bin") {
      cfg.max_bin = parse_int(value, line_no, key);
    } else if (key == "learning_rate") {
      cfg.learning_rate = parse_real(value, line_no, key);
    } else if (key == "num_leaves") {
      cfg.num_leaves = parse_int(value, line_no, key);
    } else if (key == "min_data") {
      cfg.min_data = parse_int(value, line_no, key);
    } else if (key == "boost_from_average") {
      if (value == "true") {
        cfg.boost_from_average = true;
      } else if (value == "false") {
        cfg.boost_from_average = false;
      } else {
        fail(line_no, "boost_from_average wants true or false, got '" +
                          std::string(value) + "'");
      }
    } else if (key == "boosting_type") {
      expect_value(key, value, "gbdt", line_no);
    } else if (key == "objective") {
      expect_value(key, value, "binary", line_no);
    } else if (key == "metric") {
      expect_value(key, value, "binary_logloss", line_no);
    } else if (key == "verbose") {
      expect_value(key, value, "-1", line_no);
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }
}

void apply_config_file(const std::string& path, TrainConfig& cfg) {
  apply_config_text(read_file(path), cfg);
}

}  // namespace retlab
