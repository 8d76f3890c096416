// Copyright (c) 2026 The triad authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRIAD_SCENARIO_IO_HPP
#define TRIAD_SCENARIO_IO_HPP

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triad/distributions.hpp"

namespace triad {

/// Parse failure in a scenario file, with the offending location attached.
class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(std::string file, int line, const std::string& message)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

namespace detail {

class DensityParser {
 public:
  explicit DensityParser(std::string_view text) : text_(text) {}

  Density parse() {
    Density d = parse_density();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input after density expression");
    return d;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw std::invalid_argument(message + " (at offset " + std::to_string(pos_) + " of '" +
                                std::string(text_) + "')");
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    if (pos_ == start) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return value;
  }

  struct KeyValues {
    std::vector<std::pair<std::string, double>> items;

    std::optional<double> get(std::string_view a, std::string_view b = {}) const {
      for (const auto& [k, v] : items)
        if (k == a || (!b.empty() && k == b)) return v;
      return std::nullopt;
    }
  };

  KeyValues arg_list() {
    KeyValues kv;
    expect('(');
    if (consume(')')) return kv;
    for (;;) {
      std::string key = ident();
      expect('=');
      kv.items.emplace_back(std::move(key), number());
      if (consume(')')) break;
      expect(',');
    }
    return kv;
  }

  double require(const KeyValues& kv, std::string_view name, std::string_view alias,
                 const char* kind) {
    if (auto v = kv.get(name, alias)) return *v;
    fail(std::string(kind) + ": missing parameter '" + std::string(name) + "'");
  }

  Density parse_named(const std::string& name) {
    if (name == "gaussian" || name == "normal") {
      const auto kv = arg_list();
      return Density::gaussian(require(kv, "mean", "", "gaussian"),
                               require(kv, "var", "variance", "gaussian"));
    }
    if (name == "uniform") {
      const auto kv = arg_list();
      return Density::uniform(require(kv, "lo", "", "uniform"), require(kv, "hi", "", "uniform"));
    }
    if (name == "exponential") {
      const auto kv = arg_list();
      const double rate = require(kv, "rate", "", "exponential");
      const double shift = kv.get("shift").value_or(0.0);
      return Density::exponential(rate, shift);
    }
    if (name == "laplace") {
      const auto kv = arg_list();
      return Density::laplace(require(kv, "loc", "location", "laplace"),
                              require(kv, "scale", "", "laplace"));
    }
    if (name == "mixture") return parse_mixture();
    fail("unknown density kind '" + name + "'");
  }

  Density parse_mixture() {
    expect('(');
    std::vector<MixtureComponent> components;
    for (;;) {
      const double weight = number();
      expect('*');
      const std::string name = ident();
      if (name != "gaussian" && name != "normal")
        fail("mixture components must be gaussian, got '" + name + "'");
      const auto kv = arg_list();
      components.push_back({weight, require(kv, "mean", "", "mixture component"),
                            require(kv, "var", "variance", "mixture component")});
      if (consume(')')) break;
      expect('+');
    }
    return Density::gaussian_mixture(std::move(components));
  }

  Density parse_density() { return parse_named(ident()); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Parse one density expression, e.g. "gaussian(mean=0, var=1)" or
/// "mixture(0.5*gaussian(mean=-2, var=1) + 0.5*gaussian(mean=2, var=1))".
inline Density parse_density(std::string_view text) {
  return detail::DensityParser(text).parse();
}

/// Parse scenario text: UTF-8 key-value lines `fx = <density>` and
/// `fz = <density>`, with `#` comments. Both keys are required exactly once.
inline Scenario parse_scenario_text(std::string_view text,
                                    const std::string& name = "<string>") {
  std::optional<Density> fx, fz;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    std::string_view line =
        text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ScenarioParseError(name, line_no, "expected 'key = value'");
    const std::string_view key = detail::trim(line.substr(0, eq));
    const std::string_view value = detail::trim(line.substr(eq + 1));

    std::optional<Density>* slot = nullptr;
    if (key == "fx") slot = &fx;
    else if (key == "fz") slot = &fz;
    else throw ScenarioParseError(name, line_no, "unknown key '" + std::string(key) + "'");
    if (slot->has_value())
      throw ScenarioParseError(name, line_no, "duplicate key '" + std::string(key) + "'");
    try {
      slot->emplace(parse_density(value));
    } catch (const std::invalid_argument& e) {
      throw ScenarioParseError(name, line_no, e.what());
    }
  }
  if (!fx) throw ScenarioParseError(name, line_no, "missing 'fx' entry");
  if (!fz) throw ScenarioParseError(name, line_no, "missing 'fz' entry");
  return Scenario(std::move(*fx), std::move(*fz));
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError(path, 0, "cannot open scenario file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_text(buffer.str(), path);
}

/// Canonical text form; parse_scenario_text round-trips it.
inline std::string format_scenario(const Scenario& s) {
  return "fx = " + s.fx().describe() + "\nfz = " + s.fz().describe() + "\n";
}

}  // namespace triad

#endif  // TRIAD_SCENARIO_IO_HPP
