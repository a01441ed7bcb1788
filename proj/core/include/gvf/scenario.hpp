#pragma once

#include "gvf/simulation.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gvf {

/// Configuration problem tied to a dotted key such as "path.r".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, int line, const std::string& message);

  const std::string& key() const noexcept { return key_; }
  int line() const noexcept { return line_; }  // 0 when not tied to a line

 private:
  std::string key_;
  int line_;
};

/// Sectioned key = value text. '#' and ';' start comments.
class IniDocument {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };
  using Section = std::map<std::string, Entry, std::less<>>;

  static IniDocument parse(std::string_view text);

  bool has_section(std::string_view section) const;
  const Section* section(std::string_view name) const;
  int section_line(std::string_view name) const;
  const std::map<std::string, Section, std::less<>>& sections() const { return sections_; }

  /// Sets section.key, creating the section if needed.
  void set(const std::string& dotted_key, const std::string& value);

 private:
  std::map<std::string, Section, std::less<>> sections_;
  std::map<std::string, int, std::less<>> section_lines_;
};

enum class PathKind { kCircle, kEllipse, kLine, kCylinderPlane };

struct Scenario {
  SimConfig config;
  PathKind path_kind = PathKind::kCircle;
  double path_radius = 0.0;  // circle and cylinder-plane; 0 otherwise
};

/// Builds a scenario, rejecting unknown keys and invalid values with a
/// ConfigError naming the offending key.
Scenario load_scenario(const IniDocument& doc);
Scenario load_scenario_text(std::string_view text);
Scenario load_scenario_file(const std::string& path);

/// Non-fatal findings (e.g. rank-deficient start). Throws ConfigError for
/// anything load_scenario rejects.
std::vector<std::string> validate_scenario(const Scenario& scenario);

std::string read_text_file(const std::string& path);

}  // namespace gvf
