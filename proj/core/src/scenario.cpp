#include "gvf/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace gvf {

namespace {

std::string format_config_message(const std::string& key, int line, const std::string& message) {
  std::ostringstream out;
  out << "config error: " << key;
  if (line > 0) out << " (line " << line << ")";
  out << ": " << message;
  return out.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}

// Typed access to one section, tracking which keys were consumed.
class SectionReader {
 public:
  SectionReader(const IniDocument& doc, std::string name)
      : name_(std::move(name)), section_(doc.section(name_)), line_(doc.section_line(name_)) {}

  bool present() const { return section_ != nullptr; }

  bool has(std::string_view key) const {
    return section_ && section_->find(key) != section_->end();
  }

  std::string dotted(std::string_view key) const { return name_ + "." + std::string(key); }

  int line_of(std::string_view key) const {
    if (section_) {
      if (auto it = section_->find(key); it != section_->end()) return it->second.line;
    }
    return line_;
  }

  [[noreturn]] void fail(std::string_view key, const std::string& message) const {
    throw ConfigError(dotted(key), line_of(key), message);
  }

  const std::string& raw(std::string_view key) {
    allowed_.insert(std::string(key));
    if (!has(key)) fail(key, "missing required key");
    return section_->find(key)->second.value;
  }

  double number(std::string_view key) {
    const std::string& text = raw(key);
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
      fail(key, "expected a finite number, got '" + text + "'");
    }
    return value;
  }

  double number_or(std::string_view key, double fallback) {
    allowed_.insert(std::string(key));
    return has(key) ? number(key) : fallback;
  }

  double positive(std::string_view key) {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }

  double positive_or(std::string_view key, double fallback) {
    allowed_.insert(std::string(key));
    return has(key) ? positive(key) : fallback;
  }

  double non_negative_or(std::string_view key, double fallback) {
    allowed_.insert(std::string(key));
    if (!has(key)) return fallback;
    const double v = number(key);
    if (v < 0.0) fail(key, "must be non-negative");
    return v;
  }

  /// "x, y". A single number s is read as (s, 0).
  Eigen::Vector2d vector2(std::string_view key) {
    const std::string& text = raw(key);
    std::vector<double> parts;
    std::string_view rest = text;
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view token = trim(rest.substr(0, comma));
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
      if (token.empty() || ec != std::errc() || ptr != token.data() + token.size() ||
          !std::isfinite(value)) {
        fail(key, "expected 'x, y', got '" + text + "'");
      }
      parts.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (parts.size() == 1) return {parts[0], 0.0};
    if (parts.size() != 2) fail(key, "expected 'x, y', got '" + text + "'");
    return {parts[0], parts[1]};
  }

  Eigen::Vector2d vector2_or(std::string_view key, const Eigen::Vector2d& fallback) {
    allowed_.insert(std::string(key));
    return has(key) ? vector2(key) : fallback;
  }

  std::string word(std::string_view key, std::initializer_list<std::string_view> choices) {
    const std::string& text = raw(key);
    for (auto c : choices) {
      if (text == c) return text;
    }
    std::string list;
    for (auto c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
    fail(key, "unknown value '" + text + "' (expected one of: " + list + ")");
  }

  /// Rejects any key in the section that was never requested.
  void reject_unknown() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_) {
      if (!allowed_.count(key)) {
        throw ConfigError(dotted(key), entry.line, "unknown key");
      }
    }
  }

 private:
  std::string name_;
  const IniDocument::Section* section_;
  int line_;
  std::set<std::string, std::less<>> allowed_;
};

}  // namespace

ConfigError::ConfigError(std::string key, int line, const std::string& message)
    : std::runtime_error(format_config_message(key, line, message)),
      key_(std::move(key)),
      line_(line) {}

IniDocument IniDocument::parse(std::string_view text) {
  IniDocument doc;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.npos : eol - pos);
    pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
    ++line_no;

    if (auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("<syntax>", line_no, "unterminated section header");
      }
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (!is_identifier(name)) {
        throw ConfigError(std::string(name), line_no, "invalid section name");
      }
      current = std::string(name);
      if (doc.sections_.count(current)) {
        throw ConfigError(current, line_no, "duplicate section");
      }
      doc.sections_[current];
      doc.section_lines_[current] = line_no;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("<syntax>", line_no, "expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const std::string dotted = current.empty() ? key : current + "." + key;
    if (current.empty()) {
      throw ConfigError(dotted, line_no, "key outside of any section");
    }
    if (!is_identifier(key)) {
      throw ConfigError(dotted, line_no, "keys must be lower_snake_case");
    }
    auto& section = doc.sections_[current];
    if (section.count(key)) {
      throw ConfigError(dotted, line_no, "duplicate key");
    }
    section[key] = Entry{value, line_no};
  }
  return doc;
}

bool IniDocument::has_section(std::string_view name) const {
  return sections_.find(name) != sections_.end();
}

const IniDocument::Section* IniDocument::section(std::string_view name) const {
  auto it = sections_.find(name);
  return it == sections_.end() ? nullptr : &it->second;
}

int IniDocument::section_line(std::string_view name) const {
  auto it = section_lines_.find(name);
  return it == section_lines_.end() ? 0 : it->second;
}

void IniDocument::set(const std::string& dotted_key, const std::string& value) {
  const auto dot = dotted_key.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size()) {
    throw ConfigError(dotted_key, 0, "expected a dotted key such as gains.k_theta");
  }
  const std::string section = dotted_key.substr(0, dot);
  const std::string key = dotted_key.substr(dot + 1);
  if (!is_identifier(section) || !is_identifier(key)) {
    throw ConfigError(dotted_key, 0, "keys must be lower_snake_case");
  }
  auto& s = sections_[section];
  section_lines_.try_emplace(section, 0);
  auto it = s.find(key);
  const int line = it == s.end() ? 0 : it->second.line;
  s[key] = Entry{value, line};
}

Scenario load_scenario(const IniDocument& doc) {
  static const std::set<std::string, std::less<>> known_sections = {
      "path", "vehicle", "gains", "behavior", "sim", "wind"};
  for (const auto& [name, section] : doc.sections()) {
    if (!known_sections.count(name)) {
      throw ConfigError(name, doc.section_line(name), "unknown section");
    }
  }

  Scenario sc;
  SimConfig& cfg = sc.config;

  SectionReader path(doc, "path");
  if (!path.present()) throw ConfigError("path", 0, "missing required section");
  const std::string type = path.word("type", {"circle", "ellipse", "line", "cylinder_plane"});
  if (type == "circle") {
    sc.path_kind = PathKind::kCircle;
    sc.path_radius = path.positive("r");
    cfg.path = make_circle(sc.path_radius, path.vector2_or("center", Eigen::Vector2d::Zero()));
  } else if (type == "ellipse") {
    sc.path_kind = PathKind::kEllipse;
    const double a = path.positive("a");
    const double b = path.positive("b");
    cfg.path = make_ellipse(a, b, path.vector2_or("center", Eigen::Vector2d::Zero()));
  } else if (type == "line") {
    sc.path_kind = PathKind::kLine;
    const Eigen::Vector2d point = path.vector2_or("point", Eigen::Vector2d::Zero());
    const Eigen::Vector2d dir = path.vector2("direction");
    if (!(dir.norm() > 0.0)) path.fail("direction", "must be a nonzero vector");
    cfg.path = make_line(point, dir);
  } else {
    sc.path_kind = PathKind::kCylinderPlane;
    sc.path_radius = path.positive("r");
    cfg.path = make_cylinder_plane(sc.path_radius, path.number_or("z0", 0.0));
  }
  path.reject_unknown();

  SectionReader vehicle(doc, "vehicle");
  if (!vehicle.present()) throw ConfigError("vehicle", 0, "missing required section");
  const std::string kind = vehicle.word("kind", {"unicycle", "single_integrator"});
  cfg.kind = kind == "unicycle" ? VehicleKind::kUnicycle : VehicleKind::kSingleIntegrator;
  const int dim = cfg.path.dimension();
  if (cfg.kind == VehicleKind::kUnicycle && dim != 2) {
    vehicle.fail("kind", "unicycle vehicles require a planar path");
  }
  Eigen::VectorXd p0(dim);
  p0(0) = vehicle.number("x0");
  p0(1) = vehicle.number("y0");
  if (dim == 3) p0(2) = vehicle.number_or("z0", 0.0);
  cfg.initial_position = p0;

  SectionReader gains(doc, "gains");
  if (!gains.present()) throw ConfigError("gains", 0, "missing required section");
  cfg.gains.k_phi = gains.positive("k_phi");

  if (cfg.kind == VehicleKind::kUnicycle) {
    cfg.gains.speed = vehicle.positive("v");
    cfg.initial_heading = vehicle.number("theta0");
    cfg.gains.k_theta = gains.positive("k_theta");
  } else {
    cfg.gains.k_theta = gains.positive_or("k_theta", 1.0);
  }
  vehicle.reject_unknown();

  if (gains.has("k_b")) cfg.gains.k_b = gains.positive("k_b");
  {
    const double d = gains.number_or("direction", 1.0);
    if (d != 1.0 && d != -1.0) gains.fail("direction", "must be 1 or -1");
    cfg.gains.direction = static_cast<int>(d);
  }
  gains.reject_unknown();

  SectionReader behavior(doc, "behavior");
  if (behavior.present()) {
    const double amplitude = behavior.number("a");
    const double omega = behavior.number("omega_gamma");
    const double phase = behavior.number_or("phase", 0.0);
    cfg.behavior = BehaviorSignal::sinusoid(amplitude, omega, phase, dim - 1);
    behavior.reject_unknown();
  }

  SectionReader sim(doc, "sim");
  cfg.dt = sim.positive_or("dt", 0.01);
  cfg.t_final = sim.positive_or("t_final", 60.0);
  cfg.t_p = sim.non_negative_or("t_p", 0.0);
  if (cfg.t_final < cfg.dt) sim.fail("t_final", "must be at least dt");
  if (cfg.t_p > cfg.t_final) sim.fail("t_p", "must not exceed t_final");
  sim.reject_unknown();

  SectionReader wind(doc, "wind");
  if (wind.present()) {
    const std::string mode = wind.word("mode", {"none", "constant", "gust"});
    // Every parameter is checked even when the active mode ignores it.
    const Eigen::Vector2d mean = wind.vector2_or("mean", Eigen::Vector2d::Zero());
    const double amplitude = wind.non_negative_or("amplitude", 0.0);
    const double frequency = wind.non_negative_or("frequency", 0.0);
    const double phase = wind.number_or("phase", 0.0);
    if (mode != "none") {
      if (cfg.kind != VehicleKind::kUnicycle) {
        wind.fail("mode", "wind is only modeled for the unicycle");
      }
      if (!wind.has("mean")) wind.fail("mean", "missing required key");
      cfg.wind.mean = mean;
      cfg.wind.mode = WindModel::Mode::kConstant;
    }
    if (mode == "gust") {
      cfg.wind.mode = WindModel::Mode::kGust;
      cfg.wind.amplitude = amplitude;
      cfg.wind.frequency = frequency;
      cfg.wind.phase = phase;
    }
    if (cfg.wind.mode != WindModel::Mode::kNone &&
        cfg.wind.mean.norm() + cfg.wind.amplitude >= cfg.gains.speed) {
      wind.fail("mean", "peak wind speed must stay below the vehicle airspeed");
    }
    wind.reject_unknown();
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("scenario", 0, e.what());
  }
  return sc;
}

Scenario load_scenario_text(std::string_view text) {
  return load_scenario(IniDocument::parse(text));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("<file>", 0, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario load_scenario_file(const std::string& path) {
  return load_scenario_text(read_text_file(path));
}

std::vector<std::string> validate_scenario(const Scenario& scenario) {
  std::vector<std::string> warnings;
  const SimConfig& cfg = scenario.config;
  const LevelSetEval eval = cfg.path.evaluate(cfg.initial_position);
  const RankReport rank = check_rank(eval.jacobian);
  if (!rank.full_rank) {
    std::ostringstream msg;
    msg << "warning: rank-deficient start (sigma_min = " << rank.sigma_min
        << "); the field is undefined at the initial position";
    warnings.push_back(msg.str());
  }
  if (cfg.kind == VehicleKind::kUnicycle && rank.full_rank) {
    const UnicycleState state{cfg.initial_position.head<2>(), cfg.initial_heading};
    const UnicycleFieldSample s =
        unicycle_field(cfg.path, state.position, 0.0, cfg.gains,
                       cfg.behavior ? &*cfg.behavior : nullptr);
    const Eigen::Vector2d heading_dir = state.velocity(1.0);
    if (heading_dir.dot(s.f.normalized()) < -1.0 + 1e-9) {
      warnings.push_back("warning: initial heading is anti-aligned with the field");
    }
  }
  return warnings;
}

}  // namespace gvf
