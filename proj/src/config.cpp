#include "starkbeat/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace starkbeat::config {
namespace {

[[noreturn]] void fail(const std::string& source, int line,
                       const std::string& msg) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ":" << line;
  os << ": " << msg;
  throw Error(ErrorCode::bad_config, os.str());
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& source, int line, const std::string& key,
                    const std::string& v) {
  try {
    size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(source, line, "key '" + key + "': expected a number, got '" + v + "'");
  }
}

int parse_int(const std::string& source, int line, const std::string& key,
              const std::string& v) {
  double x = parse_double(source, line, key, v);
  int i = static_cast<int>(x);
  if (static_cast<double>(i) != x)
    fail(source, line, "key '" + key + "': expected an integer, got '" + v + "'");
  return i;
}

// setters keyed by "section.key"; each remembers the line it came from so
// semantic validation can report it
struct Setter {
  std::function<void(RunConfig&, const std::string&, const std::string&, int)>
      apply;
};

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s = [] {
    std::map<std::string, Setter> m;
    m["model.alpha1"] = {[](RunConfig& c, const std::string& s2,
                            const std::string& v, int l) {
      c.model.alpha1 = parse_double(s2, l, "model.alpha1", v);
    }};
    m["model.alpha2"] = {[](RunConfig& c, const std::string& s2,
                            const std::string& v, int l) {
      c.model.alpha2 = parse_double(s2, l, "model.alpha2", v);
    }};
    m["model.x1"] = {[](RunConfig& c, const std::string& s2,
                        const std::string& v, int l) {
      c.model.x1 = parse_double(s2, l, "model.x1", v);
    }};
    m["model.x2"] = {[](RunConfig& c, const std::string& s2,
                        const std::string& v, int l) {
      c.model.x2 = parse_double(s2, l, "model.x2", v);
    }};
    m["model.F"] = {[](RunConfig& c, const std::string& s2,
                       const std::string& v, int l) {
      c.model.field = parse_double(s2, l, "model.F", v);
    }};
    m["state.center"] = {[](RunConfig& c, const std::string& s2,
                            const std::string& v, int l) {
      c.state.center = parse_double(s2, l, "state.center", v);
    }};
    m["state.sigma"] = {[](RunConfig& c, const std::string& s2,
                           const std::string& v, int l) {
      c.state.sigma = parse_double(s2, l, "state.sigma", v);
    }};
    m["sweep.f_min"] = {[](RunConfig& c, const std::string& s2,
                           const std::string& v, int l) {
      c.sweep.f_min = parse_double(s2, l, "sweep.f_min", v);
      c.sweep.present = true;
    }};
    m["sweep.f_max"] = {[](RunConfig& c, const std::string& s2,
                           const std::string& v, int l) {
      c.sweep.f_max = parse_double(s2, l, "sweep.f_max", v);
      c.sweep.present = true;
    }};
    m["sweep.f_steps"] = {[](RunConfig& c, const std::string& s2,
                             const std::string& v, int l) {
      c.sweep.f_steps = parse_int(s2, l, "sweep.f_steps", v);
      c.sweep.present = true;
    }};
    m["time.t_min"] = {[](RunConfig& c, const std::string& s2,
                          const std::string& v, int l) {
      c.time.t_min = parse_double(s2, l, "time.t_min", v);
    }};
    m["time.t_max"] = {[](RunConfig& c, const std::string& s2,
                          const std::string& v, int l) {
      c.time.t_max = parse_double(s2, l, "time.t_max", v);
    }};
    m["time.t_points"] = {[](RunConfig& c, const std::string& s2,
                             const std::string& v, int l) {
      c.time.t_points = parse_int(s2, l, "time.t_points", v);
    }};
    m["time.spacing"] = {[](RunConfig& c, const std::string& s2,
                            const std::string& v, int l) {
      if (v == "log")
        c.time.log_spacing = true;
      else if (v == "linear")
        c.time.log_spacing = false;
      else
        fail(s2, l, "time.spacing must be 'linear' or 'log', got '" + v + "'");
    }};
    m["output.path"] = {[](RunConfig& c, const std::string&,
                           const std::string& v, int) { c.output.path = v; }};
    m["output.format"] = {[](RunConfig& c, const std::string& s2,
                             const std::string& v, int l) {
      if (v != "csv" && v != "json")
        fail(s2, l, "output.format must be 'csv' or 'json', got '" + v + "'");
      c.output.format = v;
    }};
    m["output.precision"] = {[](RunConfig& c, const std::string& s2,
                                const std::string& v, int l) {
      int p = parse_int(s2, l, "output.precision", v);
      if (p < 3 || p > 17)
        fail(s2, l, "output.precision must be in [3, 17]");
      c.output.precision = p;
    }};
    return m;
  }();
  return s;
}

void set_key(RunConfig& cfg, const std::string& source, int line,
             const std::string& dotted, const std::string& value) {
  auto it = setters().find(dotted);
  if (it == setters().end()) fail(source, line, "unknown key '" + dotted + "'");
  it->second.apply(cfg, source, value, line);
}

void validate_with_source(const RunConfig& cfg, const std::string& source,
                          const std::map<std::string, int>& key_lines) {
  auto line_of = [&](const std::string& key) {
    auto it = key_lines.find(key);
    return it == key_lines.end() ? 0 : it->second;
  };
  if (!(cfg.model.alpha1 < cfg.model.alpha2) || !(cfg.model.alpha2 < 0.0))
    fail(source, line_of("model.alpha2"),
         "model requires alpha1 < alpha2 < 0");
  if (!(cfg.model.x1 < cfg.model.x2))
    fail(source, line_of("model.x2"), "model requires x1 < x2");
  if (!(cfg.model.field > 0.0))
    fail(source, line_of("model.F"), "model requires F > 0");
  if (!(cfg.state.sigma > 0.0))
    fail(source, line_of("state.sigma"), "state requires sigma > 0");
  if (cfg.sweep.present) {
    if (!(cfg.sweep.f_min < cfg.sweep.f_max))
      fail(source, line_of("sweep.f_max"), "sweep requires f_min < f_max");
    if (!(cfg.sweep.f_min > 0.0))
      fail(source, line_of("sweep.f_min"), "sweep requires f_min > 0");
    if (cfg.sweep.f_steps < 2)
      fail(source, line_of("sweep.f_steps"), "sweep requires f_steps >= 2");
  }
  if (!(cfg.time.t_min < cfg.time.t_max))
    fail(source, line_of("time.t_max"), "time requires t_min < t_max");
  if (cfg.time.log_spacing && !(cfg.time.t_min > 0.0))
    fail(source, line_of("time.t_min"), "log spacing requires t_min > 0");
  if (cfg.time.t_points < 2)
    fail(source, line_of("time.t_points"), "time requires t_points >= 2");
}

RunConfig from_json(const nlohmann::json& root, const std::string& source) {
  const nlohmann::json* obj = &root;
  if (root.contains("config")) obj = &root.at("config");
  RunConfig cfg;
  std::map<std::string, int> no_lines;
  for (auto& [section, body] : obj->items()) {
    if (!body.is_object())
      fail(source, 0, "JSON section '" + section + "' must be an object");
    for (auto& [key, value] : body.items()) {
      std::string v = value.is_string() ? value.get<std::string>()
                                        : nlohmann::json(value).dump();
      set_key(cfg, source, 0, section + "." + key, v);
    }
  }
  validate_with_source(cfg, source, no_lines);
  return cfg;
}

std::string fmt_double(double v, int precision) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

}  // namespace

void RunConfig::validate() const {
  validate_with_source(*this, "<config>", {});
}

RunConfig parse(std::istream& in, const std::string& source_name) {
  RunConfig cfg;
  std::map<std::string, int> key_lines;
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw;
    size_t hash = s.find_first_of("#;");
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        fail(source_name, line, "malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      auto it = setters().lower_bound(section + ".");
      if (it == setters().end() || it->first.rfind(section + ".", 0) != 0)
        fail(source_name, line, "unknown section '" + section + "'");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(source_name, line, "expected 'key = value', got '" + s + "'");
    std::string key = trim(s.substr(0, eq));
    std::string value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty())
      fail(source_name, line, "expected 'key = value', got '" + s + "'");
    if (section.empty())
      fail(source_name, line, "key '" + key + "' appears before any section");
    std::string dotted = section + "." + key;
    set_key(cfg, source_name, line, dotted, value);
    key_lines[dotted] = line;
  }
  validate_with_source(cfg, source_name, key_lines);
  return cfg;
}

RunConfig load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::bad_config, path + ": cannot open");
  // JSON result files can be re-ingested as configs
  char first = 0;
  in >> std::ws;
  first = static_cast<char>(in.peek());
  if (first == '{') {
    nlohmann::json root;
    try {
      in >> root;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::bad_config, path + ": " + e.what());
    }
    return from_json(root, path);
  }
  return parse(in, path);
}

void apply_override(RunConfig& cfg, const std::string& spec) {
  size_t eq = spec.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorCode::bad_config,
                "--set expects section.key=value, got '" + spec + "'");
  std::string key = trim(spec.substr(0, eq));
  std::string value = trim(spec.substr(eq + 1));
  set_key(cfg, "--set " + key, 0, key, value);
}

std::vector<std::pair<std::string, std::string>> flatten(const RunConfig& cfg,
                                                         int precision) {
  auto d = [&](double v) { return fmt_double(v, precision); };
  return {
      {"model.alpha1", d(cfg.model.alpha1)},
      {"model.alpha2", d(cfg.model.alpha2)},
      {"model.x1", d(cfg.model.x1)},
      {"model.x2", d(cfg.model.x2)},
      {"model.F", d(cfg.model.field)},
      {"state.center", d(cfg.state.center)},
      {"state.sigma", d(cfg.state.sigma)},
      {"sweep.f_min", d(cfg.sweep.f_min)},
      {"sweep.f_max", d(cfg.sweep.f_max)},
      {"sweep.f_steps", std::to_string(cfg.sweep.f_steps)},
      {"time.t_min", d(cfg.time.t_min)},
      {"time.t_max", d(cfg.time.t_max)},
      {"time.t_points", std::to_string(cfg.time.t_points)},
      {"time.spacing", cfg.time.log_spacing ? "log" : "linear"},
      {"output.format", cfg.output.format},
      {"output.precision", std::to_string(cfg.output.precision)},
  };
}

}  // namespace starkbeat::config
