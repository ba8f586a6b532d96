#include "ssrank/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace ssrank::harness {

namespace {

struct Field {
  std::string name;  // section.key
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_int(std::int64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRId64, v);
  return buf;
}

std::string fmt_uint(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%" PRIu64, v);
  return buf;
}

std::string fmt_int_list(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v[i]);
  }
  return out;
}

double parse_double(const std::string& name, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config error: " + name + ": not a number: " + value);
  }
}

std::int64_t parse_int(const std::string& name, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config error: " + name + ": not an integer: " + value);
  }
}

std::uint64_t parse_uint(const std::string& name, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config error: " + name + ": not an integer: " + value);
  }
}

bool parse_bool(const std::string& name, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config error: " + name + ": not a boolean: " + value);
}

std::vector<int> parse_int_list(const std::string& name,
                                const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string part;
  while (std::getline(ss, part, ',')) {
    part = trim(part);
    if (part.empty()) continue;
    out.push_back(static_cast<int>(parse_int(name, part)));
  }
  return out;
}

#define DOUBLE_FIELD(name, ref)                                            \
  Field{name, [](const ExperimentConfig& c) { return fmt_double(c.ref); }, \
        [](ExperimentConfig& c, const std::string& v) {                    \
          c.ref = parse_double(name, v);                                   \
        }}

#define INT_FIELD(name, ref)                                                  \
  Field{name,                                                                 \
        [](const ExperimentConfig& c) {                                       \
          return fmt_int(static_cast<std::int64_t>(c.ref));                   \
        },                                                                    \
        [](ExperimentConfig& c, const std::string& v) {                       \
          c.ref = static_cast<decltype(c.ref)>(parse_int(name, v));           \
        }}

#define UINT_FIELD(name, ref)                                            \
  Field{name, [](const ExperimentConfig& c) { return fmt_uint(c.ref); }, \
        [](ExperimentConfig& c, const std::string& v) {                  \
          c.ref = parse_uint(name, v);                                   \
        }}

#define BOOL_FIELD(name, ref)                                                  \
  Field{name,                                                                  \
        [](const ExperimentConfig& c) {                                        \
          return std::string(c.ref ? "true" : "false");                        \
        },                                                                     \
        [](ExperimentConfig& c, const std::string& v) {                        \
          c.ref = parse_bool(name, v);                                         \
        }}

#define STRING_FIELD(name, ref)                                   \
  Field{name, [](const ExperimentConfig& c) { return c.ref; },    \
        [](ExperimentConfig& c, const std::string& v) { c.ref = v; }}

#define INT_LIST_FIELD(name, ref)                                             \
  Field{name,                                                                 \
        [](const ExperimentConfig& c) { return fmt_int_list(c.ref); },        \
        [](ExperimentConfig& c, const std::string& v) {                       \
          c.ref = parse_int_list(name, v);                                    \
        }}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      INT_FIELD("catalog.n_features", catalog.n_features),
      INT_FIELD("catalog.catalog_size", catalog.catalog_size),
      INT_FIELD("catalog.page_size", catalog.page_size),
      UINT_FIELD("catalog.seed", catalog.seed),

      DOUBLE_FIELD("behavior.attraction_scale", behavior.attraction_scale),
      DOUBLE_FIELD("behavior.base_leave", behavior.base_leave),
      DOUBLE_FIELD("behavior.fatigue", behavior.fatigue),
      DOUBLE_FIELD("behavior.purchase_gain", behavior.purchase_gain),
      DOUBLE_FIELD("behavior.price_noise", behavior.price_noise),
      INT_FIELD("behavior.window", behavior.window),
      DOUBLE_FIELD("behavior.target_conversion", behavior.target_conversion),
      INT_FIELD("behavior.calibration_sessions", behavior.calibration_sessions),
      DOUBLE_FIELD("behavior.click_base", behavior.click_base),
      DOUBLE_FIELD("behavior.click_gain", behavior.click_gain),
      UINT_FIELD("behavior.seed", behavior.seed),

      STRING_FIELD("agent.type", agent.type),
      DOUBLE_FIELD("agent.gamma", agent.gamma),
      DOUBLE_FIELD("agent.alpha_actor", agent.alpha_actor),
      DOUBLE_FIELD("agent.alpha_critic", agent.alpha_critic),
      DOUBLE_FIELD("agent.tau", agent.tau),
      DOUBLE_FIELD("agent.noise_scale", agent.noise_scale),
      INT_FIELD("agent.noise_half_life", agent.noise_half_life),
      INT_LIST_FIELD("agent.actor_hidden", agent.actor_hidden),
      INT_LIST_FIELD("agent.critic_hidden", agent.critic_hidden),
      STRING_FIELD("agent.optimizer", agent.optimizer),
      BOOL_FIELD("agent.grad_at_executed_action", agent.grad_at_executed_action),
      DOUBLE_FIELD("agent.outcome_step", agent.outcome_step),
      DOUBLE_FIELD("agent.price_step", agent.price_step),
      INT_FIELD("agent.buffer_capacity", agent.buffer_capacity),
      INT_FIELD("agent.batch_size", agent.batch_size),
      DOUBLE_FIELD("agent.updates_per_step", agent.updates_per_step),
      DOUBLE_FIELD("agent.negative_weight", agent.negative_weight),
      DOUBLE_FIELD("agent.exp3_eta", agent.exp3_eta),
      DOUBLE_FIELD("agent.exp3_mixing", agent.exp3_mixing),

      INT_FIELD("run.sessions", run.sessions),
      INT_FIELD("run.warmup_sessions", run.warmup_sessions),
      UINT_FIELD("run.seed_agent", run.seed_agent),
      UINT_FIELD("run.seed_sessions", run.seed_sessions),
      INT_FIELD("run.metrics_window", run.metrics_window),
      BOOL_FIELD("run.record_wall_time", run.record_wall_time),
  };
  return table;
}

const Field& find_field(const std::string& dotted_key) {
  for (const Field& f : fields()) {
    if (f.name == dotted_key) return f;
  }
  throw ConfigError("config error: unknown key " + dotted_key);
}

}  // namespace

const std::vector<std::string>& known_agent_types() {
  static const std::vector<std::string> types = {
      "dpg_fbe",      "ddpg",        "pointwise", "cascade_ucb1",
      "cascade_klucb", "ranked_exp3", "random"};
  return types;
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config error: line " + std::to_string(line_no) +
                          ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config error: line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("config error: line " + std::to_string(line_no) +
                        ": key outside any section");
    }
    config.set(section + "." + key, value);
  }
  return config;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config error: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_text(buffer.str());
}

void ExperimentConfig::set(const std::string& dotted_key,
                           const std::string& value) {
  find_field(dotted_key).set(*this, value);
}

std::string ExperimentConfig::canonical_text() const {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    const std::size_t dot = f.name.find('.');
    const std::string sec = f.name.substr(0, dot);
    if (sec != section) {
      if (!out.empty()) out += "\n";
      out += "[" + sec + "]\n";
      section = sec;
    }
    out += f.name.substr(dot + 1) + " = " + f.get(*this) + "\n";
  }
  return out;
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string text = canonical_text();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

void ExperimentConfig::validate() const {
  try {
    catalog.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config error: ") + e.what());
  }
  if (!(behavior.attraction_scale >= 0.0)) {
    throw ConfigError("config error: behavior.attraction_scale must be >= 0");
  }
  if (!(behavior.base_leave >= 0.0 && behavior.base_leave <= 1.0)) {
    throw ConfigError("config error: behavior.base_leave must lie in [0,1]");
  }
  if (!(behavior.fatigue >= 0.0)) {
    throw ConfigError("config error: behavior.fatigue must be >= 0");
  }
  if (!(behavior.purchase_gain > 0.0)) {
    throw ConfigError("config error: behavior.purchase_gain must be > 0");
  }
  if (!(behavior.price_noise >= 0.0)) {
    throw ConfigError("config error: behavior.price_noise must be >= 0");
  }
  if (behavior.window < 1) {
    throw ConfigError("config error: behavior.window must be >= 1");
  }
  if (!(behavior.target_conversion > 0.0 && behavior.target_conversion < 1.0)) {
    throw ConfigError("config error: behavior.target_conversion must lie in (0,1)");
  }
  if (behavior.calibration_sessions < 1) {
    throw ConfigError("config error: behavior.calibration_sessions must be >= 1");
  }
  const auto& types = known_agent_types();
  if (std::find(types.begin(), types.end(), agent.type) == types.end()) {
    throw ConfigError("config error: agent.type unknown: " + agent.type);
  }
  if (!(agent.gamma >= 0.0 && agent.gamma <= 1.0)) {
    throw ConfigError("config error: agent.gamma must lie in [0,1]");
  }
  if (!(agent.tau > 0.0 && agent.tau <= 1.0)) {
    throw ConfigError("config error: agent.tau must lie in (0,1]");
  }
  if (agent.optimizer != "sgd" && agent.optimizer != "adam") {
    throw ConfigError("config error: agent.optimizer must be sgd or adam");
  }
  if (agent.batch_size < 1) {
    throw ConfigError("config error: agent.batch_size must be >= 1");
  }
  if (agent.buffer_capacity < agent.batch_size) {
    throw ConfigError("config error: agent.buffer_capacity must hold a batch");
  }
  for (int h : agent.actor_hidden) {
    if (h < 1) throw ConfigError("config error: agent.actor_hidden must be positive");
  }
  for (int h : agent.critic_hidden) {
    if (h < 1) throw ConfigError("config error: agent.critic_hidden must be positive");
  }
  if (run.sessions < 1) {
    throw ConfigError("config error: run.sessions must be >= 1");
  }
  if (run.warmup_sessions < 0) {
    throw ConfigError("config error: run.warmup_sessions must be >= 0");
  }
  if (run.metrics_window < 1) {
    throw ConfigError("config error: run.metrics_window must be >= 1");
  }
}

}  // namespace ssrank::harness
