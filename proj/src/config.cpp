#include "dispersolve/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "dispersolve/errors.hpp"
#include "dispersolve/meters.hpp"
#include "format.hpp"
#include "keyvalue.hpp"

namespace dispersolve {

using detail::format_double;

namespace {

// --- lexical layer ----------------------------------------------------------

struct Raw {
  enum Kind { Number, Bool, String, Array } kind = Number;
  double number = 0.0;
  std::string token;  // number text or string contents
  bool flag = false;
  std::vector<Raw> items;
  int line = 0;
};

struct Entry {
  std::string path;  // "grid.n", "seed"
  Raw value;
};

[[noreturn]] void fail(const std::string& path, int line, const std::string& what) {
  throw ConfigError(path + " (line " + std::to_string(line) + "): " + what);
}

std::string kind_name(Raw::Kind k) {
  switch (k) {
    case Raw::Number: return "number";
    case Raw::Bool: return "boolean";
    case Raw::String: return "string";
    case Raw::Array: return "array";
  }
  return "?";
}

class LineParser {
 public:
  LineParser(std::string_view text, int line) : s_(text), line_(line) {}

  Raw value() {
    skip_space();
    if (at_end()) error("missing value");
    Raw r;
    r.line = line_;
    const char c = s_[pos_];
    if (c == '"') {
      r.kind = Raw::String;
      r.token = string();
    } else if (c == '[') {
      r.kind = Raw::Array;
      ++pos_;
      skip_space();
      if (peek(']')) {
        ++pos_;
        return r;
      }
      for (;;) {
        Raw item = value();
        if (item.kind == Raw::Array) error("nested arrays are not supported");
        if (!r.items.empty() && item.kind != r.items.front().kind) {
          error("array mixes " + kind_name(r.items.front().kind) + " and " + kind_name(item.kind));
        }
        r.items.push_back(std::move(item));
        skip_space();
        if (peek(',')) {
          ++pos_;
          skip_space();
          if (peek(']')) {  // trailing comma
            ++pos_;
            break;
          }
          continue;
        }
        if (peek(']')) {
          ++pos_;
          break;
        }
        error("expected ',' or ']' in array");
      }
    } else {
      const std::size_t start = pos_;
      while (!at_end() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != ' ' &&
             s_[pos_] != '\t') {
        ++pos_;
      }
      const std::string_view tok = s_.substr(start, pos_ - start);
      if (tok == "true" || tok == "false") {
        r.kind = Raw::Bool;
        r.flag = tok == "true";
      } else {
        r.kind = Raw::Number;
        r.token = std::string(tok);
        const char* b = tok.data();
        const char* e = b + tok.size();
        if (!tok.empty() && *b == '+') ++b;
        auto [end, ec] = std::from_chars(b, e, r.number);
        if (ec != std::errc() || end != e || !std::isfinite(r.number)) {
          error("cannot read value '" + std::string(tok) + "'");
        }
      }
    }
    return r;
  }

  void finish() {
    skip_space();
    if (!at_end()) error("unexpected text after the value");
  }

 private:
  std::string string() {
    ++pos_;  // opening quote
    std::string out;
    for (;;) {
      if (at_end()) error("unterminated string");
      const char c = s_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (at_end()) error("unterminated string");
        const char e = s_[pos_++];
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          default: error(std::string("unknown escape \\") + e);
        }
      } else {
        out += c;
      }
    }
  }
  void skip_space() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }
  bool peek(char c) const { return !at_end() && s_[pos_] == c; }
  bool at_end() const { return pos_ >= s_.size(); }
  [[noreturn]] void error(const std::string& what) const {
    throw ConfigError("line " + std::to_string(line_) + ": " + what);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

/// Drops a '#' comment that is not inside a string.
std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (in_string && line[i] == '\\') {
      ++i;
    } else if (line[i] == '"') {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

const std::vector<std::string> kSections{"equation", "grid", "time", "experiment", "output"};

std::vector<Entry> lex(std::string_view text) {
  std::vector<Entry> out;
  std::map<std::string, int> seen;
  std::map<std::string, int> sections;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    line = detail::trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = std::string(detail::trim(line.substr(1, line.size() - 2)));
      if (std::find(kSections.begin(), kSections.end(), section) == kSections.end()) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" +
                          section + "]");
      }
      auto [it, fresh] = sections.emplace(section, line_no);
      if (!fresh) {
        throw ConfigError("duplicate section [" + section + "] at lines " +
                          std::to_string(it->second) + " and " + std::to_string(line_no));
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key(detail::trim(line.substr(0, eq)));
    if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
        })) {
      throw ConfigError("line " + std::to_string(line_no) + ": bad key '" + key + "'");
    }
    const std::string path = section.empty() ? key : section + "." + key;
    auto [it, fresh] = seen.emplace(path, line_no);
    if (!fresh) {
      throw ConfigError("duplicate key " + path + " at lines " + std::to_string(it->second) +
                        " and " + std::to_string(line_no));
    }
    LineParser lp(line.substr(eq + 1), line_no);
    Raw v = lp.value();
    lp.finish();
    out.push_back({path, std::move(v)});
  }
  return out;
}

// --- typed access -------------------------------------------------------------

enum class Type { Number, Integer, Bool, String, Numbers, Strings };

std::string type_name(Type t) {
  switch (t) {
    case Type::Number: return "number";
    case Type::Integer: return "integer";
    case Type::Bool: return "boolean";
    case Type::String: return "string";
    case Type::Numbers: return "array of numbers";
    case Type::Strings: return "array of strings";
  }
  return "?";
}

bool integral_token(const std::string& tok) {
  return !tok.empty() && tok.find_first_of(".eEinfINF") == std::string::npos;
}

ConfigValue convert(const Entry& e, Type t) {
  const Raw& r = e.value;
  auto mismatch = [&] {
    fail(e.path, r.line, "expected " + type_name(t) + ", got " + kind_name(r.kind));
  };
  switch (t) {
    case Type::Number:
      if (r.kind != Raw::Number) mismatch();
      return r.number;
    case Type::Integer:
      if (r.kind != Raw::Number) mismatch();
      if (!integral_token(r.token)) fail(e.path, r.line, "expected an integer, got " + r.token);
      return r.number;
    case Type::Bool:
      if (r.kind != Raw::Bool) mismatch();
      return r.flag;
    case Type::String:
      if (r.kind != Raw::String) mismatch();
      return r.token;
    case Type::Numbers: {
      if (r.kind != Raw::Array) mismatch();
      std::vector<double> v;
      for (const auto& item : r.items) {
        if (item.kind != Raw::Number) mismatch();
        v.push_back(item.number);
      }
      return v;
    }
    case Type::Strings: {
      if (r.kind != Raw::Array) mismatch();
      std::vector<std::string> v;
      for (const auto& item : r.items) {
        if (item.kind != Raw::String) mismatch();
        v.push_back(item.token);
      }
      return v;
    }
  }
  return 0.0;
}

struct KeySpec {
  std::string key;
  Type type;
  std::optional<ConfigValue> fallback;  // absent: optional key without default
};

std::vector<KeySpec> region_keys(bool positive_both) {
  return {{"xi1_min", Type::Number, 8.0},
          {"xi1_max", Type::Number, 1024.0},
          {"xi2_min", Type::Number, 8.0},
          {"xi2_max", Type::Number, 1024.0},
          {"lambda_min", Type::Number, 1.0 / 64.0},
          {"lambda_max", Type::Number, 1.0},
          {"samples_per_axis", Type::Integer, 32.0},
          {"region", Type::String, std::string(positive_both ? "both-large" : "first-large")},
          {"positive_quadrant", Type::Bool, positive_both},
          {"xi_floor", Type::Number, 8.0},
          {"eps_cert", Type::Number, 1e-3}};
}

std::vector<KeySpec> experiment_keys(const std::string& name) {
  if (name == "solve") return {};
  if (name == "norms") {
    return {{"trajectory", Type::String, std::string()},
            {"norms", Type::Strings, std::vector<std::string>{"Hs:s=0"}}};
  }
  if (name == "diss-limit") {
    return {{"epsilons", Type::Numbers, std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4}},
            {"s", Type::Number, 0.0},
            {"horizon", Type::Number, std::nullopt},
            {"min_order", Type::Number, 0.8},
            {"fit_points", Type::Integer, 3.0}};
  }
  if (name == "scaling-test") {
    return {{"lambdas", Type::Numbers, std::vector<double>{0.5, 0.25}},
            {"max_deviation", Type::Number, 1e-5}};
  }
  if (name == "bona-smith") {
    return {{"cutoffs", Type::Numbers, std::vector<double>{8, 16, 32, 64, 128, 256}},
            {"s", Type::Number, 0.0},
            {"delta", Type::Number, 0.05},
            {"profile", Type::String, std::string("power")},
            {"width", Type::Number, 4.0},
            {"amplitude", Type::Number, 1.0}};
  }
  if (name == "certify-symbol") {
    auto keys = region_keys(false);
    keys.push_back({"derivative_xi_min", Type::Number, 8.0});
    keys.push_back({"derivative_xi_max", Type::Number, 1024.0});
    keys.push_back({"derivative_samples", Type::Integer, 64.0});
    return keys;
  }
  if (name == "resonance-test") {
    auto keys = region_keys(true);
    keys.push_back({"violating", Type::Integer, 20.0});
    keys.push_back({"compatible", Type::Integer, 5.0});
    keys.push_back({"trials", Type::Integer, 100.0});
    keys.push_back({"dtau", Type::Number, 0.25});
    keys.push_back({"period", Type::Number, 2.0 * std::numbers::pi});
    keys.push_back({"vanish_threshold", Type::Number, 1e-10});
    keys.push_back({"witness_threshold", Type::Number, 1e-8});
    return keys;
  }
  if (name == "meter") {
    return {{"meter", Type::String, std::string("estPi")},
            {"trials", Type::Integer, std::nullopt},
            {"stability_factor", Type::Number, 4.0},
            {"cutoff", Type::String, std::string("smooth")}};
  }
  if (name == "existence-probe") {
    return {{"amplitudes", Type::Numbers, std::vector<double>{0, 1, 2, 4, 8, 16}},
            {"tolerance_factor", Type::Number, 4.0}};
  }
  throw ConfigError("unknown experiment '" + name + "'");
}

// --- serialization helpers ------------------------------------------------------

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render(const ConfigValue& v) {
  switch (v.index()) {
    case 0: return format_double(std::get<0>(v));
    case 1: return std::get<1>(v) ? "true" : "false";
    case 2: return quote(std::get<2>(v));
    case 3: {
      std::string out = "[";
      for (double x : std::get<3>(v)) out += (out.size() > 1 ? ", " : "") + format_double(x);
      return out + "]";
    }
    default: {
      std::string out = "[";
      for (const auto& x : std::get<4>(v)) out += (out.size() > 1 ? ", " : "") + quote(x);
      return out + "]";
    }
  }
}

bool is_meter_axis(const std::string& meter, const std::string& key) {
  for (const auto& [axis, values] : default_sweep(parse_meter(meter)).axes) {
    if (axis == key) return true;
  }
  return false;
}

}  // namespace

// --- RunConfig accessors -----------------------------------------------------------

namespace {
const ConfigValue& lookup(const RunConfig& c, const std::string& key) {
  auto it = c.parameters.find(key);
  if (it == c.parameters.end()) {
    throw ConfigError("experiment." + key + ": not set for '" + c.experiment + "'");
  }
  return it->second;
}
template <typename T>
const T& typed(const RunConfig& c, const std::string& key) {
  const auto& v = lookup(c, key);
  if (!std::holds_alternative<T>(v)) throw ConfigError("experiment." + key + ": wrong type");
  return std::get<T>(v);
}
}  // namespace

double RunConfig::number(const std::string& key) const { return typed<double>(*this, key); }
bool RunConfig::flag(const std::string& key) const { return typed<bool>(*this, key); }
const std::string& RunConfig::text(const std::string& key) const {
  return typed<std::string>(*this, key);
}
const std::vector<double>& RunConfig::numbers(const std::string& key) const {
  return typed<std::vector<double>>(*this, key);
}
const std::vector<std::string>& RunConfig::texts(const std::string& key) const {
  return typed<std::vector<std::string>>(*this, key);
}

bool RunConfig::operator==(const RunConfig& other) const {
  return serialize(*this) == serialize(other);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "solve", "norms", "diss-limit", "scaling-test", "bona-smith",
      "certify-symbol", "resonance-test", "meter", "existence-probe"};
  return names;
}

// --- parsing --------------------------------------------------------------------------

RunConfig parse_config(std::string_view text, std::string_view default_experiment) {
  const auto entries = lex(text);
  std::map<std::string, const Entry*> by_path;
  for (const auto& e : entries) by_path[e.path] = &e;
  std::map<std::string, bool> used;

  RunConfig c;
  auto take = [&](const std::string& path, Type t) -> std::optional<ConfigValue> {
    auto it = by_path.find(path);
    if (it == by_path.end()) {
      c.defaulted.push_back(path);
      return std::nullopt;
    }
    used[path] = true;
    return convert(*it->second, t);
  };
  auto line_of = [&](const std::string& path) {
    auto it = by_path.find(path);
    return it == by_path.end() ? 0 : it->second->value.line;
  };
  auto where = [&](const std::string& path) {
    const int l = line_of(path);
    return path + (l > 0 ? " (line " + std::to_string(l) + ")" : " (default)");
  };

  // seed: full 64-bit range, read from the token.
  if (auto it = by_path.find("seed"); it != by_path.end()) {
    used["seed"] = true;
    const Raw& r = it->second->value;
    if (r.kind != Raw::Number || !integral_token(r.token)) {
      fail("seed", r.line, "expected a non-negative integer");
    }
    auto [end, ec] = std::from_chars(r.token.data(), r.token.data() + r.token.size(), c.seed);
    if (ec != std::errc() || end != r.token.data() + r.token.size()) {
      fail("seed", r.line, "expected a non-negative integer below 2^64");
    }
  } else {
    c.defaulted.push_back("seed");
  }

  auto set_string = [&](const std::string& path, std::string& out) {
    if (auto v = take(path, Type::String)) out = std::get<std::string>(*v);
  };
  auto set_number = [&](const std::string& path, double& out) {
    if (auto v = take(path, Type::Number)) out = std::get<double>(*v);
  };
  auto set_int = [&](const std::string& path, int& out) {
    if (auto v = take(path, Type::Integer)) {
      const double d = std::get<double>(*v);
      if (std::abs(d) > 1e9) fail(path, line_of(path), "integer out of range");
      out = static_cast<int>(d);
    }
  };
  auto set_bool = [&](const std::string& path, bool& out) {
    if (auto v = take(path, Type::Bool)) out = std::get<bool>(*v);
  };

  set_string("equation.dispersion", c.dispersion);
  set_string("equation.dissipation", c.dissipation);
  const bool alpha_given = by_path.count("equation.alpha") > 0;
  const bool beta_given = by_path.count("equation.beta") > 0;
  set_number("equation.alpha", c.alpha);
  set_number("equation.beta", c.beta);
  set_number("equation.epsilon", c.epsilon);
  set_string("equation.integrator", c.integrator);
  set_bool("equation.dealias", c.dealias);

  if (auto it = by_path.find("grid.length"); it != by_path.end()) {
    used["grid.length"] = true;
    const Raw& r = it->second->value;
    if (r.kind == Raw::Number) {
      c.length = r.number;
    } else if (r.kind == Raw::String && r.token.size() >= 2 &&
               r.token.compare(r.token.size() - 2, 2, "pi") == 0) {
      const std::string factor = r.token.substr(0, r.token.size() - 2);
      double f = 1.0;
      if (!factor.empty()) {
        auto [end, ec] = std::from_chars(factor.data(), factor.data() + factor.size(), f);
        if (ec != std::errc() || end != factor.data() + factor.size()) {
          fail("grid.length", r.line, "expected a number or \"<c>pi\", got \"" + r.token + "\"");
        }
      }
      c.length = f * std::numbers::pi;
    } else {
      fail("grid.length", r.line, "expected a number or \"<c>pi\"");
    }
  } else {
    c.defaulted.push_back("grid.length");
  }
  set_int("grid.n", c.n);
  if (c.n < 8 || !is_power_of_two(c.n)) {
    throw ConfigError(where("grid.n") + ": n must be a power of two >= 8, got " +
                      std::to_string(c.n));
  }
  if (!(c.length > 0.0)) throw ConfigError(where("grid.length") + ": length must be > 0");

  set_number("time.dt", c.dt);
  set_number("time.t_end", c.t_end);
  set_int("time.record_stride", c.record_stride);
  set_number("time.max_amplitude", c.max_amplitude);
  set_number("time.max_tail_fraction", c.max_tail_fraction);

  if (by_path.count("experiment.name")) {
    set_string("experiment.name", c.experiment);
  } else {
    c.experiment = std::string(default_experiment);
    c.defaulted.push_back("experiment.name");
  }
  set_string("experiment.initial", c.initial);

  set_string("output.directory", c.directory);
  if (auto v = take("output.formats", Type::Strings)) {
    c.formats = std::get<std::vector<std::string>>(*v);
  }
  for (const auto& f : c.formats) {
    if (f != "json" && f != "csv") {
      fail("output.formats", line_of("output.formats"), "unknown format '" + f + "'");
    }
  }

  // Experiment keys.
  if (std::find(experiment_names().begin(), experiment_names().end(), c.experiment) ==
      experiment_names().end()) {
    fail("experiment.name", line_of("experiment.name"), "unknown experiment '" + c.experiment + "'");
  }
  for (const auto& spec : experiment_keys(c.experiment)) {
    const std::string path = "experiment." + spec.key;
    if (by_path.count(path)) {
      used[path] = true;
      c.parameters[spec.key] = convert(*by_path[path], spec.type);
    } else if (spec.fallback) {
      c.parameters[spec.key] = *spec.fallback;
      c.defaulted.push_back(path);
    }
  }
  if (c.experiment == "meter") {
    try {
      parse_meter(c.text("meter"));
    } catch (const ArgumentError& e) {
      fail("experiment.meter", line_of("experiment.meter"), e.what());
    }
    for (const auto& e : entries) {
      if (e.path.rfind("experiment.", 0) != 0 || used.count(e.path)) continue;
      const std::string key = e.path.substr(11);
      if (key == "name" || key == "initial") continue;
      if (is_meter_axis(c.text("meter"), key)) {
        used[e.path] = true;
        c.parameters[key] = convert(e, Type::Numbers);
      }
    }
    const std::string cutoff = c.text("cutoff");
    if (cutoff != "smooth" && cutoff != "sharp") {
      fail("experiment.cutoff", line_of("experiment.cutoff"), "expected \"smooth\" or \"sharp\"");
    }
  }

  for (const auto& e : entries) {
    if (!used.count(e.path)) {
      fail(e.path, e.value.line,
           "unknown key" + (e.path.rfind("experiment.", 0) == 0
                                ? " for experiment '" + c.experiment + "'"
                                : std::string()));
    }
  }

  // Cross-field checks.
  std::optional<SymbolSpec> p, q;
  try {
    p = SymbolSpec::parse(c.dispersion, SymbolRole::Dispersion);
  } catch (const Error& e) {
    throw ConfigError(where("equation.dispersion") + ": " + e.what());
  }
  if (c.dissipation != "none") {
    try {
      q = SymbolSpec::parse(c.dissipation, SymbolRole::Dissipation);
    } catch (const Error& e) {
      throw ConfigError(where("equation.dissipation") + ": " + e.what());
    }
  }
  if (!alpha_given) {
    c.alpha = p->order();
  } else if (c.alpha != p->order()) {
    throw ConfigError(where("equation.alpha") + ": alpha = " + format_double(c.alpha) +
                      " but the dispersion symbol has order " + format_double(p->order()));
  }
  if (!beta_given) {
    c.beta = q ? q->order() : 0.0;
  } else if (q && c.beta != q->order()) {
    throw ConfigError(where("equation.beta") + ": beta = " + format_double(c.beta) +
                      " but the dissipation symbol has order " + format_double(q->order()));
  }
  if (!(c.alpha >= 1.0 && c.alpha <= 2.0)) {
    throw ConfigError(where("equation.alpha") + ": alpha must lie in [1, 2]");
  }
  if (!(c.beta >= 0.0 && c.beta <= 1.0 + c.alpha)) {
    throw ConfigError(where("equation.beta") + ": requires 0 <= beta <= 1 + alpha, got beta = " +
                      format_double(c.beta) + " with alpha = " + format_double(c.alpha));
  }
  if (c.epsilon > 0.0 && !q) {
    throw ConfigError(where("equation.epsilon") + ": epsilon > 0 needs a dissipation symbol");
  }
  if (c.experiment == "diss-limit" && !q) {
    throw ConfigError(where("equation.dissipation") + ": diss-limit needs a dissipation symbol");
  }
  try {
    parse_integrator(c.integrator);
  } catch (const Error& e) {
    throw ConfigError(where("equation.integrator") + ": " + e.what());
  }
  try {
    solver_config(c).validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("configuration: ") + e.what());
  }
  {
    const auto kv = detail::parse_key_values(c.initial);
    static const std::vector<std::string> families{"fourier", "soliton", "bo-wave",
                                                   "gaussian", "rough", "file"};
    if (std::find(families.begin(), families.end(), kv.name) == families.end()) {
      throw ConfigError(where("experiment.initial") + ": unknown initial data family '" +
                        kv.name + "'");
    }
  }
  return c;
}

RunConfig load_config(const std::string& path, std::string_view default_experiment) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), default_experiment);
}

std::string serialize(const RunConfig& c) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  line("seed", std::to_string(c.seed));
  out += "\n[equation]\n";
  line("dispersion", quote(c.dispersion));
  line("dissipation", quote(c.dissipation));
  line("alpha", format_double(c.alpha));
  line("beta", format_double(c.beta));
  line("epsilon", format_double(c.epsilon));
  line("integrator", quote(c.integrator));
  line("dealias", c.dealias ? "true" : "false");
  out += "\n[grid]\n";
  line("length", format_double(c.length));
  line("n", std::to_string(c.n));
  out += "\n[time]\n";
  line("dt", format_double(c.dt));
  line("t_end", format_double(c.t_end));
  line("record_stride", std::to_string(c.record_stride));
  line("max_amplitude", format_double(c.max_amplitude));
  line("max_tail_fraction", format_double(c.max_tail_fraction));
  out += "\n[experiment]\n";
  line("name", quote(c.experiment));
  line("initial", quote(c.initial));
  std::map<std::string, Type> types;
  for (const auto& k : experiment_keys(c.experiment)) types[k.key] = k.type;
  for (const auto& [key, value] : c.parameters) {
    const auto t = types.find(key);
    const bool integer = t != types.end() && t->second == Type::Integer;
    line(key, integer ? std::to_string(static_cast<long long>(std::get<double>(value)))
                      : render(value));
  }
  out += "\n[output]\n";
  line("directory", quote(c.directory));
  line("formats", render(c.formats));
  return out;
}

SolverConfig solver_config(const RunConfig& c) {
  SolverConfig s;
  s.dispersion = SymbolSpec::parse(c.dispersion, SymbolRole::Dispersion);
  if (c.dissipation != "none") {
    s.dissipation = SymbolSpec::parse(c.dissipation, SymbolRole::Dissipation);
  }
  s.alpha = c.alpha;
  s.beta = c.beta;
  s.epsilon = c.epsilon;
  s.grid = Grid(c.length, c.n);
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.integrator = parse_integrator(c.integrator);
  s.dealias = c.dealias;
  s.record_stride = c.record_stride;
  s.seed = c.seed;
  s.max_amplitude = c.max_amplitude;
  s.max_tail_fraction = c.max_tail_fraction;
  return s;
}

}  // namespace dispersolve
