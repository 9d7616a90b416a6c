#include "cbdwr/config.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace cbdwr {

namespace {

std::string where(const std::string& source, int line, int column) {
  std::ostringstream os;
  os << source;
  if (line > 0) os << ':' << line << ':' << column;
  return os.str();
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int key_column = 0;
  int value_column = 0;
};

std::vector<Entry> tokenize(std::istream& in, const std::string& source) {
  std::vector<Entry> out;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = raw.substr(0, hash);
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source, line, static_cast<int>(first) + 1, "expected 'key = value'");
    }
    Entry e;
    e.line = line;
    const auto key_end = text.find_last_not_of(" \t", eq == 0 ? 0 : eq - 1);
    if (eq == first || key_end == std::string::npos || key_end < first) {
      throw ConfigError(source, line, static_cast<int>(first) + 1, "missing key before '='");
    }
    e.key = text.substr(first, key_end - first + 1);
    e.key_column = static_cast<int>(first) + 1;
    const auto vfirst = text.find_first_not_of(" \t\r", eq + 1);
    if (vfirst == std::string::npos) {
      throw ConfigError(source, line, static_cast<int>(eq) + 2, "missing value for '" + e.key + "'");
    }
    const auto vlast = text.find_last_not_of(" \t\r");
    e.value = text.substr(vfirst, vlast - vfirst + 1);
    e.value_column = static_cast<int>(vfirst) + 1;
    out.push_back(std::move(e));
  }
  return out;
}

double parse_real(const Entry& e, const std::string& source) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  const auto [ptr, ec] = std::from_chars(b, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError(source, e.line, e.value_column, "'" + e.key + "' expects a real number, got '" + e.value + "'");
  }
  return v;
}

long long parse_count(const Entry& e, const std::string& source) {
  // Accept 300000 as well as 3e5.
  const double v = parse_real(e, source);
  if (v < 0.0 || v != std::floor(v) || v > 1e15) {
    throw ConfigError(source, e.line, e.value_column, "'" + e.key + "' expects a nonnegative integer");
  }
  return static_cast<long long>(v);
}

bool parse_bool(const Entry& e, const std::string& source) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ConfigError(source, e.line, e.value_column, "'" + e.key + "' expects true or false");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, int column, const std::string& message)
    : Error(where(source, line, column) + ": " + message), line_(line), column_(column) {}

std::array<double, 5> load_reference(const std::string& path, std::array<double, 5> defaults) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open reference file");
  for (const Entry& e : tokenize(in, path)) {
    if (e.key.size() == 6 && e.key.starts_with("ref_J") && e.key[5] >= '1' && e.key[5] <= '5') {
      defaults[static_cast<std::size_t>(e.key[5] - '1')] = parse_real(e, path);
    } else {
      throw ConfigError(path, e.line, e.key_column, "unknown key '" + e.key + "' in reference file");
    }
  }
  return defaults;
}

RunConfig parse_config(std::istream& in, const std::string& source, const std::string& base_dir) {
  RunConfig cfg;
  std::array<std::optional<double>, 5> explicit_ref;
  std::optional<Entry> reference_file;

  using Handler = std::function<void(const Entry&)>;
  std::map<std::string, Handler> handlers;
  handlers["layout"] = [&](const Entry& e) {
    if (e.value == "published") {
      cfg.layout = Layout::Published;
    } else if (e.value == "stated") {
      cfg.layout = Layout::Stated;
    } else {
      throw ConfigError(source, e.line, e.value_column, "layout must be published or stated");
    }
  };
  handlers["mode"] = [&](const Entry& e) {
    if (e.value == "adaptive") {
      cfg.adapt.mode = RefinementMode::Adaptive;
    } else if (e.value == "uniform") {
      cfg.adapt.mode = RefinementMode::Uniform;
    } else {
      throw ConfigError(source, e.line, e.value_column, "mode must be adaptive or uniform");
    }
  };
  handlers["max_dofs"] = [&](const Entry& e) { cfg.adapt.max_dofs = static_cast<std::size_t>(parse_count(e, source)); };
  handlers["max_steps"] = [&](const Entry& e) { cfg.adapt.max_steps = static_cast<int>(parse_count(e, source)); };
  handlers["theta"] = [&](const Entry& e) { cfg.adapt.theta = parse_real(e, source); };
  handlers["f"] = [&](const Entry& e) { cfg.model.source = parse_real(e, source); };
  handlers["epsilon"] = [&](const Entry& e) { cfg.model.epsilon = parse_real(e, source); };
  handlers["newton_abs_tol"] = [&](const Entry& e) { cfg.adapt.newton.abs_tol = parse_real(e, source); };
  for (int k = 0; k < 4; ++k) {
    handlers["quad_order_omega" + std::to_string(k + 1)] = [&, k](const Entry& e) {
      cfg.model.quadrature_order[static_cast<std::size_t>(k)] = static_cast<int>(parse_count(e, source));
    };
  }
  for (int k = 0; k < 5; ++k) {
    handlers["ref_J" + std::to_string(k + 1)] = [&, k](const Entry& e) {
      explicit_ref[static_cast<std::size_t>(k)] = parse_real(e, source);
    };
  }
  handlers["reference_file"] = [&](const Entry& e) { reference_file = e; };
  handlers["output_dir"] = [&](const Entry& e) { cfg.output_dir = e.value; };
  handlers["dump_fields"] = [&](const Entry& e) { cfg.dump_fields = parse_bool(e, source); };

  std::map<std::string, int> seen;
  for (const Entry& e : tokenize(in, source)) {
    const auto it = handlers.find(e.key);
    if (it == handlers.end()) throw ConfigError(source, e.line, e.key_column, "unknown key '" + e.key + "'");
    if (const auto s = seen.find(e.key); s != seen.end()) {
      throw ConfigError(source, e.line, e.key_column,
                        "duplicate key '" + e.key + "' (first on line " + std::to_string(s->second) + ")");
    }
    seen[e.key] = e.line;
    it->second(e);
  }

  cfg.model.operators = operators_for(cfg.layout);
  cfg.adapt.qois = QoiSet::checkerboard(cfg.layout);

  if (reference_file) {
    std::filesystem::path p(reference_file->value);
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    try {
      cfg.reference = load_reference(p.string(), cfg.reference);
    } catch (const ConfigError& err) {
      throw ConfigError(source, reference_file->line, reference_file->value_column, err.what());
    }
  }
  for (std::size_t k = 0; k < 5; ++k) {
    if (explicit_ref[k]) cfg.reference[k] = *explicit_ref[k];
  }
  for (double r : cfg.reference) {
    if (r == 0.0) throw ConfigError(source, 0, 0, "reference values must be nonzero");
  }

  try {
    cfg.model.validate();
    cfg.adapt.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError(source, 0, 0, err.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, 0, "cannot open config file");
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(in, path, parent.empty() ? "." : parent.string());
}

}  // namespace cbdwr
