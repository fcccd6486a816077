#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bep/errors.hpp"
#include "bep/harness.hpp"

namespace bep {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "inf" || v == "infinity") return std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config: " + key + " = '" + raw + "' is not a number");
  }
  return out;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config: " + key + " = '" + raw + "' is not an integer");
  }
  return out;
}

std::vector<std::string> split(const std::string& raw) {
  std::vector<std::string> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> to_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  for (const auto& item : split(raw)) out.push_back(to_double(key, item));
  return out;
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string fmt_list(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + fmt(xs[i]);
  return out;
}

struct Entry {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <class T>
Entry int_entry(T ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.*member = static_cast<T>(to_integer(k, v));
          },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Entry real_entry(double ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*member = to_double(k, v); },
          [member](const ExperimentConfig& c) { return fmt(c.*member); }};
}

Entry list_entry(std::vector<double> ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string& k, const std::string& v) { c.*member = to_list(k, v); },
          [member](const ExperimentConfig& c) { return fmt_list(c.*member); }};
}

Entry path_entry(std::filesystem::path ExperimentConfig::*member) {
  return {[member](ExperimentConfig& c, const std::string&, const std::string& v) { c.*member = trim(v); },
          [member](const ExperimentConfig& c) { return (c.*member).string(); }};
}

/// Every accepted key, in echo order.
const std::vector<std::pair<std::string, Entry>>& registry() {
  using C = ExperimentConfig;
  static const std::vector<std::pair<std::string, Entry>> table{
      {"grid.dim", int_entry(&C::dim)},
      {"grid.q", int_entry(&C::q)},
      {"grid.transverse", int_entry(&C::transverse)},
      {"grid.max_points", int_entry(&C::max_points)},
      {"besov.s", {[](C& c, auto& k, auto& v) { c.idx.s = to_double(k, v); }, [](const C& c) { return fmt(c.idx.s); }}},
      {"besov.p", {[](C& c, auto& k, auto& v) { c.idx.p = to_double(k, v); }, [](const C& c) { return fmt(c.idx.p); }}},
      {"besov.r", {[](C& c, auto& k, auto& v) { c.idx.r = to_double(k, v); }, [](const C& c) { return fmt(c.idx.r); }}},
      {"datum.n_min", int_entry(&C::n_min)},
      {"datum.n_max", int_entry(&C::n_max)},
      {"datum.single_n",
       {[](C& c, auto& k, auto& v) {
          const std::string t = trim(v);
          if (t == "none" || t.empty()) {
            c.single_n.reset();
          } else {
            c.single_n = static_cast<int>(to_integer(k, t));
          }
        },
        [](const C& c) { return c.single_n ? std::to_string(*c.single_n) : std::string("none"); }}},
      {"bump.decay_tol", real_entry(&C::decay_tol)},
      {"solver.cfl", {[](C& c, auto& k, auto& v) { c.policy.cfl = to_double(k, v); }, [](const C& c) { return fmt(c.policy.cfl); }}},
      {"solver.velocity_floor",
       {[](C& c, auto& k, auto& v) { c.policy.velocity_floor = to_double(k, v); },
        [](const C& c) { return fmt(c.policy.velocity_floor); }}},
      {"solver.dt_max",
       {[](C& c, auto& k, auto& v) { c.policy.dt_max = to_double(k, v); }, [](const C& c) { return fmt(c.policy.dt_max); }}},
      {"solver.min_steps",
       {[](C& c, auto& k, auto& v) { c.policy.min_steps = static_cast<int>(to_integer(k, v)); },
        [](const C& c) { return std::to_string(c.policy.min_steps); }}},
      {"solver.growth_guard", real_entry(&C::growth_guard)},
      {"solver.horizon", real_entry(&C::horizon)},
      {"solver.sample_times", list_entry(&C::sample_times)},
      {"lemma31.n_lo", int_entry(&C::lemma_n_lo)},
      {"lemma31.n_hi", int_entry(&C::lemma_n_hi)},
      {"prop31.times", list_entry(&C::prop_times)},
      {"lipschitz.n_lo", int_entry(&C::lip_n_lo)},
      {"lipschitz.n_hi", int_entry(&C::lip_n_hi)},
      {"lipschitz.times", list_entry(&C::lip_times)},
      {"hoelder.alphas", list_entry(&C::alphas)},
      {"hoelder.n_lo", int_entry(&C::hoelder_n_lo)},
      {"hoelder.n_hi", int_entry(&C::hoelder_n_hi)},
      {"hoelder.horizon",
       {[](C& c, auto& k, auto& v) { c.hoelder.horizon = to_double(k, v); }, [](const C& c) { return fmt(c.hoelder.horizon); }}},
      {"hoelder.cfl",
       {[](C& c, auto& k, auto& v) { c.hoelder.policy.cfl = to_double(k, v); },
        [](const C& c) { return fmt(c.hoelder.policy.cfl); }}},
      {"hoelder.velocity_floor",
       {[](C& c, auto& k, auto& v) { c.hoelder.policy.velocity_floor = to_double(k, v); },
        [](const C& c) { return fmt(c.hoelder.policy.velocity_floor); }}},
      {"hoelder.min_steps",
       {[](C& c, auto& k, auto& v) { c.hoelder.policy.min_steps = static_cast<int>(to_integer(k, v)); },
        [](const C& c) { return std::to_string(c.hoelder.policy.min_steps); }}},
      {"hoelder.dt_check_tol",
       {[](C& c, auto& k, auto& v) { c.hoelder.dt_check_tol = to_double(k, v); },
        [](const C& c) { return fmt(c.hoelder.dt_check_tol); }}},
      {"audit.scale_lo", int_entry(&C::audit_scale_lo)},
      {"audit.scale_hi", int_entry(&C::audit_scale_hi)},
      {"audit.samples", int_entry(&C::audit_samples)},
      {"norms.fields",
       {[](C& c, auto&, auto& v) {
          c.norm_fields.clear();
          for (const auto& item : split(v)) c.norm_fields.emplace_back(item);
        },
        [](const C& c) {
          std::string out;
          for (std::size_t i = 0; i < c.norm_fields.size(); ++i) out += (i ? "," : "") + c.norm_fields[i].string();
          return out;
        }}},
      {"run.output_dir", path_entry(&C::output_dir)},
      {"run.cache_dir", path_entry(&C::cache_dir)},
      {"run.seed", int_entry(&C::seed)},
      {"run.threads", int_entry(&C::threads)},
  };
  return table;
}

const Entry& lookup(const std::string& key) {
  for (const auto& [name, entry] : registry()) {
    if (name == key) return entry;
  }
  throw ConfigError("config: unknown key '" + key + "'");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError("config: " + message);
}

void require_times(const std::vector<double>& ts, std::size_t min_count, const std::string& key) {
  require(ts.size() >= min_count, key + " needs at least " + std::to_string(min_count) + " times");
  for (double t : ts) require(t > 0.0 && std::isfinite(t), key + " holds a non-positive time");
}

void require_writable(const std::filesystem::path& dir, const std::string& key) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto probe = dir / ".write_probe";
  std::ofstream f(probe);
  require(!ec && f.good(), key + " = '" + dir.string() + "' is not writable");
  f.close();
  std::filesystem::remove(probe, ec);
}

void validate(const ExperimentConfig& c) {
  require(c.dim == 2 || c.dim == 3, "grid.dim must be 2 or 3");
  require(c.q >= 1, "grid.q must be >= 1");
  require(c.transverse >= 4 && (c.transverse & (c.transverse - 1)) == 0, "grid.transverse must be a power of two >= 4");
  try {
    c.idx.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!c.idx.admissible(c.dim)) throw ConfigError("config: inadmissible Besov index: " + c.idx.violation(c.dim));
  require(c.n_min >= 1 && c.n_min <= c.n_max, "datum.n_min must satisfy 1 <= n_min <= n_max");
  if (c.single_n) require(*c.single_n >= c.n_min && *c.single_n <= c.n_max, "datum.single_n outside [n_min, n_max]");
  std::size_t points = resolving_axis_size(c.n_max + 1, c.q);
  for (int a = 1; a < c.dim; ++a) points *= c.transverse;
  require(points <= c.max_points, "datum.n_max = " + std::to_string(c.n_max) + " needs " + std::to_string(points) +
                                      " lattice points, above grid.max_points = " + std::to_string(c.max_points));
  require(c.decay_tol > 0.0, "bump.decay_tol must be positive");
  require(c.policy.cfl > 0.0 && c.policy.cfl < 1.0, "solver.cfl must lie in (0, 1)");
  require(c.policy.min_steps >= 1, "solver.min_steps must be >= 1");
  require(c.growth_guard > 1.0, "solver.growth_guard must exceed 1");
  require(c.horizon >= 0.0, "solver.horizon must be >= 0");
  for (double t : c.sample_times) require(t >= 0.0 && t <= c.horizon, "solver.sample_times must lie in [0, horizon]");
  auto in_datum = [&](int lo, int hi) { return lo <= hi && lo >= c.n_min && hi <= c.n_max; };
  require(in_datum(c.lemma_n_lo, c.lemma_n_hi), "lemma31 range must be a non-empty subrange of [n_min, n_max]");
  require(in_datum(c.lip_n_lo, c.lip_n_hi), "lipschitz range must be a non-empty subrange of [n_min, n_max]");
  require_times(c.prop_times, 4, "prop31.times");
  require_times(c.lip_times, 2, "lipschitz.times");
  require(!c.alphas.empty(), "hoelder.alphas is empty");
  for (double a : c.alphas) require(a > 0.0 && a < 1.0, "hoelder.alphas must lie in (0, 1)");
  require(c.hoelder_n_lo >= 1 && c.hoelder_n_lo <= c.hoelder_n_hi, "hoelder range is empty");
  require(c.hoelder.horizon > 0.0, "hoelder.horizon must be positive");
  require(c.hoelder.policy.cfl > 0.0 && c.hoelder.policy.cfl < 1.0, "hoelder.cfl must lie in (0, 1)");
  require(c.hoelder.policy.min_steps >= 1, "hoelder.min_steps must be >= 1");
  require(c.audit_scale_lo >= 2 && c.audit_scale_lo <= c.audit_scale_hi, "audit scale range is empty");
  require(c.audit_samples >= 1, "audit.samples must be >= 1");
  require(c.threads >= 1, "run.threads must be >= 1");
  require_writable(c.output_dir, "run.output_dir");
  require_writable(resolve_cache_dir(c), "run.cache_dir");
}

}  // namespace

ExperimentConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    boost::property_tree::ptree tree;
    try {
      boost::property_tree::ini_parser::read_ini(path.string(), tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
      throw ConfigError("config: cannot read '" + path.string() + "': " + e.message());
    }
    for (const auto& [section, body] : tree) {
      if (!body.data().empty()) throw ConfigError("config: key '" + section + "' outside a section");
      for (const auto& [key, value] : body) {
        const std::string name = section + "." + key;
        lookup(name).set(cfg, name, value.data());
      }
    }
  }
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("config: override '" + item + "' is not key=value");
    const std::string name = trim(item.substr(0, eq));
    lookup(name).set(cfg, name, item.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

std::string effective_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  std::string current;
  for (const auto& [name, entry] : registry()) {
    const auto dot = name.find('.');
    const std::string section = name.substr(0, dot);
    if (section != current) {
      if (!current.empty()) os << '\n';
      os << '[' << section << "]\n";
      current = section;
    }
    os << name.substr(dot + 1) << " = " << entry.get(cfg) << '\n';
  }
  return os.str();
}

std::filesystem::path resolve_cache_dir(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("BESOV_EP_CACHE"); env && *env) return env;
  return cfg.cache_dir;
}

}  // namespace bep
