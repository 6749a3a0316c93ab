#include "prandtl_lab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"
#include "prandtl_lab/errors.hpp"

namespace prandtl_lab {

namespace {

using nlohmann::json;

// 1-based line of the first occurrence of "leaf": in the text, 0 if absent.
std::size_t line_of_key(const std::string& text, const std::string& dotted) {
  const std::string leaf = dotted.substr(dotted.rfind('.') == std::string::npos ? 0 : dotted.rfind('.') + 1);
  const auto pos = text.find("\"" + leaf + "\"");
  if (pos == std::string::npos) return 0;
  return static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n')) + 1;
}

[[noreturn]] void fail(const std::string& text, const std::string& key, const std::string& what) {
  const std::size_t line = line_of_key(text, key);
  throw ConfigError(line > 0 ? fmt::format("config error at line {}, key '{}': {}", line, key, what)
                             : fmt::format("config error, key '{}': {}", key, what),
                    key);
}

class Reader {
 public:
  Reader(const std::string& text, const json& obj, std::string prefix)
      : text_(text), obj_(obj), prefix_(std::move(prefix)) {
    if (!obj_.is_object()) fail(text_, prefix_.empty() ? "<root>" : prefix_, "expected an object");
  }

  std::string key(const std::string& k) const { return prefix_.empty() ? k : prefix_ + "." + k; }

  template <typename T>
  void get(const std::string& k, T& out) {
    seen_.insert(k);
    auto it = obj_.find(k);
    if (it == obj_.end()) return;
    const json& v = *it;
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) fail(text_, key(k), "expected a number");
      out = v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) fail(text_, key(k), "expected a string");
      out = v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      if (!v.is_array()) fail(text_, key(k), "expected an array of strings");
      out.clear();
      for (const auto& e : v) {
        if (!e.is_string()) fail(text_, key(k), "expected an array of strings");
        out.push_back(e.get<std::string>());
      }
    } else {
      // Integral types.
      if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(text_, key(k), "expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (v.is_number_integer() && v.get<long long>() < 0)
          fail(text_, key(k), "must be nonnegative");
      }
      out = v.get<T>();
    }
  }

  const json* child(const std::string& k) {
    seen_.insert(k);
    auto it = obj_.find(k);
    return it == obj_.end() ? nullptr : &*it;
  }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
      if (!seen_.count(it.key())) fail(text_, key(it.key()), "unknown key");
  }

 private:
  const std::string& text_;
  const json& obj_;
  std::string prefix_;
  std::set<std::string> seen_;
};

json to_json(const ScenarioConfig& c) {
  json j;
  j["name"] = c.name;
  j["grid"] = {{"Lx", c.grid.Lx}, {"Nx", c.grid.Nx}, {"Ymax", c.grid.Ymax}, {"Ny", c.grid.Ny},
               {"Neta", c.grid.Neta}};
  j["data"] = {{"shear", c.data.shear},
               {"t0", c.data.t0},
               {"perturbation", c.data.perturbation},
               {"epsilon", c.data.epsilon}};
  j["run"] = {{"t_end", c.run.t_end},
              {"dt", c.run.dt},
              {"cfl", c.run.cfl},
              {"observer_interval", c.run.observer_interval},
              {"seed", c.run.seed},
              {"snapshot_stride", c.run.snapshot_stride}};
  j["criterion"] = {{"c_floor", c.criterion.c_floor},
                    {"C_ceiling", c.criterion.C_ceiling},
                    {"A_ceiling", c.criterion.A_ceiling},
                    {"curv_ceiling", c.criterion.curv_ceiling},
                    {"delta", c.criterion.delta}};
  j["audits"] = {{"enabled", c.audits.enabled},
                 {"epsilon", c.audits.epsilon},
                 {"eta0", c.audits.eta0},
                 {"xi0", c.audits.xi0},
                 {"burn_in", c.audits.burn_in},
                 {"epsilon1", c.audits.epsilon1},
                 {"curvature_bound", c.audits.curvature_bound},
                 {"paraproduct_pairs", c.audits.paraproduct_pairs}};
  return j;
}

void check(bool ok, const std::string& text, const std::string& key, const std::string& what) {
  if (!ok) fail(text, key, what);
}

void validate_with_text(const ScenarioConfig& c, const std::string& text) {
  check(!c.name.empty() && c.name.find_first_of("/\\") == std::string::npos && c.name != "." &&
            c.name != "..",
        text, "name", "must be a nonempty directory name");
  check(c.grid.Lx > 0.0, text, "grid.Lx", "must be positive");
  check(c.grid.Nx >= 16 && is_power_of_two(c.grid.Nx), text, "grid.Nx",
        "must be a power of two and at least 16");
  check(c.grid.Ymax > 0.0, text, "grid.Ymax", "must be positive");
  check(c.grid.Ny >= 8, text, "grid.Ny", "must be at least 8");
  check(c.grid.Neta >= 8, text, "grid.Neta", "must be at least 8");
  try {
    parse_shear_kind(c.data.shear);
  } catch (const std::invalid_argument& e) {
    fail(text, "data.shear", e.what());
  }
  try {
    parse_perturbation_kind(c.data.perturbation);
  } catch (const std::invalid_argument& e) {
    fail(text, "data.perturbation", e.what());
  }
  check(c.data.t0 > 0.0, text, "data.t0", "must be positive");
  check(c.data.epsilon >= 0.0, text, "data.epsilon", "must be nonnegative");
  check(c.run.t_end >= 0.0, text, "run.t_end", "must be nonnegative");
  check(c.run.dt > 0.0, text, "run.dt", "must be positive");
  check(c.run.cfl > 0.0 && c.run.cfl <= 1.0, text, "run.cfl", "must lie in (0, 1]");
  check(c.run.observer_interval > 0.0, text, "run.observer_interval", "must be positive");
  check(c.criterion.c_floor >= 0.0, text, "criterion.c_floor", "must be nonnegative");
  check(c.criterion.C_ceiling > 0.0, text, "criterion.C_ceiling", "must be positive");
  check(c.criterion.A_ceiling > 0.0, text, "criterion.A_ceiling", "must be positive");
  check(c.criterion.curv_ceiling > 0.0, text, "criterion.curv_ceiling", "must be positive");
  check(c.criterion.delta > 0.0, text, "criterion.delta", "must be positive");
  for (const auto& a : c.audits.enabled)
    check(std::find(std::begin(kAuditNames), std::end(kAuditNames), a) != std::end(kAuditNames),
          text, "audits.enabled", fmt::format("unknown audit '{}'", a));
  check(c.audits.epsilon > 0.0, text, "audits.epsilon", "must be positive");
  check(c.audits.eta0 >= 0.0 && c.audits.eta0 < 1.0, text, "audits.eta0", "must lie in [0, 1)");
  check(c.audits.burn_in >= 0.0 && c.audits.burn_in <= 1.0, text, "audits.burn_in",
        "must lie in [0, 1]");
  check(c.audits.epsilon1 > 0.0 && c.audits.epsilon1 <= 1.0, text, "audits.epsilon1",
        "must lie in (0, 1]");
  check(c.audits.curvature_bound > 0.0, text, "audits.curvature_bound", "must be positive");
  check(c.audits.paraproduct_pairs > 0, text, "audits.paraproduct_pairs", "must be positive");
}

}  // namespace

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return name == o.name && grid == o.grid && data == o.data && run == o.run &&
         criterion.c_floor == o.criterion.c_floor && criterion.C_ceiling == o.criterion.C_ceiling &&
         criterion.A_ceiling == o.criterion.A_ceiling &&
         criterion.curv_ceiling == o.criterion.curv_ceiling &&
         criterion.delta == o.criterion.delta && audits == o.audits;
}

ShearKind parse_shear_kind(const std::string& s) {
  if (s == "exp") return ShearKind::exp;
  if (s == "erf") return ShearKind::erf;
  if (s == "linear") return ShearKind::linear;
  throw std::invalid_argument(fmt::format("unknown shear kind '{}' (exp, erf, linear)", s));
}

PerturbationKind parse_perturbation_kind(const std::string& s) {
  if (s == "none") return PerturbationKind::none;
  if (s == "sine") return PerturbationKind::sine;
  if (s == "curvature_spike") return PerturbationKind::curvature_spike;
  if (s == "non_monotone") return PerturbationKind::non_monotone;
  throw std::invalid_argument(fmt::format(
      "unknown perturbation kind '{}' (none, sine, curvature_spike, non_monotone)", s));
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, false);
  } catch (const json::parse_error& e) {
    const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
    const auto line = std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n') + 1;
    throw ConfigError(fmt::format("config parse error at line {}: {}", line, e.what()), "<json>");
  }
  ScenarioConfig c;
  Reader r(text, root, "");
  r.get("name", c.name);
  if (const json* g = r.child("grid")) {
    Reader s(text, *g, "grid");
    s.get("Lx", c.grid.Lx);
    s.get("Nx", c.grid.Nx);
    s.get("Ymax", c.grid.Ymax);
    s.get("Ny", c.grid.Ny);
    s.get("Neta", c.grid.Neta);
    s.reject_unknown();
  }
  if (const json* d = r.child("data")) {
    Reader s(text, *d, "data");
    s.get("shear", c.data.shear);
    s.get("t0", c.data.t0);
    s.get("perturbation", c.data.perturbation);
    s.get("epsilon", c.data.epsilon);
    s.reject_unknown();
  }
  if (const json* d = r.child("run")) {
    Reader s(text, *d, "run");
    s.get("t_end", c.run.t_end);
    s.get("dt", c.run.dt);
    s.get("cfl", c.run.cfl);
    s.get("observer_interval", c.run.observer_interval);
    s.get("seed", c.run.seed);
    s.get("snapshot_stride", c.run.snapshot_stride);
    s.reject_unknown();
  }
  if (const json* d = r.child("criterion")) {
    Reader s(text, *d, "criterion");
    s.get("c_floor", c.criterion.c_floor);
    s.get("C_ceiling", c.criterion.C_ceiling);
    s.get("A_ceiling", c.criterion.A_ceiling);
    s.get("curv_ceiling", c.criterion.curv_ceiling);
    s.get("delta", c.criterion.delta);
    s.reject_unknown();
  }
  if (const json* d = r.child("audits")) {
    Reader s(text, *d, "audits");
    s.get("enabled", c.audits.enabled);
    s.get("epsilon", c.audits.epsilon);
    s.get("eta0", c.audits.eta0);
    s.get("xi0", c.audits.xi0);
    s.get("burn_in", c.audits.burn_in);
    s.get("epsilon1", c.audits.epsilon1);
    s.get("curvature_bound", c.audits.curvature_bound);
    s.get("paraproduct_pairs", c.audits.paraproduct_pairs);
    s.reject_unknown();
  }
  r.reject_unknown();
  validate_with_text(c, text);
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read config file {}", path.string()), "<file>");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2); }

void validate_config(const ScenarioConfig& cfg) { validate_with_text(cfg, serialize_config(cfg)); }

ScenarioConfig refined(const ScenarioConfig& cfg) {
  ScenarioConfig r = cfg;
  r.grid.Nx *= 2;
  r.grid.Ny *= 2;
  r.grid.Neta *= 2;
  r.run.dt *= 0.5;
  return r;
}

Grid2D make_grid(const ScenarioConfig& cfg) {
  return Grid2D::uniform(cfg.grid.Lx, cfg.grid.Nx, cfg.grid.Ymax, cfg.grid.Ny);
}

PrandtlState make_initial_state(const ScenarioConfig& cfg) {
  const Grid2D g = make_grid(cfg);
  ShearProfile shear = make_shear(parse_shear_kind(cfg.data.shear), g.y, cfg.data.t0);
  Field pert = make_perturbation(parse_perturbation_kind(cfg.data.perturbation), g, cfg.data.epsilon);
  return make_state(g, std::move(shear), std::move(pert));
}

}  // namespace prandtl_lab
