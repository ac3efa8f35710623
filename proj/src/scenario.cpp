#include "otdr/scenario.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace otdr {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path, message);
}

void require_keys(const json& node, const std::string& path,
                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (const char* k : allowed) known = known || key == k;
    if (!known) fail(path.empty() ? key : path + "." + key, "unknown key");
  }
}

const json* find(const json& node, const char* key) {
  const auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

double as_number(const json& node, const std::string& path) {
  if (!node.is_number()) fail(path, "expected a number");
  return node.get<double>();
}

long long as_integer(const json& node, const std::string& path) {
  if (!node.is_number_integer() && !node.is_number_unsigned())
    fail(path, "expected an integer");
  return node.get<long long>();
}

// Scalar-or-list field expanded to a length-n vector.
std::vector<double> as_expanded(const json& node, const std::string& path, int n) {
  std::vector<double> values;
  if (node.is_number()) {
    values.assign(static_cast<std::size_t>(n), node.get<double>());
  } else if (node.is_array()) {
    if (static_cast<int>(node.size()) != n)
      fail(path, "expected " + std::to_string(n) + " entries, got " +
                     std::to_string(node.size()));
    for (std::size_t i = 0; i < node.size(); ++i)
      values.push_back(as_number(node[i], path + "[" + std::to_string(i) + "]"));
  } else {
    fail(path, "expected a number or a list of numbers");
  }
  return values;
}

std::vector<double> as_value_list(const json& node, const std::string& path) {
  std::vector<double> values;
  if (node.is_number()) {
    values.push_back(node.get<double>());
  } else if (node.is_array()) {
    if (node.empty()) fail(path, "value list is empty");
    for (std::size_t i = 0; i < node.size(); ++i)
      values.push_back(as_number(node[i], path + "[" + std::to_string(i) + "]"));
  } else {
    fail(path, "expected a number or a list of numbers");
  }
  return values;
}

FiberSpec parse_fiber(const json& node) {
  if (!node.is_object()) fail("fiber", "expected an object");
  require_keys(node, "fiber", {"L", "tau", "theta", "energy"});

  const json* l_node = find(node, "L");
  if (!l_node) fail("fiber.L", "missing required key");
  const long long blocks = as_integer(*l_node, "fiber.L");
  if (blocks < 1 || blocks > 1'000'000) fail("fiber.L", "must lie in [1, 1e6]");

  const json* tau_node = find(node, "tau");
  if (!tau_node) fail("fiber.tau", "missing required key");
  const json* theta_node = find(node, "theta");
  if (!theta_node) fail("fiber.theta", "missing required key");
  const json* energy_node = find(node, "energy");
  if (!energy_node) fail("fiber.energy", "missing required key");

  FiberSpec fiber;
  fiber.tau = as_expanded(*tau_node, "fiber.tau", static_cast<int>(blocks));
  fiber.theta = as_expanded(*theta_node, "fiber.theta", static_cast<int>(blocks));
  fiber.energy = as_number(*energy_node, "fiber.energy");

  for (std::size_t i = 0; i < fiber.tau.size(); ++i)
    if (!(fiber.tau[i] > 0.0 && fiber.tau[i] <= 1.0))
      fail("fiber.tau[" + std::to_string(i) + "]", "must lie in (0, 1]");
  for (std::size_t i = 0; i < fiber.theta.size(); ++i)
    if (!(fiber.theta[i] >= 0.0 && fiber.theta[i] <= 1.0))
      fail("fiber.theta[" + std::to_string(i) + "]", "must lie in [0, 1]");
  if (!(fiber.energy >= 0.0)) fail("fiber.energy", "must be non-negative");
  return fiber;
}

std::vector<AttackSpec> parse_attacks(const json& node, const FiberSpec& fiber) {
  if (!node.is_array()) fail("attacks", "expected a list");
  std::vector<AttackSpec> attacks;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string path = "attacks[" + std::to_string(i) + "]";
    const json& entry = node[i];
    if (!entry.is_object()) fail(path, "expected an object");
    require_keys(entry, path, {"position", "tau", "theta"});

    const json* pos_node = find(entry, "position");
    if (!pos_node) fail(path + ".position", "missing required key");
    const long long position = as_integer(*pos_node, path + ".position");
    if (position < 1 || position > fiber.blocks())
      fail(path + ".position",
           "must lie in [1, " + std::to_string(fiber.blocks()) + "]");

    const json* tau_node = find(entry, "tau");
    if (!tau_node) fail(path + ".tau", "missing required key");
    const json* theta_node = find(entry, "theta");
    if (!theta_node) fail(path + ".theta", "missing required key");

    // tau/theta may be value lists; the entry then expands to the grid of
    // all combinations at this position.
    const std::vector<double> taus = as_value_list(*tau_node, path + ".tau");
    const std::vector<double> thetas = as_value_list(*theta_node, path + ".theta");
    const double base_tau = fiber.tau[static_cast<std::size_t>(position) - 1];
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
      if (!(taus[ti] >= 0.0 && taus[ti] <= base_tau))
        fail(path + (tau_node->is_array() ? ".tau[" + std::to_string(ti) + "]"
                                          : ".tau"),
             "exceeds baseline transmissivity " + std::to_string(base_tau) +
                 " at block " + std::to_string(position));
      for (std::size_t hi = 0; hi < thetas.size(); ++hi) {
        if (!(thetas[hi] >= 0.0 && thetas[hi] <= 1.0))
          fail(path + (theta_node->is_array() ? ".theta[" + std::to_string(hi) + "]"
                                              : ".theta"),
               "must lie in [0, 1]");
        attacks.push_back(
            AttackSpec{static_cast<int>(position), taus[ti], thetas[hi]});
      }
    }
  }
  return attacks;
}

NumericsOptions parse_numerics(const json& node) {
  NumericsOptions numerics;
  if (node.is_null()) return numerics;
  if (!node.is_object()) fail("numerics", "expected an object");
  require_keys(node, "numerics",
               {"xi_grid", "quadrature_nodes", "dense_n_limit", "n_list"});

  if (const json* v = find(node, "xi_grid")) {
    const long long grid = as_integer(*v, "numerics.xi_grid");
    if (grid < 1024 || grid > (1 << 26)) fail("numerics.xi_grid", "must lie in [1024, 2^26]");
    numerics.xi_grid = static_cast<int>(grid);
  }
  if (const json* v = find(node, "quadrature_nodes")) {
    const long long nodes = as_integer(*v, "numerics.quadrature_nodes");
    if (nodes < 64 || nodes > (1 << 26))
      fail("numerics.quadrature_nodes", "must lie in [64, 2^26]");
    numerics.quadrature_nodes = static_cast<int>(nodes);
  }
  if (const json* v = find(node, "dense_n_limit")) {
    const long long limit = as_integer(*v, "numerics.dense_n_limit");
    if (limit < 1 || limit > 16384) fail("numerics.dense_n_limit", "must lie in [1, 16384]");
    numerics.dense_n_limit = static_cast<int>(limit);
  }
  if (const json* v = find(node, "n_list")) {
    if (!v->is_array() || v->empty()) fail("numerics.n_list", "expected a non-empty list");
    numerics.n_list.clear();
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string path = "numerics.n_list[" + std::to_string(i) + "]";
      const long long n = as_integer((*v)[i], path);
      if (n < 1 || n > numerics.dense_n_limit)
        fail(path, "must lie in [1, dense_n_limit]");
      numerics.n_list.push_back(static_cast<int>(n));
    }
  }
  return numerics;
}

MCOptions parse_mc(const json& node) {
  MCOptions mc;
  if (node.is_null()) return mc;
  if (!node.is_object()) fail("mc", "expected an object");
  require_keys(node, "mc", {"samples", "seed", "workers"});

  if (const json* v = find(node, "samples")) {
    const long long samples = as_integer(*v, "mc.samples");
    if (samples < 1) fail("mc.samples", "must be positive");
    mc.samples = static_cast<std::uint64_t>(samples);
  }
  if (const json* v = find(node, "seed")) {
    if (!v->is_number_integer() && !v->is_number_unsigned())
      fail("mc.seed", "expected an integer");
    mc.seed = v->get<std::uint64_t>();
  }
  if (const json* v = find(node, "workers")) {
    const long long workers = as_integer(*v, "mc.workers");
    if (workers < 1 || workers > 4096) fail("mc.workers", "must lie in [1, 4096]");
    mc.workers = static_cast<int>(workers);
  }
  return mc;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");
  require_keys(root, "", {"fiber", "attacks", "numerics", "mc", "output"});

  const json* fiber_node = find(root, "fiber");
  if (!fiber_node) fail("fiber", "missing required key");

  ScenarioConfig config;
  config.fiber = parse_fiber(*fiber_node);
  if (const json* attacks_node = find(root, "attacks"))
    config.attacks = parse_attacks(*attacks_node, config.fiber);
  config.numerics = parse_numerics(find(root, "numerics") ? *find(root, "numerics")
                                                          : json());
  config.mc = parse_mc(find(root, "mc") ? *find(root, "mc") : json());
  if (const json* output_node = find(root, "output")) {
    if (!output_node->is_string() || output_node->get<std::string>().empty())
      fail("output", "expected a non-empty string");
    config.output_dir = output_node->get<std::string>();
  }
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file " + file.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const ScenarioConfig& config) {
  json root;
  root["fiber"] = {{"L", config.fiber.blocks()},
                   {"tau", config.fiber.tau},
                   {"theta", config.fiber.theta},
                   {"energy", config.fiber.energy}};
  json attacks = json::array();
  for (const AttackSpec& attack : config.attacks)
    attacks.push_back({{"position", attack.position},
                       {"tau", attack.tau},
                       {"theta", attack.theta}});
  root["attacks"] = attacks;
  root["numerics"] = {{"xi_grid", config.numerics.xi_grid},
                      {"quadrature_nodes", config.numerics.quadrature_nodes},
                      {"dense_n_limit", config.numerics.dense_n_limit},
                      {"n_list", config.numerics.n_list}};
  root["mc"] = {{"samples", config.mc.samples},
                {"seed", config.mc.seed},
                {"workers", config.mc.workers}};
  root["output"] = config.output_dir;
  return root.dump(2) + "\n";
}

}  // namespace otdr
