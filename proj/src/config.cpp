#include "normsol/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace normsol {

namespace pt = boost::property_tree;

Suite parse_suite(const std::string& s) {
  if (s == "ground-state") return Suite::ground_state;
  if (s == "scaling-check") return Suite::scaling_check;
  if (s == "interaction") return Suite::interaction;
  if (s == "landmarks") return Suite::landmarks;
  if (s == "solve") return Suite::solve;
  if (s == "one-dim") return Suite::one_dim;
  if (s == "verify-all") return Suite::verify_all;
  throw std::invalid_argument("unknown suite '" + s + "'");
}

std::string to_string(Suite s) {
  switch (s) {
    case Suite::ground_state: return "ground-state";
    case Suite::scaling_check: return "scaling-check";
    case Suite::interaction: return "interaction";
    case Suite::landmarks: return "landmarks";
    case Suite::solve: return "solve";
    case Suite::one_dim: return "one-dim";
    case Suite::verify_all: return "verify-all";
  }
  return "?";
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a64(source_text); }

std::string ExperimentConfig::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

namespace {

const std::map<std::string, std::set<std::string>> kSchema = {
    {"model", {"N", "p", "rho"}},
    {"domain", {"obstacle_radius", "cutoff_R", "ramp_eps"}},
    {"potential", {"form", "amplitude", "rate", "center", "q", "table_r", "table_v"}},
    {"grid", {"h", "half_width", "order", "layers", "x_max"}},
    {"suite",
     {"name", "seed", "r_values", "sigma_points", "t_points", "c0_max_iter", "k_values", "interaction_t",
      "interaction_r"}},
    {"tolerances", {"identity", "scaling", "decay", "interaction", "solve", "newton", "drift"}},
    {"one_dim", {"p", "rho", "h", "half_width", "x_max", "epsilon_fraction", "v_rate", "r", "shifts", "wall_seed"}},
    {"output", {"dir"}},
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// line of every section.key, for diagnostics (the tree itself does not keep them)
std::map<std::string, int> index_lines(const std::string& text) {
  std::map<std::string, int> lines;
  std::istringstream is(text);
  std::string line, section;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == ';' || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      lines.emplace(section, no);
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = trim(t.substr(0, eq));
    lines.emplace(section.empty() ? key : section + "." + key, no);
  }
  return lines;
}

class Reader {
 public:
  Reader(const pt::ptree& tree, std::map<std::string, int> lines) : tree_(tree), lines_(std::move(lines)) {}

  int line(const std::string& key) const {
    auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
  }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(line(key), key, key + ": " + msg);
  }
  bool has(const std::string& key) const { return tree_.get_child_optional(key).has_value(); }
  std::string str(const std::string& key) const { return trim(tree_.get<std::string>(key)); }

  double num(const std::string& key, double def) const {
    if (!has(key)) return def;
    return parse_number(key, str(key));
  }
  int integer(const std::string& key, int def) const {
    const double v = num(key, def);
    if (v != std::floor(v)) fail(key, "expected an integer");
    return static_cast<int>(v);
  }
  std::vector<double> list(const std::string& key, std::vector<double> def) const {
    if (!has(key)) return def;
    std::vector<double> out;
    std::istringstream is(str(key));
    std::string item;
    while (std::getline(is, item, ',')) out.push_back(parse_number(key, trim(item)));
    if (out.empty()) fail(key, "empty list");
    return out;
  }

 private:
  double parse_number(const std::string& key, const std::string& s) const {
    if (s == "inf" || s == "infinity") return q_infinity;
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) fail(key, "trailing characters in '" + s + "'");
      return v;
    } catch (const std::invalid_argument&) {
      fail(key, "not a number: '" + s + "'");
    } catch (const std::out_of_range&) {
      fail(key, "number out of range: '" + s + "'");
    }
  }

  const pt::ptree& tree_;
  std::map<std::string, int> lines_;
};

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  {
    std::istringstream is(text);
    try {
      pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
      throw ConfigError(static_cast<int>(e.line()), "", origin + ": " + e.message());
    }
  }
  Reader rd(tree, index_lines(text));
  for (const auto& [section, body] : tree) {
    auto it = kSchema.find(section);
    if (it == kSchema.end()) {
      if (body.empty()) rd.fail(section, "key outside any section");
      rd.fail(section, "unknown section");
    }
    for (const auto& [key, v] : body)
      if (!it->second.count(key)) rd.fail(section + "." + key, "unknown key");
  }

  ExperimentConfig c;
  c.source_text = text;
  c.params.N = rd.integer("model.N", c.params.N);
  c.params.p = rd.num("model.p", c.params.p);
  c.params.rho = rd.num("model.rho", c.params.rho);
  if (c.params.N < 1 || c.params.N > 3) rd.fail("model.N", "dimension must be 1, 2 or 3");
  if (!(c.params.p > 2 && c.params.p < c.params.two_c()))
    rd.fail("model.p", "p must lie in (2, 2 + 4/N), the mass-subcritical range");
  if (!(c.params.rho > 0)) rd.fail("model.rho", "rho must be positive");

  c.domain.obstacle_radius = rd.num("domain.obstacle_radius", 0);
  c.domain.cutoff_R = rd.num("domain.cutoff_R", 0);
  c.domain.ramp_eps = rd.num("domain.ramp_eps", c.domain.ramp_eps);
  try {
    c.domain.validate();
  } catch (const std::invalid_argument& e) {
    rd.fail("domain.cutoff_R", e.what());
  }

  if (rd.has("potential.form")) {
    try {
      c.potential.form = parse_potential_form(rd.str("potential.form"));
    } catch (const std::invalid_argument& e) {
      rd.fail("potential.form", e.what());
    }
  }
  c.potential.amplitude = rd.num("potential.amplitude", c.potential.amplitude);
  c.potential.rate = rd.num("potential.rate", c.potential.rate);
  c.potential.q = rd.num("potential.q", c.potential.q);
  if (rd.has("potential.center")) c.potential.center = rd.list("potential.center", {});
  c.potential.table_r = rd.list("potential.table_r", {});
  c.potential.table_v = rd.list("potential.table_v", {});
  if (!q_admissible(c.potential.q, c.params.N))
    rd.fail("potential.q", "q is not admissible for N = " + std::to_string(c.params.N) +
                               " (need q >= max(1, N/2), q > 1 when N = 2)");
  try {
    c.potential.validate(c.params.N);
  } catch (const std::invalid_argument& e) {
    rd.fail("potential.form", e.what());
  }

  c.grid.h = rd.num("grid.h", c.grid.h);
  c.grid.half_width = rd.num("grid.half_width", 0);
  c.grid.order = rd.integer("grid.order", c.grid.order);
  c.grid.layers = rd.integer("grid.layers", c.grid.layers);
  c.grid.x_max = rd.num("grid.x_max", 0);
  if (!(c.grid.h > 0)) rd.fail("grid.h", "spacing must be positive");
  if (c.grid.order != 2 && c.grid.order != 4) rd.fail("grid.order", "stencil order must be 2 or 4");
  if (c.grid.layers < c.grid.order / 2) rd.fail("grid.layers", "need at least order/2 pinned layers");
  if (c.grid.half_width < 0) rd.fail("grid.half_width", "must be >= 0 (0 selects an automatic box)");
  if (c.grid.x_max > 0 && c.params.N != 1) rd.fail("grid.x_max", "half-line grids need N = 1");

  if (rd.has("suite.name")) {
    try {
      c.suite = parse_suite(rd.str("suite.name"));
    } catch (const std::invalid_argument& e) {
      rd.fail("suite.name", e.what());
    }
  }
  const double seed = rd.num("suite.seed", static_cast<double>(c.seed));
  if (seed < 0 || seed != std::floor(seed)) rd.fail("suite.seed", "seed must be a nonnegative integer");
  c.seed = static_cast<std::uint64_t>(seed);
  c.r_values = rd.list("suite.r_values", c.r_values);
  for (double r : c.r_values)
    if (!(r > 0)) rd.fail("suite.r_values", "radii must be positive");
  c.sigma_points = rd.integer("suite.sigma_points", c.sigma_points);
  if (c.sigma_points < 4) rd.fail("suite.sigma_points", "need at least 4 points");
  c.t_points = rd.integer("suite.t_points", c.t_points);
  if (c.t_points < 3 || c.t_points % 2 == 0) rd.fail("suite.t_points", "need an odd count >= 3 so t = 1/2 is a node");
  c.c0_max_iter = rd.integer("suite.c0_max_iter", c.c0_max_iter);
  c.k_values = rd.list("suite.k_values", c.k_values);
  for (double k : c.k_values)
    if (!(k > 0)) rd.fail("suite.k_values", "k must be positive");
  c.interaction_t = rd.num("suite.interaction_t", c.interaction_t);
  if (!(c.interaction_t > 0 && c.interaction_t < 0.5)) rd.fail("suite.interaction_t", "t must lie in (0, 1/2)");
  c.interaction_r = rd.list("suite.interaction_r", c.interaction_r);

  Tolerances& t = c.tol;
  t.identity = rd.num("tolerances.identity", t.identity);
  t.scaling = rd.num("tolerances.scaling", t.scaling);
  t.decay = rd.num("tolerances.decay", t.decay);
  t.interaction = rd.num("tolerances.interaction", t.interaction);
  t.solve = rd.num("tolerances.solve", t.solve);
  t.newton = rd.num("tolerances.newton", t.newton);
  t.drift = rd.num("tolerances.drift", t.drift);
  for (const char* k : {"identity", "scaling", "decay", "interaction", "solve", "newton", "drift"})
    if (!(rd.num(std::string("tolerances.") + k, 1.0) > 0)) rd.fail(std::string("tolerances.") + k, "must be positive");

  OneDimConfig& o = c.one_dim;
  o.p = rd.num("one_dim.p", o.p);
  o.rho = rd.num("one_dim.rho", o.rho);
  o.h = rd.num("one_dim.h", o.h);
  o.half_width = rd.num("one_dim.half_width", o.half_width);
  o.x_max = rd.num("one_dim.x_max", o.x_max);
  o.epsilon_fraction = rd.num("one_dim.epsilon_fraction", o.epsilon_fraction);
  o.v_rate = rd.num("one_dim.v_rate", o.v_rate);
  o.r = rd.num("one_dim.r", o.r);
  o.wall_seed = rd.num("one_dim.wall_seed", o.wall_seed);
  o.shifts = rd.list("one_dim.shifts", o.shifts);
  if (!(o.p > 2 && o.p < 6)) rd.fail("one_dim.p", "p must lie in (2, 6) for N = 1");
  if (!(o.epsilon_fraction > 0 && o.epsilon_fraction < 1))
    rd.fail("one_dim.epsilon_fraction", "the potential must stay below the smallness threshold");

  if (rd.has("output.dir")) c.output_dir = rd.str("output.dir");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace normsol
