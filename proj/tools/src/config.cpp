#include "config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <oscsync/io.hpp>
#include <oscsync/parallel.hpp>

namespace oscsync::cli {

namespace fs = std::filesystem;

namespace {

const std::set<std::string> kTopKeys = {
    "version", "seed",    "graph",  "coupling", "lags",         "delay",  "epsilon",   "omega",
    "initial", "horizon", "step",   "record_every", "sample_dt", "trials", "sync_threshold",
    "n",       "sizes",   "sigmas", "mu",       "engine",       "eps_bar", "jitter",   "conv_grid",
    "grid",    "scan",    "splay_jitter", "solve"};

const std::map<std::string, std::set<std::string>> kSectionKeys = {
    {"graph", {"kind", "n", "edges", "offsets", "file"}},
    {"coupling", {"kind", "K", "b", "amp", "file", "sin", "cos", "m"}},
    {"delay", {"kind", "psi0", "mu", "w", "sigma", "samples"}},
    {"lags", {"kind", "value", "values", "delay"}},
    {"initial", {"kind", "values", "jitter", "e", "m", "block_sizes", "shifts"}},
    {"scan", {"mode", "restarts"}},
};

const std::map<std::string, std::vector<std::string>> kRequired = {
    {"simulate", {"graph", "coupling", "initial", "horizon", "step"}},
    {"pulse", {"graph", "coupling", "initial", "horizon", "sample_dt"}},
    {"equilibrium", {"graph", "coupling", "initial"}},
    {"stability", {"graph", "coupling", "initial"}},
    {"cut-scan", {"graph", "coupling", "initial"}},
    {"surface", {"coupling"}},
    {"basin", {"graph", "coupling"}},
    {"meanfield", {"coupling", "delay", "sizes"}},
    {"clusters", {"coupling", "delay", "n"}},
    {"sweep", {"coupling", "mu", "sigmas", "sizes"}},
};

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::BadConfig, what); }

double get_number(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number()) bad(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double get_number_or(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

std::size_t get_count(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  if (!j.at(key).is_number_unsigned()) bad(std::string("'") + key + "' must be a non-negative integer");
  return j.at(key).get<std::size_t>();
}

std::vector<double> get_numbers(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array()) bad(std::string("'") + key + "' must be a list of numbers");
  std::vector<double> out;
  for (const auto& x : a) {
    if (!x.is_number()) bad(std::string("'") + key + "' must be a list of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::size_t> get_counts(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array()) bad(std::string("'") + key + "' must be a list of integers");
  std::vector<std::size_t> out;
  for (const auto& x : a) {
    if (!x.is_number_unsigned()) bad(std::string("'") + key + "' must be a list of non-negative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

std::string get_kind(const json& j) {
  if (!j.is_object()) bad("must be an object");
  if (!j.contains("kind") || !j.at("kind").is_string()) bad("missing string key 'kind'");
  return j.at("kind").get<std::string>();
}

// 1-indexed label from the config to a 0-indexed vertex.
std::size_t vertex(const json& x, std::size_t n) {
  if (!x.is_number_unsigned()) bad("vertex labels must be positive integers");
  const auto v = x.get<std::size_t>();
  if (v < 1 || v > n) bad("vertex label " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return v - 1;
}

struct LagEntry {
  std::size_t i, j;
  double psi;
};

std::vector<LagEntry> lag_entries(const json& l, std::size_t n) {
  std::vector<LagEntry> out;
  if (!l.contains("values") || !l.at("values").is_array()) bad("lags of kind 'edges' need a 'values' list");
  for (const auto& row : l.at("values")) {
    if (!row.is_array() || row.size() != 3 || !row[2].is_number()) bad("lag entries are [i, j, psi]");
    out.push_back({vertex(row[0], n), vertex(row[1], n), row[2].get<double>()});
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

const std::vector<std::string>& run_verbs() {
  static const std::vector<std::string> v = {"simulate", "pulse", "equilibrium", "stability", "cut-scan",
                                             "surface",  "basin", "meanfield",   "clusters",  "sweep"};
  return v;
}

bool Finding::applies_to(std::string_view verb) const {
  return verbs.empty() || std::find(verbs.begin(), verbs.end(), verb) != verbs.end();
}

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    bad("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

void apply_override(json& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) bad("override '" + std::string(assignment) + "' is not key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &cfg;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) bad("override key '" + key + "' has an empty component");
    if (!node->is_object()) bad("override key '" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

Graph parse_graph_spec(const json& j, const fs::path& base) {
  const std::string kind = get_kind(j);
  if (kind == "example4") return example4_graph();
  if (kind == "file") {
    if (!j.contains("file") || !j.at("file").is_string()) bad("graph of kind 'file' needs a 'file' path");
    return read_graph_file(base / j.at("file").get<std::string>());
  }
  const std::size_t n = get_count(j, "n");
  if (n == 0) bad("graph needs n >= 1");
  if (kind == "complete") return complete_graph(n);
  if (kind == "ring") return ring_graph(n);
  if (kind == "path") return path_graph(n);
  if (kind == "circulant") {
    const auto offsets = get_counts(j, "offsets");
    return circulant_graph(n, offsets);
  }
  if (kind == "edges") {
    if (!j.contains("edges") || !j.at("edges").is_array()) bad("graph of kind 'edges' needs an 'edges' list");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) bad("edges are [i, j] pairs");
      pairs.emplace_back(vertex(e[0], n), vertex(e[1], n));
    }
    return build_graph(n, pairs);
  }
  bad("unknown graph kind '" + kind + "'");
}

CouplingFunction parse_coupling(const json& j, const fs::path& base) {
  const std::string kind = get_kind(j);
  if (kind == "sine") return CouplingFunction::sine(get_number(j, "K"));
  if (kind == "fb") return CouplingFunction::fb(get_number(j, "b"), get_number_or(j, "amp", 1.0));
  if (kind == "tabulated") {
    if (!j.contains("file") || !j.at("file").is_string()) bad("tabulated coupling needs a 'file' path");
    return read_tabulated_file(base / j.at("file").get<std::string>());
  }
  if (kind == "harmonics") {
    const auto s = get_numbers(j, "sin");
    const auto c = j.contains("cos") ? get_numbers(j, "cos") : std::vector<double>{};
    const std::size_t m = j.contains("m") ? get_count(j, "m") : 256;
    return CouplingFunction::harmonics(s, c, m);
  }
  bad("unknown coupling kind '" + kind + "'");
}

DelayDistribution parse_delay(const json& j) {
  const std::string kind = get_kind(j);
  if (kind == "point") return DelayDistribution::point(get_number(j, "psi0"));
  if (kind == "uniform") return DelayDistribution::uniform(get_number(j, "mu"), get_number(j, "w"));
  if (kind == "gaussian") return DelayDistribution::gaussian(get_number(j, "mu"), get_number(j, "sigma"));
  if (kind == "empirical") return DelayDistribution::empirical(get_numbers(j, "samples"));
  bad("unknown delay kind '" + kind + "'");
}

IsotropySpec parse_isotropy(const json& j) {
  IsotropySpec s;
  s.m = get_count(j, "m");
  s.block_sizes = get_counts(j, "block_sizes");
  s.shifts = j.contains("shifts") ? get_numbers(j, "shifts") : std::vector<double>(s.block_sizes.size(), 0.0);
  s.validate();
  return s;
}

std::vector<Finding> check_config(const json& cfg, const fs::path& base) {
  std::vector<Finding> out;
  auto add = [&](std::string msg, std::vector<std::string> verbs = {}) {
    out.push_back({std::move(msg), std::move(verbs), false});
  };
  if (!cfg.is_object()) {
    add("config must be a JSON object");
    return out;
  }
  for (const auto& [k, v] : cfg.items()) {
    if (!kTopKeys.contains(k)) add("unknown key '" + k + "'");
  }
  for (const auto& [section, keys] : kSectionKeys) {
    if (!cfg.contains(section)) continue;
    const json& s = cfg.at(section);
    if (!s.is_object()) {
      add("'" + section + "' must be an object");
      continue;
    }
    for (const auto& [k, v] : s.items()) {
      if (!keys.contains(k)) add("unknown key '" + section + "." + k + "'");
    }
  }
  if (!cfg.contains("version")) {
    add("missing key 'version'");
  } else if (!cfg.at("version").is_number_integer() || cfg.at("version").get<long long>() != kConfigVersion) {
    add("unsupported version (expected " + std::to_string(kConfigVersion) + ")");
  }
  if (!cfg.contains("seed")) {
    add("missing key 'seed'");
  } else if (!cfg.at("seed").is_number_unsigned()) {
    add("'seed' must be a non-negative integer");
  }

  auto number_in = [&](const char* key, double lo, bool lo_open, double hi, bool hi_open) {
    if (!cfg.contains(key)) return;
    const json& v = cfg.at(key);
    if (!v.is_number()) {
      add(std::string("'") + key + "' must be a number");
      return;
    }
    const double x = v.get<double>();
    const bool ok = std::isfinite(x) && (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
    if (!ok) add(std::string("'") + key + "' out of range");
  };
  const double inf = HUGE_VAL;
  number_in("epsilon", 0.0, true, inf, true);
  number_in("omega", 0.0, true, inf, true);
  number_in("horizon", 0.0, true, inf, true);
  number_in("step", 0.0, true, inf, true);
  number_in("sample_dt", 0.0, true, inf, true);
  number_in("sync_threshold", 0.0, true, 1.0, false);
  number_in("mu", 0.0, false, inf, true);
  number_in("eps_bar", 0.0, true, inf, true);
  number_in("jitter", 0.0, false, inf, true);
  number_in("splay_jitter", 0.0, false, inf, true);
  for (const char* key : {"record_every", "trials", "n", "grid", "conv_grid"}) {
    if (cfg.contains(key) && (!cfg.at(key).is_number_unsigned() || cfg.at(key).get<std::size_t>() == 0)) {
      add(std::string("'") + key + "' must be a positive integer");
    }
  }
  if (cfg.contains("sizes")) {
    try {
      if (get_counts(cfg, "sizes").empty()) add("'sizes' must not be empty");
    } catch (const Error& e) {
      add(e.what());
    }
  }
  if (cfg.contains("sigmas")) {
    try {
      for (double s : get_numbers(cfg, "sigmas"))
        if (!(s >= 0.0)) add("'sigmas' must be non-negative");
    } catch (const Error& e) {
      add(e.what());
    }
  }
  if (cfg.contains("engine") && cfg.at("engine") != "pulse" && cfg.at("engine") != "phase") {
    add("'engine' must be \"pulse\" or \"phase\"");
  }
  if (cfg.contains("solve") && !cfg.at("solve").is_boolean()) add("'solve' must be true or false");
  if (cfg.contains("scan") && cfg.at("scan").is_object()) {
    const json& s = cfg.at("scan");
    if (s.contains("mode") && s.at("mode") != "exhaustive" && s.at("mode") != "heuristic") {
      add("'scan.mode' must be \"exhaustive\" or \"heuristic\"");
    }
    if (s.contains("restarts") && !s.at("restarts").is_number_unsigned()) add("'scan.restarts' must be an integer");
  }

  // Objects: build them and report whatever the constructors reject.
  std::optional<Graph> graph;
  if (cfg.contains("graph") && cfg.at("graph").is_object()) {
    try {
      graph = parse_graph_spec(cfg.at("graph"), base);
    } catch (const std::exception& e) {
      add(std::string("graph: ") + e.what());
    }
  }
  if (graph && !is_connected(*graph)) add("graph is disconnected", {"basin", "cut-scan"});

  if (cfg.contains("coupling") && cfg.at("coupling").is_object()) {
    const json& c = cfg.at("coupling");
    if (c.value("kind", "") == "fb" && c.contains("b") && c.at("b").is_number() &&
        !(c.at("b").get<double>() > 0.0 && c.at("b").get<double>() < kPi)) {
      add("b outside (0,pi)");
    } else {
      try {
        (void)parse_coupling(c, base);
      } catch (const std::exception& e) {
        add(std::string("coupling: ") + e.what());
      }
    }
  }
  if (cfg.contains("delay") && cfg.at("delay").is_object()) {
    try {
      (void)parse_delay(cfg.at("delay"));
    } catch (const std::exception& e) {
      add(std::string("delay: ") + e.what());
    }
  }
  if (cfg.contains("lags") && cfg.at("lags").is_object()) {
    const json& l = cfg.at("lags");
    try {
      const std::string kind = get_kind(l);
      if (kind == "constant") {
        if (!(get_number(l, "value") >= 0.0)) add("lags: lag must be non-negative");
      } else if (kind == "sampled") {
        if (!l.contains("delay")) bad("sampled lags need a 'delay' object");
        (void)parse_delay(l.at("delay"));
      } else if (kind == "edges") {
        if (!graph) bad("edge lags need a valid graph");
        std::map<std::pair<std::size_t, std::size_t>, double> seen;
        bool asymmetric = false;
        for (const auto& e : lag_entries(l, graph->num_vertices())) {
          if (!(e.psi >= 0.0)) add("lags: lag must be non-negative");
          const auto key = std::minmax(e.i, e.j);
          auto [it, fresh] = seen.emplace(key, e.psi);
          if (!fresh && it->second != e.psi) asymmetric = true;
          const auto inc = graph->incident(e.i);
          const bool present = std::any_of(inc.begin(), inc.end(), [&](std::size_t k) {
            const Edge& ed = graph->edge(k);
            return (ed.tail == e.i && ed.head == e.j) || (ed.tail == e.j && ed.head == e.i);
          });
          if (!present) {
            add("lags: no edge between " + std::to_string(e.i + 1) + " and " + std::to_string(e.j + 1));
          }
        }
        if (asymmetric) add("asymmetric lag");
      } else {
        bad("unknown lag kind '" + kind + "'");
      }
    } catch (const std::exception& e) {
      add(std::string("lags: ") + e.what());
    }
  }
  if (cfg.contains("initial") && cfg.at("initial").is_object()) {
    try {
      if (graph && cfg.contains("seed") && cfg.at("seed").is_number_unsigned()) {
        (void)Config(cfg, base).initial(graph->num_vertices());
      }
    } catch (const std::exception& e) {
      add(std::string("initial: ") + e.what());
    }
  }

  auto multiple_of_3 = [](std::size_t n) { return n > 0 && n % 3 == 0; };
  if (cfg.contains("n") && cfg.at("n").is_number_unsigned() && !multiple_of_3(cfg.at("n").get<std::size_t>())) {
    add("N not a multiple of 3", {"clusters"});
  }
  if (cfg.contains("sizes")) {
    try {
      for (std::size_t n : get_counts(cfg, "sizes"))
        if (!multiple_of_3(n)) {
          add("N not a multiple of 3: " + std::to_string(n), {"sweep"});
          break;
        }
      for (std::size_t n : get_counts(cfg, "sizes"))
        if (n < 2) {
          add("meanfield sizes must be >= 2", {"meanfield"});
          break;
        }
    } catch (const Error&) {
    }
  }

  for (const auto& [verb, keys] : kRequired) {
    for (const auto& k : keys) {
      if (!cfg.contains(k)) out.push_back({"missing key '" + k + "' for " + verb, {verb}, true});
    }
  }
  return out;
}

// ------------------------------------------------------------- Config

std::uint64_t Config::seed() const { return doc_.at("seed").get<std::uint64_t>(); }

double Config::number(const char* key, double fallback) const { return get_number_or(doc_, key, fallback); }

std::size_t Config::count(const char* key, std::size_t fallback) const {
  return doc_.contains(key) ? get_count(doc_, key) : fallback;
}

std::vector<std::size_t> Config::counts(const char* key) const { return get_counts(doc_, key); }
std::vector<double> Config::numbers(const char* key) const { return get_numbers(doc_, key); }

std::string Config::text(const char* key, const std::string& fallback) const {
  if (!doc_.contains(key)) return fallback;
  if (!doc_.at(key).is_string()) bad(std::string("'") + key + "' must be a string");
  return doc_.at(key).get<std::string>();
}

Graph Config::graph() const { return parse_graph_spec(doc_.at("graph"), base_); }
CouplingFunction Config::coupling() const { return parse_coupling(doc_.at("coupling"), base_); }
DelayDistribution Config::delay() const { return parse_delay(doc_.at("delay")); }

std::vector<double> Config::lags(const Graph& g) const {
  std::vector<double> out(g.num_edges(), 0.0);
  if (!doc_.contains("lags")) return out;
  const json& l = doc_.at("lags");
  const std::string kind = get_kind(l);
  if (kind == "constant") {
    std::fill(out.begin(), out.end(), get_number(l, "value"));
  } else if (kind == "sampled") {
    const DelayDistribution d = parse_delay(l.at("delay"));
    std::mt19937_64 rng(trial_seed(seed(), 1));
    for (double& x : out) x = d.sample(rng);
  } else if (kind == "edges") {
    for (const auto& e : lag_entries(l, g.num_vertices())) {
      for (std::size_t k : g.incident(e.i)) {
        const Edge& ed = g.edge(k);
        if ((ed.tail == e.i && ed.head == e.j) || (ed.tail == e.j && ed.head == e.i)) out[k] = e.psi;
      }
    }
  } else {
    bad("unknown lag kind '" + kind + "'");
  }
  return out;
}

PhaseVector Config::initial(std::size_t n) const {
  const json& j = doc_.at("initial");
  const std::string kind = get_kind(j);
  std::mt19937_64 rng(trial_seed(seed(), 0));
  PhaseVector phi(static_cast<Eigen::Index>(n));
  if (kind == "random") {
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] = u(rng);
  } else if (kind == "splay") {
    for (std::size_t i = 0; i < n; ++i) phi[static_cast<Eigen::Index>(i)] = kTwoPi * static_cast<double>(i) / static_cast<double>(n);
  } else if (kind == "values") {
    const auto v = get_numbers(j, "values");
    if (v.size() != n) bad("initial values need " + std::to_string(n) + " entries");
    for (std::size_t i = 0; i < n; ++i) phi[static_cast<Eigen::Index>(i)] = v[i];
  } else if (kind == "example4") {
    if (n != 6) bad("the example4 state needs 6 vertices");
    phi = example4_equilibrium();
  } else if (kind == "example4_family") {
    if (n != 6) bad("the example4 family needs 6 vertices");
    const auto e = get_numbers(j, "e");
    if (e.size() != 3) bad("'e' needs three entries");
    phi = example4_family(e[0], e[1], e[2]);
  } else if (kind == "isotropy") {
    const IsotropySpec s = parse_isotropy(j);
    if (s.total() != n) bad("isotropy spec has " + std::to_string(s.total()) + " oscillators, graph has " + std::to_string(n));
    phi = symmetric_equilibrium(s);
  } else {
    bad("unknown initial kind '" + kind + "'");
  }
  const double jitter = get_number_or(j, "jitter", 0.0);
  if (jitter < 0.0) bad("initial jitter must be non-negative, got " + fmt(jitter));
  if (jitter > 0.0) {
    std::uniform_real_distribution<double> u(-jitter, jitter);
    for (Eigen::Index i = 0; i < phi.size(); ++i) phi[i] += u(rng);
  }
  return wrap_phases(phi);
}

PhaseModel Config::phase_model() const {
  Graph g = graph();
  auto l = lags(g);
  PhaseModel m = PhaseModel::lagged(std::move(g), coupling(), std::move(l), number("epsilon", 1.0),
                                    number("omega", kTwoPi));
  m.validate();
  return m;
}

}  // namespace oscsync::cli
