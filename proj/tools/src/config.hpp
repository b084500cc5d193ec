#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include <oscsync/coupling.hpp>
#include <oscsync/delay.hpp>
#include <oscsync/dynamics.hpp>
#include <oscsync/equilibria.hpp>
#include <oscsync/graph.hpp>

namespace oscsync::cli {

using nlohmann::json;

inline constexpr int kConfigVersion = 1;

/// Verbs that run something (validate is handled separately).
const std::vector<std::string>& run_verbs();

struct Finding {
  std::string message;
  std::vector<std::string> verbs;  // empty: applies to every verb
  bool missing_key = false;        // a verb's required key is absent

  bool applies_to(std::string_view verb) const;
};

/// Reads a JSON document. Throws Error{Io} or Error{BadConfig}.
json load_config(const std::filesystem::path& path);

/// Applies "a.b.c=value" overrides; the value is parsed as JSON and taken
/// as a plain string when that fails. Throws Error{BadConfig}.
void apply_override(json& cfg, std::string_view assignment);

/// Structural and semantic findings for a config. Never throws.
std::vector<Finding> check_config(const json& cfg, const std::filesystem::path& base);

/// Typed accessors. They assume check_config() reported nothing for the
/// keys involved, and throw Error{BadConfig} otherwise.
class Config {
 public:
  Config(json doc, std::filesystem::path base) : doc_(std::move(doc)), base_(std::move(base)) {}

  const json& doc() const { return doc_; }
  bool has(const char* key) const { return doc_.contains(key); }

  std::uint64_t seed() const;
  double number(const char* key, double fallback) const;
  std::size_t count(const char* key, std::size_t fallback) const;
  std::vector<std::size_t> counts(const char* key) const;
  std::vector<double> numbers(const char* key) const;
  std::string text(const char* key, const std::string& fallback) const;

  Graph graph() const;
  CouplingFunction coupling() const;
  DelayDistribution delay() const;
  /// Per-edge lags of the configured graph; zeros when absent.
  std::vector<double> lags(const Graph& g) const;
  /// Initial phases for a graph of n vertices.
  PhaseVector initial(std::size_t n) const;
  PhaseModel phase_model() const;

 private:
  json doc_;
  std::filesystem::path base_;
};

CouplingFunction parse_coupling(const json& j, const std::filesystem::path& base);
DelayDistribution parse_delay(const json& j);
Graph parse_graph_spec(const json& j, const std::filesystem::path& base);
IsotropySpec parse_isotropy(const json& j);

}  // namespace oscsync::cli
