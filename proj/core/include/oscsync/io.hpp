#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "oscsync/coupling.hpp"
#include "oscsync/dynamics.hpp"
#include "oscsync/graph.hpp"
#include "oscsync/pulse.hpp"

namespace oscsync {

/// 17 significant digits, locale independent.
std::string format_double(double x);

/// Graph text: first line N, then "i j" per edge (0-indexed); '#' starts a
/// comment. Throws Error{Io} on malformed input, and the build_graph errors.
Graph parse_graph(std::istream& in);
Graph read_graph_file(const std::filesystem::path& path);
void write_graph(std::ostream& out, const Graph& g);

/// Tabulated coupling: M lines "theta value" with theta_k = 2 pi k / M.
CouplingFunction read_tabulated_file(const std::filesystem::path& path);

void write_trajectory_csv(std::ostream& out, const Trajectory& tr);
void write_firings_csv(std::ostream& out, const std::vector<Firing>& firings);
void write_surface_csv(std::ostream& out, const Eigen::MatrixXd& surface);

}  // namespace oscsync
