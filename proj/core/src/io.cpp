#include "oscsync/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace oscsync {

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

// Next non-empty line with comments stripped; false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Graph parse_graph(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!next_line(in, line, lineno)) throw Error(ErrorCode::Io, "graph file is empty");
  std::istringstream head(line);
  long long n = 0;
  std::string rest;
  if (!(head >> n) || (head >> rest) || n <= 0) {
    throw Error(ErrorCode::Io, "line " + std::to_string(lineno) + ": expected a positive vertex count");
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  while (next_line(in, line, lineno)) {
    std::istringstream ls(line);
    long long i = 0;
    long long j = 0;
    if (!(ls >> i >> j) || (ls >> rest) || i < 0 || j < 0) {
      throw Error(ErrorCode::Io, "line " + std::to_string(lineno) + ": expected \"i j\"");
    }
    pairs.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return build_graph(static_cast<std::size_t>(n), pairs);
}

Graph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open graph file " + path.string());
  return parse_graph(in);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << '\n';
  for (const auto& e : g.edges()) out << e.tail << ' ' << e.head << '\n';
}

CouplingFunction read_tabulated_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open coupling table " + path.string());
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> theta;
  std::vector<double> value;
  while (next_line(in, line, lineno)) {
    std::istringstream ls(line);
    double t = 0.0;
    double v = 0.0;
    std::string rest;
    if (!(ls >> t >> v) || (ls >> rest)) {
      throw Error(ErrorCode::Io, path.string() + ":" + std::to_string(lineno) + ": expected \"theta value\"");
    }
    theta.push_back(t);
    value.push_back(v);
  }
  const std::size_t m = value.size();
  for (std::size_t k = 0; k < m; ++k) {
    const double expect = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    if (std::abs(theta[k] - expect) > 1e-9) {
      throw Error(ErrorCode::BadShape, path.string() + ": theta values must be 2 pi k / M in order");
    }
  }
  return CouplingFunction::tabulated(std::move(value));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  const std::size_t n = tr.states.empty() ? 0 : static_cast<std::size_t>(tr.states.front().size());
  const bool with_v = !tr.potential.empty();
  out << 't';
  for (std::size_t i = 0; i < n; ++i) out << ",phi_" << i;
  if (with_v) out << ",V";
  out << '\n';
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    out << format_double(tr.times[k]);
    for (std::size_t i = 0; i < n; ++i) out << ',' << format_double(tr.states[k][static_cast<Eigen::Index>(i)]);
    if (with_v) out << ',' << format_double(tr.potential[k]);
    out << '\n';
  }
}

void write_firings_csv(std::ostream& out, const std::vector<Firing>& firings) {
  out << "t,oscillator\n";
  for (const auto& f : firings) out << format_double(f.t) << ',' << f.oscillator << '\n';
}

void write_surface_csv(std::ostream& out, const Eigen::MatrixXd& surface) {
  const Eigen::Index g = surface.rows();
  out << "lambda1,lambda2,value\n";
  for (Eigen::Index a = 0; a < g; ++a) {
    for (Eigen::Index b = 0; b < surface.cols(); ++b) {
      const double l1 = -kPi + kTwoPi * static_cast<double>(a) / static_cast<double>(g - 1);
      const double l2 = -kPi + kTwoPi * static_cast<double>(b) / static_cast<double>(surface.cols() - 1);
      out << format_double(l1) << ',' << format_double(l2) << ',' << format_double(surface(a, b)) << '\n';
    }
  }
}

}  // namespace oscsync
