#pragma once

// Plain-text edge list:
//   n m
//   u v        (m lines, u < v, ascending)
// Full-line '#' comments are accepted on input; output is canonical so files
// are byte-comparable.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "forge/errors.hpp"
#include "forge/graph.hpp"

namespace forge {

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_count(std::string_view tok, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line_no, "expected a non-negative integer, got '" + std::string(tok) + "'");
  }
  return value;
}

// Atomic file replacement: write a sibling temp file, then rename over.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out.flush()) throw Error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline Graph read_graph(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::uint64_t n = 0, m = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != 2) {
      throw ParseError(line_no, "expected 2 fields, found " + std::to_string(tok.size()));
    }
    std::uint64_t a = detail::parse_count(tok[0], line_no);
    std::uint64_t b = detail::parse_count(tok[1], line_no);
    if (!have_header) {
      n = a;
      m = b;
      have_header = true;
      edges.reserve(m);
      continue;
    }
    if (edges.size() == m) throw ParseError(line_no, "more edges than the header's m=" + std::to_string(m));
    if (a >= n || b >= n) throw ParseError(line_no, "vertex id out of range for n=" + std::to_string(n));
    if (a == b) throw ParseError(line_no, "self-loop");
    edges.push_back(make_edge(static_cast<Vertex>(a), static_cast<Vertex>(b)));
  }
  if (!have_header) throw ParseError(line_no, "missing 'n m' header");
  if (edges.size() != m) {
    throw ParseError(line_no, "header declares " + std::to_string(m) + " edges, found " +
                                  std::to_string(edges.size()));
  }
  try {
    return Graph::from_edges(n, edges);
  } catch (const GraphError& e) {
    throw ParseError(line_no, e.what());
  }
}

inline Graph read_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file " + path.string());
  return read_graph(in);
}

inline std::string format_graph(const Graph& g) {
  std::ostringstream out;
  out << g.order() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

inline void write_graph(const Graph& g, std::ostream& out) { out << format_graph(g); }

inline void write_graph(const Graph& g, const std::filesystem::path& path) {
  detail::write_file_atomic(path, format_graph(g));
}

}  // namespace forge
