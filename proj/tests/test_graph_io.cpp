#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "forge/graph_io.hpp"
#include "oracles.hpp"

using namespace forge;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    read_graph(in);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(GraphIo, RoundTrip) {
  const Graph g = oracle::petersen();
  std::istringstream in(format_graph(g));
  EXPECT_EQ(read_graph(in), g);
}

TEST(GraphIo, CommentsAndBlankLines) {
  std::istringstream in("# triangle\n3 3\n\n0 1\n# middle\n1 2\n2 0\n");
  const Graph g = read_graph(in);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(GraphIo, ErrorsCarryLineNumbers) {
  EXPECT_EQ(parse_error_line("3 1\n0 0\n"), 2u);       // self-loop
  EXPECT_EQ(parse_error_line("3 1\n0 5\n"), 2u);       // out of range
  EXPECT_EQ(parse_error_line("3 1\n0 x\n"), 2u);       // not an integer
  EXPECT_EQ(parse_error_line("3 1\n0 1 2\n"), 2u);     // wrong field count
  EXPECT_EQ(parse_error_line("3 1\n0 1\n1 2\n"), 3u);  // too many edges
  EXPECT_EQ(parse_error_line("3 2\n0 1\n"), 2u);       // too few edges
  EXPECT_EQ(parse_error_line("3 -1\n"), 1u);
  EXPECT_NE(parse_error_line("3 2\n0 1\n1 0\n"), 0u);  // duplicate edge
  std::istringstream empty("");
  EXPECT_THROW(read_graph(empty), ParseError);  // no header at all
}

TEST(GraphIo, AtomicFileWrite) {
  const auto dir = std::filesystem::temp_directory_path() / "forge_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "k4.txt";
  write_graph(oracle::complete(4), path);
  EXPECT_EQ(read_graph(path), oracle::complete(4));
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    EXPECT_EQ(entry.path().filename(), "k4.txt");
  }
  EXPECT_THROW(read_graph(dir / "missing.txt"), Error);
  std::filesystem::remove_all(dir);
}
