#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "hcd/generator.hpp"
#include "hcd/io.hpp"
#include "support.hpp"

namespace hcd {
namespace {

TEST(Io, TreeRoundTrip) {
  const std::vector<double> a{1, 2, 3};
  const auto params = btsbm_params(2, a, 500);
  std::stringstream buffer;
  io::write_tree(buffer, params.tree, params.p);
  EXPECT_EQ(buffer.str().substr(0, 2), "-\t");
  const auto file = io::read_tree(buffer);
  EXPECT_EQ(file.tree, params.tree);
  EXPECT_EQ(file.p, params.p);
}

TEST(Io, TreeInfersLeavesFromPaths) {
  std::istringstream in("# comment\n-\t0.1\n1\t0.3\n0\t0.2\n01\t0.5\n00\t0.4\n");
  const auto file = io::read_tree(in);
  EXPECT_EQ(file.tree.leaf_count(), 3u);
  EXPECT_EQ(file.tree.depth(), 2u);
  EXPECT_DOUBLE_EQ(file.p[*file.tree.find(TreePath::parse("1"))], 0.3);
}

TEST(Io, PartitionRoundTripKeepsLabels) {
  const auto labels = Partition::over_leaves({2, 0, 2, 1}, 3);
  std::stringstream buffer;
  io::write_partition(buffer, labels);
  EXPECT_EQ(buffer.str(), "2\n0\n2\n1\n");
  EXPECT_EQ(io::read_partition(buffer), labels);
}

TEST(Io, MalformedInputsAreValidationErrors) {
  std::istringstream bad_label("0\nx\n");
  EXPECT_THROW(io::read_partition(bad_label), ValidationError);
  std::istringstream bad_edge("0\n");
  EXPECT_THROW(io::read_edge_list(bad_edge), ValidationError);
  std::istringstream bad_tree("-\tnope\n");
  EXPECT_THROW(io::read_tree(bad_tree), ValidationError);
}

TEST(Io, EdgeListRoundTripKeepsIsolatedNodes) {
  const Graph g(6, {{0, 1}, {2, 3}, {1, 2}});
  std::stringstream buffer;
  io::write_edge_list(buffer, g);
  EXPECT_EQ(io::read_edge_list(buffer), g);
  std::istringstream bare("0\t1\n3 2\n");
  EXPECT_EQ(io::read_edge_list(bare).node_count(), 4u);
  std::istringstream sized("0\t1\n");
  EXPECT_EQ(io::read_edge_list(sized, 10).node_count(), 10u);
}

TEST(Io, NewickCarriesMergeSimilarities) {
  const Dendrogram d{Partition({0, 1, 2, 3}), {{0, 1, 1.0, 4}, {2, 3, 0.5, 5}, {4, 5, 0.25, 6}}};
  EXPECT_EQ(io::to_newick(d), "((0:0,1:0)1:0,(2:0,3:0)0.5:0)0.25;");
  const Dendrogram single{Partition({0, 0}), {}};
  EXPECT_EQ(io::to_newick(single), "0;");
}

TEST(Io, JsonRoundTrip) {
  const Dendrogram d{Partition({0, 1, 1, 2}), {{1, 2, 0.1 + 0.2, 3}, {0, 3, 1.0 / 3.0, 4}}};
  const auto back = io::dendrogram_from_json(io::to_json(d));
  EXPECT_EQ(back.initial_clusters, d.initial_clusters);
  EXPECT_EQ(back.merges, d.merges);
  EXPECT_THROW(io::dendrogram_from_json("{\"labels\": 3}"), ValidationError);
}

TEST(Io, FormatDoubleRoundTrips) {
  for (const double x : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0}) EXPECT_EQ(std::stod(io::format_double(x)), x);
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(Io, MissingFileIsIoError) {
  EXPECT_THROW(io::read_file("/nonexistent/dir/file.tsv"), IoError);
  EXPECT_THROW(io::write_file("/nonexistent/dir/file.tsv", "x"), IoError);
  const auto path = std::filesystem::temp_directory_path() / "hcd_io_test.txt";
  io::write_file(path, "payload\n");
  EXPECT_EQ(io::read_file(path), "payload\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hcd
