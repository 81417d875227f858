#pragma once

// Text formats:
//   tree       one node per line, "path<TAB>p", root written as "-"
//   partition  one label per line, line i holds the cluster of node i
//   edge list  "i<TAB>j" per edge, optional leading "# nodes<TAB>N"
//   dendrogram Newick with merge similarity as internal label, or JSON
// Lines starting with '#' are comments in every text format.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "hcd/model.hpp"

namespace hcd::io {

struct TreeFile {
  CommunityTree tree;
  std::vector<double> p;  ///< per tree node
};

void write_tree(std::ostream& out, const CommunityTree& tree, const std::vector<double>& p);
TreeFile read_tree(std::istream& in);

void write_partition(std::ostream& out, const Partition& partition);
/// Labels are taken as given (no relabelling); k = max label + 1.
Partition read_partition(std::istream& in);

void write_edge_list(std::ostream& out, const Graph& graph);
/// Node count comes from `nodes` when non-zero, else from the header comment,
/// else from the largest endpoint.
Graph read_edge_list(std::istream& in, std::size_t nodes = 0);

std::string to_newick(const Dendrogram& dendrogram);
std::string to_json(const Dendrogram& dendrogram);
Dendrogram dendrogram_from_json(const std::string& text);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

// File helpers; failures raise IoError naming the path.
void write_file(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace hcd::io
