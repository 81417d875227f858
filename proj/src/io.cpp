#include "hcd/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

namespace hcd::io {

namespace {

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::size_t parse_index(const std::string& token, std::size_t line_no) {
  std::size_t value = 0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end || token.empty())
    throw ValidationError("line " + std::to_string(line_no) + ": expected a non-negative integer, got '" +
                          token + "'");
  return value;
}

double parse_double(const std::string& token, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("line " + std::to_string(line_no) + ": expected a number, got '" + token + "'");
  }
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_tree(std::ostream& out, const CommunityTree& tree, const std::vector<double>& p) {
  if (p.size() != tree.node_count()) throw ValidationError("one p value per tree node required");
  for (std::size_t u = 0; u < tree.node_count(); ++u)
    out << tree.path(u).to_string() << '\t' << format_double(p[u]) << '\n';
}

TreeFile read_tree(std::istream& in) {
  std::vector<std::pair<TreePath, double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    std::istringstream fields(line);
    std::string path, value;
    if (!(fields >> path >> value))
      throw ValidationError("line " + std::to_string(line_no) + ": expected 'path<TAB>p'");
    rows.emplace_back(TreePath::parse(path), parse_double(value, line_no));
  }
  std::vector<TreePath> paths;
  for (const auto& r : rows) paths.push_back(r.first);
  TreeFile file{CommunityTree::from_paths(paths), std::vector<double>(rows.size())};
  for (const auto& [path, value] : rows) file.p[*file.tree.find(path)] = value;
  return file;
}

void write_partition(std::ostream& out, const Partition& partition) {
  for (const auto l : partition.labels()) out << l << '\n';
}

Partition read_partition(std::istream& in) {
  std::vector<std::size_t> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    labels.push_back(parse_index(trim(line), line_no));
  }
  const auto k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  return Partition::over_leaves(std::move(labels), k);
}

void write_edge_list(std::ostream& out, const Graph& graph) {
  out << "# nodes\t" << graph.node_count() << '\n';
  for (const auto& e : graph.edges()) out << e.u << '\t' << e.v << '\n';
}

Graph read_edge_list(std::istream& in, std::size_t nodes) {
  std::vector<Edge> edges;
  std::size_t header_nodes = 0;
  std::size_t max_id = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) {
      std::istringstream fields(line);
      std::string hash, key, value;
      if (fields >> hash >> key >> value && hash == "#" && key == "nodes")
        header_nodes = parse_index(value, line_no);
      continue;
    }
    std::istringstream fields(line);
    std::string a, b;
    if (!(fields >> a >> b)) throw ValidationError("line " + std::to_string(line_no) + ": expected 'i<TAB>j'");
    const auto u = parse_index(a, line_no);
    const auto v = parse_index(b, line_no);
    max_id = std::max({max_id, u, v});
    edges.push_back({u, v});
  }
  std::size_t n = nodes ? nodes : header_nodes;
  if (n == 0) n = edges.empty() ? 0 : max_id + 1;
  return Graph(n, std::move(edges));
}

std::string to_newick(const Dendrogram& dendrogram) {
  check_dendrogram(dendrogram);
  const auto k = dendrogram.cluster_count();
  if (k == 0) return ";";
  // text[id] for every cluster id, built in merge order.
  std::vector<std::string> text(2 * k - 1);
  for (std::size_t c = 0; c < k; ++c) text[c] = std::to_string(c);
  for (const auto& m : dendrogram.merges)
    text[m.new_id] = "(" + text[m.left] + ":0," + text[m.right] + ":0)" + format_double(m.similarity);
  return text[2 * k - 2] + ";";
}

std::string to_json(const Dendrogram& dendrogram) {
  nlohmann::json j;
  j["num_clusters"] = dendrogram.cluster_count();
  j["labels"] = std::vector<std::size_t>(dendrogram.initial_clusters.labels().begin(),
                                         dendrogram.initial_clusters.labels().end());
  j["merges"] = nlohmann::json::array();
  for (const auto& m : dendrogram.merges)
    j["merges"].push_back({{"left", m.left}, {"right", m.right}, {"similarity", m.similarity}, {"new_id", m.new_id}});
  return j.dump(1) + "\n";
}

Dendrogram dendrogram_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Dendrogram d;
    d.initial_clusters = Partition::over_leaves(j.at("labels").get<std::vector<std::size_t>>(),
                                                j.at("num_clusters").get<std::size_t>());
    for (const auto& m : j.at("merges"))
      d.merges.push_back({m.at("left").get<std::size_t>(), m.at("right").get<std::size_t>(),
                          m.at("similarity").get<double>(), m.at("new_id").get<std::size_t>()});
    check_dendrogram(d);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed dendrogram JSON: ") + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hcd::io
