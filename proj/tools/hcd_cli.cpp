// Command-line front end. Exit codes: 0 success, 1 invalid input or failed
// computation, 2 file I/O failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hcd/experiments.hpp"
#include "hcd/generator.hpp"
#include "hcd/io.hpp"
#include "hcd/linkage.hpp"
#include "hcd/metrics.hpp"
#include "hcd/theory.hpp"

namespace {

using namespace hcd;

std::vector<Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<Method> methods;
  for (const auto& name : names) {
    if (name == "both") {
      methods.push_back(Method::bottom_up);
      methods.push_back(Method::top_down);
    } else {
      methods.push_back(parse_method(name));
    }
  }
  return methods;
}

CommunitySizes parse_sizes(const std::string& name) {
  if (name == "fixed") return CommunitySizes::fixed;
  if (name == "multinomial") return CommunitySizes::multinomial;
  throw ValidationError("unknown size mode '" + name + "' (expected fixed or multinomial)");
}

template <typename T>
T read_with(const std::string& path, T (*reader)(std::istream&)) {
  std::istringstream in(io::read_file(path));
  return reader(in);
}

Graph read_graph(const std::string& path) {
  std::istringstream in(io::read_file(path));
  return io::read_edge_list(in);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    io::write_file(path, text);
  }
}

std::filesystem::path prepare_dir(const std::string& dir) {
  std::error_code error;
  std::filesystem::create_directories(dir, error);
  if (error) throw IoError("cannot create directory " + dir + ": " + error.message());
  return dir;
}

// Appends "--key value" for every key=value line of a config file whose key
// was not given on the command line, so flags override the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string config_path;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  if (config_path.empty()) return kept;

  std::istringstream in(io::read_file(config_path));
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      if (first == std::string::npos) return std::string{};
      return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
    };
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError(config_path + ":" + std::to_string(line_number) + ": expected key=value");
    const auto key = "--" + trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const bool present = std::any_of(kept.begin(), kept.end(), [&](const std::string& arg) {
      return arg == key || arg.rfind(key + "=", 0) == 0;
    });
    if (present) continue;
    if (value == "true") {
      kept.push_back(key);
    } else if (value != "false") {
      kept.push_back(key);
      kept.push_back(value);
    }
  }
  return kept;
}

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::size_t jobs = 0;
  std::size_t replicates = 10;
};

void add_common(CLI::App* cmd, Common& common, bool with_grid) {
  cmd->add_option("--seed", common.seed, "Base random seed")->capture_default_str();
  if (with_grid) {
    cmd->add_option("--jobs", common.jobs, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    cmd->add_option("--replicates", common.replicates, "Replicates per grid cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  args = merge_config(std::move(args));

  CLI::App app{"Hierarchical community detection on hierarchical stochastic block models"};
  app.require_subcommand(1);
  app.footer("Every subcommand also accepts --config FILE with key=value lines naming its long options;\n"
             "options given on the command line take precedence over the file.");
  Common common;

  // generate
  std::uint32_t arity = 2;
  std::size_t depth = 3;
  std::vector<double> a;
  std::size_t n = 3200;
  std::string sizes = "fixed";
  std::string tree_path;
  auto* generate = app.add_subcommand("generate", "Sample an HSBM graph with planted labels");
  add_common(generate, common, false);
  generate->add_option("--arity", arity, "Children per internal node")->capture_default_str();
  generate->add_option("--depth", depth, "Tree depth")->capture_default_str();
  generate->add_option("--a", a, "Rates a_0..a_d, p_k = a_k log N / N")->delimiter(',');
  generate->add_option("--tree", tree_path, "Tree file with per-node p (overrides --arity/--depth/--a)");
  generate->add_option("--n", n, "Number of nodes")->capture_default_str();
  generate->add_option("--sizes", sizes, "Community sizes: fixed or multinomial")->capture_default_str();
  generate->add_option("--out", common.out, "Output directory")->required();

  // fit
  std::string graph_path;
  std::string method = "bottom-up";
  FitOptions fit_options;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a hierarchy to a graph");
  add_common(fit_cmd, common, false);
  fit_cmd->add_option("--graph", graph_path, "Edge list")->required();
  fit_cmd->add_option("--method", method, "bottom-up or top-down")->capture_default_str();
  fit_cmd->add_option("--min-size", fit_options.min_size, "Top-down minimum part size")->capture_default_str();
  fit_cmd->add_option("--dense-threshold", fit_options.eigen.dense_threshold, "Largest dense eigenproblem")
      ->capture_default_str();
  fit_cmd->add_option("--out", common.out, "Output directory")->required();

  // score
  std::string truth_path, truth_tree_path, pred_path, pred_tree_path, dendrogram_path;
  auto* score = app.add_subcommand("score", "Score predicted labels and tree against the truth");
  score->add_option("--truth", truth_path, "Truth leaf labels")->required();
  score->add_option("--truth-tree", truth_tree_path, "Truth tree")->required();
  score->add_option("--pred", pred_path, "Predicted leaf labels")->required();
  score->add_option("--pred-tree", pred_tree_path, "Predicted tree")->required();
  score->add_option("--dendrogram", dendrogram_path, "Predicted dendrogram (JSON) for the inversion count");
  score->add_option("--out", common.out, "Output CSV (stdout if omitted)");

  // thresholds
  std::size_t threshold_n = 0;
  auto* thresholds = app.add_subcommand("thresholds", "Exact-recovery thresholds of a binary tree SBM");
  thresholds->add_option("--a", a, "Rates a_0..a_d")->delimiter(',')->required();
  thresholds->add_option("--n", threshold_n, "Node count for the finite-N I_q (asymptotic if omitted)");
  thresholds->add_option("--out", common.out, "Output CSV (stdout if omitted)");

  // phase-diagram
  PhaseDiagramConfig phase;
  std::vector<std::string> methods{"both"};
  double step = 5.0;
  auto* phase_cmd = app.add_subcommand("phase-diagram", "Accuracy over an (a_1, a_2) grid of depth-3 tree SBMs");
  add_common(phase_cmd, common, true);
  phase_cmd->add_option("--arity", phase.arity, "2 (binary) or 3 (ternary)")->capture_default_str();
  phase_cmd->add_option("--a0", phase.a_first, "a_0")->capture_default_str();
  phase_cmd->add_option("--a3", phase.a_last, "a_3")->capture_default_str();
  phase_cmd->add_option("--step", step, "Grid step for a_1 and a_2")->capture_default_str();
  phase_cmd->add_option("--a1", phase.a1_values, "Explicit a_1 values")->delimiter(',');
  phase_cmd->add_option("--a2", phase.a2_values, "Explicit a_2 values")->delimiter(',');
  phase_cmd->add_option("--n", phase.n, "Number of nodes")->capture_default_str();
  phase_cmd->add_option("--sizes", sizes, "Community sizes: fixed or multinomial")->capture_default_str();
  phase_cmd->add_option("--methods", methods, "bottom-up, top-down or both")->delimiter(',')->capture_default_str();
  phase_cmd->add_option("--min-size", phase.fit.min_size, "Top-down minimum part size")->capture_default_str();
  phase_cmd->add_option("--out", common.out, "Output directory")->required();

  // robustness
  RobustnessConfig robust;
  std::vector<std::string> scenarios{"uniform", "adversarial"};
  auto* robust_cmd = app.add_subcommand("robustness", "Tree recovery by average linkage under label noise");
  add_common(robust_cmd, common, true);
  robust_cmd->add_option("--betas", robust.betas, "beta values, p_k = p_top beta^(d-k)")->delimiter(',')->required();
  robust_cmd->add_option("--etas", robust.etas, "Noise levels")->delimiter(',')->required();
  robust_cmd->add_option("--scenarios", scenarios, "uniform and/or adversarial")->delimiter(',')->capture_default_str();
  robust_cmd->add_option("--per-community", robust.per_community, "Nodes per bottom community")->capture_default_str();
  robust_cmd->add_option("--p-top", robust.p_top, "p_d")->capture_default_str();
  robust_cmd->add_option("--depth", robust.depth, "Tree depth")->capture_default_str();
  robust_cmd->add_option("--out", common.out, "Output directory")->required();

  // run
  SingleRunConfig single;
  std::string run_method = "bottom-up";
  auto* run_cmd = app.add_subcommand("run", "Generate, fit and score once, writing every artifact");
  add_common(run_cmd, common, false);
  run_cmd->add_option("--arity", single.arity, "Children per internal node")->capture_default_str();
  run_cmd->add_option("--depth", single.depth, "Tree depth")->capture_default_str();
  run_cmd->add_option("--a", single.a, "Rates a_0..a_d")->delimiter(',')->required();
  run_cmd->add_option("--n", single.n, "Number of nodes")->capture_default_str();
  run_cmd->add_option("--sizes", sizes, "Community sizes: fixed or multinomial")->capture_default_str();
  run_cmd->add_option("--method", run_method, "bottom-up, top-down or both")->capture_default_str();
  run_cmd->add_option("--min-size", single.fit.min_size, "Top-down minimum part size")->capture_default_str();
  run_cmd->add_option("--out", common.out, "Output directory")->required();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*generate) {
    HsbmParams params;
    if (!tree_path.empty()) {
      auto file = read_with(tree_path, io::read_tree);
      const auto leaves = file.tree.leaf_count();
      params = {std::move(file.tree), std::vector<double>(leaves, 1.0 / static_cast<double>(leaves)), std::move(file.p)};
    } else {
      params = tree_sbm_params(arity, depth, a, n);
    }
    const auto sample = sample_hsbm(params, n, common.seed, parse_sizes(sizes));
    const auto dir = prepare_dir(common.out);
    std::ostringstream graph, labels, tree;
    io::write_edge_list(graph, sample.graph);
    io::write_partition(labels, sample.truth);
    io::write_tree(tree, params.tree, params.p);
    io::write_file(dir / "graph.tsv", graph.str());
    io::write_file(dir / "truth_labels.tsv", labels.str());
    io::write_file(dir / "truth_tree.tsv", tree.str());
  } else if (*fit_cmd) {
    const auto graph = read_graph(graph_path);
    const auto result = fit(graph, parse_method(method), common.seed, fit_options);
    const auto dir = prepare_dir(common.out);
    std::ostringstream labels, tree;
    io::write_partition(labels, result.leaf_labels);
    io::write_tree(tree, result.tree, empirical_link_probabilities(graph, result.tree, result.leaf_labels));
    io::write_file(dir / "labels.tsv", labels.str());
    io::write_file(dir / "tree.tsv", tree.str());
    io::write_file(dir / "dendrogram.nwk", io::to_newick(result.dendrogram) + "\n");
    io::write_file(dir / "dendrogram.json", io::to_json(result.dendrogram) + "\n");
    std::cout << "clusters," << result.dendrogram.cluster_count() << "\ninversions,"
              << count_inversions(result.dendrogram) << '\n';
  } else if (*score) {
    const auto truth = read_with(truth_path, io::read_partition);
    const auto pred = read_with(pred_path, io::read_partition);
    const auto truth_tree = read_with(truth_tree_path, io::read_tree).tree;
    const auto pred_tree = read_with(pred_tree_path, io::read_tree).tree;
    const auto truth_leaves = Partition::over_leaves({truth.labels().begin(), truth.labels().end()},
                                                     truth_tree.leaf_count());
    const auto pred_leaves = Partition::over_leaves({pred.labels().begin(), pred.labels().end()},
                                                    pred_tree.leaf_count());
    std::ostringstream out;
    out << "metric,depth,value\n";
    out << "loss,," << clustering_loss(truth_leaves, pred_leaves) << '\n';
    for (std::size_t q = 1; q <= std::max(truth_tree.depth(), pred_tree.depth()); ++q)
      out << "accuracy," << q << ','
          << io::format_double(accuracy_at_depth(truth_leaves, truth_tree, pred_leaves, pred_tree, q)) << '\n';
    out << "tree_error_ratio,,"
        << io::format_double(tree_error_ratio(truth_tree, truth_leaves, pred_tree, pred_leaves)) << '\n';
    if (!dendrogram_path.empty())
      out << "inversions,," << count_inversions(io::dendrogram_from_json(io::read_file(dendrogram_path))) << '\n';
    emit(common.out, out.str());
  } else if (*thresholds) {
    const auto report = threshold_n > 0 ? theory::feasible_depths(a, threshold_n) : theory::feasible_depths(a);
    std::ostringstream out;
    out << "q,I_q,N_I_q_over_log_N,J_td,J_bu,feasible_td,feasible_bu\n";
    for (const auto& r : report.depths)
      out << r.q << ',' << (std::isnan(r.iq) ? std::string("NA") : io::format_double(r.iq)) << ','
          << io::format_double(r.iq_scaled) << ',' << io::format_double(r.j_td) << ',' << io::format_double(r.j_bu)
          << ',' << (r.feasible_td ? "true" : "false") << ',' << (r.feasible_bu ? "true" : "false") << '\n';
    emit(common.out, out.str());
  } else if (*phase_cmd) {
    if (phase.a1_values.empty()) phase.a1_values = sweep_values(phase.a_first, phase.a_last, step);
    if (phase.a2_values.empty()) phase.a2_values = sweep_values(phase.a_first, phase.a_last, step);
    phase.sizes = parse_sizes(sizes);
    phase.methods = parse_methods(methods);
    phase.replicates = common.replicates;
    phase.seed = common.seed;
    phase.jobs = common.jobs;
    const auto rows = run_phase_diagram(phase);
    io::write_file(prepare_dir(common.out) / "phase_diagram.csv", phase_diagram_csv(rows));
  } else if (*robust_cmd) {
    robust.scenarios.clear();
    for (const auto& s : scenarios) robust.scenarios.push_back(parse_noise(s));
    robust.replicates = common.replicates;
    robust.seed = common.seed;
    robust.jobs = common.jobs;
    const auto rows = run_robustness(robust);
    io::write_file(prepare_dir(common.out) / "robustness.csv", robustness_csv(rows));
  } else if (*run_cmd) {
    single.sizes = parse_sizes(sizes);
    single.methods = parse_methods({run_method});
    single.seed = common.seed;
    single.out = common.out;
    std::cout << scores_csv(run_single(single));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hcd::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
