#include "hcd/experiments.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "hcd/io.hpp"
#include "hcd/linkage.hpp"
#include "hcd/metrics.hpp"
#include "hcd/random.hpp"
#include "hcd/theory.hpp"

namespace hcd {

std::string_view method_name(Method method) { return method == Method::bottom_up ? "bottom-up" : "top-down"; }

Method parse_method(std::string_view name) {
  if (name == "bottom-up") return Method::bottom_up;
  if (name == "top-down") return Method::top_down;
  throw ValidationError("unknown method '" + std::string(name) + "' (expected bottom-up or top-down)");
}

std::string_view noise_name(NoiseKind kind) { return kind == NoiseKind::uniform ? "uniform" : "adversarial"; }

NoiseKind parse_noise(std::string_view name) {
  if (name == "uniform") return NoiseKind::uniform;
  if (name == "adversarial") return NoiseKind::adversarial;
  throw ValidationError("unknown scenario '" + std::string(name) + "' (expected uniform or adversarial)");
}

FitResult fit(const Graph& graph, Method method, std::uint64_t seed, const FitOptions& options) {
  if (method == Method::top_down) {
    auto result = top_down_hcd(graph, options.min_size, options.eigen);
    return {method, std::move(result.leaf_labels), std::move(result.tree), std::move(result.dendrogram)};
  }
  auto clusters = flat_cluster_bethe_hessian(graph, seed, options.eigen);
  auto dendrogram = average_linkage(graph, clusters);
  auto tree = tree_from_dendrogram(dendrogram);
  auto leaf_labels = to_leaf_labels(clusters, tree);
  return {method, std::move(leaf_labels), std::move(tree.tree), std::move(dendrogram)};
}

double fit_accuracy(const Partition& truth_labels, const CommunityTree& truth_tree, const FitResult& fit,
                    std::size_t q) {
  if (truth_tree.is_binary()) return accuracy_at_depth(truth_labels, truth_tree, fit.leaf_labels, fit.tree, q);
  const auto truth = super_communities_clamped(truth_tree, truth_labels, q);
  const auto pred = cut_dendrogram(fit.dendrogram, truth.cluster_count());
  if (truth.size() == 0) return 1.0;
  return 1.0 - static_cast<double>(clustering_loss(truth, pred)) / static_cast<double>(truth.size());
}

std::uint64_t cell_key(std::span<const double> values) {
  std::uint64_t key = 0x243F6A8885A308D3ULL;
  for (const double v : values) key = derive_seed(key, std::bit_cast<std::uint64_t>(v));
  return key;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (auto i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
      try {
        task(i);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < jobs; ++t) threads.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> sweep_values(double a_first, double a_last, double step) {
  if (!(step > 0.0)) throw ValidationError("sweep step must be positive");
  std::vector<double> values;
  for (std::size_t i = 1;; ++i) {
    const double v = a_first + static_cast<double>(i) * step;
    if (v >= a_last) break;
    values.push_back(v);
  }
  return values;
}

namespace {

template <typename T>
std::vector<T> sorted_unique(std::vector<T> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::string flag(bool value) { return value ? "true" : "false"; }

}  // namespace

std::vector<PhaseDiagramRow> run_phase_diagram(const PhaseDiagramConfig& config) {
  if (config.depth != 3) throw ValidationError("phase diagrams sweep a_1 and a_2 of a depth-3 tree");
  if (config.replicates < 1) throw ValidationError("replicate count must be at least 1");
  const auto methods = sorted_unique(config.methods);
  if (methods.empty()) throw ValidationError("no method selected");

  std::vector<std::array<double, 2>> cells;
  for (const double a1 : sorted_unique(config.a1_values))
    for (const double a2 : sorted_unique(config.a2_values))
      if (config.a_first < a1 && a1 < a2 && a2 < config.a_last) cells.push_back({a1, a2});
  if (cells.empty()) throw ValidationError("the (a1, a2) grid has no cell with a0 < a1 < a2 < a3");

  const auto d = config.depth;
  const auto replicates = config.replicates;
  // accuracy[(cell * replicates + r) * methods + m][q - 1]
  std::vector<std::vector<double>> accuracy(cells.size() * replicates * methods.size());
  parallel_for(cells.size() * replicates, config.jobs, [&](std::size_t task) {
    const auto cell = task / replicates;
    const auto r = task % replicates;
    const std::vector<double> a{config.a_first, cells[cell][0], cells[cell][1], config.a_last};
    const auto params = tree_sbm_params(config.arity, d, a, config.n);
    const auto graph_seed = derive_seed(config.seed + r, cell_key(cells[cell]));
    const auto sample = sample_hsbm(params, config.n, graph_seed, config.sizes);
    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto result = fit(sample.graph, methods[m], derive_seed(graph_seed, 1), config.fit);
      auto& out = accuracy[task * methods.size() + m];
      for (std::size_t q = 1; q <= d; ++q) out.push_back(fit_accuracy(sample.truth, params.tree, result, q));
    }
  });

  std::vector<PhaseDiagramRow> rows;
  for (std::size_t cell = 0; cell < cells.size(); ++cell) {
    const std::vector<double> a{config.a_first, cells[cell][0], cells[cell][1], config.a_last};
    std::vector<std::optional<bool>> bottom_up(d + 1), top_down(d + 1);
    if (config.arity == 2) {
      for (const auto& record : theory::feasible_depths(a).depths) {
        bottom_up[record.q] = record.feasible_bu;
        top_down[record.q] = record.feasible_td;
      }
    } else {
      const auto params = tree_sbm_params(config.arity, d, a, config.n);
      const double scale = static_cast<double>(config.n) / std::log(static_cast<double>(config.n));
      for (std::size_t q = 1; q <= d; ++q) bottom_up[q] = scale * theory::min_divergence_Iq(params, q) > 1.0;
    }
    for (std::size_t m = 0; m < methods.size(); ++m)
      for (std::size_t q = 1; q <= d; ++q) {
        PhaseDiagramRow row{cells[cell][0], cells[cell][1], methods[m], q, 0.0, 0, replicates,
                            methods[m] == Method::bottom_up ? bottom_up[q] : top_down[q]};
        for (std::size_t r = 0; r < replicates; ++r) {
          const double value = accuracy[(cell * replicates + r) * methods.size() + m][q - 1];
          row.mean_accuracy += value;
          row.exact_count += value == 1.0;
        }
        row.mean_accuracy /= static_cast<double>(replicates);
        rows.push_back(row);
      }
  }
  return rows;
}

std::string phase_diagram_csv(std::span<const PhaseDiagramRow> rows) {
  std::ostringstream out;
  out << "a1,a2,method,depth,mean_accuracy,exact,exact_count,replicates,predicted\n";
  for (const auto& row : rows)
    out << io::format_double(row.a1) << ',' << io::format_double(row.a2) << ',' << method_name(row.method) << ','
        << row.depth << ',' << io::format_double(row.mean_accuracy) << ',' << flag(row.exact()) << ','
        << row.exact_count << ',' << row.replicates << ',' << (row.predicted ? flag(*row.predicted) : "NA") << '\n';
  return out.str();
}

std::vector<double> geometric_probabilities(double p_top, double beta, std::size_t depth) {
  std::vector<double> p(depth + 1);
  for (std::size_t k = 0; k <= depth; ++k) p[k] = p_top * std::pow(beta, static_cast<double>(depth - k));
  return p;
}

double robustness_trial(const std::vector<double>& p, std::size_t per_community, NoiseKind scenario, double eta,
                        std::uint64_t graph_seed, std::uint64_t noise_seed) {
  const auto d = p.size() - 1;
  const auto params = tree_sbm_from_probabilities(2, p);
  const auto sample = sample_hsbm(params, per_community << d, graph_seed, CommunitySizes::fixed);
  const auto corrupted = corrupt_labels(sample.truth, params.tree, make_profile(scenario, eta, d), noise_seed);
  const auto dendrogram = average_linkage(sample.graph, corrupted);
  const auto tree = tree_from_dendrogram(dendrogram);
  return tree_error_ratio(params.tree, tree.tree, corrupted, tree.leaf_of_cluster);
}

std::vector<RobustnessRow> run_robustness(const RobustnessConfig& config) {
  if (config.replicates < 1) throw ValidationError("replicate count must be at least 1");
  if (config.depth < 2) throw ValidationError("robustness needs depth >= 2");
  const auto betas = sorted_unique(config.betas);
  const auto etas = sorted_unique(config.etas);
  const auto scenarios = sorted_unique(config.scenarios);
  if (betas.empty() || etas.empty() || scenarios.empty()) throw ValidationError("empty robustness grid");

  struct Cell {
    double beta;
    double eta;
    NoiseKind scenario;
  };
  std::vector<Cell> cells;
  for (const double beta : betas)
    for (const double eta : etas)
      for (const auto scenario : scenarios) cells.push_back({beta, eta, scenario});

  const auto replicates = config.replicates;
  std::vector<double> ratio(cells.size() * replicates);
  parallel_for(ratio.size(), config.jobs, [&](std::size_t task) {
    const auto& cell = cells[task / replicates];
    const auto r = task % replicates;
    const auto p = geometric_probabilities(config.p_top, cell.beta, config.depth);
    const std::array<double, 1> graph_key{cell.beta};
    const std::array<double, 3> noise_key{cell.beta, cell.eta, static_cast<double>(cell.scenario)};
    ratio[task] = robustness_trial(p, config.per_community, cell.scenario, cell.eta,
                                   derive_seed(config.seed + r, cell_key(graph_key)),
                                   derive_seed(config.seed + r, cell_key(noise_key)));
  });

  std::vector<RobustnessRow> rows;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& cell = cells[c];
    const auto p = geometric_probabilities(config.p_top, cell.beta, config.depth);
    const auto profile = make_profile(cell.scenario, cell.eta, config.depth);
    RobustnessRow row{cell.beta, cell.eta, cell.scenario, 0.0, 0, replicates,
                      cell.scenario == NoiseKind::uniform ? theory::monotone_profile_predicts_recovery(profile)
                                                          : theory::adversarial_predicts_recovery(p, cell.eta),
                      theory::robustness_condition(p, profile)};
    for (std::size_t r = 0; r < replicates; ++r) {
      row.mean_error_ratio += ratio[c * replicates + r];
      row.exact_count += ratio[c * replicates + r] == 0.0;
    }
    row.mean_error_ratio /= static_cast<double>(replicates);
    rows.push_back(row);
  }
  return rows;
}

std::string robustness_csv(std::span<const RobustnessRow> rows) {
  std::ostringstream out;
  out << "beta,eta,scenario,mean_error_ratio,exact,exact_count,replicates,predicted,condition\n";
  for (const auto& row : rows)
    out << io::format_double(row.beta) << ',' << io::format_double(row.eta) << ',' << noise_name(row.scenario) << ','
        << io::format_double(row.mean_error_ratio) << ',' << flag(row.exact()) << ',' << row.exact_count << ','
        << row.replicates << ',' << flag(row.predicted) << ',' << flag(row.condition) << '\n';
  return out.str();
}

namespace {

template <typename Writer>
void write_text(const std::filesystem::path& path, Writer&& writer) {
  std::ostringstream out;
  writer(out);
  io::write_file(path, out.str());
}

}  // namespace

std::vector<SingleRunScore> run_single(const SingleRunConfig& config) {
  const auto params = tree_sbm_params(config.arity, config.depth, config.a, config.n);
  const auto sample = sample_hsbm(params, config.n, config.seed, config.sizes);
  std::error_code error;
  std::filesystem::create_directories(config.out, error);
  if (error) throw IoError("cannot create directory " + config.out.string() + ": " + error.message());

  write_text(config.out / "graph.tsv", [&](std::ostream& out) { io::write_edge_list(out, sample.graph); });
  write_text(config.out / "truth_labels.tsv", [&](std::ostream& out) { io::write_partition(out, sample.truth); });
  write_text(config.out / "truth_tree.tsv", [&](std::ostream& out) { io::write_tree(out, params.tree, params.p); });

  std::vector<SingleRunScore> scores;
  for (const auto method : sorted_unique(config.methods)) {
    const auto result = fit(sample.graph, method, derive_seed(config.seed, 1), config.fit);
    const std::string stem(method_name(method));
    write_text(config.out / (stem + "_labels.tsv"),
               [&](std::ostream& out) { io::write_partition(out, result.leaf_labels); });
    write_text(config.out / (stem + "_tree.tsv"), [&](std::ostream& out) {
      io::write_tree(out, result.tree, empirical_link_probabilities(sample.graph, result.tree, result.leaf_labels));
    });
    io::write_file(config.out / (stem + ".nwk"), io::to_newick(result.dendrogram) + "\n");
    io::write_file(config.out / (stem + "_dendrogram.json"), io::to_json(result.dendrogram) + "\n");

    SingleRunScore score{method, {}, count_inversions(result.dendrogram),
                         tree_error_ratio(params.tree, sample.truth, result.tree, result.leaf_labels)};
    for (std::size_t q = 1; q <= config.depth; ++q)
      score.accuracy.push_back(fit_accuracy(sample.truth, params.tree, result, q));
    scores.push_back(std::move(score));
  }
  io::write_file(config.out / "scores.csv", scores_csv(scores));
  return scores;
}

std::string scores_csv(std::span<const SingleRunScore> scores) {
  std::ostringstream out;
  out << "method,depth,accuracy,inversions,tree_error_ratio\n";
  for (const auto& score : scores)
    for (std::size_t q = 1; q <= score.accuracy.size(); ++q)
      out << method_name(score.method) << ',' << q << ',' << io::format_double(score.accuracy[q - 1]) << ','
          << score.inversions << ',' << io::format_double(score.tree_error_ratio) << '\n';
  return out.str();
}

}  // namespace hcd
