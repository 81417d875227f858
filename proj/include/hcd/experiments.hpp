#pragma once

// Batch experiments: phase diagrams over (a_1, a_2), robustness of average
// linkage to label noise, and single generate -> fit -> score passes.
//
// Seeding: replicate r of a grid cell samples with
// derive_seed(base_seed + r, cell_key), where cell_key hashes the cell's
// parameter values. Adding or removing cells never changes another cell's
// draws, and replicates of one cell differ only through base_seed + r.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcd/generator.hpp"
#include "hcd/model.hpp"
#include "hcd/spectral.hpp"

namespace hcd {

enum class Method { bottom_up, top_down };

std::string_view method_name(Method method);
/// Accepts "bottom-up" / "top-down"; throws ValidationError otherwise.
Method parse_method(std::string_view name);

struct FitOptions {
  std::size_t min_size = 20;  ///< top-down stopping size
  EigenOptions eigen;
};

struct FitResult {
  Method method;
  Partition leaf_labels;  ///< leaf index of `tree` for every node
  CommunityTree tree;
  Dendrogram dendrogram;
};

/// Bottom-up: Bethe-Hessian flat clustering, average linkage, tree read off
/// the dendrogram. Top-down: recursive bipartitioning.
FitResult fit(const Graph& graph, Method method, std::uint64_t seed, const FitOptions& options = {});

/// Accuracy at depth q of a fit. Binary truth trees use the depth-q
/// super-communities of both trees; for other truth trees the fitted
/// dendrogram is cut into as many clusters as the truth has at depth q,
/// since fitted trees are always binary.
double fit_accuracy(const Partition& truth_labels, const CommunityTree& truth_tree, const FitResult& fit,
                    std::size_t q);

/// Mixes parameter values into a stream key for derive_seed.
std::uint64_t cell_key(std::span<const double> values);

/// Runs task(i) for i in [0, count) on `jobs` threads (0 = hardware
/// concurrency). The first exception thrown by a task is rethrown.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

struct PhaseDiagramConfig {
  std::uint32_t arity = 2;
  std::size_t depth = 3;
  double a_first = 40.0;   ///< a_0
  double a_last = 100.0;   ///< a_d
  /// Values swept by a_1 and a_2 (depth 3); cells keep a_0 < a_1 < a_2 < a_3.
  std::vector<double> a1_values;
  std::vector<double> a2_values;
  std::size_t n = 3200;
  CommunitySizes sizes = CommunitySizes::fixed;
  std::vector<Method> methods{Method::bottom_up, Method::top_down};
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
  FitOptions fit;
};

struct PhaseDiagramRow {
  double a1;
  double a2;
  Method method;
  std::size_t depth;
  double mean_accuracy;
  std::size_t exact_count;  ///< replicates with accuracy exactly 1
  std::size_t replicates;
  std::optional<bool> predicted;  ///< theoretical feasibility, if available

  bool exact() const { return exact_count == replicates; }
};

/// Sweep values a_0 + step, a_0 + 2 step, ... strictly below a_d.
std::vector<double> sweep_values(double a_first, double a_last, double step);

/// One row per (a1, a2, method, depth), sorted in that order.
std::vector<PhaseDiagramRow> run_phase_diagram(const PhaseDiagramConfig& config);
std::string phase_diagram_csv(std::span<const PhaseDiagramRow> rows);

struct RobustnessConfig {
  std::size_t depth = 3;
  std::size_t per_community = 500;
  double p_top = 0.08;  ///< p_d; p_k = p_top * beta^(d - k)
  std::vector<double> betas;
  std::vector<double> etas;
  std::vector<NoiseKind> scenarios{NoiseKind::uniform, NoiseKind::adversarial};
  std::size_t replicates = 10;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
};

/// p_k = p_top * beta^(d - k) for k = 0..d.
std::vector<double> geometric_probabilities(double p_top, double beta, std::size_t depth);

struct RobustnessRow {
  double beta;
  double eta;
  NoiseKind scenario;
  double mean_error_ratio;
  std::size_t exact_count;  ///< replicates with error ratio exactly 0
  std::size_t replicates;
  bool predicted;  ///< recovery verdict of the matching recovery condition
  bool condition;  ///< exact robustness condition on the profile

  bool exact() const { return exact_count == replicates; }
};

std::string_view noise_name(NoiseKind kind);
NoiseKind parse_noise(std::string_view name);

/// Tree error ratio after average linkage on corrupted planted labels.
double robustness_trial(const std::vector<double>& p, std::size_t per_community, NoiseKind scenario, double eta,
                        std::uint64_t graph_seed, std::uint64_t noise_seed);

/// One row per (beta, eta, scenario), sorted in that order.
std::vector<RobustnessRow> run_robustness(const RobustnessConfig& config);
std::string robustness_csv(std::span<const RobustnessRow> rows);

struct SingleRunConfig {
  std::uint32_t arity = 2;
  std::size_t depth = 3;
  std::vector<double> a;
  std::size_t n = 3200;
  CommunitySizes sizes = CommunitySizes::fixed;
  std::vector<Method> methods{Method::bottom_up};
  std::uint64_t seed = 1;
  FitOptions fit;
  std::filesystem::path out = ".";
};

struct SingleRunScore {
  Method method;
  std::vector<double> accuracy;  ///< depth 1..d
  std::size_t inversions;
  double tree_error_ratio;
};

/// Generates, fits every method and writes: graph.tsv, truth_labels.tsv,
/// truth_tree.tsv, <method>_labels.tsv, <method>_tree.tsv, <method>.nwk,
/// <method>_dendrogram.json and scores.csv into config.out.
std::vector<SingleRunScore> run_single(const SingleRunConfig& config);
std::string scores_csv(std::span<const SingleRunScore> scores);

}  // namespace hcd
