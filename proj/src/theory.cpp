#include "hcd/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hcd::theory {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t depth_of(std::span<const double> seq) {
  if (seq.size() < 2) throw ValidationError("need a sequence of length d + 1 with d >= 1");
  return seq.size() - 1;
}

void require_increasing(std::span<const double> seq) {
  for (std::size_t k = 1; k < seq.size(); ++k)
    if (!(seq[k - 1] < seq[k])) throw ValidationError("sequence must be strictly increasing (assortativity)");
}

void require_depth(std::size_t q, std::size_t d) {
  if (q < 1 || q > d)
    throw ValidationError("depth q=" + std::to_string(q) + " outside [1, " + std::to_string(d) + "]");
}

// Bernoulli affinity (1-p)^t (1-q)^(1-t) + p^t q^(1-t).
double affinity(double t, double p, double q) {
  return std::pow(1.0 - p, t) * std::pow(1.0 - q, 1.0 - t) + std::pow(p, t) * std::pow(q, 1.0 - t);
}

double hellinger(double p, double q) { return renyi_divergence(0.5, p, q); }

}  // namespace

double renyi_divergence(double t, double p, double q) {
  if (!(t > 0.0 && t < 1.0)) throw ValidationError("Renyi order must lie in (0, 1)");
  if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) throw ValidationError("probabilities must lie in [0, 1]");
  if (p == q) return 0.0;
  const double s = affinity(t, p, q);
  if (s <= 0.0) return kInf;
  return std::log(s) / (t - 1.0);
}

double ch_objective(double t, std::size_t leaf_a, std::size_t leaf_b, const HsbmParams& params) {
  // (1 - t) D_t = -log(affinity), so the sum needs no 1/(t-1) factor.
  double total = 0.0;
  for (std::size_t c = 0; c < params.tree.leaf_count(); ++c) {
    const double p = params.link_probability(leaf_a, c);
    const double q = params.link_probability(leaf_b, c);
    if (p == q) continue;
    const double s = affinity(t, p, q);
    if (s <= 0.0) return kInf;
    total -= params.pi[c] * std::log(s);
  }
  return total;
}

double ch_divergence(std::size_t leaf_a, std::size_t leaf_b, const HsbmParams& params) {
  const auto f = [&](double t) { return ch_objective(t, leaf_a, leaf_b, params); };
  constexpr double lo_bound = 1e-9;
  constexpr double hi_bound = 1.0 - 1e-9;
  if (std::isinf(f(0.5))) return kInf;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = lo_bound, hi = hi_bound;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  bool degenerate = false;
  while (hi - lo > 1e-10) {
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      degenerate = true;
      break;
    }
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  if (!degenerate) return std::max({f1, f2, f(0.5 * (lo + hi))});

  double best = 0.0;
  constexpr int kGrid = 100000;
  for (int i = 0; i <= kGrid; ++i) {
    const double v = f(lo_bound + (hi_bound - lo_bound) * i / kGrid);
    if (std::isfinite(v)) best = std::max(best, v);
  }
  return best;
}

double min_divergence_I(const HsbmParams& params) {
  const auto k = params.tree.leaf_count();
  if (k < 2) throw ValidationError("I needs at least two leaves");
  double best = kInf;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b) best = std::min(best, ch_divergence(a, b, params));
  return best;
}

double min_divergence_Iq(const HsbmParams& params, std::size_t q) {
  require_depth(q, params.tree.depth());
  const auto k = params.tree.leaf_count();
  double best = kInf;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (params.tree.leaf_lca_depth(a, b) + 1 <= q) best = std::min(best, ch_divergence(a, b, params));
  return best;
}

double iq_btsbm(std::span<const double> p, std::size_t q) {
  const auto d = depth_of(p);
  require_increasing(p);
  require_depth(q, d);
  double sum = hellinger(p[q - 1], p[d]);
  for (std::size_t k = 1; k + q <= d; ++k) sum += std::ldexp(1.0, static_cast<int>(k) - 1) * hellinger(p[q - 1], p[d - k]);
  return std::ldexp(sum, -static_cast<int>(d));
}

double j_top_down(std::size_t q, std::span<const double> a) {
  const auto d = depth_of(a);
  require_depth(q, d);
  double inner = a[d];
  for (std::size_t k = 1; k + q <= d; ++k) inner += std::ldexp(1.0, static_cast<int>(k) - 1) * a[d - k];
  const double diff = std::sqrt(inner) - std::sqrt(std::ldexp(a[q - 1], static_cast<int>(d - q)));
  return std::ldexp(diff * diff, -static_cast<int>(d));
}

double j_bottom_up(std::size_t q, std::span<const double> a) {
  const auto d = depth_of(a);
  require_depth(q, d);
  const double base = std::sqrt(a[q - 1]);
  const auto sq = [](double x) { return x * x; };
  double sum = sq(base - std::sqrt(a[d]));
  for (std::size_t k = 1; k + q <= d; ++k) sum += std::ldexp(1.0, static_cast<int>(k) - 1) * sq(base - std::sqrt(a[d - k]));
  return std::ldexp(sum, -static_cast<int>(d));
}

namespace {

ThresholdReport build_report(std::span<const double> a, std::optional<std::size_t> n) {
  const auto d = depth_of(a);
  require_increasing(a);
  std::vector<double> p;
  double log_n_over_n = 0.0;
  if (n) {
    log_n_over_n = std::log(static_cast<double>(*n)) / static_cast<double>(*n);
    for (const double ak : a) p.push_back(ak * log_n_over_n);
  }
  ThresholdReport report;
  double min_td = kInf;
  for (std::size_t q = 1; q <= d; ++q) {
    ThresholdRecord r{};
    r.q = q;
    r.j_td = j_top_down(q, a);
    r.j_bu = j_bottom_up(q, a);
    min_td = std::min(min_td, r.j_td);
    r.feasible_td = min_td > 1.0;
    r.feasible_bu = r.j_bu > 1.0;
    if (n) {
      r.iq = iq_btsbm(p, q);
      r.iq_scaled = r.iq / log_n_over_n;
    } else {
      // D_{1/2}(a log N/N, b log N/N) N / log N -> (sqrt a - sqrt b)^2.
      r.iq = std::numeric_limits<double>::quiet_NaN();
      r.iq_scaled = r.j_bu;
    }
    report.depths.push_back(r);
  }
  return report;
}

}  // namespace

ThresholdReport feasible_depths(std::span<const double> a) { return build_report(a, std::nullopt); }

ThresholdReport feasible_depths(std::span<const double> a, std::size_t n) {
  if (n < 2) throw ValidationError("node count must be >= 2");
  return build_report(a, n);
}

std::uint64_t b_count(int h, std::size_t d) {
  const auto depth = static_cast<int>(d);
  if (h < -1 || h > depth) throw ValidationError("B(h) needs -1 <= h <= d");
  if (h == -1) return std::uint64_t{1} << d;
  if (h == depth) return 1;
  return std::uint64_t{1} << (depth - h - 1);
}

double p_bar(std::size_t h, std::span<const double> p) {
  const auto d = depth_of(p);
  require_depth(h, d);
  double sum = 0.0;
  for (std::size_t s = h; s <= d; ++s) sum += static_cast<double>(b_count(static_cast<int>(s), d)) * p[s];
  return sum / static_cast<double>(b_count(static_cast<int>(h) - 1, d));
}

double robustness_lhs(std::span<const double> p, const NoiseProfile& profile, std::size_t h_ac) {
  const auto d = depth_of(p);
  if (d < 2) throw ValidationError("the robustness condition needs depth >= 2");
  if (profile.depth() != d) throw ValidationError("noise profile depth does not match p");
  if (h_ac + 2 > d) throw ValidationError("h_ac must lie in [0, d - 2]");
  const auto& z = profile.zeta;
  const auto B = [d](std::size_t h) { return static_cast<double>(b_count(static_cast<int>(h), d)); };
  const double z_ac = z[h_ac];
  const double p_ac = p[h_ac];

  double cross = 0.0;
  for (std::size_t h1 = h_ac + 1; h1 <= d - 1; ++h1)
    for (std::size_t h2 = h1 + 1; h2 <= d; ++h2)
      cross += 2.0 * B(h1) * B(h2) * (z[h1] - z_ac) * (z[h2] - z_ac) * (p[h1] - p_ac);

  double square = 0.0;
  for (std::size_t h1 = h_ac + 1; h1 <= d - 1; ++h1) {
    const double dz = z[h1] - z_ac;
    square += B(h1) * B(h1) * dz * dz * (p_bar(h1 + 1, p) - p_ac);
  }

  const double kept = (p[d - 1] - p_ac) * (z[d] - z_ac) * (z[d] - z_ac);
  const double sibling = 2.0 * (p[d] - p[d - 1]) * (z[d - 1] - z_ac) * (z[d] - 0.5 * (z[d - 1] + z_ac));
  return cross + square + kept + sibling;
}

bool robustness_condition(std::span<const double> p, const NoiseProfile& profile) {
  const auto d = depth_of(p);
  for (std::size_t h = 0; h + 2 <= d; ++h)
    if (!(robustness_lhs(p, profile, h) > 0.0)) return false;
  return true;
}

std::optional<double> eta_minus(std::span<const double> p) {
  const auto d = depth_of(p);
  require_increasing(p);
  const double pb = p_bar(1, p);
  const double pd1 = p[d - 1];
  const double p0 = p[0];
  if (pb < pd1) return std::nullopt;
  const double radicand = std::max(0.0, (pb - pd1) * (pb - p0));
  return (pd1 + pb - 2.0 * p0 - std::sqrt(radicand)) / (pd1 + 3.0 * pb - 4.0 * p0);
}

bool monotone_profile_predicts_recovery(const NoiseProfile& profile) {
  const auto d = profile.depth();
  if (d < 2) throw ValidationError("the condition needs depth >= 2");
  const auto& z = profile.zeta;
  for (std::size_t h = 1; h < d; ++h)
    if (z[h] < z[h - 1]) return false;
  return 0.5 * (z[d - 1] + z[d - 2]) < z[d];
}

bool adversarial_predicts_recovery(std::span<const double> p, double eta) {
  if (!(eta >= 0.0 && eta < 0.5)) return false;
  const auto bound = eta_minus(p);
  return !bound || eta < *bound;
}

}  // namespace hcd::theory
