#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

namespace sciret {

struct PageRankParams {
  double damping = 0.85;
  double eps = 1e-6;
  int max_iter = 100;
};

// Anything with node_count() and neighbors(i) yielding (j, weight) pairs of an
// undirected graph.
template <class G>
concept WeightedGraph = requires(const G& g, std::size_t i) {
  { g.node_count() } -> std::convertible_to<std::size_t>;
  { g.neighbors(i) };
};

// Weighted PageRank with uniform teleport:
//   x'(v) = (1 - d) / N + d * sum_u w(u,v) / W(u) * x(u)
// where W(u) is the weighted degree of u. Isolated nodes have no outflow and
// receive only the teleport term. Iteration stops once the L1 change drops
// below eps (or after max_iter steps); the result is rescaled to sum to 1.
template <WeightedGraph G>
std::vector<double> pagerank(const G& graph, const PageRankParams& params = {}) {
  const std::size_t n = graph.node_count();
  if (n == 0) return {};
  std::vector<double> strength(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (const auto& [v, w] : graph.neighbors(u)) strength[u] += w;

  const double teleport = (1.0 - params.damping) / static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iter = 0; iter < params.max_iter; ++iter) {
    for (std::size_t v = 0; v < n; ++v) {
      double inflow = 0.0;
      for (const auto& [u, w] : graph.neighbors(v)) inflow += w / strength[u] * rank[u];
      next[v] = teleport + params.damping * inflow;
    }
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (change < params.eps) break;
  }
  const double total = std::accumulate(rank.begin(), rank.end(), 0.0);
  for (auto& r : rank) r /= total;
  return rank;
}

}  // namespace sciret
