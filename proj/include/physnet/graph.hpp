#pragma once

// Weighted directed multigraphs and their incidence structure.
//
// Vertex indices are 0-based in this header. The JSON reader and the C API
// accept 1-based indices and translate at the boundary.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace physnet {

using Index = Eigen::Index;
using IntMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

struct Edge {
  Index tail = 0;
  Index head = 0;
  double weight = 1.0;
};

class DirectedGraph {
 public:
  // Throws IndexOutOfRange, SelfLoop or NonPositiveWeight. Edge order is kept
  // verbatim and fixes the column order of the incidence matrix.
  DirectedGraph(Index vertex_count, std::vector<Edge> edges);

  Index vertex_count() const noexcept { return n_; }
  Index edge_count() const noexcept { return static_cast<Index>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(Index j) const { return edges_.at(static_cast<std::size_t>(j)); }

  Eigen::VectorXd weights() const;

 private:
  Index n_;
  std::vector<Edge> edges_;
};

inline DirectedGraph build_graph(Index vertex_count, std::vector<Edge> edges) {
  return DirectedGraph(vertex_count, std::move(edges));
}

// Same vertices, every edge flipped.
DirectedGraph reverse(const DirectedGraph& g);

// Subgraph on `vertices` (renumbered in the given order) keeping every edge
// with both endpoints inside.
DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<Index>& vertices);

// n x m, -1 at the tail row and +1 at the head row of every column.
IntMatrix incidence_matrix(const DirectedGraph& g);

// (D kron I_d), the incidence map for vertex states in R^d.
IntMatrix kron_extend(const IntMatrix& incidence, Index dimension);

using Partition = std::vector<std::vector<Index>>;

// Components over undirected reachability. Each block is sorted and blocks
// are ordered by their smallest vertex.
Partition connected_components(const DirectedGraph& g);

// Maximal strongly connected subsets, same ordering convention.
Partition strongly_connected_components(const DirectedGraph& g);

// Per-vertex block index for a partition.
std::vector<Index> component_labels(const Partition& partition, Index vertex_count);

inline constexpr Index kDefaultOracleVertexLimit = 8;

// Brute force: every (n-1)-edge subset in which each vertex other than `root`
// has a unique directed path to `root`. Each entry lists edge indices in
// increasing order. Throws GraphTooLargeForOracle above `vertex_limit`.
std::vector<std::vector<Index>> spanning_trees_towards(const DirectedGraph& g, Index root,
                                                       Index vertex_limit = kDefaultOracleVertexLimit);

// Product of edge weights over a subset.
double tree_weight(const DirectedGraph& g, const std::vector<Index>& tree);

}  // namespace physnet
