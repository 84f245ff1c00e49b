#include "physnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

#include "physnet/error.hpp"

namespace physnet {

DirectedGraph::DirectedGraph(Index vertex_count, std::vector<Edge> edges)
    : n_(vertex_count), edges_(std::move(edges)) {
  if (n_ < 1) {
    throw Error(ErrorCode::IndexOutOfRange, "graph needs at least one vertex");
  }
  for (std::size_t j = 0; j < edges_.size(); ++j) {
    const Edge& e = edges_[j];
    const std::string where = "edge " + std::to_string(j + 1);
    if (e.tail < 0 || e.tail >= n_ || e.head < 0 || e.head >= n_) {
      throw Error(ErrorCode::IndexOutOfRange, where + " references a vertex outside 1.." + std::to_string(n_));
    }
    if (e.tail == e.head) {
      throw Error(ErrorCode::SelfLoop, where + " is a self-loop");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw Error(ErrorCode::NonPositiveWeight, where + " has non-positive weight");
    }
  }
}

Eigen::VectorXd DirectedGraph::weights() const {
  Eigen::VectorXd w(edge_count());
  for (Index j = 0; j < edge_count(); ++j) w(j) = edges_[static_cast<std::size_t>(j)].weight;
  return w;
}

DirectedGraph reverse(const DirectedGraph& g) {
  std::vector<Edge> flipped;
  flipped.reserve(g.edges().size());
  for (const Edge& e : g.edges()) flipped.push_back({e.head, e.tail, e.weight});
  return DirectedGraph(g.vertex_count(), std::move(flipped));
}

DirectedGraph induced_subgraph(const DirectedGraph& g, const std::vector<Index>& vertices) {
  std::vector<Index> local(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Index v = vertices[i];
    if (v < 0 || v >= g.vertex_count()) {
      throw Error(ErrorCode::IndexOutOfRange, "subgraph vertex out of range");
    }
    local[static_cast<std::size_t>(v)] = static_cast<Index>(i);
  }
  std::vector<Edge> kept;
  for (const Edge& e : g.edges()) {
    const Index t = local[static_cast<std::size_t>(e.tail)];
    const Index h = local[static_cast<std::size_t>(e.head)];
    if (t >= 0 && h >= 0) kept.push_back({t, h, e.weight});
  }
  return DirectedGraph(static_cast<Index>(vertices.size()), std::move(kept));
}

IntMatrix incidence_matrix(const DirectedGraph& g) {
  IntMatrix d = IntMatrix::Zero(g.vertex_count(), g.edge_count());
  for (Index j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edge(j);
    d(e.tail, j) = -1;
    d(e.head, j) = 1;
  }
  return d;
}

IntMatrix kron_extend(const IntMatrix& incidence, Index dimension) {
  if (dimension < 1) {
    throw Error(ErrorCode::InvalidArgument, "spatial dimension must be at least 1");
  }
  const IntMatrix identity = IntMatrix::Identity(dimension, dimension);
  return Eigen::kroneckerProduct(incidence, identity).eval();
}

namespace {

Partition sorted_blocks(std::vector<std::vector<Index>> blocks) {
  for (auto& b : blocks) std::sort(b.begin(), b.end());
  std::sort(blocks.begin(), blocks.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return blocks;
}

}  // namespace

Partition connected_components(const DirectedGraph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (const Edge& e : g.edges()) {
    const auto a = find(static_cast<std::size_t>(e.tail));
    const auto b = find(static_cast<std::size_t>(e.head));
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<Index>> blocks;
  std::vector<std::ptrdiff_t> slot(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<std::ptrdiff_t>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[r])].push_back(static_cast<Index>(v));
  }
  return sorted_blocks(std::move(blocks));
}

// Tarjan's algorithm.
Partition strongly_connected_components(const DirectedGraph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<std::size_t>> out(n);
  for (const Edge& e : g.edges()) {
    out[static_cast<std::size_t>(e.tail)].push_back(static_cast<std::size_t>(e.head));
  }

  std::vector<std::ptrdiff_t> index(n, -1);
  std::vector<std::ptrdiff_t> low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<Index>> blocks;
  std::ptrdiff_t counter = 0;

  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w : out[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<Index> block;
      std::size_t w = 0;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        block.push_back(static_cast<Index>(w));
      } while (w != v);
      blocks.push_back(std::move(block));
    }
  };

  for (std::size_t v = 0; v < n; ++v) {
    if (index[v] < 0) visit(v);
  }
  return sorted_blocks(std::move(blocks));
}

std::vector<Index> component_labels(const Partition& partition, Index vertex_count) {
  std::vector<Index> labels(static_cast<std::size_t>(vertex_count), -1);
  for (std::size_t c = 0; c < partition.size(); ++c) {
    for (Index v : partition[c]) labels[static_cast<std::size_t>(v)] = static_cast<Index>(c);
  }
  return labels;
}

namespace {

// True when the chosen edges give every non-root vertex exactly one outgoing
// edge and following those edges always ends at the root.
bool is_tree_towards(const DirectedGraph& g, const std::vector<Index>& subset, Index root) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<Index> next(n, -1);
  for (Index j : subset) {
    const Edge& e = g.edge(j);
    if (e.tail == root || next[static_cast<std::size_t>(e.tail)] >= 0) return false;
    next[static_cast<std::size_t>(e.tail)] = e.head;
  }
  for (std::size_t v = 0; v < n; ++v) {
    Index cur = static_cast<Index>(v);
    std::size_t hops = 0;
    while (cur != root) {
      cur = next[static_cast<std::size_t>(cur)];
      if (cur < 0 || ++hops > n) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<std::vector<Index>> spanning_trees_towards(const DirectedGraph& g, Index root,
                                                       Index vertex_limit) {
  const Index n = g.vertex_count();
  const Index m = g.edge_count();
  if (n > vertex_limit) {
    throw Error(ErrorCode::GraphTooLargeForOracle,
                std::to_string(n) + " vertices exceeds the oracle limit of " + std::to_string(vertex_limit));
  }
  if (root < 0 || root >= n) {
    throw Error(ErrorCode::IndexOutOfRange, "root vertex out of range");
  }
  std::vector<std::vector<Index>> trees;
  const Index k = n - 1;
  if (k == 0) {
    trees.emplace_back();
    return trees;
  }
  if (m < k) return trees;

  std::vector<Index> subset(static_cast<std::size_t>(k));
  std::iota(subset.begin(), subset.end(), 0);
  while (true) {
    if (is_tree_towards(g, subset, root)) trees.push_back(subset);
    // next k-combination of {0..m-1} in lexicographic order
    Index i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == m - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return trees;
}

double tree_weight(const DirectedGraph& g, const std::vector<Index>& tree) {
  double w = 1.0;
  for (Index j : tree) w *= g.edge(j).weight;
  return w;
}

}  // namespace physnet
