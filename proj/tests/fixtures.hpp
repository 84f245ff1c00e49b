#pragma once

// Hand-built inputs shared by the unit tests and the acceptance run.

#include <algorithm>
#include <initializer_list>
#include <vector>

#include "oracles.hpp"
#include "physnet/complexes.hpp"
#include "physnet/graph.hpp"

namespace fixture {

using physnet::ChainComplex;
using physnet::DirectedGraph;
using physnet::Edge;
using physnet::Index;
using physnet::IntMatrix;

inline IntMatrix ints(std::initializer_list<std::initializer_list<int>> rows) {
  IntMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (int v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Edges 01, 12, 02; one face [012].
inline ChainComplex triangle() {
  return ChainComplex({ints({{-1, 0, -1}, {1, -1, 0}, {0, 1, 1}}), ints({{1}, {1}, {-1}})});
}

// The triangle with the sign of edge 12 in the face flipped.
inline ChainComplex triangle_flipped() {
  return ChainComplex({ints({{-1, 0, -1}, {1, -1, 0}, {0, 1, 1}}), ints({{1}, {-1}, {-1}})});
}

// Edges 01, 02, 03, 12, 13, 23; faces [123], -[023], [013], -[012].
inline ChainComplex tetrahedron_boundary() {
  const IntMatrix d1 = ints({{-1, -1, -1, 0, 0, 0}, {1, 0, 0, -1, -1, 0}, {0, 1, 0, 1, 0, -1}, {0, 0, 1, 0, 1, 1}});
  const IntMatrix d2 = ints({{0, 0, 1, -1}, {0, -1, 0, 1}, {0, 1, -1, 0}, {1, 0, 0, -1}, {-1, 0, 1, 0}, {1, -1, 0, 0}});
  return ChainComplex({d1, d2});
}

// A square 0123 cut along the diagonal 02: faces [012] and [023] share edge 02.
// Edges 01, 12, 23, 30, 02.
inline ChainComplex two_faces() {
  const IntMatrix d1 = ints({{-1, 0, 0, 1, -1}, {1, -1, 0, 0, 0}, {0, 1, -1, 0, 1}, {0, 0, 1, -1, 0}});
  const IntMatrix d2 = ints({{1, 0}, {1, 0}, {0, 1}, {0, 1}, {-1, 1}});
  return ChainComplex({d1, d2});
}

// Sum of weighted directed cycles; every such flow-Laplacian is balanced.
inline DirectedGraph circulation(oracle::Generator& gen, Index n, int cycles) {
  std::vector<Edge> edges;
  for (int c = 0; c < cycles; ++c) {
    const Index len = gen.integer(2, n);
    std::vector<Index> verts(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) verts[static_cast<std::size_t>(i)] = i;
    std::shuffle(verts.begin(), verts.end(), gen.rng);
    const double w = gen.uniform(0.5, 2.0);
    for (Index i = 0; i < len; ++i) {
      edges.push_back({verts[static_cast<std::size_t>(i)], verts[static_cast<std::size_t>((i + 1) % len)], w});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

}  // namespace fixture
