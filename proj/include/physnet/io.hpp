#pragma once

// JSON readers/writers for graphs, matrices, systems and complexes, and the
// trajectory CSV writer. Vertex and edge indices are 1-based in every file
// format. Schema violations throw Error(ParseError) naming the field path;
// syntax errors name line and column.

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

#include "physnet/complexes.hpp"
#include "physnet/dynamics.hpp"
#include "physnet/graph.hpp"
#include "physnet/hamiltonian.hpp"
#include "physnet/laplacian.hpp"

namespace physnet::io {

using Json = nlohmann::json;

Json parse_json(std::string_view text);

// {"n": int, "edges": [{"tail": int, "head": int, "weight": float = 1.0}]}
DirectedGraph graph_from_json(const Json& j);
Json graph_to_json(const DirectedGraph& g);

// {"kind": "flow", "entries": [[...], ...]} (dense, row-major), or
// {"kind": "flow", "graph": {...}} built from a graph.
LaplacianMatrix laplacian_from_json(const Json& j);
Json laplacian_to_json(const LaplacianMatrix& l);
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field);
Eigen::VectorXd vector_from_json(const Json& j, const std::string& field);
Json vector_to_json(const Eigen::VectorXd& v);

// {"kind": "quadratic"|"kinetic"|"exponential"|"polynomial", "params": ...}.
// Quadratic params: number, array, or {"coefficients": [...]}, default all ones.
// Kinetic params: array or {"masses": [...]}. Polynomial params: array or
// {"coefficients": [a0, a1, ...]} shared by all components (no inverse
// gradient, so storage needs numeric inversion).
Hamiltonian hamiltonian_from_json(const Json& j, Index n);

struct SystemSpec {
  std::optional<LaplacianMatrix> laplacian;
  std::optional<DirectedGraph> graph;
  Hamiltonian hamiltonian = Hamiltonian::unit_quadratic(0);
  Eigen::VectorXd x0;
  std::optional<double> dt;
  std::optional<double> horizon;
  std::optional<std::vector<Index>> source_edges;  // 0-based
};

// {"laplacian": ..., "graph": ..., "hamiltonian": ..., "x0": [...], "dt": f,
//  "T": f, "sources": [1-based edge indices]}; every field but the
// Hamiltonian optional.
SystemSpec system_from_json(const Json& j);

struct ComplexSpec {
  ChainComplex complex;
  std::optional<Eigen::VectorXd> u0;
  std::optional<double> dt;
  std::optional<double> horizon;
  double conduction = 1.0;
  bool insulated_boundary = true;
};

// {"cells": [n0, n1, n2], "boundaries": {"d1": [[...]], "d2": [[...]]},
//  optional "u0", "dt", "T", "conduction", "boundary": "insulated"|"conducting"}
ComplexSpec complex_from_json(const Json& j);

// %.17g; re-parses to the identical double.
std::string format_double(double v);

// Header "t,x1,...,xn,<diagnostic names>", one row per sample.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace physnet::io
