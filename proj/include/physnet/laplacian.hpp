#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "physnet/graph.hpp"

namespace physnet {

enum class LaplacianKind { Symmetric, Flow, Consensus, Balanced };

std::string_view kind_name(LaplacianKind kind) noexcept;
std::optional<LaplacianKind> parse_kind(std::string_view name) noexcept;

struct LaplacianMatrix {
  Eigen::MatrixXd entries;
  LaplacianKind kind = LaplacianKind::Flow;
  // Free-form note on how the matrix was produced, e.g. "flow(-DK)".
  std::string provenance;

  Index size() const noexcept { return entries.rows(); }
};

// L = D R D^T with R = diag(edge weights).
LaplacianMatrix symmetric_laplacian(const DirectedGraph& g);

// m x n transportation matrix: row j holds weight k_j in the column of edge j's
// tail.
Eigen::MatrixXd transportation_matrix(const DirectedGraph& g);

// L = -D K. Column sums are zero.
LaplacianMatrix flow_laplacian(const DirectedGraph& g);

struct DegreeAdjacency {
  Eigen::MatrixXd degree;     // diagonal out-weights
  Eigen::MatrixXd adjacency;  // (head, tail) entry accumulates the edge weight
};

// Split with flow_laplacian(g) == degree - adjacency.
DegreeAdjacency degree_adjacency(const DirectedGraph& g);

// Edge i -> j means agent j listens to agent i with the edge weight. Row sums
// are zero, and the result equals flow_laplacian(reverse(g)) transposed.
LaplacianMatrix consensus_laplacian(const DirectedGraph& g);

struct BalanceTolerances {
  double sums;         // bound on |1^T L| and |L 1| entries
  double eigenvalue;   // allowed negative slack of lambda_min((L+L^T)/2)
};

// Scale-relative defaults: 1e-9 (1 + ||L||_inf) and 1e-8 ||L||_inf.
BalanceTolerances default_balance_tolerances(const Eigen::MatrixXd& l);

// Smallest eigenvalue of the symmetric part (L + L^T)/2.
double symmetric_part_min_eigenvalue(const Eigen::MatrixXd& l);

// Row and column sums vanish and the symmetric part is PSD within tolerance.
// `sum_tolerance` overrides the default sum tolerance when given.
bool is_balanced(const LaplacianMatrix& l, std::optional<double> sum_tolerance = std::nullopt);

// Appends a sink vertex absorbing the column surplus of a Metzler matrix M and
// returns the (n+1) x (n+1) flow-Laplacian -[M 0; s 0]. Requires nonnegative
// off-diagonal entries (NotMetzler) and column dominance
// -m_ii >= sum_{j != i} m_ji (NotDiagonallyDominant).
LaplacianMatrix metzler_augment(const Eigen::MatrixXd& m);

// Directed graph read off the off-diagonal sign pattern of a flow-Laplacian:
// L(i, j) < 0 for i != j becomes edge j -> i with weight -L(i, j).
DirectedGraph graph_of_flow_laplacian(const Eigen::MatrixXd& l);

}  // namespace physnet
