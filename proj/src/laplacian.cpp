#include "physnet/laplacian.hpp"

#include <cmath>
#include <string>

#include "physnet/error.hpp"

namespace physnet {

std::string_view kind_name(LaplacianKind kind) noexcept {
  switch (kind) {
    case LaplacianKind::Symmetric: return "symmetric";
    case LaplacianKind::Flow: return "flow";
    case LaplacianKind::Consensus: return "consensus";
    case LaplacianKind::Balanced: return "balanced";
  }
  return "flow";
}

std::optional<LaplacianKind> parse_kind(std::string_view name) noexcept {
  if (name == "symmetric") return LaplacianKind::Symmetric;
  if (name == "flow") return LaplacianKind::Flow;
  if (name == "consensus") return LaplacianKind::Consensus;
  if (name == "balanced") return LaplacianKind::Balanced;
  return std::nullopt;
}

LaplacianMatrix symmetric_laplacian(const DirectedGraph& g) {
  // D R D^T assembled edge by edge: exact and exactly symmetric.
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(g.vertex_count(), g.vertex_count());
  for (const Edge& e : g.edges()) {
    l(e.tail, e.tail) += e.weight;
    l(e.head, e.head) += e.weight;
    l(e.tail, e.head) -= e.weight;
    l(e.head, e.tail) -= e.weight;
  }
  return {l, LaplacianKind::Symmetric, "symmetric(D R D^T)"};
}

Eigen::MatrixXd transportation_matrix(const DirectedGraph& g) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(g.edge_count(), g.vertex_count());
  for (Index j = 0; j < g.edge_count(); ++j) {
    const Edge& e = g.edge(j);
    k(j, e.tail) = e.weight;
  }
  return k;
}

LaplacianMatrix flow_laplacian(const DirectedGraph& g) {
  const Eigen::MatrixXd d = incidence_matrix(g).cast<double>();
  return {-d * transportation_matrix(g), LaplacianKind::Flow, "flow(-D K)"};
}

DegreeAdjacency degree_adjacency(const DirectedGraph& g) {
  const Index n = g.vertex_count();
  DegreeAdjacency out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (const Edge& e : g.edges()) {
    out.degree(e.tail, e.tail) += e.weight;
    out.adjacency(e.head, e.tail) += e.weight;
  }
  return out;
}

LaplacianMatrix consensus_laplacian(const DirectedGraph& g) {
  const Index n = g.vertex_count();
  Eigen::MatrixXd lc = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : g.edges()) {
    lc(e.head, e.head) += e.weight;
    lc(e.head, e.tail) -= e.weight;
  }
  return {lc, LaplacianKind::Consensus, "consensus(a_ij from edges j -> i)"};
}

BalanceTolerances default_balance_tolerances(const Eigen::MatrixXd& l) {
  const double norm_inf = l.cwiseAbs().rowwise().sum().maxCoeff();
  return {1e-9 * (1.0 + norm_inf), 1e-8 * norm_inf};
}

double symmetric_part_min_eigenvalue(const Eigen::MatrixXd& l) {
  if (l.size() == 0) return 0.0;
  const Eigen::MatrixXd sym = 0.5 * (l + l.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_balanced(const LaplacianMatrix& l, std::optional<double> sum_tolerance) {
  const Eigen::MatrixXd& a = l.entries;
  if (a.rows() != a.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "Laplacian must be square");
  }
  if (a.size() == 0) return true;
  BalanceTolerances tol = default_balance_tolerances(a);
  if (sum_tolerance) tol.sums = *sum_tolerance;
  const double col = a.colwise().sum().cwiseAbs().maxCoeff();
  const double row = a.rowwise().sum().cwiseAbs().maxCoeff();
  if (col > tol.sums || row > tol.sums) return false;
  return symmetric_part_min_eigenvalue(a) >= -tol.eigenvalue;
}

LaplacianMatrix metzler_augment(const Eigen::MatrixXd& m) {
  const Index n = m.rows();
  if (m.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "Metzler matrix must be square");
  }
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && m(i, j) < 0.0) {
        throw Error(ErrorCode::NotMetzler, "negative off-diagonal entry at (" + std::to_string(i + 1) +
                                               "," + std::to_string(j + 1) + ")");
      }
    }
  }
  for (Index j = 0; j < n; ++j) {
    const double off = m.col(j).sum() - m(j, j);
    if (-m(j, j) < off - 1e-12 * (1.0 + std::abs(m(j, j)))) {
      throw Error(ErrorCode::NotDiagonallyDominant,
                  "column " + std::to_string(j + 1) + " is not diagonally dominant");
    }
  }
  Eigen::MatrixXd augmented = Eigen::MatrixXd::Zero(n + 1, n + 1);
  augmented.topLeftCorner(n, n) = m;
  augmented.row(n).head(n) = -m.colwise().sum();
  return {-augmented, LaplacianKind::Flow, "metzler-augment(sink vertex " + std::to_string(n + 1) + ")"};
}

DirectedGraph graph_of_flow_laplacian(const Eigen::MatrixXd& l) {
  std::vector<Edge> edges;
  for (Index j = 0; j < l.cols(); ++j) {
    for (Index i = 0; i < l.rows(); ++i) {
      if (i != j && l(i, j) < 0.0) edges.push_back({j, i, -l(i, j)});
    }
  }
  return DirectedGraph(std::max<Index>(l.rows(), 1), std::move(edges));
}

}  // namespace physnet
