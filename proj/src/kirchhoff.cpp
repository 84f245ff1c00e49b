#include "physnet/kirchhoff.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <thread>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "physnet/error.hpp"

namespace physnet {

namespace {

Eigen::MatrixXd minor_of(const Eigen::MatrixXd& a, Index row, Index col) {
  const Index n = a.rows();
  Eigen::MatrixXd m(n - 1, n - 1);
  for (Index i = 0, r = 0; i < n; ++i) {
    if (i == row) continue;
    for (Index j = 0, c = 0; j < n; ++j) {
      if (j == col) continue;
      m(r, c++) = a(i, j);
    }
    ++r;
  }
  return m;
}

double cofactor(const Eigen::MatrixXd& a, Index row, Index col) {
  const double sign = ((row + col) % 2 == 0) ? 1.0 : -1.0;
  if (a.rows() == 1) return sign;
  return sign * minor_of(a, row, col).partialPivLu().determinant();
}

// Runs body(k) for k in [0, count) on up to `jobs` threads. Each k writes its
// own output slot, so the result does not depend on scheduling.
template <class Body>
void for_each_index(Index count, unsigned jobs, Body body) {
  const auto workers = static_cast<Index>(std::max(1u, jobs));
  if (workers == 1 || count < 2) {
    for (Index k = 0; k < count; ++k) body(k);
    return;
  }
  std::vector<std::thread> pool;
  for (Index w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&, w] {
      for (Index k = w; k < count; k += workers) body(k);
    });
  }
  for (auto& t : pool) t.join();
}

void require_square(const Eigen::MatrixXd& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

void require_zero_column_sums(const Eigen::MatrixXd& l) {
  const double tol = default_balance_tolerances(l).sums;
  if (l.colwise().sum().cwiseAbs().maxCoeff() > tol) {
    throw Error(ErrorCode::InvalidArgument, "column sums are not zero; not a flow-Laplacian");
  }
}

// reaches_all[j] is true when every vertex has a directed path to j.
std::vector<bool> rooted_everywhere(const DirectedGraph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<std::size_t>> in(n);
  for (const Edge& e : g.edges()) {
    in[static_cast<std::size_t>(e.head)].push_back(static_cast<std::size_t>(e.tail));
  }
  std::vector<bool> result(n, false);
  for (std::size_t root = 0; root < n; ++root) {
    std::vector<bool> seen(n, false);
    std::queue<std::size_t> frontier;
    seen[root] = true;
    frontier.push(root);
    std::size_t count = 1;
    while (!frontier.empty()) {
      const auto v = frontier.front();
      frontier.pop();
      for (std::size_t u : in[v]) {
        if (!seen[u]) {
          seen[u] = true;
          ++count;
          frontier.push(u);
        }
      }
    }
    result[root] = (count == n);
  }
  return result;
}

void fill_normalized(SigmaVector& s, const std::vector<std::vector<Index>>& blocks) {
  s.normalized = Eigen::VectorXd::Zero(s.values.size());
  s.strictly_positive = true;
  for (const auto& block : blocks) {
    double peak = 0.0;
    for (Index v : block) peak = std::max(peak, s.values(v));
    for (Index v : block) {
      if (peak > 0.0) s.normalized(v) = s.values(v) / peak;
      if (!(s.values(v) > kSigmaPositivityThreshold * peak)) s.strictly_positive = false;
    }
  }
}

}  // namespace

Eigen::MatrixXd adjugate(const Eigen::MatrixXd& a, unsigned jobs) {
  require_square(a, "adjugate input");
  const Index n = a.rows();
  Eigen::MatrixXd adj(n, n);
  for_each_index(n * n, jobs, [&](Index k) {
    const Index i = k / n;
    const Index j = k % n;
    adj(i, j) = cofactor(a, j, i);
  });
  return adj;
}

SigmaVector sigma_right(const LaplacianMatrix& l, unsigned jobs) {
  const Eigen::MatrixXd& a = l.entries;
  require_square(a, "flow-Laplacian");
  require_zero_column_sums(a);
  const Index n = a.rows();
  const DirectedGraph g = graph_of_flow_laplacian(a);
  if (connected_components(g).size() > 1) {
    throw Error(ErrorCode::DisconnectedInput, "graph has several weak components; decompose first");
  }
  const std::vector<bool> positive = rooted_everywhere(g);

  SigmaVector s;
  s.values = Eigen::VectorXd::Zero(n);
  for_each_index(n, jobs, [&](Index j) {
    if (positive[static_cast<std::size_t>(j)]) s.values(j) = cofactor(a, 0, j);
  });
  for (Index j = 0; j < n; ++j) {
    if (positive[static_cast<std::size_t>(j)] && !(s.values(j) > 0.0 && std::isfinite(s.values(j)))) {
      throw Error(ErrorCode::NumericallyIndeterminate,
                  "cofactor " + std::to_string(j + 1) + " lost its sign to rounding");
    }
  }
  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index v = 0; v < n; ++v) all[static_cast<std::size_t>(v)] = v;
  fill_normalized(s, {all});
  return s;
}

SigmaVector sigma_left(const LaplacianMatrix& lc, unsigned jobs) {
  require_square(lc.entries, "consensus Laplacian");
  return sigma_right({lc.entries.transpose(), LaplacianKind::Flow, "transpose of consensus"}, jobs);
}

SigmaVector sigma_per_component(const LaplacianMatrix& l, unsigned jobs) {
  const bool left = (l.kind == LaplacianKind::Consensus);
  const Eigen::MatrixXd flow = left ? Eigen::MatrixXd(l.entries.transpose()) : l.entries;
  require_square(flow, "Laplacian");
  require_zero_column_sums(flow);
  const Partition blocks = connected_components(graph_of_flow_laplacian(flow));

  SigmaVector s;
  s.values = Eigen::VectorXd::Zero(flow.rows());
  for (const auto& block : blocks) {
    const auto k = static_cast<Index>(block.size());
    Eigen::MatrixXd sub(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) sub(i, j) = flow(block[static_cast<std::size_t>(i)], block[static_cast<std::size_t>(j)]);
    }
    const SigmaVector part = sigma_right({sub, LaplacianKind::Flow, "component"}, jobs);
    for (Index i = 0; i < k; ++i) s.values(block[static_cast<std::size_t>(i)]) = part.values(i);
  }
  fill_normalized(s, blocks);
  return s;
}

Eigen::VectorXd sigma_right_exact(const Eigen::MatrixXd& l) {
  using Rational = boost::multiprecision::cpp_rational;
  require_square(l, "flow-Laplacian");
  const Index n = l.rows();
  if (n > 10) {
    throw Error(ErrorCode::InvalidArgument, "exact cofactors are limited to n <= 10");
  }
  Eigen::VectorXd out(n);
  for (Index col = 0; col < n; ++col) {
    const Index k = n - 1;
    std::vector<std::vector<Rational>> m(static_cast<std::size_t>(k), std::vector<Rational>(static_cast<std::size_t>(k)));
    for (Index i = 1; i < n; ++i) {
      for (Index j = 0, c = 0; j < n; ++j) {
        if (j == col) continue;
        m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(c++)] = Rational(l(i, j));
      }
    }
    Rational det = (col % 2 == 0) ? 1 : -1;
    for (std::size_t p = 0; p < static_cast<std::size_t>(k); ++p) {
      std::size_t pivot = p;
      while (pivot < m.size() && m[pivot][p] == 0) ++pivot;
      if (pivot == m.size()) {
        det = 0;
        break;
      }
      if (pivot != p) {
        std::swap(m[pivot], m[p]);
        det = -det;
      }
      det *= m[p][p];
      for (std::size_t r = p + 1; r < m.size(); ++r) {
        if (m[r][p] == 0) continue;
        const Rational factor = m[r][p] / m[p][p];
        for (std::size_t c = p; c < m.size(); ++c) m[r][c] -= factor * m[p][c];
      }
    }
    out(col) = static_cast<double>(det);
  }
  return out;
}

Eigen::VectorXd nullspace_direction(const Eigen::MatrixXd& l) {
  require_square(l, "matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(l, Eigen::ComputeFullV);
  Eigen::VectorXd v = svd.matrixV().col(l.cols() - 1);
  Index peak = 0;
  v.cwiseAbs().maxCoeff(&peak);
  return v / v(peak);
}

BalancedLaplacian balance(const LaplacianMatrix& l, SigmaScaling scaling) {
  require_square(l.entries, "flow-Laplacian");
  require_zero_column_sums(l.entries);
  const DirectedGraph g = graph_of_flow_laplacian(l.entries);
  const auto weak = connected_components(g);
  const auto strong = strongly_connected_components(g);
  if (weak.size() != strong.size()) {
    throw Error(ErrorCode::NotStronglyConnected,
                std::to_string(strong.size()) + " strong components inside " + std::to_string(weak.size()) +
                    " weak components; balancing needs sigma > 0");
  }
  const SigmaVector s = sigma_per_component(l);
  if (!s.strictly_positive) {
    throw Error(ErrorCode::NumericallyIndeterminate, "sigma has a vanishing entry on a strongly connected graph");
  }
  const Eigen::VectorXd& sigma = (scaling == SigmaScaling::Raw) ? s.values : s.normalized;
  return {{l.entries * sigma.asDiagonal(), LaplacianKind::Balanced, "balanced(L Sigma)"}, sigma};
}

double consensus_value(const LaplacianMatrix& lc, const Eigen::VectorXd& x0) {
  require_square(lc.entries, "consensus Laplacian");
  if (x0.size() != lc.entries.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "initial state length differs from Laplacian size");
  }
  SigmaVector s;
  try {
    s = sigma_left(lc);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::DisconnectedInput) {
      throw Error(ErrorCode::NoSpanningTree, "consensus graph is disconnected");
    }
    throw;
  }
  const double total = s.normalized.sum();
  if (!(total > 0.0)) {
    throw Error(ErrorCode::NoSpanningTree, "no vertex roots a spanning tree; consensus is not guaranteed");
  }
  return s.normalized.dot(x0) / total;
}

JRDecomposition jr_decomposition(const LaplacianMatrix& balanced) {
  if (!is_balanced(balanced)) {
    throw Error(ErrorCode::NotBalanced, "row or column sums do not vanish");
  }
  const Eigen::MatrixXd& a = balanced.entries;
  return {0.5 * (a.transpose() - a), 0.5 * (a + a.transpose())};
}

}  // namespace physnet
