#include "physnet/storage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "physnet/error.hpp"

namespace physnet {

StorageResult available_storage_quadratic(const Eigen::VectorXd& x) {
  if (x.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty state");
  const double mean = x.mean();
  StorageResult r;
  r.minimizer = Eigen::VectorXd::Constant(x.size(), mean);
  r.value = 0.5 * (x.array() - mean).square().sum();
  r.lambda = mean;
  return r;
}

namespace {

// Solves dH(z) = y for one component by monotone bisection around `center`.
ScalarFunction numeric_inverse(const ScalarComponent& c, double center) {
  return [grad = c.gradient, center](double y) {
    double lo = center - 1.0;
    double hi = center + 1.0;
    for (int k = 0; k < 200 && grad(lo) > y; ++k) lo -= (hi - lo);
    for (int k = 0; k < 200 && grad(hi) < y; ++k) hi += (hi - lo);
    if (grad(lo) > y || grad(hi) < y) return std::numeric_limits<double>::quiet_NaN();
    for (int k = 0; k < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi)); ++k) {
      const double mid = 0.5 * (lo + hi);
      (grad(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
}

void check_monotone(const ScalarComponent& c, double center, Index i) {
  const double width = 1.0 + std::abs(center);
  double previous = -std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 16; ++k) {
    const double z = center + width * (k / 8.0 - 1.0);
    const double g = c.gradient(z);
    if (!std::isfinite(g)) continue;
    if (!(g > previous)) {
      throw Error(ErrorCode::NotStrictlyConvex,
                  "dH_" + std::to_string(i + 1) + " is not strictly increasing near " + std::to_string(center));
    }
    previous = g;
  }
}

}  // namespace

StorageResult constrained_minimizer(const Hamiltonian& h, const Eigen::VectorXd& x, const MinimizerOptions& options) {
  const Index n = x.size();
  if (n == 0 || n != h.size()) throw Error(ErrorCode::DimensionMismatch, "state length differs from H size");

  std::vector<ScalarFunction> inverse(static_cast<std::size_t>(n));
  bool newton = true;
  for (Index i = 0; i < n; ++i) {
    const ScalarComponent& c = h.component(i);
    if (c.inverse_gradient) {
      inverse[static_cast<std::size_t>(i)] = c.inverse_gradient;
    } else if (options.allow_numeric_inversion) {
      inverse[static_cast<std::size_t>(i)] = numeric_inverse(c, x(i));
    } else {
      throw Error(ErrorCode::NoInverseProvided, "component " + std::to_string(i + 1) + " has no inverse gradient");
    }
    if (!c.curvature) newton = false;
    check_monotone(c, x(i), i);
  }

  const Eigen::VectorXd g0 = h.gradient(x);
  const double target = x.sum();
  const double scale = 1.0 + x.cwiseAbs().sum();
  auto solve_at = [&](double lambda) {
    Eigen::VectorXd z(n);
    for (Index i = 0; i < n; ++i) z(i) = inverse[static_cast<std::size_t>(i)](lambda);
    return z;
  };
  auto residual = [&](double lambda) { return solve_at(lambda).sum() - target; };

  double lo = g0.minCoeff();
  double hi = g0.maxCoeff();
  double r_lo = residual(lo);
  double r_hi = residual(hi);
  for (int k = 0; k < options.max_bracket_expansions && r_lo > 0.0; ++k) {
    lo -= (hi - lo) + std::ldexp(1.0, k) * (1.0 + std::abs(lo));
    r_lo = residual(lo);
  }
  for (int k = 0; k < options.max_bracket_expansions && r_hi < 0.0; ++k) {
    hi += (hi - lo) + std::ldexp(1.0, k) * (1.0 + std::abs(hi));
    r_hi = residual(hi);
  }
  if (!(r_lo <= 0.0 && r_hi >= 0.0)) {
    throw Error(ErrorCode::BracketingFailed, "no sign change of the constraint residual found");
  }

  const double tol = 1e-12 * scale;
  double lambda = (std::abs(r_lo) <= std::abs(r_hi)) ? lo : hi;
  for (int it = 0; it < options.max_iterations; ++it) {
    const double r = residual(lambda);
    if (!std::isfinite(r)) throw Error(ErrorCode::BracketingFailed, "residual is not finite");
    if (std::abs(r) <= tol) break;
    (r < 0.0 ? lo : hi) = lambda;
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) break;

    double next = 0.5 * (lo + hi);
    if (newton) {
      const Eigen::VectorXd z = solve_at(lambda);
      double slope = 0.0;
      for (Index i = 0; i < n; ++i) slope += 1.0 / h.component(i).curvature(z(i));
      const double candidate = lambda - r / slope;
      if (slope > 0.0 && std::isfinite(candidate) && candidate > lo && candidate < hi) next = candidate;
    }
    lambda = next;
  }

  StorageResult result;
  result.lambda = lambda;
  result.minimizer = solve_at(lambda);
  if (std::abs(result.minimizer.sum() - target) > 1e-9 * (1.0 + std::abs(target))) {
    throw Error(ErrorCode::BracketingFailed, "lambda search did not meet the constraint tolerance");
  }
  const Eigen::VectorXd g = h.gradient(result.minimizer);
  if ((g.array() - lambda).abs().maxCoeff() > 1e-6 * (1.0 + std::abs(lambda))) {
    throw Error(ErrorCode::InvalidArgument, "inverse gradient is inconsistent with the gradient");
  }
  double value = 0.0;
  for (Index i = 0; i < n; ++i) {
    const ScalarComponent& c = h.component(i);
    value += c.value(x(i)) - c.value(result.minimizer(i));
  }
  result.value = value;
  return result;
}

StorageResult available_storage_general(const Hamiltonian& h, const Eigen::VectorXd& x, const MinimizerOptions& options) {
  return constrained_minimizer(h, x, options);
}

VectorStorageResult available_storage_general(const Hamiltonian& h, const Eigen::MatrixXd& x,
                                              const MinimizerOptions& options) {
  VectorStorageResult out;
  out.minimizer.resize(x.rows(), x.cols());
  out.lambda.resize(x.cols());
  for (Index k = 0; k < x.cols(); ++k) {
    const StorageResult r = constrained_minimizer(h, x.col(k), options);
    out.value += r.value;
    out.minimizer.col(k) = r.minimizer;
    out.lambda(k) = r.lambda;
  }
  return out;
}

double motion_energy(const Eigen::VectorXd& masses, const Eigen::MatrixXd& p) {
  if (masses.size() != p.rows()) throw Error(ErrorCode::DimensionMismatch, "masses and momenta differ in length");
  for (Index i = 0; i < masses.size(); ++i) {
    if (!(masses(i) > 0.0)) throw Error(ErrorCode::NonPositiveMass, "mass " + std::to_string(i + 1) + " must be positive");
  }
  const double total = masses.sum();
  double energy = 0.0;
  for (Index i = 0; i < p.rows(); ++i) {
    for (Index j = i + 1; j < p.rows(); ++j) {
      const double dv = (p.row(i) / masses(i) - p.row(j) / masses(j)).squaredNorm();
      energy += masses(i) * masses(j) / total * dv;
    }
  }
  return 0.5 * energy;
}

GeneralizedSystem::GeneralizedSystem(IntMatrix ds, IntMatrix du, Eigen::VectorXd ru, Hamiltonian h)
    : ds_(std::move(ds)), du_(std::move(du)), ru_(std::move(ru)), h_(std::move(h)) {
  if (ds_.rows() != du_.rows() || ru_.size() != du_.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "inconsistent source/resistive blocks");
  }
  if (h_.size() != ds_.rows()) throw Error(ErrorCode::DimensionMismatch, "H size differs from vertex count");
  for (Index j = 0; j < ru_.size(); ++j) {
    if (!(ru_(j) > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "resistive weights must be positive");
  }
}

namespace {

struct SplitBlocks {
  IntMatrix ds;
  IntMatrix du;
  Eigen::VectorXd ru;
};

SplitBlocks split_incidence(const IntMatrix& incidence, const std::vector<Index>& source_edges,
                            const Eigen::VectorXd& edge_resistances) {
  const Index m = incidence.cols();
  if (edge_resistances.size() != m) throw Error(ErrorCode::DimensionMismatch, "one resistance per edge expected");
  std::set<Index> sources;
  for (Index j : source_edges) {
    if (j < 0 || j >= m) throw Error(ErrorCode::IndexOutOfRange, "source edge index out of range");
    if (!sources.insert(j).second) throw Error(ErrorCode::InvalidArgument, "duplicate source edge");
  }
  std::vector<Index> resistive;
  for (Index j = 0; j < m; ++j) {
    if (!sources.count(j)) resistive.push_back(j);
  }
  SplitBlocks b{IntMatrix(incidence.rows(), static_cast<Index>(source_edges.size())),
                IntMatrix(incidence.rows(), static_cast<Index>(resistive.size())),
                Eigen::VectorXd(static_cast<Index>(resistive.size()))};
  for (std::size_t k = 0; k < source_edges.size(); ++k) b.ds.col(static_cast<Index>(k)) = incidence.col(source_edges[k]);
  for (std::size_t k = 0; k < resistive.size(); ++k) {
    b.du.col(static_cast<Index>(k)) = incidence.col(resistive[k]);
    b.ru(static_cast<Index>(k)) = edge_resistances(resistive[k]);
  }
  return b;
}

}  // namespace

GeneralizedSystem GeneralizedSystem::from_split(const IntMatrix& incidence, const std::vector<Index>& source_edges,
                                                const Eigen::VectorXd& edge_resistances, Hamiltonian h) {
  SplitBlocks b = split_incidence(incidence, source_edges, edge_resistances);
  return GeneralizedSystem(std::move(b.ds), std::move(b.du), std::move(b.ru), std::move(h));
}

GeneralizedSystem GeneralizedSystem::from_graph(const DirectedGraph& g, const std::vector<Index>& source_edges,
                                                Hamiltonian h) {
  return from_split(incidence_matrix(g), source_edges, g.weights(), std::move(h));
}

GeneralizedSystem GeneralizedSystem::with_scaled_resistances(double factor) const {
  return GeneralizedSystem(ds_, du_, ru_ * factor, h_);
}

IntMatrix GeneralizedSystem::incidence() const {
  IntMatrix d(ds_.rows(), ds_.cols() + du_.cols());
  d << ds_, du_;
  return d;
}

namespace {

constexpr double kRankThreshold = 1e-9;

// Orthonormal basis of the column space.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& m) {
  if (m.cols() == 0 || m.rows() == 0) return Eigen::MatrixXd(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(m);
  qr.setThreshold(kRankThreshold);
  const Index r = qr.rank();
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), r);
  return q;
}

}  // namespace

bool controllability_check(const GeneralizedSystem& sys) {
  const Eigen::MatrixXd du = sys.resistive().cast<double>();
  Eigen::MatrixXd a = du * sys.resistances().asDiagonal() * du.transpose();
  const double norm = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  if (norm > 0.0) a /= norm;

  Eigen::MatrixXd basis = orthonormal_basis(sys.sources().cast<double>());
  const Index n = sys.vertex_count();
  for (Index step = 0; step < n && basis.cols() > 0; ++step) {
    Eigen::MatrixXd stacked(n, 2 * basis.cols());
    stacked << basis, a * basis;
    Eigen::MatrixXd grown = orthonormal_basis(stacked);
    if (grown.cols() == basis.cols()) break;
    basis = std::move(grown);
  }
  const Eigen::MatrixXd full = sys.incidence().cast<double>();
  const Index target = orthonormal_basis(full).cols();
  Eigen::MatrixXd joint(n, basis.cols() + full.cols());
  joint << basis, full;
  return basis.cols() == target && orthonormal_basis(joint).cols() == target;
}

StorageResult available_storage_generalized(const GeneralizedSystem& sys, const Eigen::VectorXd& x,
                                            const MinimizerOptions& options) {
  if (!controllability_check(sys)) {
    throw Error(ErrorCode::NotControllable, "reachable subspace of (D_u R D_u^T, D_s) is smaller than im D");
  }
  return available_storage_general(sys.hamiltonian(), x, options);
}

}  // namespace physnet
