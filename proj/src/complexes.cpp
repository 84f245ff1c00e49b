#include "physnet/complexes.hpp"

#include <cmath>
#include <string>

#include "physnet/error.hpp"

namespace physnet {

ChainComplex::ChainComplex(std::vector<IntMatrix> boundaries) : boundaries_(std::move(boundaries)) {
  if (boundaries_.empty()) throw Error(ErrorCode::DimensionChainBroken, "a complex needs at least one boundary map");
  for (std::size_t j = 1; j < boundaries_.size(); ++j) {
    if (boundaries_[j].rows() != boundaries_[j - 1].cols()) {
      throw Error(ErrorCode::DimensionChainBroken,
                  "boundary " + std::to_string(j + 1) + " has " + std::to_string(boundaries_[j].rows()) +
                      " rows but there are " + std::to_string(boundaries_[j - 1].cols()) + " " +
                      std::to_string(j) + "-cells");
    }
  }
}

ChainComplex ChainComplex::from_graph(const DirectedGraph& g) { return ChainComplex({incidence_matrix(g)}); }

std::vector<Index> ChainComplex::cell_counts() const {
  std::vector<Index> counts{boundaries_.front().rows()};
  for (const auto& b : boundaries_) counts.push_back(b.cols());
  return counts;
}

const IntMatrix& ChainComplex::boundary(Index j) const {
  if (j < 1 || j > level()) {
    throw Error(ErrorCode::LevelOutOfRange, "level " + std::to_string(j) + " outside 1.." + std::to_string(level()));
  }
  return boundaries_[static_cast<std::size_t>(j - 1)];
}

bool validate_complex(const ChainComplex& c) {
  for (Index j = 2; j <= c.level(); ++j) {
    const IntMatrix& lower = c.boundary(j - 1);
    const IntMatrix& upper = c.boundary(j);
    if (lower.cols() != upper.rows()) throw Error(ErrorCode::DimensionChainBroken, "boundary shapes do not chain");
    if (!(lower * upper).isZero(0)) return false;
  }
  return true;
}

IntMatrix coboundary(const ChainComplex& c, Index j) { return c.boundary(j).transpose(); }

std::vector<EntropyComponent> log_entropy(Index faces) {
  std::vector<EntropyComponent> s(static_cast<std::size_t>(faces));
  for (auto& comp : s) {
    comp.value = [](double u) { return std::log(u); };
    comp.derivative = [](double u) { return 1.0 / u; };
    comp.in_domain = [](double u) { return u > 0.0; };
  }
  return s;
}

ConductionMap interior_conduction(const ChainComplex& c, double kappa) {
  if (c.level() < 2) throw Error(ErrorCode::LevelOutOfRange, "interior conduction needs a 2-complex");
  const IntMatrix& faces = c.boundary(2);
  Eigen::VectorXd diag(faces.rows());
  for (Index e = 0; e < faces.rows(); ++e) {
    const Index incident = (faces.row(e).array() != 0).count();
    diag(e) = incident >= 2 ? kappa : 0.0;
  }
  return [r = Eigen::MatrixXd(diag.asDiagonal())](const Eigen::VectorXd&) { return r; };
}

ConductionMap uniform_conduction(Index edges, double kappa) {
  return [r = Eigen::MatrixXd(kappa * Eigen::MatrixXd::Identity(edges, edges))](const Eigen::VectorXd&) { return r; };
}

HeatComplexSystem HeatComplexSystem::with_defaults(ChainComplex c, double kappa) {
  if (c.level() != 2) throw Error(ErrorCode::LevelOutOfRange, "heat transfer is defined on a 2-complex");
  ConductionMap r = interior_conduction(c, kappa);
  const Index faces = c.boundary(2).cols();
  return {std::move(c), std::move(r), log_entropy(faces)};
}

namespace {

void check_system(const HeatComplexSystem& sys, const Eigen::VectorXd& u) {
  if (sys.complex.level() != 2) throw Error(ErrorCode::LevelOutOfRange, "heat transfer needs a 2-complex");
  const Index faces = sys.complex.boundary(2).cols();
  if (u.size() != faces || static_cast<Index>(sys.entropy.size()) != faces) {
    throw Error(ErrorCode::DimensionMismatch, "one energy and one entropy term per face expected");
  }
  for (Index i = 0; i < faces; ++i) {
    const auto& s = sys.entropy[static_cast<std::size_t>(i)];
    if (s.in_domain && !s.in_domain(u(i))) {
      throw Error(ErrorCode::OutOfEntropyDomain, "face " + std::to_string(i + 1) + " energy " +
                                                     std::to_string(u(i)) + " is outside the entropy domain");
    }
  }
}

Eigen::VectorXd reciprocal_temperatures(const HeatComplexSystem& sys, const Eigen::VectorXd& u) {
  Eigen::VectorXd e_u(u.size());
  for (Index i = 0; i < u.size(); ++i) e_u(i) = sys.entropy[static_cast<std::size_t>(i)].derivative(u(i));
  return e_u;
}

}  // namespace

VectorField heat_field(const HeatComplexSystem& sys) {
  if (sys.complex.level() != 2) throw Error(ErrorCode::LevelOutOfRange, "heat transfer needs a 2-complex");
  return [sys, b2 = Eigen::MatrixXd(sys.complex.boundary(2).cast<double>())](const Eigen::VectorXd& u) -> Eigen::VectorXd {
    check_system(sys, u);
    const Eigen::VectorXd e_u = reciprocal_temperatures(sys, u);
    const Eigen::VectorXd e = b2 * e_u;
    const Eigen::VectorXd f = sys.conduction(e_u) * e;
    return b2.transpose() * f;
  };
}

double entropy_rate(const HeatComplexSystem& sys, const Eigen::VectorXd& u) {
  check_system(sys, u);
  const Eigen::VectorXd e_u = reciprocal_temperatures(sys, u);
  const Eigen::VectorXd e = sys.complex.boundary(2).cast<double>() * e_u;
  return e.dot(sys.conduction(e_u) * e);
}

double total_entropy(const HeatComplexSystem& sys, const Eigen::VectorXd& u) {
  check_system(sys, u);
  double s = 0.0;
  for (Index i = 0; i < u.size(); ++i) s += sys.entropy[static_cast<std::size_t>(i)].value(u(i));
  return s;
}

Trajectory simulate_heat(const HeatComplexSystem& sys, const Eigen::VectorXd& u0, double dt, double horizon) {
  check_system(sys, u0);
  SimulationOptions opts;
  opts.diagnostics = {{"entropy", [&sys](const Eigen::VectorXd& u) { return total_entropy(sys, u); }},
                      {"energy", [](const Eigen::VectorXd& u) { return u.sum(); }},
                      {"entropy_rate", [&sys](const Eigen::VectorXd& u) { return entropy_rate(sys, u); }}};
  return simulate(heat_field(sys), u0, dt, horizon, opts);
}

}  // namespace physnet
