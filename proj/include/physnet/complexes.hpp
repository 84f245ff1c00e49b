#pragma once

// Chain complexes given by integer boundary matrices, and heat transfer
// between the faces of a 2-complex.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "physnet/dynamics.hpp"
#include "physnet/graph.hpp"

namespace physnet {

class ChainComplex {
 public:
  // boundaries[j-1] is the boundary map from j-cells to (j-1)-cells. Throws
  // DimensionChainBroken when consecutive shapes do not chain.
  explicit ChainComplex(std::vector<IntMatrix> boundaries);

  // The 1-complex of a graph; its only boundary map is the incidence matrix.
  static ChainComplex from_graph(const DirectedGraph& g);

  Index level() const noexcept { return static_cast<Index>(boundaries_.size()); }
  // Sizes of the j-cell sets, j = 0..level().
  std::vector<Index> cell_counts() const;
  // Boundary map from j-cells to (j-1)-cells, 1 <= j <= level().
  const IntMatrix& boundary(Index j) const;

 private:
  std::vector<IntMatrix> boundaries_;
};

// True when every product boundary(j-1) * boundary(j) is exactly zero.
bool validate_complex(const ChainComplex& c);

// d_j = boundary(j)^T, mapping (j-1)-cochains to j-cochains. LevelOutOfRange
// outside 1..level().
IntMatrix coboundary(const ChainComplex& c, Index j);

// Per-face entropy s_i(u_i) with derivative; `in_domain` guards e.g. u > 0.
struct EntropyComponent {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<bool(double)> in_domain;
};

// s_i = log u_i, so e_u = 1 / u is the reciprocal temperature.
std::vector<EntropyComponent> log_entropy(Index faces);

using ConductionMap = std::function<Eigen::MatrixXd(const Eigen::VectorXd& e_u)>;

// kappa on the diagonal for edges shared by two or more faces, zero on edges
// bounding a single face (insulated boundary).
ConductionMap interior_conduction(const ChainComplex& c, double kappa = 1.0);
// kappa * I on every edge.
ConductionMap uniform_conduction(Index edges, double kappa = 1.0);

struct HeatComplexSystem {
  ChainComplex complex;
  ConductionMap conduction;
  std::vector<EntropyComponent> entropy;

  // Log entropy and interior conduction. Requires a 2-complex.
  static HeatComplexSystem with_defaults(ChainComplex c, double kappa = 1.0);
};

// u -> d_2 R(e_u) boundary_2 e_u with e_u = ds/du. OutOfEntropyDomain if some
// u_i leaves the entropy domain.
VectorField heat_field(const HeatComplexSystem& sys);

// e^T R(e_u) e with e = boundary_2 e_u; nonnegative.
double entropy_rate(const HeatComplexSystem& sys, const Eigen::VectorXd& u);

double total_entropy(const HeatComplexSystem& sys, const Eigen::VectorXd& u);

// RK4 run with diagnostics "entropy", "energy" (1^T u) and "entropy_rate".
Trajectory simulate_heat(const HeatComplexSystem& sys, const Eigen::VectorXd& u0, double dt, double horizon);

}  // namespace physnet
