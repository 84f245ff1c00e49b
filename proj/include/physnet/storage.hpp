#pragma once

// Available (minimal) storage of passive network systems x' = D u with an
// additive, strictly convex Hamiltonian. The value only depends on H and the
// conserved total 1^T x, never on the particular connected graph.

#include <vector>

#include <Eigen/Dense>

#include "physnet/graph.hpp"
#include "physnet/hamiltonian.hpp"

namespace physnet {

struct StorageResult {
  double value = 0.0;          // H(x) - H(x*)
  Eigen::VectorXd minimizer;   // x*, with sum(x*) == sum(x)
  double lambda = 0.0;         // common gradient value dH_i(x*_i)
};

// H = |x|^2 / 2: value x^T (I - 11^T/n) x / 2, minimizer mean(x) 1.
StorageResult available_storage_quadratic(const Eigen::VectorXd& x);

struct MinimizerOptions {
  // Invert dH_i by monotone bisection when a component has no inverse.
  bool allow_numeric_inversion = false;
  int max_iterations = 100;
  int max_bracket_expansions = 60;
};

// Solves sum_i inverse_dH_i(lambda) = sum_i x_i for lambda by safeguarded
// Newton with bisection fallback, starting from the bracket
// [min_i dH_i(x_i), max_i dH_i(x_i)].
// Errors: NoInverseProvided, NotStrictlyConvex, BracketingFailed.
StorageResult constrained_minimizer(const Hamiltonian& h, const Eigen::VectorXd& x,
                                    const MinimizerOptions& options = {});

StorageResult available_storage_general(const Hamiltonian& h, const Eigen::VectorXd& x,
                                        const MinimizerOptions& options = {});

struct VectorStorageResult {
  double value = 0.0;
  Eigen::MatrixXd minimizer;   // n x d
  Eigen::VectorXd lambda;      // one multiplier per spatial coordinate
};

// States in R^d per vertex (rows = vertices). The scalar problem is solved per
// coordinate, valid for Hamiltonians that are sums over coordinates
// (quadratic, kinetic).
VectorStorageResult available_storage_general(const Hamiltonian& h, const Eigen::MatrixXd& x,
                                              const MinimizerOptions& options = {});

// Pairwise form 1/2 sum_{i<j} m_i m_j / M |p_i/m_i - p_j/m_j|^2. Rows of `p`
// are vertices, columns spatial coordinates. Throws NonPositiveMass.
double motion_energy(const Eigen::VectorXd& masses, const Eigen::MatrixXd& p);

// Incidence split D = [D_s D_u]: flow-source edges and resistive edges.
class GeneralizedSystem {
 public:
  // Blocks given directly; `ru` holds one positive weight per resistive column.
  GeneralizedSystem(IntMatrix ds, IntMatrix du, Eigen::VectorXd ru, Hamiltonian h);

  // Columns of `incidence` listed in `source_edges` become D_s (in that order),
  // the rest D_u with the matching entries of `edge_resistances`.
  static GeneralizedSystem from_split(const IntMatrix& incidence, const std::vector<Index>& source_edges,
                                      const Eigen::VectorXd& edge_resistances, Hamiltonian h);

  // Sources given by (0-based) edge index; resistive weights are the edge weights.
  static GeneralizedSystem from_graph(const DirectedGraph& g, const std::vector<Index>& source_edges, Hamiltonian h);

  const IntMatrix& sources() const noexcept { return ds_; }
  const IntMatrix& resistive() const noexcept { return du_; }
  const Eigen::VectorXd& resistances() const noexcept { return ru_; }
  const Hamiltonian& hamiltonian() const noexcept { return h_; }
  Index vertex_count() const noexcept { return ds_.rows(); }

  // Same split with every resistance multiplied by `factor`.
  GeneralizedSystem with_scaled_resistances(double factor) const;

  // Full incidence [D_s D_u].
  IntMatrix incidence() const;

 private:
  IntMatrix ds_;
  IntMatrix du_;
  Eigen::VectorXd ru_;
  Hamiltonian h_;
};

// Smallest subspace containing im D_s and invariant under D_u R_u D_u^T equals
// im D. Stated for quadratic H; the same linear test is applied otherwise.
bool controllability_check(const GeneralizedSystem& sys);

// available_storage_general(sys.hamiltonian(), x) after a controllability
// check; NotControllable otherwise.
StorageResult available_storage_generalized(const GeneralizedSystem& sys, const Eigen::VectorXd& x,
                                            const MinimizerOptions& options = {});

}  // namespace physnet
