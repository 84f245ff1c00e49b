#pragma once

// Constructive Matrix-Tree machinery: the kernel vector sigma of a
// flow-Laplacian built from cofactors, the balancing transformation L Sigma,
// and the dual left-kernel for consensus Laplacians.

#include <Eigen/Dense>

#include "physnet/laplacian.hpp"

namespace physnet {

// entry (i, j) is the cofactor C_ji. Minors are independent; `jobs` > 1
// evaluates them on that many threads with identical results.
Eigen::MatrixXd adjugate(const Eigen::MatrixXd& a, unsigned jobs = 1);

struct SigmaVector {
  // Tree-weight sums: values(i) is the summed weight product of all spanning
  // trees directed towards (flow) or from (consensus) vertex i.
  Eigen::VectorXd values;
  // values scaled so the largest entry of each weak component is 1.
  Eigen::VectorXd normalized;
  // Every entry exceeds 1e-12 times the largest entry of its component.
  bool strictly_positive = false;
};

inline constexpr double kSigmaPositivityThreshold = 1e-12;

// Right kernel vector of a flow-Laplacian (column sums zero) on a weakly
// connected graph, sigma_j = C_1j. Entries are exactly zero where no spanning
// tree points towards j. Throws DisconnectedInput for several weak
// components and NumericallyIndeterminate if a structurally positive cofactor
// evaluates non-positive.
SigmaVector sigma_right(const LaplacianMatrix& l, unsigned jobs = 1);

// Left kernel row vector of a consensus Laplacian (row sums zero), computed as
// sigma_right of the transpose.
SigmaVector sigma_left(const LaplacianMatrix& lc, unsigned jobs = 1);

// sigma_right / sigma_left applied to each weak component and scattered back.
SigmaVector sigma_per_component(const LaplacianMatrix& l, unsigned jobs = 1);

// Same cofactors evaluated in exact rational arithmetic (doubles are dyadic
// rationals, so the input is represented exactly); rounded once at the end.
// Limited to n <= 10.
Eigen::VectorXd sigma_right_exact(const Eigen::MatrixXd& l);

// Unit-max, nonnegative direction of the numerically computed null space of
// `l` (smallest right singular vector). Only used as a cross-check.
Eigen::VectorXd nullspace_direction(const Eigen::MatrixXd& l);

enum class SigmaScaling { Raw, Normalized };

struct BalancedLaplacian {
  LaplacianMatrix balanced;  // L Sigma
  Eigen::VectorXd sigma;     // diagonal of Sigma
};

// L Sigma for a flow-Laplacian whose weak components are all strongly
// connected; NotStronglyConnected otherwise.
BalancedLaplacian balance(const LaplacianMatrix& l, SigmaScaling scaling = SigmaScaling::Raw);

// Weighted average sum(sigma_i x0_i) / sum(sigma_i) with sigma = sigma_left.
// NoSpanningTree when no vertex roots a spanning out-tree.
double consensus_value(const LaplacianMatrix& lc, const Eigen::VectorXd& x0);

struct JRDecomposition {
  Eigen::MatrixXd j;  // skew part (L^T - L)/2
  Eigen::MatrixXd r;  // symmetric part (L + L^T)/2, PSD
};

// L = -J + R for a balanced Laplacian; NotBalanced otherwise.
JRDecomposition jr_decomposition(const LaplacianMatrix& balanced);

}  // namespace physnet
