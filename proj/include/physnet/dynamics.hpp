#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "physnet/error.hpp"
#include "physnet/hamiltonian.hpp"
#include "physnet/kirchhoff.hpp"
#include "physnet/laplacian.hpp"

namespace physnet {

using VectorField = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// x -> -L dH(x). Throws DimensionMismatch when L and H disagree in size.
VectorField gradient_flow_field(const LaplacianMatrix& l, const Hamiltonian& h);

// H_i / sigma_i, so that (L Sigma, result) generates the same field as (L, H).
// Throws ZeroSigmaEntry unless every sigma_i > 0.
Hamiltonian transformed_hamiltonian(const Hamiltonian& h, const Eigen::VectorXd& sigma);

struct Diagnostic {
  std::string name;
  std::function<double(const Eigen::VectorXd&)> evaluate;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  std::vector<std::string> diagnostic_names;
  std::vector<std::vector<double>> diagnostics;  // diagnostics[k][step]
  bool converged_early = false;

  std::size_t length() const noexcept { return times.size(); }
  Index dimension() const noexcept { return states.empty() ? 0 : states.front().size(); }
  const Eigen::VectorXd& final_state() const { return states.back(); }
  // Throws InvalidArgument for an unknown name.
  const std::vector<double>& diagnostic(const std::string& name) const;
};

struct SimulationOptions {
  std::vector<Diagnostic> diagnostics;
  // Stop once ||f(x)||_inf drops below the tolerance.
  bool stop_on_convergence = false;
  double convergence_tolerance = 1e-10;
};

// Raised when the state leaves the finite doubles; carries every sample taken
// before that.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(const std::string& message, Trajectory partial)
      : Error(ErrorCode::NonFiniteState, message), partial_(std::move(partial)) {}
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  Trajectory partial_;
};

// Classical fixed-step RK4 from t = 0 to `horizon`. The final step is
// shortened so the grid ends exactly at `horizon`.
Trajectory simulate(const VectorField& field, const Eigen::VectorXd& x0, double dt, double horizon,
                    const SimulationOptions& options = {});

// 1e-3 / ||L||_inf (1e-3 when L is zero).
double default_time_step(const Eigen::MatrixXd& l);

// max_t |w^T x(t) - w^T x(0)|.
double conserved_quantity_check(const Trajectory& trajectory, const Eigen::VectorXd& weights);

// Weights of the linear quantity conserved by x' = -L dH(x): all ones when the
// column sums vanish, otherwise the normalized left kernel of a consensus
// Laplacian.
Eigen::VectorXd conserved_weights(const LaplacianMatrix& l);

// d/dt H along x' = -L dH(x), i.e. -dH^T L dH. NotBalanced unless L is
// balanced (symmetric Laplacians are).
double lyapunov_rate(const LaplacianMatrix& l, const Hamiltonian& h, const Eigen::VectorXd& x);

// Network run with diagnostics "H", "conserved" (w^T x) and
// "dissipation_rate" (dH^T L dH).
Trajectory simulate_network(const LaplacianMatrix& l, const Hamiltonian& h, const Eigen::VectorXd& x0,
                            double dt, double horizon, const SimulationOptions& options = {});

struct PassivityCertificate {
  Eigen::VectorXd sigma;          // raw tree-weight sums
  Eigen::VectorXd weights;        // 1 / sigma_i, the storage scaling
  JRDecomposition balanced_split; // of L Sigma
  double scaled_min_eigenvalue;   // of the symmetric part of Sigma^-1 (L Sigma) Sigma^-1
  bool certified;
};

// Storage weights for subsystems interconnected through u = -L y + v.
// NotStronglyConnected when some weak component is not strongly connected.
PassivityCertificate scaled_passivity_weights(const LaplacianMatrix& l);

}  // namespace physnet
