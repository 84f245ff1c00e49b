#include "physnet/dynamics.hpp"

#include <cmath>
#include <string>

namespace physnet {

VectorField gradient_flow_field(const LaplacianMatrix& l, const Hamiltonian& h) {
  if (l.entries.rows() != l.entries.cols() || l.entries.rows() != h.size()) {
    throw Error(ErrorCode::DimensionMismatch, "Laplacian is " + std::to_string(l.entries.rows()) + "x" +
                                                  std::to_string(l.entries.cols()) + " but H has " +
                                                  std::to_string(h.size()) + " components");
  }
  return [matrix = l.entries, h](const Eigen::VectorXd& x) -> Eigen::VectorXd { return -(matrix * h.gradient(x)); };
}

Hamiltonian transformed_hamiltonian(const Hamiltonian& h, const Eigen::VectorXd& sigma) {
  if (sigma.size() != h.size()) throw Error(ErrorCode::DimensionMismatch, "sigma length differs from H size");
  for (Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 0.0)) {
      throw Error(ErrorCode::ZeroSigmaEntry, "sigma_" + std::to_string(i + 1) + " is not positive");
    }
  }
  return h.scaled(sigma.cwiseInverse());
}

const std::vector<double>& Trajectory::diagnostic(const std::string& name) const {
  for (std::size_t k = 0; k < diagnostic_names.size(); ++k) {
    if (diagnostic_names[k] == name) return diagnostics[k];
  }
  throw Error(ErrorCode::InvalidArgument, "no diagnostic named '" + name + "'");
}

namespace {

// False (and nothing stored) when a diagnostic overflows, e.g. H of a finite
// but huge state.
bool record(Trajectory& traj, const SimulationOptions& options, double t, const Eigen::VectorXd& x) {
  std::vector<double> values(options.diagnostics.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    values[k] = options.diagnostics[k].evaluate(x);
    if (!std::isfinite(values[k])) return false;
  }
  traj.times.push_back(t);
  traj.states.push_back(x);
  for (std::size_t k = 0; k < values.size(); ++k) traj.diagnostics[k].push_back(values[k]);
  return true;
}

}  // namespace

Trajectory simulate(const VectorField& field, const Eigen::VectorXd& x0, double dt, double horizon,
                    const SimulationOptions& options) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (!(horizon >= dt) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::InvalidArgument, "horizon must be at least dt");
  }
  if (!x0.allFinite()) throw Error(ErrorCode::NonFiniteState, "initial state is not finite");

  Trajectory traj;
  for (const auto& d : options.diagnostics) traj.diagnostic_names.push_back(d.name);
  traj.diagnostics.resize(options.diagnostics.size());

  const auto steps = static_cast<long long>(std::ceil(horizon / dt - 1e-9));
  traj.times.reserve(static_cast<std::size_t>(steps) + 1);
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  Eigen::VectorXd x = x0;
  if (!record(traj, options, 0.0, x)) throw Error(ErrorCode::NonFiniteState, "diagnostics of the initial state are not finite");
  for (long long k = 1; k <= steps; ++k) {
    const double t_prev = static_cast<double>(k - 1) * dt;
    const double t_next = (k == steps) ? horizon : static_cast<double>(k) * dt;
    const double h = t_next - t_prev;

    const Eigen::VectorXd k1 = field(x);
    if (options.stop_on_convergence && k1.lpNorm<Eigen::Infinity>() < options.convergence_tolerance) {
      traj.converged_early = true;
      break;
    }
    const Eigen::VectorXd k2 = field(x + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(x + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(x + h * k3);
    Eigen::VectorXd next = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!next.allFinite()) {
      throw NonFiniteStateError("state diverged at t = " + std::to_string(t_next), std::move(traj));
    }
    x = std::move(next);
    if (!record(traj, options, t_next, x)) {
      throw NonFiniteStateError("diagnostics overflowed at t = " + std::to_string(t_next), std::move(traj));
    }
  }
  return traj;
}

double default_time_step(const Eigen::MatrixXd& l) {
  const double norm = l.size() == 0 ? 0.0 : l.cwiseAbs().rowwise().sum().maxCoeff();
  return norm > 0.0 ? 1e-3 / norm : 1e-3;
}

double conserved_quantity_check(const Trajectory& trajectory, const Eigen::VectorXd& weights) {
  if (trajectory.states.empty()) return 0.0;
  if (weights.size() != trajectory.dimension()) {
    throw Error(ErrorCode::DimensionMismatch, "weight vector length differs from state dimension");
  }
  const double start = weights.dot(trajectory.states.front());
  double drift = 0.0;
  for (const auto& x : trajectory.states) drift = std::max(drift, std::abs(weights.dot(x) - start));
  return drift;
}

Eigen::VectorXd conserved_weights(const LaplacianMatrix& l) {
  if (l.kind == LaplacianKind::Consensus) return sigma_per_component(l).normalized;
  return Eigen::VectorXd::Ones(l.entries.rows());
}

double lyapunov_rate(const LaplacianMatrix& l, const Hamiltonian& h, const Eigen::VectorXd& x) {
  if (!is_balanced(l)) throw Error(ErrorCode::NotBalanced, "Lyapunov rate needs a balanced Laplacian");
  if (l.entries.rows() != h.size()) throw Error(ErrorCode::DimensionMismatch, "Laplacian and H sizes differ");
  const Eigen::VectorXd g = h.gradient(x);
  return -g.dot(l.entries * g);
}

Trajectory simulate_network(const LaplacianMatrix& l, const Hamiltonian& h, const Eigen::VectorXd& x0,
                            double dt, double horizon, const SimulationOptions& options) {
  const VectorField field = gradient_flow_field(l, h);
  if (x0.size() != h.size()) throw Error(ErrorCode::DimensionMismatch, "initial state length differs from H size");
  const Eigen::VectorXd w = conserved_weights(l);
  SimulationOptions opts = options;
  opts.diagnostics.insert(opts.diagnostics.begin(),
                          {{"H", [h](const Eigen::VectorXd& x) { return h(x); }},
                           {"conserved", [w](const Eigen::VectorXd& x) { return w.dot(x); }},
                           {"dissipation_rate", [h, m = l.entries](const Eigen::VectorXd& x) {
                              const Eigen::VectorXd g = h.gradient(x);
                              return g.dot(m * g);
                            }}});
  return simulate(field, x0, dt, horizon, opts);
}

PassivityCertificate scaled_passivity_weights(const LaplacianMatrix& l) {
  const BalancedLaplacian b = balance(l, SigmaScaling::Raw);
  PassivityCertificate cert;
  cert.sigma = b.sigma;
  cert.weights = b.sigma.cwiseInverse();
  cert.balanced_split = {0.5 * (b.balanced.entries.transpose() - b.balanced.entries),
                         0.5 * (b.balanced.entries + b.balanced.entries.transpose())};
  const Eigen::MatrixXd scaled = cert.weights.asDiagonal() * b.balanced.entries * cert.weights.asDiagonal();
  cert.scaled_min_eigenvalue = symmetric_part_min_eigenvalue(scaled);
  const double norm = scaled.cwiseAbs().rowwise().sum().maxCoeff();
  cert.certified = cert.scaled_min_eigenvalue >= -1e-8 * norm;
  return cert;
}

}  // namespace physnet
