#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "physnet/graph.hpp"

namespace physnet {

using ScalarFunction = std::function<double(double)>;

// One additive term H_i(x_i). `inverse_gradient` and `curvature` are optional;
// the storage solver needs the former and uses the latter for Newton steps.
struct ScalarComponent {
  ScalarFunction value;
  ScalarFunction gradient;
  ScalarFunction inverse_gradient;
  ScalarFunction curvature;
};

enum class HamiltonianKind { Quadratic, Kinetic, Exponential, Custom };

std::string_view hamiltonian_kind_name(HamiltonianKind kind) noexcept;

// Additive energy H(x) = sum_i H_i(x_i).
class Hamiltonian {
 public:
  // H_i = c_i x_i^2 / 2, c_i > 0.
  static Hamiltonian quadratic(const Eigen::VectorXd& coefficients);
  static Hamiltonian unit_quadratic(Index n) { return quadratic(Eigen::VectorXd::Ones(n)); }
  // H_i = p_i^2 / (2 m_i); throws NonPositiveMass.
  static Hamiltonian kinetic(const Eigen::VectorXd& masses);
  // H_i = exp(x_i).
  static Hamiltonian exponential(Index n);
  static Hamiltonian custom(std::vector<ScalarComponent> components);

  Index size() const noexcept { return static_cast<Index>(components_.size()); }
  HamiltonianKind kind() const noexcept { return kind_; }
  // Coefficients (quadratic) or masses (kinetic); empty otherwise.
  const Eigen::VectorXd& parameters() const noexcept { return parameters_; }
  const ScalarComponent& component(Index i) const { return components_.at(static_cast<std::size_t>(i)); }

  double operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  bool has_inverse_gradient() const noexcept;

  // Componentwise H_i * factors_i. Quadratic and kinetic kinds stay closed.
  Hamiltonian scaled(const Eigen::VectorXd& factors) const;

 private:
  Hamiltonian(HamiltonianKind kind, Eigen::VectorXd parameters, std::vector<ScalarComponent> components)
      : kind_(kind), parameters_(std::move(parameters)), components_(std::move(components)) {}

  HamiltonianKind kind_;
  Eigen::VectorXd parameters_;
  std::vector<ScalarComponent> components_;
};

}  // namespace physnet
