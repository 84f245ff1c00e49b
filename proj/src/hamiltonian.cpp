#include "physnet/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "physnet/error.hpp"

namespace physnet {

std::string_view hamiltonian_kind_name(HamiltonianKind kind) noexcept {
  switch (kind) {
    case HamiltonianKind::Quadratic: return "quadratic";
    case HamiltonianKind::Kinetic: return "kinetic";
    case HamiltonianKind::Exponential: return "exponential";
    case HamiltonianKind::Custom: return "custom";
  }
  return "custom";
}

namespace {

ScalarComponent quadratic_component(double c) {
  return {[c](double x) { return 0.5 * c * x * x; }, [c](double x) { return c * x; },
          [c](double y) { return y / c; }, [c](double) { return c; }};
}

std::vector<ScalarComponent> quadratic_components(const Eigen::VectorXd& c) {
  std::vector<ScalarComponent> out;
  out.reserve(static_cast<std::size_t>(c.size()));
  for (Index i = 0; i < c.size(); ++i) out.push_back(quadratic_component(c(i)));
  return out;
}

}  // namespace

Hamiltonian Hamiltonian::quadratic(const Eigen::VectorXd& coefficients) {
  for (Index i = 0; i < coefficients.size(); ++i) {
    if (!(coefficients(i) > 0.0) || !std::isfinite(coefficients(i))) {
      throw Error(ErrorCode::InvalidArgument,
                  "quadratic coefficient " + std::to_string(i + 1) + " must be positive");
    }
  }
  return {HamiltonianKind::Quadratic, coefficients, quadratic_components(coefficients)};
}

Hamiltonian Hamiltonian::kinetic(const Eigen::VectorXd& masses) {
  for (Index i = 0; i < masses.size(); ++i) {
    if (!(masses(i) > 0.0) || !std::isfinite(masses(i))) {
      throw Error(ErrorCode::NonPositiveMass, "mass " + std::to_string(i + 1) + " must be positive");
    }
  }
  return {HamiltonianKind::Kinetic, masses, quadratic_components(masses.cwiseInverse())};
}

Hamiltonian Hamiltonian::exponential(Index n) {
  std::vector<ScalarComponent> comps(static_cast<std::size_t>(n));
  for (auto& c : comps) {
    c.value = [](double x) { return std::exp(x); };
    c.gradient = [](double x) { return std::exp(x); };
    c.inverse_gradient = [](double y) { return std::log(y); };
    c.curvature = [](double x) { return std::exp(x); };
  }
  return {HamiltonianKind::Exponential, Eigen::VectorXd(), std::move(comps)};
}

Hamiltonian Hamiltonian::custom(std::vector<ScalarComponent> components) {
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (!components[i].value || !components[i].gradient) {
      throw Error(ErrorCode::InvalidArgument,
                  "component " + std::to_string(i + 1) + " needs a value and a gradient");
    }
  }
  return {HamiltonianKind::Custom, Eigen::VectorXd(), std::move(components)};
}

double Hamiltonian::operator()(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw Error(ErrorCode::DimensionMismatch, "state length differs from Hamiltonian size");
  double total = 0.0;
  for (Index i = 0; i < size(); ++i) total += components_[static_cast<std::size_t>(i)].value(x(i));
  return total;
}

Eigen::VectorXd Hamiltonian::gradient(const Eigen::VectorXd& x) const {
  if (x.size() != size()) throw Error(ErrorCode::DimensionMismatch, "state length differs from Hamiltonian size");
  Eigen::VectorXd g(size());
  for (Index i = 0; i < size(); ++i) g(i) = components_[static_cast<std::size_t>(i)].gradient(x(i));
  return g;
}

bool Hamiltonian::has_inverse_gradient() const noexcept {
  for (const auto& c : components_) {
    if (!c.inverse_gradient) return false;
  }
  return true;
}

Hamiltonian Hamiltonian::scaled(const Eigen::VectorXd& factors) const {
  if (factors.size() != size()) throw Error(ErrorCode::DimensionMismatch, "scale vector length differs");
  if (kind_ == HamiltonianKind::Quadratic) return quadratic(parameters_.cwiseProduct(factors));
  if (kind_ == HamiltonianKind::Kinetic) return kinetic(parameters_.cwiseQuotient(factors));

  std::vector<ScalarComponent> out;
  out.reserve(components_.size());
  for (Index i = 0; i < size(); ++i) {
    const ScalarComponent base = components_[static_cast<std::size_t>(i)];
    const double f = factors(i);
    ScalarComponent c;
    c.value = [base, f](double x) { return f * base.value(x); };
    c.gradient = [base, f](double x) { return f * base.gradient(x); };
    if (base.inverse_gradient) c.inverse_gradient = [base, f](double y) { return base.inverse_gradient(y / f); };
    if (base.curvature) c.curvature = [base, f](double x) { return f * base.curvature(x); };
    out.push_back(std::move(c));
  }
  return {HamiltonianKind::Custom, Eigen::VectorXd(), std::move(out)};
}

}  // namespace physnet
