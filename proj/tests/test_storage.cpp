#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "physnet/error.hpp"
#include "physnet/storage.hpp"

using namespace physnet;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Index>(v.size()));
  Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

// Kinetic energy minus the energy of the common-velocity state.
double motion_energy_by_projection(const Eigen::VectorXd& m, const Eigen::MatrixXd& p) {
  const Eigen::RowVectorXd v = p.colwise().sum() / m.sum();
  double total = 0.0;
  for (Index i = 0; i < m.size(); ++i) {
    total += 0.5 * p.row(i).squaredNorm() / m(i);
    total -= 0.5 * m(i) * v.squaredNorm();
  }
  return total;
}

// H_i(x) = cosh(a_i x) / a_i with a different a_i per component.
Hamiltonian cosh_energy(Index n) {
  std::vector<ScalarComponent> comps;
  for (Index i = 0; i < n; ++i) {
    const double a = 1.0 + 0.5 * static_cast<double>(i);
    comps.push_back({[a](double x) { return std::cosh(a * x) / a; }, [a](double x) { return std::sinh(a * x); },
                     [a](double y) { return std::asinh(y) / a; }, [a](double x) { return a * std::cosh(a * x); }});
  }
  return Hamiltonian::custom(std::move(comps));
}

void check_kkt(const Hamiltonian& h, const Eigen::VectorXd& x, const StorageResult& r) {
  const Eigen::VectorXd g = h.gradient(r.minimizer);
  CHECK((g.array() - r.lambda).abs().maxCoeff() <= 1e-9 * (1.0 + std::abs(r.lambda)));
  CHECK(std::abs(r.minimizer.sum() - x.sum()) <= 1e-9 * (1.0 + std::abs(x.sum())));
}

}  // namespace

TEST_CASE("quadratic closed form") {
  StorageResult r = available_storage_quadratic(vec({1, -1}));
  CHECK(r.value == 1.0);
  CHECK(r.minimizer == vec({0, 0}));
  r = available_storage_quadratic(vec({3, 1}));
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.minimizer == vec({2, 2}));
  r = available_storage_quadratic(vec({2.5, 2.5, 2.5}));
  CHECK(r.value == 0.0);
  CHECK(r.minimizer == vec({2.5, 2.5, 2.5}));
}

TEST_CASE("quadratic closed form against a grid search") {
  const auto h = [](const Eigen::VectorXd& z) { return 0.5 * z.squaredNorm(); };
  oracle::Generator gen(41);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::VectorXd x2 = gen.vector(2, -2, 2);
    const StorageResult r2 = available_storage_quadratic(x2);
    CHECK(std::abs(h(x2) - oracle::grid_min(h, r2.minimizer, 0.05, 1e-3) - r2.value) <= 1e-5);
    const Eigen::VectorXd x3 = gen.vector(3, -2, 2);
    const StorageResult r3 = available_storage_quadratic(x3);
    CHECK(std::abs(h(x3) - oracle::grid_min(h, r3.minimizer, 0.05, 1e-3) - r3.value) <= 1e-5);
    // The grid, centered away from the minimizer, still finds nothing lower.
    CHECK(oracle::grid_min(h, x3, 4.0, 1e-2) >= h(r3.minimizer) - 1e-12);
  }
}

TEST_CASE("general solver reproduces the quadratic formula") {
  oracle::Generator gen(42);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 8);
    const Eigen::VectorXd x = gen.vector(n, -10, 10);
    const StorageResult q = available_storage_quadratic(x);
    const StorageResult g = available_storage_general(Hamiltonian::unit_quadratic(n), x);
    CHECK(std::abs(q.value - g.value) <= 1e-10 * (1.0 + q.value));
    CHECK((q.minimizer - g.minimizer).cwiseAbs().maxCoeff() <= 1e-10);
    check_kkt(Hamiltonian::unit_quadratic(n), x, g);
  }
}

TEST_CASE("kinetic multiplier") {
  const Eigen::VectorXd m = vec({1, 2, 5});
  const Eigen::VectorXd p = vec({3, -1, 0.5});
  const StorageResult r = constrained_minimizer(Hamiltonian::kinetic(m), p);
  const double lambda = p.sum() / m.sum();
  CHECK(r.lambda == doctest::Approx(lambda).epsilon(1e-12));
  CHECK((r.minimizer - m * lambda).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exponential components") {
  oracle::Generator gen(43);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gen.integer(2, 6);
    const Eigen::VectorXd x = gen.vector(n, -3, 3);
    const Hamiltonian h = Hamiltonian::exponential(n);
    const StorageResult r = constrained_minimizer(h, x);
    const double mean = x.mean();
    CHECK(r.lambda == doctest::Approx(std::exp(mean)).epsilon(1e-10));
    CHECK((r.minimizer.array() - mean).abs().maxCoeff() <= 1e-10);
    check_kkt(h, x, r);
    CHECK(r.value >= 0.0);
    CHECK(r.value <= h(x));  // inf H = 0
  }
  const Eigen::VectorXd x = vec({0.3, -0.9});
  const Hamiltonian h = Hamiltonian::exponential(2);
  const auto f = [&](const Eigen::VectorXd& z) { return h(z); };
  const StorageResult r = constrained_minimizer(h, x);
  CHECK(oracle::grid_min(f, x, 2.0, 1e-3) >= h(r.minimizer) - 1e-12);
  CHECK(std::abs(h(x) - oracle::grid_min(f, r.minimizer, 0.01, 1e-4) - r.value) <= 1e-8);
}

TEST_CASE("nonquadratic custom energy") {
  oracle::Generator gen(44);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = gen.integer(2, 3);
    const Hamiltonian h = cosh_energy(n);
    const Eigen::VectorXd x = gen.vector(n, -2, 2);
    const StorageResult r = available_storage_general(h, x);
    check_kkt(h, x, r);
    const auto f = [&](const Eigen::VectorXd& z) { return h(z); };
    CHECK(oracle::grid_min(f, r.minimizer, 0.2, n == 2 ? 1e-3 : 1e-2) >= h(r.minimizer) - 1e-12);
    CHECK(r.value >= 0.0);
  }

  // Without closed-form inverses the solver can invert numerically on request.
  std::vector<ScalarComponent> comps;
  for (int i = 0; i < 3; ++i) {
    comps.push_back({[](double x) { return x * x * x * x / 4 + x * x / 2; }, [](double x) { return x * x * x + x; },
                     nullptr, [](double x) { return 3 * x * x + 1; }});
  }
  const Hamiltonian quartic = Hamiltonian::custom(comps);
  const Eigen::VectorXd x = vec({1.0, -0.25, 2.0});
  CHECK(code_of([&] { available_storage_general(quartic, x); }) == ErrorCode::NoInverseProvided);
  MinimizerOptions opts;
  opts.allow_numeric_inversion = true;
  const StorageResult r = available_storage_general(quartic, x, opts);
  CHECK((r.minimizer.array() - x.mean()).abs().maxCoeff() <= 1e-9);
  check_kkt(quartic, x, r);
}

TEST_CASE("solver errors") {
  // A linear energy has a constant gradient.
  const Hamiltonian linear = Hamiltonian::custom(
      {{[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }, nullptr},
       {[](double x) { return x; }, [](double) { return 1.0; }, [](double) { return 0.0; }, nullptr}});
  CHECK(code_of([&] { constrained_minimizer(linear, vec({1, 2})); }) == ErrorCode::NotStrictlyConvex);

  // Inverse maps whose range cannot meet the constraint.
  const ScalarComponent capped{[](double x) { return 0.5 * x * x; }, [](double x) { return x; },
                               [](double y) { return std::tanh(y); }, nullptr};
  const Hamiltonian bad = Hamiltonian::custom({capped, capped});
  CHECK(code_of([&] { constrained_minimizer(bad, vec({5, 5})); }) == ErrorCode::BracketingFailed);

  CHECK(code_of([] { constrained_minimizer(Hamiltonian::unit_quadratic(2), vec({1, 2, 3})); }) ==
        ErrorCode::DimensionMismatch);
}

TEST_CASE("motion energy") {
  CHECK(motion_energy(vec({1, 1}), vec({1, -1})) == 1.0);
  CHECK(motion_energy(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(code_of([] { motion_energy(vec({1, 0}), vec({1, 1})); }) == ErrorCode::NonPositiveMass);
  CHECK(code_of([] { motion_energy(vec({1, -2}), vec({1, 1})); }) == ErrorCode::NonPositiveMass);
  CHECK(code_of([] { Hamiltonian::kinetic(vec({1, 0})); }) == ErrorCode::NonPositiveMass);

  oracle::Generator gen(45);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 7);
    const Index d = gen.integer(1, 3);
    const Eigen::VectorXd m = gen.vector(n, 0.2, 4.0);
    Eigen::MatrixXd p(n, d);
    for (Index k = 0; k < d; ++k) p.col(k) = gen.vector(n, -3, 3);
    const double e = motion_energy(m, p);
    CHECK(e == doctest::Approx(motion_energy_by_projection(m, p)).epsilon(1e-12));
    const VectorStorageResult vs = available_storage_general(Hamiltonian::kinetic(m), p);
    CHECK(std::abs(vs.value - e) <= 1e-10 * (1.0 + e));
    if (d == 1) {
      const StorageResult s = available_storage_general(Hamiltonian::kinetic(m), Eigen::VectorXd(p.col(0)));
      CHECK(std::abs(s.value - e) <= 1e-10 * (1.0 + e));
    }
  }
}

TEST_CASE("motion energy is superadditive") {
  oracle::Generator gen(46);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd m = gen.vector(4, 0.5, 2.0);
    const Eigen::VectorXd p = gen.vector(4, -2, 2);
    const double parts = motion_energy(m.head(2), p.head(2)) + motion_energy(m.tail(2), p.tail(2));
    CHECK(motion_energy(m, p) > parts);
  }
  // Both pairs already moving together, at different speeds.
  const double joint = motion_energy(vec({1, 1, 1, 1}), vec({1, 1, -1, -1}));
  CHECK(joint == 2.0);
}

TEST_CASE("controllability") {
  const DirectedGraph path = build_graph(3, {{0, 1, 1.0}, {1, 2, 2.0}});
  const Hamiltonian h3 = Hamiltonian::unit_quadratic(3);
  CHECK(controllability_check(GeneralizedSystem::from_graph(path, {0}, h3)));
  CHECK(controllability_check(GeneralizedSystem::from_graph(path, {1}, h3)));
  CHECK(controllability_check(GeneralizedSystem::from_graph(path, {0, 1}, h3)));
  CHECK_FALSE(controllability_check(GeneralizedSystem::from_graph(path, {}, h3)));

  const DirectedGraph two = build_graph(4, {{0, 1}, {2, 3}});
  const Hamiltonian h4 = Hamiltonian::unit_quadratic(4);
  CHECK_FALSE(controllability_check(GeneralizedSystem::from_graph(two, {0}, h4)));
  CHECK(controllability_check(GeneralizedSystem::from_graph(two, {0, 1}, h4)));

  const GeneralizedSystem sys = GeneralizedSystem::from_graph(path, {1}, h3);
  CHECK(sys.sources() == incidence_matrix(path).col(1));
  CHECK(sys.resistive() == incidence_matrix(path).col(0));
  CHECK(sys.resistances() == vec({1.0}));

  // Against a plain Kalman rank test on connected graphs.
  oracle::Generator gen(47);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 6);
    const DirectedGraph g = gen.graph(n, gen.integer(1, 7));
    std::vector<Index> src;
    for (Index j = 0; j < g.edge_count(); ++j)
      if (gen.integer(0, 2) == 0) src.push_back(j);
    const GeneralizedSystem s = GeneralizedSystem::from_graph(g, src, Hamiltonian::unit_quadratic(n));
    const Eigen::MatrixXd du = s.resistive().cast<double>();
    const Eigen::MatrixXd a = du * s.resistances().asDiagonal() * du.transpose();
    const Eigen::MatrixXd b = s.sources().cast<double>();
    Eigen::MatrixXd kalman(n, b.cols() * n);
    Eigen::MatrixXd power = b;
    for (Index k = 0; k < n; ++k) {
      kalman.middleCols(k * b.cols(), b.cols()) = power;
      power = a * power;
    }
    const Index target = oracle::numeric_rank(incidence_matrix(g).cast<double>());
    const Index reach = b.cols() == 0 ? 0 : oracle::numeric_rank(kalman);
    CHECK(controllability_check(s) == (reach == target));
  }

  CHECK(code_of([&] { GeneralizedSystem::from_graph(path, {2}, h3); }) == ErrorCode::IndexOutOfRange);
  CHECK(code_of([&] { GeneralizedSystem::from_graph(path, {0, 0}, h3); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { GeneralizedSystem::from_graph(path, {0}, h4); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("generalized storage ignores the split and the resistances") {
  oracle::Generator gen(48);
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gen.integer(2, 6);
    const DirectedGraph g = gen.connected(n, gen.integer(0, 3));
    const Hamiltonian h = trial % 2 ? Hamiltonian::exponential(n) : Hamiltonian::quadratic(gen.vector(n, 0.5, 2.0));
    const Eigen::VectorXd x = gen.vector(n, -1, 1);
    const StorageResult base = available_storage_general(h, x);

    // All edges sources: D_u empty.
    std::vector<Index> all;
    for (Index j = 0; j < g.edge_count(); ++j) all.push_back(j);
    const StorageResult s_all = available_storage_generalized(GeneralizedSystem::from_graph(g, all, h), x);
    CHECK(s_all.value == base.value);

    for (Index j = 0; j < g.edge_count(); ++j) {
      const GeneralizedSystem sys = GeneralizedSystem::from_graph(g, {j}, h);
      if (!controllability_check(sys)) {
        CHECK(code_of([&] { available_storage_generalized(sys, x); }) == ErrorCode::NotControllable);
        continue;
      }
      CHECK(std::abs(available_storage_generalized(sys, x).value - base.value) <= 1e-10);
      CHECK(std::abs(available_storage_generalized(sys.with_scaled_resistances(10.0), x).value - base.value) <= 1e-10);
    }
  }
  const DirectedGraph two = build_graph(4, {{0, 1}, {2, 3}});
  CHECK(code_of([&] {
          available_storage_generalized(GeneralizedSystem::from_graph(two, {0}, Hamiltonian::unit_quadratic(4)),
                                        vec({1, 2, 3, 4}));
        }) == ErrorCode::NotControllable);
}

TEST_CASE("storage bounds") {
  oracle::Generator gen(49);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 6);
    const Eigen::VectorXd c = gen.vector(n, 0.3, 3.0);
    const Hamiltonian h = Hamiltonian::quadratic(c);
    const Eigen::VectorXd x = gen.vector(n, -5, 5);
    const StorageResult r = available_storage_general(h, x);
    CHECK(r.value >= -1e-12);
    CHECK(r.value <= h(x) + 1e-12);
    // A consensus of gradients stores nothing extractable.
    CHECK(std::abs(available_storage_general(h, r.minimizer).value) <= 1e-10 * (1.0 + h(x)));
  }
}
