#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "physnet/complexes.hpp"
#include "physnet/error.hpp"
#include "physnet/laplacian.hpp"

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

}  // namespace

using fixture::ints;
using fixture::tetrahedron_boundary;
using fixture::triangle;
using fixture::two_faces;

TEST_CASE("validity of boundary chains") {
  CHECK(validate_complex(triangle()));
  CHECK(validate_complex(tetrahedron_boundary()));
  CHECK(validate_complex(two_faces()));
  CHECK((triangle().boundary(1) * triangle().boundary(2)).isZero(0));

  const ChainComplex flipped = fixture::triangle_flipped();
  CHECK_FALSE(validate_complex(flipped));
  CHECK((flipped.boundary(1) * flipped.boundary(2)).cwiseAbs().maxCoeff() == 2);

  // Every single sign flip of the tetrahedron breaks it.
  const ChainComplex tet = tetrahedron_boundary();
  for (Index e = 0; e < 6; ++e) {
    for (Index f = 0; f < 4; ++f) {
      if (tet.boundary(2)(e, f) == 0) continue;
      IntMatrix d2 = tet.boundary(2);
      d2(e, f) = -d2(e, f);
      CHECK_FALSE(validate_complex(ChainComplex({tet.boundary(1), d2})));
    }
  }

  // A graph alone has nothing to compose.
  CHECK(validate_complex(ChainComplex::from_graph(build_graph(3, {{0, 1}, {1, 2}}))));
}

TEST_CASE("shapes must chain") {
  CHECK(code_of([] { ChainComplex({ints({{-1}, {1}}), ints({{1}, {1}})}); }) == ErrorCode::DimensionChainBroken);
  CHECK(code_of([] { ChainComplex(std::vector<IntMatrix>{}); }) == ErrorCode::DimensionChainBroken);
  CHECK(tetrahedron_boundary().cell_counts() == std::vector<Index>{4, 6, 4});
  CHECK(tetrahedron_boundary().level() == 2);
}

TEST_CASE("coboundaries") {
  const ChainComplex tet = tetrahedron_boundary();
  CHECK(coboundary(tet, 1) == tet.boundary(1).transpose());
  CHECK(coboundary(tet, 2).transpose() == tet.boundary(2));
  CHECK((coboundary(tet, 2) * coboundary(tet, 1)).isZero(0));
  CHECK((coboundary(triangle(), 2) * coboundary(triangle(), 1)).isZero(0));
  CHECK(code_of([&] { coboundary(tet, 3); }) == ErrorCode::LevelOutOfRange);
  CHECK(code_of([&] { coboundary(tet, 0); }) == ErrorCode::LevelOutOfRange);
}

TEST_CASE("graph complexes reduce to the graph") {
  oracle::Generator gen(51);
  for (int trial = 0; trial < 50; ++trial) {
    const DirectedGraph g = gen.graph(gen.integer(2, 7), gen.integer(1, 9));
    const ChainComplex c = ChainComplex::from_graph(g);
    CHECK(c.level() == 1);
    CHECK(c.cell_counts() == std::vector<Index>{g.vertex_count(), g.edge_count()});
    CHECK(c.boundary(1) == incidence_matrix(g));
    CHECK(coboundary(c, 1) == incidence_matrix(g).transpose());
    const Eigen::MatrixXd d = c.boundary(1).cast<double>();
    CHECK((d * g.weights().asDiagonal() * d.transpose() - symmetric_laplacian(g).entries).cwiseAbs().maxCoeff() <=
          1e-14);
    CHECK(static_cast<Index>(connected_components(g).size()) == g.vertex_count() - oracle::numeric_rank(d));
  }
  CHECK(code_of([] { HeatComplexSystem::with_defaults(ChainComplex::from_graph(build_graph(2, {{0, 1}}))); }) ==
        ErrorCode::LevelOutOfRange);
}

TEST_CASE("conduction maps") {
  const ChainComplex sq = two_faces();
  const Eigen::MatrixXd r = interior_conduction(sq, 2.0)(vec({1, 1}));
  CHECK(r == Eigen::VectorXd(vec({0, 0, 0, 0, 2})).asDiagonal().toDenseMatrix());
  const Eigen::MatrixXd rt = interior_conduction(tetrahedron_boundary())(vec({1, 2, 3, 4}));
  CHECK(rt == Eigen::MatrixXd::Identity(6, 6));
  CHECK(uniform_conduction(3, 0.5)(vec({1})) == 0.5 * Eigen::MatrixXd::Identity(3, 3));
  CHECK((r - r.transpose()).isZero(0));
}

TEST_CASE("heat flows from the hot face to the cold face") {
  for (double kappa : {1.0, 0.25, 3.0}) {
    const HeatComplexSystem sys = HeatComplexSystem::with_defaults(two_faces(), kappa);
    const Eigen::VectorXd u = vec({1, 2});
    // e_u = (1, 0.5); the shared edge sees e = -1 + 0.5.
    const Eigen::VectorXd du = heat_field(sys)(u);
    CHECK(du(0) == doctest::Approx(0.5 * kappa));
    CHECK(du(1) == doctest::Approx(-0.5 * kappa));
    CHECK(du.sum() == 0.0);
    CHECK(entropy_rate(sys, u) == doctest::Approx(0.25 * kappa));
    CHECK(entropy_rate(sys, u) > 0.0);
    CHECK(total_entropy(sys, u) == doctest::Approx(std::log(2.0)));
  }
}

TEST_CASE("equal temperatures are an equilibrium") {
  const HeatComplexSystem sys = HeatComplexSystem::with_defaults(tetrahedron_boundary());
  CHECK(heat_field(sys)(vec({2, 2, 2, 2})).isZero(0));
  CHECK(entropy_rate(sys, vec({2, 2, 2, 2})) == 0.0);
  const HeatComplexSystem sq = HeatComplexSystem::with_defaults(two_faces());
  CHECK(heat_field(sq)(vec({0.7, 0.7})).isZero(0));
}

TEST_CASE("closed complex conserves energy and gains entropy") {
  const HeatComplexSystem sys = HeatComplexSystem::with_defaults(tetrahedron_boundary());
  oracle::Generator gen(52);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXd u0 = gen.vector(4, 0.5, 3.0);
    const Trajectory t = simulate_heat(sys, u0, 1e-2, 5.0);
    const auto& s = t.diagnostic("entropy");
    const auto& energy = t.diagnostic("energy");
    for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] >= s[k - 1] - 1e-10);
    for (double e : energy) CHECK(std::abs(e - u0.sum()) <= 1e-8);
    for (double rate : t.diagnostic("entropy_rate")) CHECK(rate >= 0.0);
    // Temperatures equalize.
    const Eigen::VectorXd u = t.final_state();
    CHECK((u.array() - u.mean()).abs().maxCoeff() < (u0.array() - u0.mean()).abs().maxCoeff());
  }
}

TEST_CASE("open complexes") {
  const HeatComplexSystem sys = HeatComplexSystem::with_defaults(two_faces());
  const Trajectory t = simulate_heat(sys, vec({1, 2}), 1e-2, 3.0);
  for (const auto& u : t.states) CHECK(std::abs(u.sum() - 3.0) <= 1e-12);
  const auto& s = t.diagnostic("entropy");
  for (std::size_t k = 1; k < s.size(); ++k) CHECK(s[k] >= s[k - 1] - 1e-10);

  // Conducting outer edges: entropy still rises.
  HeatComplexSystem leaky{two_faces(), uniform_conduction(5), log_entropy(2)};
  const Trajectory tl = simulate_heat(leaky, vec({1, 2}), 1e-2, 1.0);
  const auto& sl = tl.diagnostic("entropy");
  for (std::size_t k = 1; k < sl.size(); ++k) CHECK(sl[k] >= sl[k - 1] - 1e-10);
}

TEST_CASE("entropy domain") {
  const HeatComplexSystem sys = HeatComplexSystem::with_defaults(two_faces());
  CHECK(code_of([&] { heat_field(sys)(vec({1, 0})); }) == ErrorCode::OutOfEntropyDomain);
  CHECK(code_of([&] { entropy_rate(sys, vec({-1, 2})); }) == ErrorCode::OutOfEntropyDomain);
  CHECK(code_of([&] { simulate_heat(sys, vec({0, 1}), 0.1, 1.0); }) == ErrorCode::OutOfEntropyDomain);
  CHECK(code_of([&] { entropy_rate(sys, vec({1, 2, 3})); }) == ErrorCode::DimensionMismatch);
}
