// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "physnet/complexes.hpp"
#include "physnet/dynamics.hpp"
#include "physnet/error.hpp"
#include "physnet/graph.hpp"
#include "physnet/kirchhoff.hpp"
#include "physnet/laplacian.hpp"
#include "physnet/storage.hpp"

using namespace physnet;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("unexpected exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s (%s; %.1f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double inf_norm(const Eigen::MatrixXd& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

DirectedGraph reweighted(const DirectedGraph& g, oracle::Generator& gen) {
  std::vector<Edge> e = g.edges();
  for (auto& x : e) x.weight = gen.uniform(0.1, 10.0);
  return DirectedGraph(g.vertex_count(), std::move(e));
}

// Smallest real part among the eigenvalues of l that are not the zero mode.
double slowest_rate(const Eigen::MatrixXd& l) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(l);
  std::vector<double> re;
  for (Index i = 0; i < l.rows(); ++i) re.push_back(es.eigenvalues()(i).real());
  std::sort(re.begin(), re.end());
  return re[1];  // re[0] is the single zero eigenvalue
}

// ---------------------------------------------------------------- 1

Outcome matrix_tree() {
  oracle::Generator gen(1001);
  double worst_rel = 0.0;
  double worst_res = 0.0;
  long graphs = 0;
  bool ok = true;

  auto check = [&](const DirectedGraph& g) {
    const SigmaVector s = sigma_right(flow_laplacian(g));
    const Eigen::MatrixXd l = flow_laplacian(g).entries;
    const double scale = s.values.cwiseAbs().maxCoeff();
    for (Index r = 0; r < g.vertex_count(); ++r) {
      double lib = 0.0;
      for (const auto& tree : spanning_trees_towards(g, r)) lib += tree_weight(g, tree);
      const double independent = oracle::tree_weight_sum(g, r);
      const double rel = std::max(std::abs(s.values(r) - lib), std::abs(s.values(r) - independent)) /
                         std::max(std::abs(lib), scale);
      worst_rel = std::max(worst_rel, rel);
      if (lib == 0.0 && s.values(r) != 0.0) ok = false;
    }
    const double res = inf_norm(l * s.values) / (inf_norm(l) * scale);
    worst_res = std::max(worst_res, res);
    ++graphs;
  };

  // Sigma is defined per weak component; disconnected topologies are covered
  // piecewise by their connected subgraphs.
  for (Index n = 1; n <= 5; ++n) {
    for (const DirectedGraph& g : oracle::all_digraphs(n, 7)) {
      if (connected_components(g).size() != 1) continue;
      check(reweighted(g, gen));
    }
  }
  const long exhaustive = graphs;
  int random = 0;
  while (random < 500) {
    const Index n = gen.integer(2, 5);
    const DirectedGraph g = gen.connected(n, gen.integer(0, 7 - (n - 1)), 0.01, 100.0);
    check(g);
    ++random;
  }
  ok = ok && worst_rel <= 1e-8 && worst_res <= 1e-9;
  return {ok, std::to_string(exhaustive) + " exhaustive + 500 random; " +
                  fmt("max rel err %.2e, max residual ratio %.2e", worst_rel, worst_res)};
}

// ---------------------------------------------------------------- 2

Outcome balance_criterion() {
  oracle::Generator gen(1002);
  int agree = 0;
  int balanced = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const Index n = gen.integer(2, 7);
    const DirectedGraph g = trial % 3 == 0   ? fixture::circulation(gen, n, static_cast<int>(gen.integer(1, 4)))
                            : trial % 3 == 1 ? gen.strongly_connected(n, gen.integer(0, 6))
                                             : gen.graph(n, gen.integer(1, 10));
    const LaplacianMatrix l = flow_laplacian(g);
    const bool lib = is_balanced(l);
    const bool eig = oracle::symmetric_min_eigenvalue(l.entries) >= -1e-8;
    if (lib == eig) ++agree;
    if (eig) ++balanced;
  }
  return {agree == 500, std::to_string(agree) + "/500 agree, " + std::to_string(balanced) + " balanced"};
}

// ---------------------------------------------------------------- 3

Outcome balancing() {
  oracle::Generator gen(1003);
  int good = 0;
  double worst_eig = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = gen.integer(2, 8);
    const LaplacianMatrix l = flow_laplacian(gen.strongly_connected(n, gen.integer(0, 2 * n)));
    const BalancedLaplacian b = balance(l);
    const double lmin = oracle::symmetric_min_eigenvalue(b.balanced.entries);
    const double scale = inf_norm(b.balanced.entries);
    worst_eig = std::min(worst_eig, lmin / scale);
    const Eigen::MatrixXd& m = b.balanced.entries;
    const bool sums = m.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale &&
                      m.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale;
    if (is_balanced(b.balanced) && sums && lmin >= -1e-12 * scale) ++good;
  }
  int refused = 0;
  int tried = 0;
  while (tried < 200) {
    const Index n = gen.integer(2, 8);
    const DirectedGraph g = gen.with_in_tree(n, gen.integer(0, n));
    if (oracle::scc_count(g) == 1) continue;
    ++tried;
    try {
      balance(flow_laplacian(g));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotStronglyConnected) ++refused;
    }
  }
  return {good == 200 && refused == 200, std::to_string(good) + "/200 balanced and PSD (min scaled eig " +
                                             fmt("%.1e", worst_eig) + "), " + std::to_string(refused) +
                                             "/200 non-strong refused"};
}

// ---------------------------------------------------------------- 4

Outcome consensus() {
  oracle::Generator gen(1004);
  double worst = 0.0;
  double worst_drift = 0.0;
  double worst_integration = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 8);
    // Reversing an in-tree gives a leader every vertex listens to, indirectly.
    const DirectedGraph g = reverse(gen.with_in_tree(n, gen.integer(0, n)));
    const LaplacianMatrix lc = consensus_laplacian(g);
    const Eigen::VectorXd x0 = gen.vector(n, -1, 1);
    const double c = consensus_value(lc, x0);
    const double horizon = 10.0 / slowest_rate(lc.entries);
    const double dt = 0.05 / inf_norm(lc.entries);
    const Trajectory t = simulate_network(lc, Hamiltonian::unit_quadratic(n), x0, dt, horizon);
    worst = std::max(worst, (t.final_state().array() - c).abs().maxCoeff());
    worst_integration =
        std::max(worst_integration, (t.final_state() - oracle::linear_flow(lc.entries, x0, t.times.back())).cwiseAbs().maxCoeff());
    worst_drift = std::max(worst_drift, conserved_quantity_check(t, sigma_left(lc).normalized));
  }
  return {worst <= 1e-6 && worst_drift <= 1e-8,
          fmt("T = 10/Re(lambda2): max |x_i(T) - c| %.2e, max sigma^T x drift %.2e, max gap to expm %.1e", worst,
              worst_drift, worst_integration)};
}

// ---------------------------------------------------------------- 5

Outcome mass_damper() {
  oracle::Generator gen(1005);
  double worst_spread = 0.0;
  double worst_drift = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = gen.integer(2, 8);
    const DirectedGraph g = gen.connected(n, gen.integer(0, n));
    const Eigen::VectorXd m = gen.vector(n, 0.5, 3.0);
    const LaplacianMatrix l = symmetric_laplacian(g);
    const Eigen::MatrixXd lm = l.entries * m.cwiseInverse().asDiagonal();
    const double horizon = 30.0 / slowest_rate(lm);
    const double dt = 0.05 / inf_norm(lm);
    const Eigen::VectorXd p0 = gen.vector(n, -2, 2);
    const Trajectory t = simulate_network(l, Hamiltonian::kinetic(m), p0, dt, horizon);
    const Eigen::VectorXd v = t.final_state().cwiseQuotient(m);
    worst_spread = std::max(worst_spread, v.maxCoeff() - v.minCoeff());
    worst_drift = std::max(worst_drift, conserved_quantity_check(t, Eigen::VectorXd::Ones(n)));
  }
  return {worst_spread <= 1e-6 && worst_drift <= 1e-8,
          fmt("50 systems: max velocity spread %.2e, max 1^T p drift %.2e", worst_spread, worst_drift)};
}

// ---------------------------------------------------------------- 6

Outcome storage() {
  oracle::Generator gen(1006);
  const auto h = [](const Eigen::VectorXd& z) { return 0.5 * z.squaredNorm(); };
  double grid_err = 0.0;
  // The grid is centered on the state itself and wide enough to contain the
  // hyperplane minimizer.
  for (int trial = 0; trial < 8; ++trial) {
    const Index n = trial < 5 ? 2 : 3;
    const Eigen::VectorXd x = gen.vector(n, -1, 1);
    const StorageResult r = available_storage_quadratic(x);
    const double width = (x.array() - x.mean()).abs().maxCoeff() + 0.01;
    const double brute = h(x) - oracle::grid_min(h, x, width, 1e-3);
    grid_err = std::max(grid_err, std::abs(brute - r.value));
  }
  double general_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 8);
    const Eigen::VectorXd x = gen.vector(n, -10, 10);
    const double q = available_storage_quadratic(x).value;
    general_err = std::max(general_err, std::abs(available_storage_general(Hamiltonian::unit_quadratic(n), x).value - q));
  }
  double motion_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = gen.integer(2, 7);
    const Index d = gen.integer(1, 3);
    const Eigen::VectorXd m = gen.vector(n, 0.2, 4.0);
    Eigen::MatrixXd p(n, d);
    for (Index k = 0; k < d; ++k) p.col(k) = gen.vector(n, -3, 3);
    motion_err = std::max(motion_err,
                          std::abs(motion_energy(m, p) - available_storage_general(Hamiltonian::kinetic(m), p).value));
  }
  const Eigen::VectorXd m = gen.vector(4, 0.5, 2.0);
  const Eigen::VectorXd p = gen.vector(4, -2, 2);
  const double joint = motion_energy(m, p);
  const double parts = motion_energy(m.head(2), p.head(2)) + motion_energy(m.tail(2), p.tail(2));
  const bool ok = grid_err <= 1e-5 && general_err <= 1e-10 && motion_err <= 1e-10 && joint > parts;
  return {ok, fmt("grid %.1e, general %.1e, motion %.1e", grid_err, general_err, motion_err) +
                  fmt(", superadditivity %.4f > %.4f", joint, parts)};
}

// ---------------------------------------------------------------- 7

Outcome generalized() {
  oracle::Generator gen(1007);
  double worst = 0.0;
  int splits = 0;
  int refused = 0;
  int uncontrollable = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Index n = gen.integer(2, 6);
    const DirectedGraph g = gen.connected(n, gen.integer(0, 3));
    const Hamiltonian h = trial % 2 ? Hamiltonian::exponential(n) : Hamiltonian::quadratic(gen.vector(n, 0.5, 2.0));
    const Eigen::VectorXd x = gen.vector(n, -1, 1);
    std::vector<double> values;
    for (Index mask = 1; mask < (Index{1} << g.edge_count()); ++mask) {
      std::vector<Index> src;
      for (Index j = 0; j < g.edge_count(); ++j)
        if (mask & (Index{1} << j)) src.push_back(j);
      const GeneralizedSystem sys = GeneralizedSystem::from_graph(g, src, h);
      if (!controllability_check(sys)) {
        ++uncontrollable;
        try {
          available_storage_generalized(sys, x);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::NotControllable) ++refused;
        }
        continue;
      }
      values.push_back(available_storage_generalized(sys, x).value);
      values.push_back(available_storage_generalized(sys.with_scaled_resistances(10.0), x).value);
      ++splits;
    }
    for (double v : values) worst = std::max(worst, std::abs(v - values.front()));
  }
  // Splits on arbitrary graphs, where some component can lack a source.
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = gen.integer(2, 6);
    const DirectedGraph g = gen.graph(n, gen.integer(1, 6));
    std::vector<Index> src;
    for (Index j = 0; j < g.edge_count(); ++j)
      if (gen.integer(0, 2) == 0) src.push_back(j);
    const GeneralizedSystem sys = GeneralizedSystem::from_graph(g, src, Hamiltonian::unit_quadratic(n));
    if (controllability_check(sys)) continue;
    ++uncontrollable;
    try {
      available_storage_generalized(sys, gen.vector(n, -1, 1));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotControllable) ++refused;
    }
  }
  return {worst <= 1e-10 && refused == uncontrollable,
          std::to_string(splits) + " controllable splits, max deviation " + fmt("%.1e", worst) + ", " +
              std::to_string(refused) + "/" + std::to_string(uncontrollable) + " uncontrollable refused"};
}

// ---------------------------------------------------------------- 8

Outcome monotonicity() {
  oracle::Generator gen(1008);
  double worst_rise = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = gen.integer(2, 6);
    const LaplacianMatrix l = flow_laplacian(gen.strongly_connected(n, gen.integer(0, n)));
    const BalancedLaplacian b = balance(l, SigmaScaling::Normalized);
    const Hamiltonian h = trial % 2 ? Hamiltonian::exponential(n) : Hamiltonian::quadratic(gen.vector(n, 0.5, 2.0));
    const Hamiltonian scaled = transformed_hamiltonian(h, b.sigma);
    const Eigen::VectorXd x0 = gen.vector(n, -1, 1);
    const Trajectory t = simulate_network(b.balanced, scaled, x0, default_time_step(b.balanced.entries) * 10, 5.0);
    const auto& hh = t.diagnostic("H");
    for (std::size_t k = 1; k < hh.size(); ++k) worst_rise = std::max(worst_rise, hh[k] - hh[k - 1]);
  }
  // Decrease beyond a few ulps of rounding in the sum that forms s.
  const auto drop = [](double before, double after) {
    return std::max(0.0, before - after - 4.0 * std::numeric_limits<double>::epsilon() * std::abs(before));
  };
  double worst_drop = 0.0;
  double worst_energy = 0.0;
  const HeatComplexSystem tet = HeatComplexSystem::with_defaults(fixture::tetrahedron_boundary());
  const HeatComplexSystem sq = HeatComplexSystem::with_defaults(fixture::two_faces());
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd u0 = gen.vector(4, 0.5, 3.0);
    const Trajectory t = simulate_heat(tet, u0, 1e-2, 5.0);
    const auto& s = t.diagnostic("entropy");
    for (std::size_t k = 1; k < s.size(); ++k) worst_drop = std::max(worst_drop, drop(s[k - 1], s[k]));
    for (double e : t.diagnostic("energy")) worst_energy = std::max(worst_energy, std::abs(e - u0.sum()));

    const Trajectory ts = simulate_heat(sq, gen.vector(2, 0.5, 3.0), 1e-2, 5.0);
    const auto& s2 = ts.diagnostic("entropy");
    for (std::size_t k = 1; k < s2.size(); ++k) worst_drop = std::max(worst_drop, drop(s2[k - 1], s2[k]));
  }
  return {worst_rise <= 1e-9 && worst_drop <= 0.0 && worst_energy <= 1e-8,
          fmt("max step rise of H %.1e, max entropy drop %.1e, tetrahedron energy drift %.1e", worst_rise,
              worst_drop, worst_energy)};
}

// ---------------------------------------------------------------- 9

Outcome complexes() {
  const bool tri = validate_complex(fixture::triangle()) &&
                   (fixture::triangle().boundary(1) * fixture::triangle().boundary(2)).isZero(0);
  const ChainComplex t = fixture::tetrahedron_boundary();
  const bool tet = validate_complex(t) && (t.boundary(1) * t.boundary(2)).isZero(0);
  const bool flipped = !validate_complex(fixture::triangle_flipped());
  return {tri && tet && flipped, std::string("triangle ") + (tri ? "valid" : "INVALID") + ", tetrahedron " +
                                     (tet ? "valid" : "INVALID") + ", flipped " + (flipped ? "rejected" : "ACCEPTED")};
}

// ---------------------------------------------------------------- 10

Outcome integrator_order() {
  oracle::Generator gen(1010);
  double lo = 1e300;
  double hi = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = gen.integer(2, 6);
    const LaplacianMatrix l = flow_laplacian(gen.strongly_connected(n, gen.integer(0, n)));
    const Eigen::VectorXd x0 = gen.vector(n, -1, 1);
    const double horizon = 1.0;
    const Eigen::VectorXd exact = oracle::linear_flow(l.entries, x0, horizon);
    const double steps = std::ceil(5.0 * inf_norm(l.entries));
    double err[2];
    for (int k = 0; k < 2; ++k) {
      const double dt = horizon / (steps * (k + 1));
      const Trajectory t = simulate_network(l, Hamiltonian::unit_quadratic(n), x0, dt, horizon);
      err[k] = (t.final_state() - exact).cwiseAbs().maxCoeff();
    }
    const double ratio = err[0] / err[1];
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo >= 12.0 && hi <= 20.0, fmt("20 systems: error ratio in [%.2f, %.2f]", lo, hi)};
}

}  // namespace

int main() {
  report(1, "Matrix-Tree equivalence", matrix_tree);
  report(2, "balanced iff PSD symmetric part", balance_criterion);
  report(3, "balancing strongly connected graphs", balancing);
  report(4, "consensus value", consensus);
  report(5, "mass-damper convergence", mass_damper);
  report(6, "available storage", storage);
  report(7, "generalized-system invariance", generalized);
  report(8, "Lyapunov and entropy monotonicity", monotonicity);
  report(9, "chain-complex validity", complexes);
  report(10, "RK4 order", integrator_order);
  return failures;
}
