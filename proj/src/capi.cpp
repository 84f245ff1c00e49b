#include "physnet/physnet.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "physnet/complexes.hpp"
#include "physnet/dynamics.hpp"
#include "physnet/error.hpp"
#include "physnet/graph.hpp"
#include "physnet/hamiltonian.hpp"
#include "physnet/io.hpp"
#include "physnet/kirchhoff.hpp"
#include "physnet/laplacian.hpp"
#include "physnet/storage.hpp"

using namespace physnet;

struct pn_graph {
  DirectedGraph g;
};

struct pn_matrix {
  LaplacianMatrix l;
  std::vector<double> row_major;

  explicit pn_matrix(LaplacianMatrix m) : l(std::move(m)) {
    row_major.resize(static_cast<std::size_t>(l.entries.size()));
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        row_major.data(), l.entries.rows(), l.entries.cols()) = l.entries;
  }
};

struct pn_hamiltonian {
  Hamiltonian h;
};

struct pn_trajectory {
  Trajectory t;
  std::vector<double> states;

  explicit pn_trajectory(Trajectory traj) : t(std::move(traj)) {
    const auto dim = static_cast<std::size_t>(t.dimension());
    states.resize(t.length() * dim);
    for (std::size_t k = 0; k < t.length(); ++k) {
      Eigen::Map<Eigen::VectorXd>(states.data() + k * dim, static_cast<Index>(dim)) = t.states[k];
    }
  }
};

struct pn_system {
  io::SystemSpec spec;
  std::optional<LaplacianMatrix> laplacian;
};

struct pn_complex {
  io::ComplexSpec spec;
};

namespace {

thread_local std::string last_message;
thread_local std::string last_name;

void clear_error() {
  last_message.clear();
  last_name.clear();
}

pn_status fail(pn_status status, std::string name, std::string message) {
  last_name = std::move(name);
  last_message = std::move(message);
  return status;
}

template <class F>
pn_status guard(F&& body) {
  clear_error();
  try {
    body();
    return PN_OK;
  } catch (const Error& e) {
    return fail(static_cast<pn_status>(status_class(e.code())), std::string(error_name(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(PN_ERROR_NUMERIC, "OutOfMemory", "allocation failed");
  } catch (const std::exception& e) {
    return fail(PN_ERROR_ARGUMENT, "InvalidArgument", e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

LaplacianKind to_kind(pn_kind k) {
  switch (k) {
    case PN_KIND_SYMMETRIC: return LaplacianKind::Symmetric;
    case PN_KIND_FLOW: return LaplacianKind::Flow;
    case PN_KIND_CONSENSUS: return LaplacianKind::Consensus;
    case PN_KIND_BALANCED: return LaplacianKind::Balanced;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown Laplacian kind");
}

pn_kind from_kind(LaplacianKind k) {
  switch (k) {
    case LaplacianKind::Symmetric: return PN_KIND_SYMMETRIC;
    case LaplacianKind::Flow: return PN_KIND_FLOW;
    case LaplacianKind::Consensus: return PN_KIND_CONSENSUS;
    case LaplacianKind::Balanced: return PN_KIND_BALANCED;
  }
  return PN_KIND_FLOW;
}

LaplacianMatrix laplacian_of(const DirectedGraph& g, LaplacianKind kind) {
  switch (kind) {
    case LaplacianKind::Symmetric: return symmetric_laplacian(g);
    case LaplacianKind::Flow: return flow_laplacian(g);
    case LaplacianKind::Consensus: return consensus_laplacian(g);
    case LaplacianKind::Balanced: return balance(flow_laplacian(g)).balanced;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown Laplacian kind");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Eigen::VectorXd vec(const double* data, std::size_t n) {
  require(data != nullptr || n == 0, "null input vector");
  return n == 0 ? Eigen::VectorXd() : Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(data, static_cast<Index>(n)));
}

void copy_out(const Eigen::VectorXd& v, double* out) {
  if (out != nullptr) Eigen::Map<Eigen::VectorXd>(out, v.size()) = v;
}

void copy_out(const IntMatrix& m, int* out) {
  Eigen::Map<Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(out, m.rows(), m.cols()) = m;
}

void write_storage(const StorageResult& r, double* value, double* minimizer, double* lambda) {
  if (value != nullptr) *value = r.value;
  copy_out(r.minimizer, minimizer);
  if (lambda != nullptr) *lambda = r.lambda;
}

// Runs a simulation, handing back the partial trajectory when the state
// stops being finite.
template <class F>
void run_simulation(pn_trajectory** out, F&& run) {
  *out = nullptr;
  try {
    *out = new pn_trajectory(run());
  } catch (const NonFiniteStateError& e) {
    *out = new pn_trajectory(e.partial());
    throw;
  }
}

}  // namespace

extern "C" {

const char* pn_version(void) { return "1.0.0"; }
const char* pn_last_error(void) { return last_message.c_str(); }
const char* pn_last_error_name(void) { return last_name.c_str(); }

const char* pn_kind_name(pn_kind kind) {
  switch (kind) {
    case PN_KIND_SYMMETRIC: return "symmetric";
    case PN_KIND_FLOW: return "flow";
    case PN_KIND_CONSENSUS: return "consensus";
    case PN_KIND_BALANCED: return "balanced";
  }
  return "unknown";
}

pn_status pn_parse_kind(const char* name, pn_kind* out) {
  return guard([&] {
    require(name != nullptr && out != nullptr, "null argument");
    const auto k = parse_kind(name);
    if (!k) throw Error(ErrorCode::InvalidArgument, std::string("unknown Laplacian kind '") + name + "'");
    *out = from_kind(*k);
  });
}

void pn_string_free(char* s) { std::free(s); }

pn_status pn_graph_create(size_t n, size_t m, const size_t* tails, const size_t* heads, const double* weights,
                          pn_graph** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    require(m == 0 || (tails != nullptr && heads != nullptr), "null edge arrays");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (size_t j = 0; j < m; ++j) {
      if (tails[j] < 1 || tails[j] > n || heads[j] < 1 || heads[j] > n) {
        throw Error(ErrorCode::IndexOutOfRange, "edge " + std::to_string(j + 1) + " names a vertex outside 1.." +
                                                    std::to_string(n));
      }
      edges.push_back({static_cast<Index>(tails[j] - 1), static_cast<Index>(heads[j] - 1),
                       weights != nullptr ? weights[j] : 1.0});
    }
    *out = new pn_graph{DirectedGraph(static_cast<Index>(n), std::move(edges))};
  });
}

pn_status pn_graph_from_json(const char* text, pn_graph** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new pn_graph{io::graph_from_json(io::parse_json(text))};
  });
}

void pn_graph_free(pn_graph* g) { delete g; }
size_t pn_graph_vertex_count(const pn_graph* g) { return g ? static_cast<size_t>(g->g.vertex_count()) : 0; }
size_t pn_graph_edge_count(const pn_graph* g) { return g ? static_cast<size_t>(g->g.edge_count()) : 0; }

pn_status pn_graph_to_json(const pn_graph* g, char** out) {
  return guard([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = copy_string(io::graph_to_json(g->g).dump());
  });
}

pn_status pn_graph_incidence(const pn_graph* g, int* out) {
  return guard([&] {
    require(g != nullptr && out != nullptr, "null argument");
    copy_out(incidence_matrix(g->g), out);
  });
}

pn_status pn_graph_components(const pn_graph* g, int strong, size_t* labels, size_t* count) {
  return guard([&] {
    require(g != nullptr, "null graph");
    const Partition p = strong ? strongly_connected_components(g->g) : connected_components(g->g);
    if (count != nullptr) *count = p.size();
    if (labels != nullptr) {
      const auto l = component_labels(p, g->g.vertex_count());
      for (std::size_t i = 0; i < l.size(); ++i) labels[i] = static_cast<size_t>(l[i]) + 1;
    }
  });
}

pn_status pn_matrix_create(size_t rows, size_t cols, const double* data, pn_kind kind, pn_matrix** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    require(data != nullptr || rows * cols == 0, "null matrix data");
    Eigen::MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
    if (rows * cols > 0) {
      m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          data, static_cast<Index>(rows), static_cast<Index>(cols));
    }
    *out = new pn_matrix(LaplacianMatrix{std::move(m), to_kind(kind), "c-api"});
  });
}

pn_status pn_laplacian(const pn_graph* g, pn_kind kind, pn_matrix** out) {
  return guard([&] {
    require(g != nullptr && out != nullptr, "null argument");
    *out = new pn_matrix(laplacian_of(g->g, to_kind(kind)));
  });
}

pn_status pn_laplacian_from_json(const char* text, pn_kind graph_kind, pn_matrix** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    const io::Json j = io::parse_json(text);
    if (j.is_object() && j.contains("edges") && !j.contains("kind")) {
      *out = new pn_matrix(laplacian_of(io::graph_from_json(j), to_kind(graph_kind)));
    } else {
      *out = new pn_matrix(io::laplacian_from_json(j));
    }
  });
}

void pn_matrix_free(pn_matrix* l) { delete l; }
size_t pn_matrix_rows(const pn_matrix* l) { return l ? static_cast<size_t>(l->l.entries.rows()) : 0; }
size_t pn_matrix_cols(const pn_matrix* l) { return l ? static_cast<size_t>(l->l.entries.cols()) : 0; }
pn_kind pn_matrix_kind(const pn_matrix* l) { return l ? from_kind(l->l.kind) : PN_KIND_FLOW; }
const double* pn_matrix_data(const pn_matrix* l) { return l ? l->row_major.data() : nullptr; }

pn_status pn_matrix_to_json(const pn_matrix* l, char** out) {
  return guard([&] {
    require(l != nullptr && out != nullptr, "null argument");
    *out = copy_string(io::laplacian_to_json(l->l).dump());
  });
}

pn_status pn_is_balanced(const pn_matrix* l, double tolerance, int* out) {
  return guard([&] {
    require(l != nullptr && out != nullptr, "null argument");
    *out = is_balanced(l->l, tolerance > 0.0 ? std::optional<double>(tolerance) : std::nullopt) ? 1 : 0;
  });
}

pn_status pn_symmetric_min_eigenvalue(const pn_matrix* l, double* out) {
  return guard([&] {
    require(l != nullptr && out != nullptr, "null argument");
    *out = symmetric_part_min_eigenvalue(l->l.entries);
  });
}

pn_status pn_sigma(const pn_matrix* l, unsigned jobs, double* raw, double* normalized, int* strictly_positive) {
  return guard([&] {
    require(l != nullptr, "null matrix");
    const SigmaVector s = sigma_per_component(l->l, jobs == 0 ? 1 : jobs);
    copy_out(s.values, raw);
    copy_out(s.normalized, normalized);
    if (strictly_positive != nullptr) *strictly_positive = s.strictly_positive ? 1 : 0;
  });
}

pn_status pn_balance(const pn_matrix* l, int normalized, pn_matrix** out, double* sigma) {
  return guard([&] {
    require(l != nullptr && out != nullptr, "null argument");
    BalancedLaplacian b = balance(l->l, normalized ? SigmaScaling::Normalized : SigmaScaling::Raw);
    copy_out(b.sigma, sigma);
    *out = new pn_matrix(std::move(b.balanced));
  });
}

pn_status pn_consensus_value(const pn_matrix* lc, const double* x0, double* out) {
  return guard([&] {
    require(lc != nullptr && out != nullptr, "null argument");
    *out = consensus_value(lc->l, vec(x0, static_cast<size_t>(lc->l.size())));
  });
}

pn_status pn_jr_decomposition(const pn_matrix* balanced, pn_matrix** j, pn_matrix** r) {
  return guard([&] {
    require(balanced != nullptr && j != nullptr && r != nullptr, "null argument");
    JRDecomposition d = jr_decomposition(balanced->l);
    *j = new pn_matrix(LaplacianMatrix{std::move(d.j), balanced->l.kind, "skew part"});
    *r = new pn_matrix(LaplacianMatrix{std::move(d.r), LaplacianKind::Symmetric, "symmetric part"});
  });
}

pn_status pn_metzler_augment(const pn_matrix* m, pn_matrix** out) {
  return guard([&] {
    require(m != nullptr && out != nullptr, "null argument");
    *out = new pn_matrix(metzler_augment(m->l.entries));
  });
}

pn_status pn_hamiltonian_quadratic(size_t n, const double* coefficients, pn_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = new pn_hamiltonian{coefficients ? Hamiltonian::quadratic(vec(coefficients, n))
                                           : Hamiltonian::unit_quadratic(static_cast<Index>(n))};
  });
}

pn_status pn_hamiltonian_kinetic(size_t n, const double* masses, pn_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = new pn_hamiltonian{Hamiltonian::kinetic(vec(masses, n))};
  });
}

pn_status pn_hamiltonian_exponential(size_t n, pn_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr, "null output handle");
    *out = new pn_hamiltonian{Hamiltonian::exponential(static_cast<Index>(n))};
  });
}

pn_status pn_hamiltonian_custom(size_t n, pn_scalar_fn value, pn_scalar_fn gradient, pn_scalar_fn inverse_gradient,
                                pn_scalar_fn curvature, void* userdata, pn_hamiltonian** out) {
  return guard([&] {
    require(out != nullptr && value != nullptr && gradient != nullptr, "value and gradient callbacks are required");
    auto bind = [userdata](pn_scalar_fn f, size_t i) -> ScalarFunction {
      if (f == nullptr) return nullptr;
      return [f, i, userdata](double x) { return f(x, i, userdata); };
    };
    std::vector<ScalarComponent> comps;
    comps.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      comps.push_back({bind(value, i), bind(gradient, i), bind(inverse_gradient, i), bind(curvature, i)});
    }
    *out = new pn_hamiltonian{Hamiltonian::custom(std::move(comps))};
  });
}

void pn_hamiltonian_free(pn_hamiltonian* h) { delete h; }
size_t pn_hamiltonian_size(const pn_hamiltonian* h) { return h ? static_cast<size_t>(h->h.size()) : 0; }

pn_status pn_hamiltonian_evaluate(const pn_hamiltonian* h, const double* x, double* out) {
  return guard([&] {
    require(h != nullptr && out != nullptr, "null argument");
    *out = h->h(vec(x, static_cast<size_t>(h->h.size())));
  });
}

pn_status pn_hamiltonian_gradient(const pn_hamiltonian* h, const double* x, double* out) {
  return guard([&] {
    require(h != nullptr && out != nullptr, "null argument");
    copy_out(h->h.gradient(vec(x, static_cast<size_t>(h->h.size()))), out);
  });
}

pn_status pn_simulate(const pn_matrix* l, const pn_hamiltonian* h, const double* x0, double dt, double horizon,
                      int stop_on_convergence, pn_trajectory** out) {
  return guard([&] {
    require(l != nullptr && h != nullptr && out != nullptr, "null argument");
    SimulationOptions opts;
    opts.stop_on_convergence = stop_on_convergence != 0;
    const double step = dt > 0.0 ? dt : default_time_step(l->l.entries);
    const Eigen::VectorXd start = vec(x0, static_cast<size_t>(l->l.size()));
    run_simulation(out, [&] { return simulate_network(l->l, h->h, start, step, horizon, opts); });
  });
}

pn_status pn_default_time_step(const pn_matrix* l, double* out) {
  return guard([&] {
    require(l != nullptr && out != nullptr, "null argument");
    *out = default_time_step(l->l.entries);
  });
}

pn_status pn_conserved_drift(const pn_matrix* l, const pn_trajectory* t, double* out) {
  return guard([&] {
    require(l != nullptr && t != nullptr && out != nullptr, "null argument");
    *out = conserved_quantity_check(t->t, conserved_weights(l->l));
  });
}

pn_status pn_lyapunov_rate(const pn_matrix* l, const pn_hamiltonian* h, const double* x, double* out) {
  return guard([&] {
    require(l != nullptr && h != nullptr && out != nullptr, "null argument");
    *out = lyapunov_rate(l->l, h->h, vec(x, static_cast<size_t>(l->l.size())));
  });
}

void pn_trajectory_free(pn_trajectory* t) { delete t; }
size_t pn_trajectory_length(const pn_trajectory* t) { return t ? t->t.length() : 0; }
size_t pn_trajectory_dimension(const pn_trajectory* t) { return t ? static_cast<size_t>(t->t.dimension()) : 0; }
int pn_trajectory_converged_early(const pn_trajectory* t) { return t && t->t.converged_early ? 1 : 0; }
const double* pn_trajectory_times(const pn_trajectory* t) { return t ? t->t.times.data() : nullptr; }
const double* pn_trajectory_states(const pn_trajectory* t) { return t ? t->states.data() : nullptr; }
size_t pn_trajectory_diagnostic_count(const pn_trajectory* t) { return t ? t->t.diagnostic_names.size() : 0; }

const char* pn_trajectory_diagnostic_name(const pn_trajectory* t, size_t k) {
  if (t == nullptr || k >= t->t.diagnostic_names.size()) return nullptr;
  return t->t.diagnostic_names[k].c_str();
}

const double* pn_trajectory_diagnostic(const pn_trajectory* t, size_t k) {
  if (t == nullptr || k >= t->t.diagnostics.size()) return nullptr;
  return t->t.diagnostics[k].data();
}

pn_status pn_trajectory_to_csv(const pn_trajectory* t, char** out) {
  return guard([&] {
    require(t != nullptr && out != nullptr, "null argument");
    std::ostringstream os;
    io::write_trajectory_csv(os, t->t);
    *out = copy_string(os.str());
  });
}

pn_status pn_system_from_json(const char* text, pn_kind graph_kind, pn_system** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    auto sys = std::make_unique<pn_system>();
    sys->spec = io::system_from_json(io::parse_json(text));
    if (sys->spec.laplacian) {
      sys->laplacian = sys->spec.laplacian;
    } else if (sys->spec.graph) {
      sys->laplacian = laplacian_of(*sys->spec.graph, to_kind(graph_kind));
    }
    *out = sys.release();
  });
}

void pn_system_free(pn_system* s) { delete s; }
size_t pn_system_size(const pn_system* s) { return s ? static_cast<size_t>(s->spec.hamiltonian.size()) : 0; }

int pn_system_x0(const pn_system* s, double* out) {
  if (s == nullptr || s->spec.x0.size() == 0) return 0;
  copy_out(s->spec.x0, out);
  return 1;
}

int pn_system_dt(const pn_system* s, double* out) {
  if (s == nullptr || !s->spec.dt) return 0;
  if (out != nullptr) *out = *s->spec.dt;
  return 1;
}

int pn_system_horizon(const pn_system* s, double* out) {
  if (s == nullptr || !s->spec.horizon) return 0;
  if (out != nullptr) *out = *s->spec.horizon;
  return 1;
}

int pn_system_is_generalized(const pn_system* s) { return s && s->spec.source_edges ? 1 : 0; }

pn_status pn_system_laplacian(const pn_system* s, pn_matrix** out) {
  return guard([&] {
    require(s != nullptr && out != nullptr, "null argument");
    if (!s->laplacian) throw Error(ErrorCode::ParseError, "field 'laplacian': missing and no graph given");
    *out = new pn_matrix(*s->laplacian);
  });
}

pn_status pn_system_hamiltonian(const pn_system* s, pn_hamiltonian** out) {
  return guard([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = new pn_hamiltonian{s->spec.hamiltonian};
  });
}

namespace {

GeneralizedSystem generalized_of(const pn_system* s) {
  require(s->spec.source_edges.has_value() && s->spec.graph.has_value(), "system has no source edges");
  return GeneralizedSystem::from_graph(*s->spec.graph, *s->spec.source_edges, s->spec.hamiltonian);
}

}  // namespace

pn_status pn_system_controllable(const pn_system* s, int* out) {
  return guard([&] {
    require(s != nullptr && out != nullptr, "null argument");
    *out = controllability_check(generalized_of(s)) ? 1 : 0;
  });
}

pn_status pn_system_storage(const pn_system* s, const double* x, int numeric_inversion, double* value,
                            double* minimizer, double* lambda) {
  return guard([&] {
    require(s != nullptr, "null system");
    Eigen::VectorXd state;
    if (x != nullptr) {
      state = vec(x, static_cast<size_t>(s->spec.hamiltonian.size()));
    } else {
      if (s->spec.x0.size() == 0) throw Error(ErrorCode::InvalidArgument, "no state given and the file has no x0");
      state = s->spec.x0;
    }
    MinimizerOptions opts;
    opts.allow_numeric_inversion = numeric_inversion != 0;
    const StorageResult r = s->spec.source_edges ? available_storage_generalized(generalized_of(s), state, opts)
                                                 : available_storage_general(s->spec.hamiltonian, state, opts);
    write_storage(r, value, minimizer, lambda);
  });
}

pn_status pn_available_storage(const pn_hamiltonian* h, const double* x, int numeric_inversion, double* value,
                               double* minimizer, double* lambda) {
  return guard([&] {
    require(h != nullptr, "null Hamiltonian");
    MinimizerOptions opts;
    opts.allow_numeric_inversion = numeric_inversion != 0;
    write_storage(available_storage_general(h->h, vec(x, static_cast<size_t>(h->h.size())), opts), value, minimizer,
                  lambda);
  });
}

pn_status pn_motion_energy(size_t n, size_t d, const double* masses, const double* p, double* out) {
  return guard([&] {
    require(out != nullptr && p != nullptr, "null argument");
    const Eigen::MatrixXd momenta = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        p, static_cast<Index>(n), static_cast<Index>(d));
    *out = motion_energy(vec(masses, n), momenta);
  });
}

pn_status pn_complex_from_json(const char* text, pn_complex** out) {
  return guard([&] {
    require(text != nullptr && out != nullptr, "null argument");
    *out = new pn_complex{io::complex_from_json(io::parse_json(text))};
  });
}

void pn_complex_free(pn_complex* c) { delete c; }
size_t pn_complex_level(const pn_complex* c) { return c ? static_cast<size_t>(c->spec.complex.level()) : 0; }

size_t pn_complex_cell_count(const pn_complex* c, size_t j) {
  if (c == nullptr) return 0;
  const auto counts = c->spec.complex.cell_counts();
  return j < counts.size() ? static_cast<size_t>(counts[j]) : 0;
}

pn_status pn_complex_boundary(const pn_complex* c, size_t j, int* out) {
  return guard([&] {
    require(c != nullptr && out != nullptr, "null argument");
    copy_out(c->spec.complex.boundary(static_cast<Index>(j)), out);
  });
}

pn_status pn_complex_validate(const pn_complex* c, int* valid) {
  return guard([&] {
    require(c != nullptr && valid != nullptr, "null argument");
    *valid = validate_complex(c->spec.complex) ? 1 : 0;
  });
}

int pn_complex_u0(const pn_complex* c, double* out) {
  if (c == nullptr || !c->spec.u0) return 0;
  copy_out(*c->spec.u0, out);
  return 1;
}

namespace {

HeatComplexSystem heat_system(const pn_complex* c) {
  const io::ComplexSpec& s = c->spec;
  if (s.insulated_boundary) return HeatComplexSystem::with_defaults(s.complex, s.conduction);
  if (s.complex.level() != 2) throw Error(ErrorCode::LevelOutOfRange, "heat transfer is defined on a 2-complex");
  const IntMatrix& faces = s.complex.boundary(2);
  return {s.complex, uniform_conduction(faces.rows(), s.conduction), log_entropy(faces.cols())};
}

}  // namespace

pn_status pn_complex_entropy_rate(const pn_complex* c, const double* u, double* out) {
  return guard([&] {
    require(c != nullptr && out != nullptr, "null argument");
    const HeatComplexSystem sys = heat_system(c);
    *out = entropy_rate(sys, vec(u, static_cast<size_t>(sys.complex.boundary(2).cols())));
  });
}

pn_status pn_complex_heat_simulate(const pn_complex* c, const double* u0, double dt, double horizon,
                                   pn_trajectory** out) {
  return guard([&] {
    require(c != nullptr && out != nullptr, "null argument");
    *out = nullptr;
    const HeatComplexSystem sys = heat_system(c);
    Eigen::VectorXd start;
    if (u0 != nullptr) {
      start = vec(u0, static_cast<size_t>(sys.complex.boundary(2).cols()));
    } else {
      if (!c->spec.u0) throw Error(ErrorCode::ParseError, "field 'u0': missing");
      start = *c->spec.u0;
    }
    const double step = dt > 0.0 ? dt : c->spec.dt.value_or(0.0);
    const double end = horizon > 0.0 ? horizon : c->spec.horizon.value_or(0.0);
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidArgument, "a positive time step is required");
    if (!(end > 0.0)) throw Error(ErrorCode::InvalidArgument, "a positive horizon is required");
    run_simulation(out, [&] { return simulate_heat(sys, start, step, end); });
  });
}

}  // extern "C"
