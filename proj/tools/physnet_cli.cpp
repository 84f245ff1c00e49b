// physnet-cli: command-line front end over the physnet C API.
//
// Exit codes: 0 ok, 1 bad arguments, 2 parse, 3 structure, 4 numeric,
// 5 not controllable, 6 missing model information (no inverse gradient).

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "physnet/physnet.h"

using Json = nlohmann::json;

namespace {

struct Failure {
  int code;
  std::string message;
};

void check(pn_status s) {
  if (s != PN_OK) throw Failure{static_cast<int>(s), pn_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Graph = std::unique_ptr<pn_graph, Deleter<pn_graph, pn_graph_free>>;
using Matrix = std::unique_ptr<pn_matrix, Deleter<pn_matrix, pn_matrix_free>>;
using Ham = std::unique_ptr<pn_hamiltonian, Deleter<pn_hamiltonian, pn_hamiltonian_free>>;
using Traj = std::unique_ptr<pn_trajectory, Deleter<pn_trajectory, pn_trajectory_free>>;
using System = std::unique_ptr<pn_system, Deleter<pn_system, pn_system_free>>;
using Complex = std::unique_ptr<pn_complex, Deleter<pn_complex, pn_complex_free>>;

struct Globals {
  std::string input;
  std::string output;
  double tolerance = 0.0;
  unsigned jobs = 1;
};

std::string read_input(const Globals& g) {
  if (g.input.empty() || g.input == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(g.input, std::ios::binary);
  if (!in) throw Failure{2, "cannot open input file '" + g.input + "'"};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{1, "cannot open output file '" + path + "'"};
  out << text;
}

void emit(const Globals& g, const Json& j) { write_text(g.output, j.dump(2) + "\n"); }

Json array(const double* data, std::size_t n) { return Json(std::vector<double>(data, data + n)); }

Json matrix_json(const pn_matrix* m) {
  const std::size_t rows = pn_matrix_rows(m);
  const std::size_t cols = pn_matrix_cols(m);
  const double* d = pn_matrix_data(m);
  Json out = Json::array();
  for (std::size_t i = 0; i < rows; ++i) out.push_back(array(d + i * cols, cols));
  return out;
}

Json laplacian_json(const pn_matrix* m) {
  return {{"kind", pn_kind_name(pn_matrix_kind(m))}, {"entries", matrix_json(m)}};
}

pn_kind kind_of(const std::string& name) {
  pn_kind k = PN_KIND_FLOW;
  if (pn_parse_kind(name.c_str(), &k) != PN_OK) throw Failure{1, pn_last_error()};
  return k;
}

Matrix load_laplacian(const Globals& g, const std::string& kind) {
  pn_matrix* m = nullptr;
  check(pn_laplacian_from_json(read_input(g).c_str(), kind_of(kind), &m));
  return Matrix(m);
}

System load_system(const Globals& g, const std::string& kind) {
  pn_system* s = nullptr;
  check(pn_system_from_json(read_input(g).c_str(), kind_of(kind), &s));
  return System(s);
}

struct SigmaReport {
  std::vector<double> raw;
  std::vector<double> normalized;
  bool strictly_positive = false;
};

SigmaReport sigma_of(const pn_matrix* l, unsigned jobs) {
  SigmaReport r;
  r.raw.resize(pn_matrix_rows(l));
  r.normalized.resize(r.raw.size());
  int positive = 0;
  check(pn_sigma(l, jobs, r.raw.data(), r.normalized.data(), &positive));
  r.strictly_positive = positive != 0;
  return r;
}

// Trajectory CSV to the output file (stdout when none) and the summary to
// stdout (stderr when the CSV already took stdout).
void write_run(const Globals& g, const pn_trajectory* t, const Json& summary) {
  char* csv = nullptr;
  check(pn_trajectory_to_csv(t, &csv));
  std::unique_ptr<char, void (*)(char*)> owned(csv, pn_string_free);
  write_text(g.output, csv);
  const std::string line = summary.dump() + "\n";
  if (g.output.empty() || g.output == "-") std::cerr << line;
  else std::cout << line;
}

const double* diagnostic(const pn_trajectory* t, const std::string& name) {
  for (std::size_t k = 0; k < pn_trajectory_diagnostic_count(t); ++k) {
    if (name == pn_trajectory_diagnostic_name(t, k)) return pn_trajectory_diagnostic(t, k);
  }
  return nullptr;
}

Json final_state(const pn_trajectory* t) {
  const std::size_t n = pn_trajectory_dimension(t);
  const std::size_t len = pn_trajectory_length(t);
  if (len == 0) return Json::array();
  return array(pn_trajectory_states(t) + (len - 1) * n, n);
}

int cmd_analyze(const Globals& g, const std::string& kind, bool require_balanceable, const std::vector<double>& x0) {
  const std::string text = read_input(g);
  pn_graph* raw_graph = nullptr;
  check(pn_graph_from_json(text.c_str(), &raw_graph));
  Graph graph(raw_graph);
  const std::size_t n = pn_graph_vertex_count(graph.get());

  std::size_t weak = 0;
  std::size_t strong = 0;
  std::vector<std::size_t> weak_labels(n);
  std::vector<std::size_t> strong_labels(n);
  check(pn_graph_components(graph.get(), 0, weak_labels.data(), &weak));
  check(pn_graph_components(graph.get(), 1, strong_labels.data(), &strong));

  pn_matrix* raw_l = nullptr;
  check(pn_laplacian(graph.get(), kind_of(kind), &raw_l));
  Matrix l(raw_l);
  const SigmaReport s = sigma_of(l.get(), g.jobs);
  int balanced = 0;
  check(pn_is_balanced(l.get(), g.tolerance, &balanced));
  double min_eig = 0.0;
  check(pn_symmetric_min_eigenvalue(l.get(), &min_eig));

  bool balanceable = false;
  if (pn_matrix_kind(l.get()) == PN_KIND_FLOW || pn_matrix_kind(l.get()) == PN_KIND_BALANCED) {
    pn_matrix* b = nullptr;
    const pn_status st = pn_balance(l.get(), 0, &b, nullptr);
    if (st == PN_OK) {
      balanceable = true;
      pn_matrix_free(b);
    } else if (st != PN_ERROR_STRUCTURE) {
      check(st);
    }
  } else {
    balanceable = weak == strong;
  }

  Json report = {{"vertices", n},
                 {"edges", pn_graph_edge_count(graph.get())},
                 {"weak_components", weak},
                 {"strong_components", strong},
                 {"weak_labels", weak_labels},
                 {"strong_labels", strong_labels},
                 {"strongly_connected", strong == 1},
                 {"kind", pn_kind_name(pn_matrix_kind(l.get()))},
                 {"sigma", s.raw},
                 {"normalized", s.normalized},
                 {"strictly_positive", s.strictly_positive},
                 {"balanced", balanced != 0},
                 {"balanceable", balanceable},
                 {"symmetric_min_eigenvalue", min_eig}};
  if (pn_matrix_kind(l.get()) == PN_KIND_CONSENSUS && !x0.empty()) {
    if (x0.size() != n) throw Failure{1, "--x0 needs " + std::to_string(n) + " values"};
    double value = 0.0;
    check(pn_consensus_value(l.get(), x0.data(), &value));
    report["consensus_value"] = value;
  }
  emit(g, report);
  if (require_balanceable && !balanceable) {
    std::cerr << "error: graph is not balanceable (weak and strong components differ)\n";
    return 3;
  }
  return 0;
}

int cmd_laplacian(const Globals& g, const std::string& kind) {
  emit(g, laplacian_json(load_laplacian(g, kind).get()));
  return 0;
}

int cmd_sigma(const Globals& g, const std::string& kind) {
  const Matrix l = load_laplacian(g, kind);
  const SigmaReport s = sigma_of(l.get(), g.jobs);
  emit(g, {{"sigma", s.raw}, {"normalized", s.normalized}, {"strictly_positive", s.strictly_positive}});
  return 0;
}

int cmd_balance(const Globals& g, const std::string& kind, bool normalized) {
  const Matrix l = load_laplacian(g, kind);
  std::vector<double> sigma(pn_matrix_rows(l.get()));
  pn_matrix* b = nullptr;
  check(pn_balance(l.get(), normalized ? 1 : 0, &b, sigma.data()));
  Matrix balanced(b);
  int ok = 0;
  check(pn_is_balanced(balanced.get(), g.tolerance, &ok));
  Json out = laplacian_json(balanced.get());
  out["sigma"] = sigma;
  out["balanced"] = ok != 0;
  emit(g, out);
  return 0;
}

int cmd_simulate(const Globals& g, const std::string& kind, std::optional<double> dt, std::optional<double> horizon,
                 bool stop) {
  const System sys = load_system(g, kind);
  pn_matrix* raw_l = nullptr;
  check(pn_system_laplacian(sys.get(), &raw_l));
  Matrix l(raw_l);
  pn_hamiltonian* raw_h = nullptr;
  check(pn_system_hamiltonian(sys.get(), &raw_h));
  Ham h(raw_h);

  const std::size_t n = pn_system_size(sys.get());
  std::vector<double> x0(n);
  if (!pn_system_x0(sys.get(), x0.data())) throw Failure{2, "field 'x0': missing"};
  double file_dt = 0.0;
  double file_t = 0.0;
  const double step = dt ? *dt : (pn_system_dt(sys.get(), &file_dt) ? file_dt : 0.0);
  if (!horizon && !pn_system_horizon(sys.get(), &file_t)) throw Failure{2, "field 'T': missing (or pass --T)"};
  const double end = horizon ? *horizon : file_t;
  if (dt && !(*dt > 0.0)) throw Failure{1, "--dt must be positive"};
  if (!(end > 0.0)) throw Failure{1, "the horizon T must be positive"};

  pn_trajectory* raw_t = nullptr;
  const pn_status st = pn_simulate(l.get(), h.get(), x0.data(), step, end, stop ? 1 : 0, &raw_t);
  Traj t(raw_t);
  if (st != PN_OK) {
    const std::string message = pn_last_error();
    if (t) write_run(g, t.get(), {{"error", message}, {"samples", pn_trajectory_length(t.get())}});
    throw Failure{static_cast<int>(st), message};
  }

  const std::size_t len = pn_trajectory_length(t.get());
  std::vector<double> grad(n);
  const double* xs = pn_trajectory_states(t.get());
  check(pn_hamiltonian_gradient(h.get(), xs + (len - 1) * n, grad.data()));
  const double* energy = diagnostic(t.get(), "H");
  double drift = 0.0;
  check(pn_conserved_drift(l.get(), t.get(), &drift));
  Json summary = {{"final_time", pn_trajectory_times(t.get())[len - 1]},
                  {"final_state", final_state(t.get())},
                  {"final_gradient", grad},
                  {"dissipated", energy[0] - energy[len - 1]},
                  {"conserved_drift", drift},
                  {"samples", len},
                  {"converged_early", pn_trajectory_converged_early(t.get()) != 0}};
  write_run(g, t.get(), summary);
  return 0;
}

int cmd_consensus(const Globals& g, const std::string& kind, const std::vector<double>& x_flag) {
  const System sys = load_system(g, kind);
  pn_matrix* raw_l = nullptr;
  check(pn_system_laplacian(sys.get(), &raw_l));
  Matrix l(raw_l);
  const std::size_t n = pn_matrix_rows(l.get());
  std::vector<double> x0(n);
  if (!x_flag.empty()) {
    if (x_flag.size() != n) throw Failure{1, "--x0 needs " + std::to_string(n) + " values"};
    x0 = x_flag;
  } else if (!pn_system_x0(sys.get(), x0.data())) {
    throw Failure{2, "field 'x0': missing (or pass --x0)"};
  }
  double value = 0.0;
  check(pn_consensus_value(l.get(), x0.data(), &value));
  const SigmaReport s = sigma_of(l.get(), g.jobs);
  emit(g, {{"consensus_value", value}, {"weights", s.normalized}});
  return 0;
}

int cmd_storage(const Globals& g, const std::vector<double>& x_flag, bool check_controllability, bool numeric) {
  const System sys = load_system(g, "flow");
  const std::size_t n = pn_system_size(sys.get());
  if (!x_flag.empty() && x_flag.size() != n) throw Failure{1, "--x needs " + std::to_string(n) + " values"};

  Json out = Json::object();
  if (check_controllability && pn_system_is_generalized(sys.get())) {
    int controllable = 0;
    check(pn_system_controllable(sys.get(), &controllable));
    if (!controllable) {
      emit(g, {{"controllable", false}});
      throw Failure{5, "the source/resistive split is not controllable"};
    }
    out["controllable"] = true;
  }
  double value = 0.0;
  double lambda = 0.0;
  std::vector<double> minimizer(n);
  check(pn_system_storage(sys.get(), x_flag.empty() ? nullptr : x_flag.data(), numeric ? 1 : 0, &value,
                          minimizer.data(), &lambda));
  out["value"] = value;
  out["minimizer"] = minimizer;
  out["lambda"] = lambda;
  emit(g, out);
  return 0;
}

Complex load_complex(const Globals& g) {
  pn_complex* c = nullptr;
  check(pn_complex_from_json(read_input(g).c_str(), &c));
  return Complex(c);
}

int cmd_complex_validate(const Globals& g) {
  const Complex c = load_complex(g);
  int valid = 0;
  check(pn_complex_validate(c.get(), &valid));
  std::vector<std::size_t> cells;
  for (std::size_t j = 0; j <= pn_complex_level(c.get()); ++j) cells.push_back(pn_complex_cell_count(c.get(), j));
  emit(g, {{"valid", valid != 0}, {"level", pn_complex_level(c.get())}, {"cells", cells}});
  if (!valid) {
    std::cerr << "error: consecutive boundary maps do not compose to zero\n";
    return 3;
  }
  return 0;
}

int cmd_complex_simulate(const Globals& g, std::optional<double> dt, std::optional<double> horizon) {
  const Complex c = load_complex(g);
  pn_trajectory* raw_t = nullptr;
  const pn_status st = pn_complex_heat_simulate(c.get(), nullptr, dt.value_or(0.0), horizon.value_or(0.0), &raw_t);
  Traj t(raw_t);
  if (st != PN_OK) {
    const std::string message = pn_last_error();
    if (t) write_run(g, t.get(), {{"error", message}, {"samples", pn_trajectory_length(t.get())}});
    throw Failure{static_cast<int>(st), message};
  }
  const std::size_t len = pn_trajectory_length(t.get());
  const double* entropy = diagnostic(t.get(), "entropy");
  const double* energy = diagnostic(t.get(), "energy");
  double energy_drift = 0.0;
  double min_increment = len > 1 ? entropy[1] - entropy[0] : 0.0;
  for (std::size_t k = 1; k < len; ++k) {
    energy_drift = std::max(energy_drift, std::abs(energy[k] - energy[0]));
    min_increment = std::min(min_increment, entropy[k] - entropy[k - 1]);
  }
  write_run(g, t.get(),
            {{"final_time", pn_trajectory_times(t.get())[len - 1]},
             {"final_state", final_state(t.get())},
             {"entropy_gain", entropy[len - 1] - entropy[0]},
             {"min_entropy_increment", min_increment},
             {"energy_drift", energy_drift},
             {"samples", len}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis and simulation of physical network systems"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--input,-i", g.input, "input JSON file (default: stdin)");
  app.add_option("--output,-o", g.output, "output file (default: stdout)");
  app.add_option("--tolerance", g.tolerance, "row/column sum tolerance for the balance test")
      ->check(CLI::PositiveNumber);
  app.add_option("--jobs,-j", g.jobs, "threads for cofactor evaluation")->check(CLI::Range(1u, 256u));

  std::string kind = "flow";
  const auto kinds = CLI::IsMember({"symmetric", "flow", "consensus", "balanced"});
  bool require_balanceable = false;
  std::vector<double> x0;
  auto* analyze = app.add_subcommand("analyze", "connectivity, sigma and balance report for a graph");
  analyze->add_option("--kind", kind, "Laplacian built from the graph")->check(kinds);
  analyze->add_flag("--require-balanceable", require_balanceable, "exit 3 unless weak and strong components agree");
  analyze->add_option("--x0", x0, "initial state for the consensus value")->delimiter(',');

  auto* laplacian = app.add_subcommand("laplacian", "Laplacian matrix of a graph");
  laplacian->add_option("--kind", kind)->check(kinds);

  auto* sigma = app.add_subcommand("sigma", "spanning-tree kernel vector");
  sigma->add_option("--kind", kind)->check(kinds);

  bool normalized = false;
  auto* balance_cmd = app.add_subcommand("balance", "balanced Laplacian L Sigma");
  balance_cmd->add_option("--kind", kind)->check(kinds);
  balance_cmd->add_flag("--normalized", normalized, "scale sigma to a peak of one");

  std::optional<double> dt;
  std::optional<double> horizon;
  bool stop = false;
  auto* simulate = app.add_subcommand("simulate", "RK4 run of x' = -L dH(x); CSV trajectory");
  simulate->add_option("--kind", kind, "Laplacian built from a bare graph")->check(kinds);
  simulate->add_option("--dt", dt, "time step");
  simulate->add_option("--T", horizon, "horizon");
  simulate->add_flag("--stop-on-convergence", stop, "stop once |x'| < 1e-10");

  std::string consensus_kind = "consensus";
  auto* consensus = app.add_subcommand("consensus", "asymptotic agreement value");
  consensus->add_option("--kind", consensus_kind)->check(kinds);
  consensus->add_option("--x0", x0, "initial state")->delimiter(',');

  std::vector<double> x;
  bool check_controllability = false;
  bool numeric = false;
  auto* storage = app.add_subcommand("storage", "available storage at a state");
  storage->add_option("--x", x, "state (default: x0 from the file)")->delimiter(',');
  storage->add_flag("--check-controllability", check_controllability, "report controllability of split systems");
  storage->add_flag("--numeric-inversion", numeric, "invert gradients numerically when no inverse is known");

  auto* complex = app.add_subcommand("complex", "chain complexes");
  complex->require_subcommand(1);
  auto* validate = complex->add_subcommand("validate", "check that boundary maps compose to zero");
  auto* heat = complex->add_subcommand("simulate", "heat transfer between faces; CSV trajectory");
  heat->add_option("--dt", dt, "time step");
  heat->add_option("--T", horizon, "horizon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*analyze) return cmd_analyze(g, kind, require_balanceable, x0);
    if (*laplacian) return cmd_laplacian(g, kind);
    if (*sigma) return cmd_sigma(g, kind);
    if (*balance_cmd) return cmd_balance(g, kind, normalized);
    if (*simulate) return cmd_simulate(g, kind, dt, horizon, stop);
    if (*consensus) return cmd_consensus(g, consensus_kind, x0);
    if (*storage) return cmd_storage(g, x, check_controllability, numeric);
    if (*validate) return cmd_complex_validate(g);
    if (*heat) return cmd_complex_simulate(g, dt, horizon);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 1;
}
