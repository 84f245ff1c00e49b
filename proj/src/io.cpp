#include "physnet/io.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "physnet/error.hpp"

namespace physnet::io {

namespace {

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema_error(path.empty() ? "<root>" : path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

const Json* optional_field(const Json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return (it == j.end() || it->is_null()) ? nullptr : &*it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

long long as_integer(const Json& j, const std::string& field) {
  if (j.is_number_integer() || j.is_number_unsigned()) return j.get<long long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v) return static_cast<long long>(v);
  }
  schema_error(field, "expected an integer");
}

double as_number(const Json& j, const std::string& field) {
  if (!j.is_number()) schema_error(field, "expected a number");
  return j.get<double>();
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorCode::ParseError,
                "syntax error at line " + std::to_string(line) + ", column " + std::to_string(column));
  }
}

DirectedGraph graph_from_json(const Json& j) {
  const long long n = as_integer(require(j, "n", ""), "n");
  if (n < 1) schema_error("n", "must be at least 1");
  const Json& edges = require(j, "edges", "");
  if (!edges.is_array()) schema_error("edges", "expected an array");
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string path = "edges[" + std::to_string(k) + "]";
    const Json& e = edges[k];
    const long long tail = as_integer(require(e, "tail", path), path + ".tail");
    const long long head = as_integer(require(e, "head", path), path + ".head");
    double weight = 1.0;
    if (const Json* w = optional_field(e, "weight")) weight = as_number(*w, path + ".weight");
    for (const auto& [end, v] : {std::pair{".tail", tail}, std::pair{".head", head}}) {
      if (v < 1 || v > n) {
        throw Error(ErrorCode::IndexOutOfRange, "field '" + path + end + "': vertex " + std::to_string(v) +
                                                    " outside 1.." + std::to_string(n));
      }
    }
    if (tail == head) throw Error(ErrorCode::SelfLoop, "field '" + path + "': tail equals head");
    if (!(weight > 0.0)) throw Error(ErrorCode::NonPositiveWeight, "field '" + path + ".weight': must be positive");
    list.push_back({static_cast<Index>(tail - 1), static_cast<Index>(head - 1), weight});
  }
  return DirectedGraph(static_cast<Index>(n), std::move(list));
}

Json graph_to_json(const DirectedGraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"tail", e.tail + 1}, {"head", e.head + 1}, {"weight", e.weight}});
  return {{"n", g.vertex_count()}, {"edges", edges}};
}

Eigen::MatrixXd matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) schema_error(field, "expected an array of rows");
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  Eigen::MatrixXd m;
  for (Index i = 0; i < rows; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    const std::string rpath = field + "[" + std::to_string(i) + "]";
    if (!row.is_array()) schema_error(rpath, "expected an array");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      schema_error(rpath, "row length " + std::to_string(row.size()) + " differs from " + std::to_string(cols));
    }
    for (Index c = 0; c < cols; ++c) {
      m(i, c) = as_number(row[static_cast<std::size_t>(c)], rpath + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

Eigen::VectorXd vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) schema_error(field, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) v(static_cast<Index>(k)) = as_number(j[k], field + "[" + std::to_string(k) + "]");
  return v;
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

namespace {

LaplacianMatrix laplacian_at(const Json& j, const std::string& path) {
  const Json& kind_field = require(j, "kind", path);
  if (!kind_field.is_string()) schema_error(join(path, "kind"), "expected a string");
  const auto kind = parse_kind(kind_field.get<std::string>());
  if (!kind) schema_error(join(path, "kind"), "unknown kind '" + kind_field.get<std::string>() + "'");

  if (const Json* g = optional_field(j, "graph")) {
    DirectedGraph graph = [&] {
      try {
        return graph_from_json(*g);
      } catch (const Error& e) {
        throw Error(e.code(), join(path, "graph") + ": " + e.what());
      }
    }();
    switch (*kind) {
      case LaplacianKind::Symmetric: return symmetric_laplacian(graph);
      case LaplacianKind::Flow: return flow_laplacian(graph);
      case LaplacianKind::Consensus: return consensus_laplacian(graph);
      case LaplacianKind::Balanced: return balance(flow_laplacian(graph)).balanced;
    }
  }
  const Json& entries = require(j, "entries", path);
  Eigen::MatrixXd m = matrix_from_json(entries, join(path, "entries"));
  if (m.rows() != m.cols() || m.rows() == 0) schema_error(join(path, "entries"), "expected a non-empty square matrix");
  return {std::move(m), *kind, "json"};
}

}  // namespace

LaplacianMatrix laplacian_from_json(const Json& j) { return laplacian_at(j, ""); }

Json laplacian_to_json(const LaplacianMatrix& l) {
  return {{"kind", std::string(kind_name(l.kind))}, {"entries", matrix_to_json(l.entries)}};
}

namespace {

Eigen::VectorXd params_vector(const Json* params, const char* key, Index n, const std::string& path, double fill) {
  if (params == nullptr) return Eigen::VectorXd::Constant(n, fill);
  if (params->is_number()) return Eigen::VectorXd::Constant(n, params->get<double>());
  const Json* source = params;
  std::string field = path;
  if (params->is_object()) {
    source = &require(*params, key, path);
    field = join(path, key);
  }
  Eigen::VectorXd v = vector_from_json(*source, field);
  if (v.size() != n) schema_error(field, "expected " + std::to_string(n) + " entries, got " + std::to_string(v.size()));
  return v;
}

Hamiltonian hamiltonian_at(const Json& j, Index n, const std::string& path) {
  const Json& kind_field = require(j, "kind", path);
  if (!kind_field.is_string()) schema_error(join(path, "kind"), "expected a string");
  const std::string kind = kind_field.get<std::string>();
  const Json* params = optional_field(j, "params");
  const std::string ppath = join(path, "params");
  if (kind == "quadratic") {
    return Hamiltonian::quadratic(params_vector(params, "coefficients", n, ppath, 1.0));
  }
  if (kind == "kinetic") {
    if (params == nullptr) schema_error(ppath, "kinetic energy needs masses");
    return Hamiltonian::kinetic(params_vector(params, "masses", n, ppath, 1.0));
  }
  if (kind == "exponential") return Hamiltonian::exponential(n);
  if (kind == "polynomial") {
    // H_i(x) = sum_k a_k x^k, the same for every component. No inverse gradient.
    if (params == nullptr) schema_error(ppath, "polynomial needs coefficients");
    const Json& coeffs = params->is_object() ? require(*params, "coefficients", ppath) : *params;
    const Eigen::VectorXd a = vector_from_json(coeffs, params->is_object() ? join(ppath, "coefficients") : ppath);
    if (a.size() < 3) schema_error(ppath, "a convex polynomial needs degree two or more");
    auto horner = [](const Eigen::VectorXd& c, double x) {
      double acc = 0.0;
      for (Index k = c.size() - 1; k >= 0; --k) acc = acc * x + c(k);
      return acc;
    };
    Eigen::VectorXd da(a.size() - 1);
    for (Index k = 1; k < a.size(); ++k) da(k - 1) = static_cast<double>(k) * a(k);
    Eigen::VectorXd dda(da.size() - 1);
    for (Index k = 1; k < da.size(); ++k) dda(k - 1) = static_cast<double>(k) * da(k);
    ScalarComponent c{[a, horner](double x) { return horner(a, x); }, [da, horner](double x) { return horner(da, x); },
                      nullptr, [dda, horner](double x) { return horner(dda, x); }};
    return Hamiltonian::custom(std::vector<ScalarComponent>(static_cast<std::size_t>(n), c));
  }
  schema_error(join(path, "kind"), "unknown Hamiltonian kind '" + kind + "'");
}

}  // namespace

Hamiltonian hamiltonian_from_json(const Json& j, Index n) { return hamiltonian_at(j, n, ""); }

SystemSpec system_from_json(const Json& j) {
  if (!j.is_object()) schema_error("<root>", "expected an object");
  SystemSpec spec;
  if (const Json* g = optional_field(j, "graph")) spec.graph = graph_from_json(*g);
  if (const Json* l = optional_field(j, "laplacian")) {
    spec.laplacian = laplacian_at(*l, "laplacian");
    if (!spec.graph) {
      if (const Json* lg = optional_field(*l, "graph")) spec.graph = graph_from_json(*lg);
    }
  }
  if (const Json* x0 = optional_field(j, "x0")) spec.x0 = vector_from_json(*x0, "x0");
  if (const Json* dt = optional_field(j, "dt")) spec.dt = as_number(*dt, "dt");
  if (const Json* t = optional_field(j, "T")) spec.horizon = as_number(*t, "T");

  Index n = -1;
  if (spec.laplacian) n = spec.laplacian->size();
  else if (spec.graph) n = spec.graph->vertex_count();
  else if (spec.x0.size() > 0) n = spec.x0.size();
  if (n < 1) schema_error("laplacian", "cannot determine the system size");
  if (spec.graph && spec.graph->vertex_count() != n) schema_error("graph.n", "differs from the Laplacian size");
  if (spec.x0.size() > 0 && spec.x0.size() != n) {
    schema_error("x0", "expected " + std::to_string(n) + " entries, got " + std::to_string(spec.x0.size()));
  }
  spec.hamiltonian = hamiltonian_at(require(j, "hamiltonian", ""), n, "hamiltonian");

  if (const Json* s = optional_field(j, "sources")) {
    if (!spec.graph) schema_error("sources", "a split needs a graph");
    if (!s->is_array()) schema_error("sources", "expected an array of edge indices");
    std::vector<Index> sources;
    for (std::size_t k = 0; k < s->size(); ++k) {
      const std::string field = "sources[" + std::to_string(k) + "]";
      const long long e = as_integer((*s)[k], field);
      if (e < 1 || e > spec.graph->edge_count()) schema_error(field, "edge " + std::to_string(e) + " does not exist");
      sources.push_back(static_cast<Index>(e - 1));
    }
    spec.source_edges = std::move(sources);
  }
  return spec;
}

ComplexSpec complex_from_json(const Json& j) {
  const Json& cells_field = require(j, "cells", "");
  if (!cells_field.is_array() || cells_field.size() < 2) schema_error("cells", "expected at least two cell counts");
  std::vector<Index> cells;
  for (std::size_t k = 0; k < cells_field.size(); ++k) {
    const long long c = as_integer(cells_field[k], "cells[" + std::to_string(k) + "]");
    if (c < 0) schema_error("cells[" + std::to_string(k) + "]", "must be nonnegative");
    cells.push_back(static_cast<Index>(c));
  }
  const Json& bounds = require(j, "boundaries", "");
  std::vector<IntMatrix> maps;
  for (std::size_t level = 1; level < cells.size(); ++level) {
    const std::string key = "d" + std::to_string(level);
    const std::string field = "boundaries." + key;
    const Eigen::MatrixXd m = matrix_from_json(require(bounds, key, "boundaries"), field);
    const Index rows = cells[level - 1];
    const Index cols = cells[level];
    // An empty row list cannot carry a column count.
    if (!(m.rows() == rows && (m.cols() == cols || rows == 0))) {
      throw Error(ErrorCode::DimensionChainBroken, "field '" + field + "': expected " + std::to_string(rows) + "x" +
                                                       std::to_string(cols) + ", got " + std::to_string(m.rows()) +
                                                       "x" + std::to_string(m.cols()));
    }
    IntMatrix b = IntMatrix::Zero(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        if (std::floor(m(r, c)) != m(r, c)) {
          schema_error(field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]", "expected an integer");
        }
        b(r, c) = static_cast<int>(m(r, c));
      }
    }
    maps.push_back(std::move(b));
  }
  ComplexSpec spec{ChainComplex(std::move(maps)), std::nullopt, std::nullopt, std::nullopt, 1.0, true};
  if (const Json* u0 = optional_field(j, "u0")) spec.u0 = vector_from_json(*u0, "u0");
  if (const Json* dt = optional_field(j, "dt")) spec.dt = as_number(*dt, "dt");
  if (const Json* t = optional_field(j, "T")) spec.horizon = as_number(*t, "T");
  if (const Json* k = optional_field(j, "conduction")) spec.conduction = as_number(*k, "conduction");
  if (const Json* b = optional_field(j, "boundary")) {
    if (!b->is_string()) schema_error("boundary", "expected a string");
    const std::string mode = b->get<std::string>();
    if (mode == "insulated") spec.insulated_boundary = true;
    else if (mode == "conducting") spec.insulated_boundary = false;
    else schema_error("boundary", "expected 'insulated' or 'conducting'");
  }
  return spec;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t";
  for (Index i = 0; i < traj.dimension(); ++i) out << ",x" << (i + 1);
  for (const auto& name : traj.diagnostic_names) out << "," << name;
  out << "\n";
  for (std::size_t k = 0; k < traj.length(); ++k) {
    out << format_double(traj.times[k]);
    const Eigen::VectorXd& x = traj.states[k];
    for (Index i = 0; i < x.size(); ++i) out << "," << format_double(x(i));
    for (const auto& series : traj.diagnostics) out << "," << format_double(series[k]);
    out << "\n";
  }
}

}  // namespace physnet::io
