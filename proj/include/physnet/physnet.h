#ifndef PHYSNET_H
#define PHYSNET_H

/*
 * C interface to the physnet library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a pn_status; on failure pn_last_error() holds a
 * message for the calling thread. Vertex and edge indices are 1-based here,
 * matrices are dense row-major arrays of doubles.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(PHYSNET_BUILDING)
#    define PN_API __declspec(dllexport)
#  else
#    define PN_API __declspec(dllimport)
#  endif
#else
#  define PN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values double as the command-line exit codes. */
typedef enum pn_status {
  PN_OK = 0,
  PN_ERROR_ARGUMENT = 1,
  PN_ERROR_PARSE = 2,
  PN_ERROR_STRUCTURE = 3,
  PN_ERROR_NUMERIC = 4,
  PN_ERROR_CONTROLLABILITY = 5,
  PN_ERROR_SPEC_INCOMPLETE = 6
} pn_status;

typedef enum pn_kind {
  PN_KIND_SYMMETRIC = 0,
  PN_KIND_FLOW = 1,
  PN_KIND_CONSENSUS = 2,
  PN_KIND_BALANCED = 3
} pn_kind;

typedef struct pn_graph pn_graph;
typedef struct pn_matrix pn_matrix;
typedef struct pn_hamiltonian pn_hamiltonian;
typedef struct pn_trajectory pn_trajectory;
typedef struct pn_system pn_system;
typedef struct pn_complex pn_complex;

PN_API const char* pn_version(void);
/* Message and error name of the last failure on this thread; "" if none. */
PN_API const char* pn_last_error(void);
PN_API const char* pn_last_error_name(void);
PN_API const char* pn_kind_name(pn_kind kind);
/* Returns PN_ERROR_ARGUMENT for unknown names. */
PN_API pn_status pn_parse_kind(const char* name, pn_kind* out);
/* Strings returned through char** are owned by the caller. */
PN_API void pn_string_free(char* s);

/* ---- graphs ---- */

/* weights may be NULL (all 1.0). */
PN_API pn_status pn_graph_create(size_t n, size_t m, const size_t* tails, const size_t* heads, const double* weights,
                                 pn_graph** out);
PN_API pn_status pn_graph_from_json(const char* text, pn_graph** out);
PN_API void pn_graph_free(pn_graph* g);
PN_API size_t pn_graph_vertex_count(const pn_graph* g);
PN_API size_t pn_graph_edge_count(const pn_graph* g);
PN_API pn_status pn_graph_to_json(const pn_graph* g, char** out);
/* n*m entries, row-major. */
PN_API pn_status pn_graph_incidence(const pn_graph* g, int* out);
/* labels[i] is the 1-based block of vertex i+1; blocks ordered by their
   smallest vertex. strong = 0 gives weak components. */
PN_API pn_status pn_graph_components(const pn_graph* g, int strong, size_t* labels, size_t* count);

/* ---- Laplacians ---- */

PN_API pn_status pn_matrix_create(size_t rows, size_t cols, const double* data, pn_kind kind, pn_matrix** out);
/* PN_KIND_BALANCED builds the flow-Laplacian and balances it. */
PN_API pn_status pn_laplacian(const pn_graph* g, pn_kind kind, pn_matrix** out);
/* Accepts a Laplacian document {"kind", "entries"|"graph"} or a bare graph
   document, which is turned into a Laplacian of kind graph_kind. */
PN_API pn_status pn_laplacian_from_json(const char* text, pn_kind graph_kind, pn_matrix** out);
PN_API void pn_matrix_free(pn_matrix* l);
PN_API size_t pn_matrix_rows(const pn_matrix* l);
PN_API size_t pn_matrix_cols(const pn_matrix* l);
PN_API pn_kind pn_matrix_kind(const pn_matrix* l);
/* rows*cols entries, row-major, valid while the handle lives. */
PN_API const double* pn_matrix_data(const pn_matrix* l);
PN_API pn_status pn_matrix_to_json(const pn_matrix* l, char** out);

/* tolerance <= 0 selects the default scale-aware tolerance. */
PN_API pn_status pn_is_balanced(const pn_matrix* l, double tolerance, int* out);
PN_API pn_status pn_symmetric_min_eigenvalue(const pn_matrix* l, double* out);
/* Tree-weight kernel vector; consensus Laplacians use the left kernel and
   disconnected inputs are handled one weak component at a time. raw and
   normalized hold n entries each and may be NULL. jobs = 0 means 1. */
PN_API pn_status pn_sigma(const pn_matrix* l, unsigned jobs, double* raw, double* normalized, int* strictly_positive);
/* L Sigma; sigma (n entries, may be NULL) receives the diagonal used. */
PN_API pn_status pn_balance(const pn_matrix* l, int normalized, pn_matrix** out, double* sigma);
PN_API pn_status pn_consensus_value(const pn_matrix* lc, const double* x0, double* out);
PN_API pn_status pn_jr_decomposition(const pn_matrix* balanced, pn_matrix** j, pn_matrix** r);
PN_API pn_status pn_metzler_augment(const pn_matrix* m, pn_matrix** out);

/* ---- Hamiltonians ---- */

PN_API pn_status pn_hamiltonian_quadratic(size_t n, const double* coefficients, pn_hamiltonian** out);
PN_API pn_status pn_hamiltonian_kinetic(size_t n, const double* masses, pn_hamiltonian** out);
PN_API pn_status pn_hamiltonian_exponential(size_t n, pn_hamiltonian** out);

/* Separable H(x) = sum_i value(x_i, i). inverse_gradient and curvature may be
   NULL. userdata must outlive the handle. */
typedef double (*pn_scalar_fn)(double x, size_t component, void* userdata);
PN_API pn_status pn_hamiltonian_custom(size_t n, pn_scalar_fn value, pn_scalar_fn gradient,
                                       pn_scalar_fn inverse_gradient, pn_scalar_fn curvature, void* userdata,
                                       pn_hamiltonian** out);
PN_API void pn_hamiltonian_free(pn_hamiltonian* h);
PN_API size_t pn_hamiltonian_size(const pn_hamiltonian* h);
PN_API pn_status pn_hamiltonian_evaluate(const pn_hamiltonian* h, const double* x, double* out);
PN_API pn_status pn_hamiltonian_gradient(const pn_hamiltonian* h, const double* x, double* out);

/* ---- simulation ---- */

/* x' = -L dH(x) by fixed-step RK4 on [0, horizon]. dt <= 0 selects
   1e-3 / ||L||_inf. On PN_ERROR_NUMERIC *out holds the partial trajectory up
   to the last finite state. */
PN_API pn_status pn_simulate(const pn_matrix* l, const pn_hamiltonian* h, const double* x0, double dt, double horizon,
                             int stop_on_convergence, pn_trajectory** out);
PN_API pn_status pn_default_time_step(const pn_matrix* l, double* out);
/* Largest |w^T x(t) - w^T x(0)| with the conserved weights of l. */
PN_API pn_status pn_conserved_drift(const pn_matrix* l, const pn_trajectory* t, double* out);
PN_API pn_status pn_lyapunov_rate(const pn_matrix* l, const pn_hamiltonian* h, const double* x, double* out);

PN_API void pn_trajectory_free(pn_trajectory* t);
PN_API size_t pn_trajectory_length(const pn_trajectory* t);
PN_API size_t pn_trajectory_dimension(const pn_trajectory* t);
PN_API int pn_trajectory_converged_early(const pn_trajectory* t);
/* length entries. */
PN_API const double* pn_trajectory_times(const pn_trajectory* t);
/* length*dimension entries, one row per sample. */
PN_API const double* pn_trajectory_states(const pn_trajectory* t);
PN_API size_t pn_trajectory_diagnostic_count(const pn_trajectory* t);
PN_API const char* pn_trajectory_diagnostic_name(const pn_trajectory* t, size_t k);
PN_API const double* pn_trajectory_diagnostic(const pn_trajectory* t, size_t k);
/* Header t,x1..xn,<diagnostics>; 17 significant digits. */
PN_API pn_status pn_trajectory_to_csv(const pn_trajectory* t, char** out);

/* ---- system files ---- */

/* graph_kind is used when the document carries a graph but no Laplacian. */
PN_API pn_status pn_system_from_json(const char* text, pn_kind graph_kind, pn_system** out);
PN_API void pn_system_free(pn_system* s);
PN_API size_t pn_system_size(const pn_system* s);
/* Return 1 and write the value when the document provides it, else 0. */
PN_API int pn_system_x0(const pn_system* s, double* out);
PN_API int pn_system_dt(const pn_system* s, double* out);
PN_API int pn_system_horizon(const pn_system* s, double* out);
/* 1 when the document lists flow-source edges. */
PN_API int pn_system_is_generalized(const pn_system* s);
PN_API pn_status pn_system_laplacian(const pn_system* s, pn_matrix** out);
PN_API pn_status pn_system_hamiltonian(const pn_system* s, pn_hamiltonian** out);
PN_API pn_status pn_system_controllable(const pn_system* s, int* out);
/* Available storage at x (NULL: the document's x0). Generalized systems are
   refused with PN_ERROR_CONTROLLABILITY when not controllable. minimizer may
   be NULL. */
PN_API pn_status pn_system_storage(const pn_system* s, const double* x, int numeric_inversion, double* value,
                                   double* minimizer, double* lambda);

PN_API pn_status pn_available_storage(const pn_hamiltonian* h, const double* x, int numeric_inversion, double* value,
                                      double* minimizer, double* lambda);
/* p is n x d row-major. */
PN_API pn_status pn_motion_energy(size_t n, size_t d, const double* masses, const double* p, double* out);

/* ---- chain complexes ---- */

PN_API pn_status pn_complex_from_json(const char* text, pn_complex** out);
PN_API void pn_complex_free(pn_complex* c);
PN_API size_t pn_complex_level(const pn_complex* c);
/* Number of j-cells, 0 <= j <= level. */
PN_API size_t pn_complex_cell_count(const pn_complex* c, size_t j);
/* Boundary map j (1-based level), row-major integer entries. */
PN_API pn_status pn_complex_boundary(const pn_complex* c, size_t j, int* out);
PN_API pn_status pn_complex_validate(const pn_complex* c, int* valid);
/* 1 and the value when the document provides u0, else 0. */
PN_API int pn_complex_u0(const pn_complex* c, double* out);
PN_API pn_status pn_complex_entropy_rate(const pn_complex* c, const double* u, double* out);
/* Heat flow between faces with log entropy. u0 NULL uses the document's u0;
   dt or horizon <= 0 use the document's values. */
PN_API pn_status pn_complex_heat_simulate(const pn_complex* c, const double* u0, double dt, double horizon,
                                          pn_trajectory** out);

#ifdef __cplusplus
}
#endif

#endif
