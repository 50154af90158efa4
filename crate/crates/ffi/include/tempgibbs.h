#ifndef TEMPGIBBS_H
#define TEMPGIBBS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TgStatus {
  TG_STATUS_OK = 0,
  TG_STATUS_NULL_POINTER = 1,
  TG_STATUS_INVALID_ARGUMENT = 2,
  TG_STATUS_VERTEX_OUT_OF_RANGE = 3,
  TG_STATUS_UNREACHABLE = 4,
  TG_STATUS_CAP_EXCEEDED = 5,
  TG_STATUS_TARGET_UNREACHABLE = 6,
  TG_STATUS_MOMENT_EXPLOSION = 7,
  TG_STATUS_NOT_INTERIOR = 8,
  TG_STATUS_PARSE = 9,
  TG_STATUS_IO = 10,
  // A Rust panic was caught at the boundary.
  TG_STATUS_INTERNAL = 11,
} TgStatus;

typedef enum TgVerdict {
  TG_VERDICT_CERTIFIED = 0,
  TG_VERDICT_FAILED = 1,
  TG_VERDICT_INCONCLUSIVE = 2,
} TgVerdict;

typedef enum TgFamily {
  TG_FAMILY_EXPONENTIAL = 0,
  TG_FAMILY_UNIFORM = 1,
  TG_FAMILY_HALF_NORMAL = 2,
  TG_FAMILY_CONSTANT = 3,
} TgFamily;

typedef enum TgGrowth {
  TG_GROWTH_LOG = 0,
  TG_GROWTH_T_LOG_T = 1,
} TgGrowth;

typedef enum TgModel {
  TG_MODEL_ISING = 0,
  TG_MODEL_THREE_POINT = 1,
} TgModel;

// Opaque graph handle.
typedef struct TgGraph TgGraph;

typedef struct TgTemperedness {
  double gamma;
  enum TgVerdict verdict;
  // Vertices in the failing animal, 0 if there is none.
  size_t witness_size;
  // Average of the failing animal, NaN if there is none.
  double witness_average;
} TgTemperedness;

typedef struct TgCertificate {
  double kappa;
  // kappa * exp(gamma)
  double product;
  // NaN when the law never reaches exp(-gamma).
  double beta_star;
  bool certified;
  // product^n_k / (1 - product); NaN outside the regime.
  double tail_bound;
} TgCertificate;

typedef struct TgLemma {
  double lhs;
  double rhs;
  size_t paths;
  bool holds;
} TgLemma;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next `tg_*` call on the same thread.
const char *tg_last_error(void);

// Library version as a static nul-terminated string.
const char *tg_version(void);

// Graph on vertices 0..n with `edge_count` edges given as consecutive
// pairs in `edges` (2 * edge_count entries).
enum TgStatus tg_graph_new(size_t n, const size_t *edges, size_t edge_count, struct TgGraph **out);

// Parses a text edge list. Vertex names are mapped to ids in sorted order
// (numerically when every name is an integer).
enum TgStatus tg_graph_parse_edge_list(const char *text, struct TgGraph **out);

// Generated family: `chain:N`, `cycle:N`, `grid:AxB`, `star:K`,
// `growing-tree:D` or `repulsive-tree:SPINE:D1/D2/...:NSTAR:PHI`.
enum TgStatus tg_graph_generate(const char *kind, struct TgGraph **out);

// Releases a graph. Null is ignored.
void tg_graph_free(struct TgGraph *g);

// 0 for a null handle.
size_t tg_graph_vertex_count(const struct TgGraph *g);

// 0 for a null handle.
size_t tg_graph_edge_count(const struct TgGraph *g);

enum TgStatus tg_graph_degree(const struct TgGraph *g, size_t v, size_t *out);

// Graph distance; `Unreachable` when x and y lie in different components.
enum TgStatus tg_graph_distance(const struct TgGraph *g, size_t x, size_t y, size_t *out);

// Largest animal average of g(degree) over the balls around `root` with
// the given strictly increasing radii. `gamma_target` NaN means none;
// `max_animals` 0 means the default cap.
enum TgStatus tg_check_tempered(const struct TgGraph *g,
                                int32_t growth,
                                size_t root,
                                const size_t *radii,
                                size_t radii_len,
                                double gamma_target,
                                uint64_t max_animals,
                                struct TgTemperedness *out);

// E[exp(4 beta |W|)] - 1 for the given norm law.
enum TgStatus tg_mean_kappa(int32_t family, double param, double beta, double *out);

// The beta solving mean kappa = exp(-gamma), to within `tol`.
enum TgStatus tg_beta_star(int32_t family, double param, double gamma, double tol, double *out);

// Uniqueness certificate at `beta` with the tail bound for radius `n_k`.
enum TgStatus tg_certificate(double gamma,
                             int32_t family,
                             double param,
                             double beta,
                             size_t n_k,
                             struct TgCertificate *out);

// Exhaustive boundary gap at `z` against the path sum, for the volume
// given by its vertex list and one disorder draw.
enum TgStatus tg_verify_lemma27(const struct TgGraph *g,
                                const size_t *volume,
                                size_t volume_len,
                                size_t z,
                                int32_t model,
                                int32_t family,
                                double param,
                                bool rademacher,
                                uint64_t seed,
                                double beta,
                                struct TgLemma *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TEMPGIBBS_H */
