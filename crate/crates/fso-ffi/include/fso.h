/* C interface for the fso toolkit. Generated by cbindgen; do not edit. */

#ifndef FSO_H
#define FSO_H

/* This file is auto-generated. Regenerate by building the fso-ffi crate. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call. Mirrors the CLI exit codes for the
// first four values.
typedef enum FsoStatus {
  FSO_STATUS_OK = 0,
  // A verification check did not hold (e.g. modularity refinement).
  FSO_STATUS_CHECK_FAILED = 1,
  FSO_STATUS_INVALID_INPUT = 2,
  FSO_STATUS_BUDGET_EXCEEDED = 3,
  FSO_STATUS_NULL_POINTER = 4,
  FSO_STATUS_INVALID_UTF8 = 5,
  FSO_STATUS_INTERNAL_ERROR = 6,
} FsoStatus;

// Opaque SON lattice.
typedef struct FsoLattice FsoLattice;

// Opaque canonical role seed.
typedef struct FsoSeed FsoSeed;

// Outcome of the conservation-of-modularity check.
typedef struct FsoModularityReport {
  bool injective;
  bool order_embedding;
  bool edge_preserving;
  uint64_t nodes_covered;
  uint64_t nodes_total;
} FsoModularityReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a seed string (compact digits or comma-separated role ids) into a
// canonical seed handle. The handle must be released with `fso_seed_free`.
enum FsoStatus fso_seed_parse(const char *text, struct FsoSeed **out);

void fso_seed_free(struct FsoSeed *seed);

// Canonical text of the seed; release with `fso_string_free`. Null if the
// handle is null.
char *fso_seed_canonical_text(const struct FsoSeed *seed);

// Multiset containment: does every role of `sub` fit inside `sup`?
enum FsoStatus fso_seed_is_subseed(const struct FsoSeed *sub, const struct FsoSeed *sup, bool *out);

// Closed-form node count of the seed's development (no materialization).
enum FsoStatus fso_lattice_size(const struct FsoSeed *seed, uint64_t *out);

// Materializes the lattice, refusing to exceed `budget` nodes. The handle
// must be released with `fso_lattice_free`.
enum FsoStatus fso_lattice_build(const struct FsoSeed *seed,
                                 uint64_t budget,
                                 struct FsoLattice **out);

void fso_lattice_free(struct FsoLattice *lattice);

// Number of nodes, or 0 for a null handle.
uint64_t fso_lattice_node_count(const struct FsoLattice *lattice);

// Number of Hasse edges, or 0 for a null handle.
uint64_t fso_lattice_edge_count(const struct FsoLattice *lattice);

// Checks that `sub`'s development embeds into `sup`'s (injective,
// order-embedding, edge-preserving). Returns `CheckFailed` when `sub` is
// not a subseed of `sup` at all.
enum FsoStatus fso_verify_modularity(const struct FsoSeed *sub,
                                     const struct FsoSeed *sup,
                                     uint64_t budget,
                                     struct FsoModularityReport *out);

// Smallest replica count k with p^k <= epsilon.
enum FsoStatus fso_min_replicas(double loss_probability, double epsilon, uint32_t *out);

// Runs a config-driven job and returns its JSON artifact. `command` is one
// of develop, modularity, walk, canon, channel, sort; `config_json` uses
// the same schemas as the CLI config files (docs/formats.md). The returned
// string must be released with `fso_string_free`.
enum FsoStatus fso_run_json(const char *command, const char *config_json, char **out_json);

// Renders the SVG figure for a develop request (same JSON schema as
// `fso_run_json("develop", ...)`). Release the string with
// `fso_string_free`.
enum FsoStatus fso_render_develop_svg(const char *config_json, char **out_svg);

// Message for the most recent error on this thread, or null. Release with
// `fso_string_free`.
char *fso_last_error_message(void);

// Releases a string returned by this library. Null is a no-op.
void fso_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FSO_H */
