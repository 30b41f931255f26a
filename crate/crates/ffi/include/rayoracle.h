#ifndef RAYORACLE_H
#define RAYORACLE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum RoStatus {
  RO_STATUS_OK = 0,
  RO_STATUS_NULL_POINTER = 1,
  RO_STATUS_INVALID_UTF8 = 2,
  RO_STATUS_PARSE = 3,
  RO_STATUS_VALIDATION = 4,
  RO_STATUS_CAPACITY = 5,
  RO_STATUS_DOMAIN = 6,
  RO_STATUS_VERIFICATION = 7,
  RO_STATUS_UNSUPPORTED = 8,
  RO_STATUS_INCONSISTENT = 9,
  RO_STATUS_PANIC = 10,
} RoStatus;

typedef enum RoMode {
  RO_MODE_NAIVE = 0,
  RO_MODE_OPTIMIZED = 1,
} RoMode;

typedef enum RoBasis {
  RO_BASIS_LOGICAL = 0,
  RO_BASIS_TOFFOLI = 1,
  RO_BASIS_ELEMENTARY = 2,
} RoBasis;

/**
 * Opaque circuit handle.
 */
typedef struct RoCircuit RoCircuit;

/**
 * Opaque scene handle.
 */
typedef struct RoScene RoScene;

typedef struct RoMetrics {
  size_t depth;
  size_t gates;
  size_t qubits;
} RoMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or null. The pointer
 * stays valid until the next call into the library from the same thread.
 */
const char *ro_last_error_message(void);

/**
 * Parses scene text (`bounds`/`rect` lines).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum RoStatus ro_scene_parse(const char *text, struct RoScene **out);

/**
 * Number of primitives in the scene; 0 for a null handle.
 *
 * # Safety
 * `scene` must be null or a live handle from [`ro_scene_parse`].
 */
size_t ro_scene_len(const struct RoScene *scene);

/**
 * # Safety
 * `scene` must be null or a handle from [`ro_scene_parse`] not yet freed.
 */
void ro_scene_free(struct RoScene *scene);

/**
 * Builds the lookup oracle for `scene`. `params` is a comma-separated list
 * such as `"mx,Mx"`, or null for all four.
 *
 * # Safety
 * `scene` must be a live handle, `params` null or NUL-terminated, and `out`
 * writable.
 */
enum RoStatus ro_synthesize(const struct RoScene *scene,
                            enum RoMode mode,
                            const char *params,
                            struct RoCircuit **out);

/**
 * Rewrites the circuit into `basis`, producing a new handle.
 *
 * # Safety
 * `circuit` must be a live handle and `out` writable.
 */
enum RoStatus ro_circuit_lower(const struct RoCircuit *circuit,
                               enum RoBasis basis,
                               struct RoCircuit **out);

/**
 * # Safety
 * `circuit` must be a live handle and `out` writable.
 */
enum RoStatus ro_circuit_metrics(const struct RoCircuit *circuit, struct RoMetrics *out);

/**
 * OpenQASM 2.0 text. Circuits with MCX gates of more than two controls
 * must be lowered first.
 *
 * # Safety
 * `circuit` must be a live handle and `out` writable. The string written
 * to `out` must be released with [`ro_string_free`].
 */
enum RoStatus ro_circuit_qasm(const struct RoCircuit *circuit, char **out);

/**
 * # Safety
 * `circuit` must be null or a handle from this library not yet freed.
 */
void ro_circuit_free(struct RoCircuit *circuit);

/**
 * Checks every index of `scene` against the circuit. Returns
 * [`RoStatus::Verification`] with a per-index report in the error message
 * on mismatch.
 *
 * # Safety
 * Both handles must be live and `params` null or NUL-terminated.
 */
enum RoStatus ro_verify(const struct RoCircuit *circuit,
                        const struct RoScene *scene,
                        const char *params);

/**
 * Samples the circuit from |0...0> and writes the histogram as CSV with
 * rows labelled by index and parameter tuple.
 *
 * # Safety
 * Both handles must be live, `params` null or NUL-terminated, and `out`
 * writable. Release the string with [`ro_string_free`].
 */
enum RoStatus ro_sample_csv(const struct RoCircuit *circuit,
                            const struct RoScene *scene,
                            const char *params,
                            uint64_t shots,
                            uint64_t seed,
                            char **out);

/**
 * Minimum sum of products for the function of `arity` inputs that is true
 * exactly on `onset[0..len]`, written as `m(..) + m(..)`.
 *
 * # Safety
 * `onset` must point to `len` readable values (it may be null when `len`
 * is 0) and `out` must be writable. Release the string with
 * [`ro_string_free`].
 */
enum RoStatus ro_minimize(uint32_t arity, const uint32_t *onset, size_t len, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void ro_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAYORACLE_H */
