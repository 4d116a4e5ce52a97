#ifndef DISCO_FFI_H
#define DISCO_FFI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of every fallible call.
typedef enum DiscoStatus {
  DISCO_STATUS_OK = 0,
  DISCO_STATUS_NULL_POINTER = 1,
  DISCO_STATUS_INVALID_ARGUMENT = 2,
  DISCO_STATUS_NUMERICAL_ERROR = 3,
} DiscoStatus;

// Opaque dense symmetric matrix handle; release with disco_matrix_free.
typedef struct DiscoMatrix DiscoMatrix;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the most recent failure on this thread into `buf`
// (NUL-terminated, truncated to `len` bytes) and returns the full message
// length in bytes, excluding the terminator. `buf` may be null to query the
// length alone.
//
// # Safety
// `buf` must be null or point to `len` writable bytes.
uintptr_t disco_last_error(char *buf, uintptr_t len);

// Draws one matrix of a seeded ensemble. `ensemble` uses the CLI grammar
// (`pst`, `wigner`, `blockcirc:<m>`, `counterexample`); `stream` selects the
// independent sub-stream of the root seed.
//
// # Safety
// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
enum DiscoStatus disco_matrix_sample(const char *ensemble,
                                     uintptr_t order,
                                     uint64_t seed,
                                     uint64_t stream,
                                     struct DiscoMatrix **out);

// Draws a base matrix and stacks `depth` doubling Wigner blocks on it, the
// same construction the experiments measure. The result has order
// `order << depth`. `trial` selects the trial-local stream block.
//
// # Safety
// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
enum DiscoStatus disco_matrix_build(const char *ensemble,
                                    uintptr_t order,
                                    uint64_t seed,
                                    uintptr_t depth,
                                    uint64_t trial,
                                    struct DiscoMatrix **out);

// Order of the matrix behind the handle; 0 for a null handle.
//
// # Safety
// `m` must be null or a live handle from this library.
uintptr_t disco_matrix_order(const struct DiscoMatrix *m);

// Reads entry (i, j).
//
// # Safety
// `m` must be a live handle, `out` a valid pointer.
enum DiscoStatus disco_matrix_entry(const struct DiscoMatrix *m,
                                    uintptr_t i,
                                    uintptr_t j,
                                    double *out);

// Tr(M^k) for k >= 1.
//
// # Safety
// `m` must be a live handle, `out` a valid pointer.
enum DiscoStatus disco_matrix_trace_power(const struct DiscoMatrix *m, uintptr_t k, double *out);

// h-th empirical moment (1/n) Tr((M/normalization)^h).
//
// # Safety
// `m` must be a live handle, `out` a valid pointer.
enum DiscoStatus disco_matrix_moment(const struct DiscoMatrix *m,
                                     uintptr_t h,
                                     double normalization,
                                     double *out);

// Writes the ascending spectrum into `buf`; `len` must be at least the
// matrix order.
//
// # Safety
// `m` must be a live handle, `buf` must point to `len` writable doubles.
enum DiscoStatus disco_matrix_eigenvalues(const struct DiscoMatrix *m, double *buf, uintptr_t len);

// Releases a handle; a null argument is a no-op.
//
// # Safety
// `m` must be null or a handle not freed before.
void disco_matrix_free(struct DiscoMatrix *m);

// Exact limiting 2k-th moment of the depth-d construction, as a double.
//
// # Safety
// `out` must be a valid pointer.
enum DiscoStatus disco_limit_moment(uintptr_t depth, uintptr_t two_k, double *out);

// Exact limiting moment as a reduced fraction. Fails with
// INVALID_ARGUMENT when either part overflows 64 bits.
//
// # Safety
// `num` and `den` must be valid pointers.
enum DiscoStatus disco_limit_moment_rational(uintptr_t depth,
                                             uintptr_t two_k,
                                             int64_t *num,
                                             int64_t *den);

// The exact fourth-power traces of the 20x20 sandwich counterexample:
// Tr(A^4), Tr(B^4) and the normalized middle quantity that exceeds both.
//
// # Safety
// All three pointers must be valid.
enum DiscoStatus disco_counterexample_traces(int64_t *trace_a4,
                                             int64_t *trace_b4,
                                             int64_t *normalized);

// Independent generator draws behind one sample of the ensemble.
//
// # Safety
// `ensemble` must be a NUL-terminated string, `out` a valid pointer.
enum DiscoStatus disco_degrees_of_freedom(const char *ensemble, uintptr_t order, uintptr_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DISCO_FFI_H */
