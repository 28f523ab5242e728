#ifndef LIESOLV_H
#define LIESOLV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes; the first four match the command-line exit codes.
typedef enum LiesolvStatus {
  LIESOLV_STATUS_OK = 0,
  // Not isomorphic, or not solvable.
  LIESOLV_STATUS_NEGATIVE = 1,
  LIESOLV_STATUS_INPUT_ERROR = 2,
  LIESOLV_STATUS_INTERNAL_ERROR = 3,
  LIESOLV_STATUS_NULL_ARGUMENT = 4,
  LIESOLV_STATUS_PANIC = 5,
} LiesolvStatus;

// Opaque handle to a validated structure tensor.
typedef struct LiesolvTensor LiesolvTensor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a `.lie` presentation and validates it.
//
// # Safety
// `text` must be a nul-terminated string and `out` a valid pointer.
enum LiesolvStatus liesolv_tensor_parse(const char *text, struct LiesolvTensor **out);

// Releases a tensor handle. Null is ignored.
//
// # Safety
// `t` must come from [`liesolv_tensor_parse`] and not be used afterwards.
void liesolv_tensor_free(struct LiesolvTensor *t);

// Dimension of the algebra, or 0 for a null handle.
//
// # Safety
// `t` must be null or a live handle.
size_t liesolv_tensor_dim(const struct LiesolvTensor *t);

// Renders the tensor back to a `.lie` presentation.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum LiesolvStatus liesolv_tensor_render(const struct LiesolvTensor *t, char **out);

// Classifies the tensor and writes the JSON report to `out`.
//
// Non-solvable input still produces a report, with status `Negative`.
//
// # Safety
// `t` must be a live handle and `out` a valid pointer.
enum LiesolvStatus liesolv_classify_json(const struct LiesolvTensor *t, char **out);

// Decides isomorphism and writes the JSON report to `out`. Returns `Ok`
// when isomorphic and `Negative` when not.
//
// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum LiesolvStatus liesolv_iso_json(const struct LiesolvTensor *a,
                                    const struct LiesolvTensor *b,
                                    char **out);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void liesolv_string_free(char *s);

// The last error message on this thread, or null. Valid until the next
// call into the library on the same thread.
const char *liesolv_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LIESOLV_H */
