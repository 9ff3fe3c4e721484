/*
 * C interface to the fanmori library: exact-arithmetic analysis of
 * complete fans of smooth toric varieties and the contact-structure
 * classification in odd dimension.
 *
 * All functions returning FmStatus report failure through the return
 * value; fm_last_error_message() describes the most recent failure on
 * the calling thread. Strings returned through `char **` out-parameters
 * are owned by the caller and must be released with fm_string_free();
 * fan handles must be released with fm_fan_free().
 */

#ifndef FANMORI_H
#define FANMORI_H

/* Generated by the fanmori-ffi build script; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call in this API.
enum FmStatus
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // The call succeeded.
  FM_STATUS_OK = 0,
  // A required pointer argument was NULL.
  FM_STATUS_NULL_POINTER = 1,
  // A text argument was not valid UTF-8.
  FM_STATUS_UTF8 = 2,
  // Fan text could not be decoded (malformed JSON, wrong shape, or
  // non-integer coordinates).
  FM_STATUS_SYNTAX = 3,
  // The decoded data does not describe a valid fan.
  FM_STATUS_INVALID_FAN = 4,
  // The fan is valid but lacks a property the operation requires
  // (smoothness, completeness, or projectivity).
  FM_STATUS_PRECONDITION = 5,
  // An argument was out of range for the operation.
  FM_STATUS_BAD_ARGUMENT = 6,
  // The library detected an internal inconsistency or panicked.
  FM_STATUS_INTERNAL = 7,
};
#ifndef __cplusplus
typedef int32_t FmStatus;
#endif // __cplusplus

// Outcome of the contact classification.
enum FmVerdict
#ifdef __cplusplus
  : int32_t
#endif // __cplusplus
 {
  // The variety carries no contact structure.
  FM_VERDICT_NOT_CONTACT = 0,
  // The variety is the projective space `P^{2n+1}`.
  FM_VERDICT_PROJECTIVE_SPACE = 1,
  // The variety is the projectivized tangent bundle of `(P^1)^{n+1}`.
  FM_VERDICT_PROJECTIVIZED_TANGENT_BUNDLE = 2,
};
#ifndef __cplusplus
typedef int32_t FmVerdict;
#endif // __cplusplus

// Opaque handle to a fan. Allocate with `fm_fan_parse` or a builder;
// release with `fm_fan_free`.
typedef struct FmFan FmFan;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Version of the library as a static NUL-terminated string; do not free.
const char *fm_version(void);

// Message describing the most recent failure on the calling thread, as a
// NUL-terminated string. The pointer stays valid until the next failing
// call on the same thread; do not free it. Returns an empty string if no
// call has failed yet.
const char *fm_last_error_message(void);

// Release a string returned by this library. NULL is ignored.
//
// # Safety
// `text` must be NULL or a pointer obtained from a `char **` out-parameter
// of this library, released at most once.
void fm_string_free(char *text);

// Parse a fan from its textual (JSON) representation and return a new
// handle through `out`.
//
// The text must decode to an object with `rank`, `rays`, and `max_cones`
// fields and must describe a valid fan: decoding failures return
// `Syntax`, validation failures return `InvalidFan`.
//
// # Safety
// `text` must be a NUL-terminated C string and `out` valid for a single
// pointer write.
FmStatus fm_fan_parse(const char *text, struct FmFan **out);

// Release a fan handle. NULL is ignored.
//
// # Safety
// `fan` must be NULL or a handle from this library, released at most once.
void fm_fan_free(struct FmFan *fan);

// Build the fan of the projective space `P^dim` (`dim >= 1`).
//
// # Safety
// `out` must be valid for a single pointer write.
FmStatus fm_fan_projective_space(size_t dim, struct FmFan **out);

// Build the fan of the product `(P^1)^m` (`m >= 1`).
//
// # Safety
// `out` must be valid for a single pointer write.
FmStatus fm_fan_p1_power(size_t m, struct FmFan **out);

// Build the fan of the Hirzebruch surface with parameter `a`
// (the projectivization of `O + O(a)` over `P^1`).
//
// # Safety
// `out` must be valid for a single pointer write.
FmStatus fm_fan_hirzebruch(uint64_t a, struct FmFan **out);

// Build the fan of the projectivized tangent bundle of `(P^1)^m`
// (`m >= 1`), a smooth projective variety of dimension `2m - 1`.
//
// # Safety
// `out` must be valid for a single pointer write.
FmStatus fm_fan_tangent_p1_power(size_t m, struct FmFan **out);

// Rank of the fan's lattice (the dimension of the variety).
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_rank(const struct FmFan *fan, size_t *out);

// Number of rays of the fan.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_ray_count(const struct FmFan *fan, size_t *out);

// Number of maximal cones of the fan.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_max_cone_count(const struct FmFan *fan, size_t *out);

// Serialize the fan to its canonical textual form (rays sorted, indices
// remapped, trailing newline). The string is written to `out` and owned
// by the caller.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single pointer
// write.
FmStatus fm_fan_serialize(const struct FmFan *fan, char **out);

// Whether every maximal cone is unimodular.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_is_smooth(const struct FmFan *fan, bool *out);

// Whether the fan's support is the whole lattice.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_is_complete(const struct FmFan *fan, bool *out);

// Whether the fan admits a strictly convex support function (so the
// variety is projective). Requires a smooth complete fan.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_is_projective(const struct FmFan *fan, bool *out);

// Rank of the divisor class group (`#rays - rank`). Requires a smooth
// complete fan.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single write.
FmStatus fm_fan_picard_rank(const struct FmFan *fan, size_t *out);

// Decide whether the variety of the fan carries a contact structure.
// Requires a valid, smooth, complete, projective fan.
//
// On success `out_verdict` receives the verdict and `out_n` receives the
// `n` with `dim = 2n + 1` for the two contact verdicts (`out_n` is set to
// 0 when the verdict is `NotContact`).
//
// # Safety
// `fan` must be a live handle; `out_verdict` and `out_n` must each be
// valid for a single write.
FmStatus fm_fan_classify(const struct FmFan *fan,
                         bool full_evidence,
                         FmVerdict *out_verdict,
                         size_t *out_n);

// Run the contact classification and return the human-readable report
// (verdict line followed by `key: value` evidence lines). The string is
// owned by the caller.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single pointer
// write.
FmStatus fm_fan_classify_text(const struct FmFan *fan, bool full_evidence, char **out);

// Run the contact classification and return the machine-readable report
// as one JSON object (identical bytes to the command-line `--machine`
// output). The string is owned by the caller.
//
// # Safety
// `fan` must be a live handle; `out` must be valid for a single pointer
// write.
FmStatus fm_fan_classify_json(const struct FmFan *fan, bool full_evidence, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FANMORI_H */
