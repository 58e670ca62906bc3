#ifndef SULLIVAN_H
#define SULLIVAN_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SullivanStatus {
  SULLIVAN_STATUS_OK = 0,
  SULLIVAN_STATUS_NULL_POINTER = 1,
  SULLIVAN_STATUS_INVALID_UTF8 = 2,
  SULLIVAN_STATUS_PARSE_ERROR = 3,
  SULLIVAN_STATUS_VALIDATION_FAILED = 4,
  SULLIVAN_STATUS_NOT_CERTIFIED = 5,
  SULLIVAN_STATUS_NOT_HOMOGENEOUS = 6,
  SULLIVAN_STATUS_FIRST_GENERATOR_ODD = 7,
  SULLIVAN_STATUS_BUFFER_TOO_SMALL = 8,
  SULLIVAN_STATUS_INCONSISTENT = 9,
  SULLIVAN_STATUS_FAILED = 10,
  SULLIVAN_STATUS_PANIC = 11,
} SullivanStatus;

/**
 * Opaque model handle.
 */
typedef struct SullivanModel SullivanModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses model text. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SullivanStatus sullivan_model_parse(const char *text, struct SullivanModel **out);

/**
 * # Safety
 * `m` must come from [`sullivan_model_parse`] and not be used afterwards.
 */
void sullivan_model_free(struct SullivanModel *m);

/**
 * Number of generators, 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t sullivan_model_generator_count(const struct SullivanModel *m);

/**
 * `Ok` when the model passes every validation rule, otherwise
 * `ValidationFailed` with the broken rules in the error message.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
enum SullivanStatus sullivan_model_validate(const struct SullivanModel *m);

/**
 * Writes dim H^i for i = 0..=max_degree into `out`, which holds `len`
 * entries. `*written` receives max_degree + 1; if that exceeds `len`,
 * nothing is copied and `BufferTooSmall` is returned.
 *
 * # Safety
 * `out` must point to `len` writable entries; `written` may be null.
 */
enum SullivanStatus sullivan_cohomology_dims(const struct SullivanModel *m,
                                             uint32_t max_degree,
                                             size_t *out,
                                             size_t len,
                                             size_t *written);

/**
 * Toomer invariant of a certified model, by formula and by quotients.
 * `*formula` is set to `u32::MAX` when the differential is not homogeneous.
 *
 * # Safety
 * `formula` and `direct` must be valid pointers.
 */
enum SullivanStatus sullivan_toomer(const struct SullivanModel *m,
                                    uint32_t *formula,
                                    uint32_t *direct);

/**
 * Full pipeline as one JSON record. The record is written even when the
 * pipeline fails; the status then says why.
 *
 * # Safety
 * `out` must be a valid pointer; the string is freed with [`sullivan_string_free`].
 */
enum SullivanStatus sullivan_check_record(const struct SullivanModel *m, char **out);

/**
 * Model text in the input grammar.
 *
 * # Safety
 * `out` must be a valid pointer; the string is freed with [`sullivan_string_free`].
 */
enum SullivanStatus sullivan_model_serialize(const struct SullivanModel *m, char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void sullivan_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library on the same thread.
 */
const char *sullivan_last_error_message(void);

const char *sullivan_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SULLIVAN_H */
