#ifndef CG3_H
#define CG3_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every exported function.
typedef enum Cg3Status {
  CG3_STATUS_OK = 0,
  // A verification ran to completion but the ranks fell short. The report is still returned.
  CG3_STATUS_RANK_DEFICIENT = 1,
  CG3_STATUS_NULL_POINTER = 2,
  CG3_STATUS_INVALID_UTF8 = 3,
  CG3_STATUS_INVALID_JSON = 4,
  CG3_STATUS_INVALID_INSTANCE = 5,
  CG3_STATUS_NOT_OCCURRING = 6,
  CG3_STATUS_NOT_PRIME = 7,
  CG3_STATUS_DENOMINATOR_DIVISIBLE_BY_P = 8,
  CG3_STATUS_INVALID_POLYNOMIAL = 9,
  CG3_STATUS_INVALID_WEIGHT = 10,
  CG3_STATUS_INTERNAL = 11,
  CG3_STATUS_PANIC = 12,
} Cg3Status;

// An element of a tensor space `S^a ⊗ D^b ⊗ ...` with rational coefficients.
typedef struct Cg3Poly Cg3Poly;

// Outcome of a bundle verification.
typedef struct Cg3Report Cg3Report;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or an empty
// string. The pointer stays valid until the next call into the library.
const char *cg3_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void cg3_string_free(char *s);

// Dimension of `V(a,b)`.
uint64_t cg3_dim(uint32_t a, uint32_t b);

// Decomposition of `V(a1,b1) ⊗ V(a2,b2)` as JSON.
//
// # Safety
// `out` must be a valid pointer.
enum Cg3Status cg3_decompose_json(uint32_t a1, uint32_t b1, uint32_t a2, uint32_t b2, char **out);

// Parameters of `Hom(V(a1,b1) ⊗ V(a2,b2), V(a3,b3))` as JSON `{s,t,J,mult}`.
//
// # Safety
// `out` must be a valid pointer.
enum Cg3Status cg3_homspace_json(uint32_t a1,
                                 uint32_t b1,
                                 uint32_t a2,
                                 uint32_t b2,
                                 uint32_t a3,
                                 uint32_t b3,
                                 char **out);

// Parses a polynomial from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum Cg3Status cg3_poly_from_json(const char *json, struct Cg3Poly **out);

// Serializes a polynomial to JSON.
//
// # Safety
// `poly` must be a live handle and `out` a valid pointer.
enum Cg3Status cg3_poly_to_json(const struct Cg3Poly *poly, char **out);

// Number of nonzero terms.
//
// # Safety
// `poly` must be a live handle or null.
size_t cg3_poly_len(const struct Cg3Poly *poly);

// Releases a polynomial handle. Null is ignored.
//
// # Safety
// `poly` must come from this library and not have been freed.
void cg3_poly_free(struct Cg3Poly *poly);

// Projects an element of `S^a ⊗ D^b` onto `V(a,b)`.
//
// # Safety
// `poly` must be a live handle and `out` a valid pointer.
enum Cg3Status cg3_project(uint32_t a,
                           uint32_t b,
                           const struct Cg3Poly *poly,
                           struct Cg3Poly **out);

// Checks that the bundle map `V(src) ⊗ V(mid) → V(dst)` at a random point
// has full rank over 𝔽_p. Uses the double-bundle check when
// `dim mid − dim dst = 1` and the Grassmannian check otherwise.
//
// Returns [`Cg3Status::Ok`] or [`Cg3Status::RankDeficient`] together with a
// report; any other status leaves `out` untouched.
//
// # Safety
// `out` must be a valid pointer.
enum Cg3Status cg3_verify(uint32_t src_a,
                          uint32_t src_b,
                          uint32_t mid_a,
                          uint32_t mid_b,
                          uint32_t dst_a,
                          uint32_t dst_b,
                          uint32_t j,
                          uint32_t prime,
                          uint64_t seed,
                          uint64_t retries,
                          struct Cg3Report **out);

// Whether the verification met its expected ranks.
//
// # Safety
// `report` must be a live handle or null.
bool cg3_report_passed(const struct Cg3Report *report);

// Serializes a report to JSON. Wall-clock timing is omitted so output is reproducible.
//
// # Safety
// `report` must be a live handle and `out` a valid pointer.
enum Cg3Status cg3_report_to_json(const struct Cg3Report *report, char **out);

// Releases a report handle. Null is ignored.
//
// # Safety
// `report` must come from this library and not have been freed.
void cg3_report_free(struct Cg3Report *report);

// Candidate bundles for `V(a,b)` with labels up to `max_label`, as JSON.
//
// # Safety
// `out` must be a valid pointer.
enum Cg3Status cg3_search_json(uint32_t a,
                               uint32_t b,
                               uint32_t max_label,
                               uint32_t max_summands,
                               bool essential_only,
                               char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CG3_H */
