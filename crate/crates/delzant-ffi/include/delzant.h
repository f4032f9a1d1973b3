/* C interface to the delzant library: exact invariants of Delzant moment polygons. */

#ifndef DELZANT_H
#define DELZANT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes of every fallible call in this API.
typedef enum DelzantStatus {
  // Success.
  DELZANT_STATUS_OK = 0,
  // Null pointer, invalid UTF-8, or a malformed `p/q` rational.
  DELZANT_STATUS_INVALID_ARGUMENT = 1,
  // The data is outside the operation's domain (non-convex input,
  // nonpositive parameter, inadmissible chop, ...).
  DELZANT_STATUS_DOMAIN_ERROR = 2,
  // The operation needs the Delzant corner property and the polygon
  // lacks it.
  DELZANT_STATUS_NOT_DELZANT = 3,
} DelzantStatus;

// Opaque moment polygon handle.
typedef struct DelzantPolygon DelzantPolygon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread.
const char *delzant_last_error_message(void);

// Frees a string returned by this API. Null is ignored.
//
// # Safety
// `s` must be a pointer previously returned through a `char **` out
// parameter of this API, not yet freed.
void delzant_string_free(char *s);

// Frees a polygon handle. Null is ignored.
//
// # Safety
// `p` must be a handle previously returned by this API, not yet freed.
void delzant_polygon_free(struct DelzantPolygon *p);

// Parses the polygon text format (one `x y` vertex per line, rational
// fields, `#` comments).
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum DelzantStatus delzant_polygon_parse(const char *text, struct DelzantPolygon **out);

// Writes the polygon in the canonical text format.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_polygon_format(const struct DelzantPolygon *p, char **out);

// Triangle `(0,0), (a,0), (0,a)` for rational `a > 0`.
//
// # Safety
// `a` must be a NUL-terminated string and `out` a valid pointer.
enum DelzantStatus delzant_polygon_cp2(const char *a, struct DelzantPolygon **out);

// Rectangle `[0,a] x [0,b]` for rational `a, b > 0`.
//
// # Safety
// `a`, `b` must be NUL-terminated strings and `out` a valid pointer.
enum DelzantStatus delzant_polygon_p1xp1(const char *a, const char *b, struct DelzantPolygon **out);

// Hirzebruch trapezoid `(0,0), (alpha+k,0), (alpha,1), (0,1)`.
//
// # Safety
// `alpha` must be a NUL-terminated string and `out` a valid pointer.
enum DelzantStatus delzant_polygon_hirzebruch(uint32_t k,
                                              const char *alpha,
                                              struct DelzantPolygon **out);

// Two-point blow-up pentagon with exceptional lattice length 1.
//
// # Safety
// `alpha`, `beta` must be NUL-terminated strings and `out` a valid pointer.
enum DelzantStatus delzant_polygon_two_point(const char *alpha,
                                             const char *beta,
                                             struct DelzantPolygon **out);

// Chops the corner at `vertex` with lattice size `eps` (rational string).
//
// # Safety
// `p` must be a live handle, `eps` a NUL-terminated string, `out` valid.
enum DelzantStatus delzant_polygon_blow_up(const struct DelzantPolygon *p,
                                           size_t vertex,
                                           const char *eps,
                                           struct DelzantPolygon **out);

// Dilation by a rational factor `c > 0`.
//
// # Safety
// `p` must be a live handle, `c` a NUL-terminated string, `out` valid.
enum DelzantStatus delzant_polygon_scale(const struct DelzantPolygon *p,
                                         const char *c,
                                         struct DelzantPolygon **out);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `p` must be a live handle or null.
size_t delzant_polygon_vertex_count(const struct DelzantPolygon *p);

// Whether every corner satisfies the Delzant determinant condition.
//
// # Safety
// `p` must be a live handle or null (null reports false).
bool delzant_polygon_is_delzant(const struct DelzantPolygon *p);

// Area of the interior as an exact `p/q` string.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_polygon_area(const struct DelzantPolygon *p, char **out);

// Lattice length of the boundary as an exact `p/q` string.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_polygon_lambda_perimeter(const struct DelzantPolygon *p, char **out);

// Virtual action as an exact `p/q` string.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_virtual_action(const struct DelzantPolygon *p, char **out);

// Futaki vector: the two rational coefficients of pi, as `p/q` strings.
//
// # Safety
// `p` must be a live handle; `out1`, `out2` valid pointers.
enum DelzantStatus delzant_futaki_vector(const struct DelzantPolygon *p, char **out1, char **out2);

// Calabi energy bound `32 pi^2 A`: the rational coefficient of `pi^2`.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_calabi_bound_coeff(const struct DelzantPolygon *p, char **out);

// Weyl energy bound: the rational coefficient of `pi^2`. Requires the
// Delzant property.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_weyl_bound_coeff(const struct DelzantPolygon *p, char **out);

// Euler characteristic, signature and second Betti number. Requires the
// Delzant property.
//
// # Safety
// `p` must be a live handle; `euler`, `signature`, `b2` valid pointers.
enum DelzantStatus delzant_topology(const struct DelzantPolygon *p,
                                    int64_t *euler,
                                    int64_t *signature,
                                    int64_t *b2);

// Measures row in CSV (`header\nrow\n`), all fields exact `p/q`.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_polygon_measures_csv(const struct DelzantPolygon *p, char **out);

// Invariant report row in CSV (`header\nrow\n`); topology-dependent columns
// stay empty for non-Delzant polygons.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum DelzantStatus delzant_polygon_action_csv(const struct DelzantPolygon *p, char **out);

// Closed-form Hirzebruch action profile at rational `alpha > 0`.
//
// # Safety
// `alpha` must be a NUL-terminated string and `out` a valid pointer.
enum DelzantStatus delzant_hirzebruch_action(uint32_t k, const char *alpha, char **out);

// Closed-form two-point blow-up action at rational `alpha, beta >= 0`.
//
// # Safety
// `alpha`, `beta` must be NUL-terminated strings and `out` a valid pointer.
enum DelzantStatus delzant_two_point_action(const char *alpha, const char *beta, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DELZANT_H */
