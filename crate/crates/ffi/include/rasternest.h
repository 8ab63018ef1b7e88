#ifndef RASTERNEST_H
#define RASTERNEST_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  RN_STATUS_OK = 0,
  RN_STATUS_NULL_POINTER = 1,
  RN_STATUS_INVALID_UTF8 = 2,
  RN_STATUS_PARSE = 3,
  RN_STATUS_VALIDATION = 4,
  RN_STATUS_RASTER = 5,
  RN_STATUS_EXCEEDS_WIDTH = 6,
  RN_STATUS_INVALID_ARGUMENT = 7,
  RN_STATUS_PANIC = 8,
} RnStatus;

typedef enum {
  RN_AXIS_HORIZONTAL = 0,
  RN_AXIS_VERTICAL = 1,
} RnAxis;

typedef struct RnNfp RnNfp;

/**
 * A rasterized instance with its NFPs.
 */
typedef struct RnProblem RnProblem;

/**
 * Best layout of a solve.
 */
typedef struct RnSolution RnSolution;

/**
 * Solver parameters. `max_cdh_calls == 0` means no cap.
 */
typedef struct {
  double r_dec;
  double r_inc;
  uint32_t k_max;
  double time_limit;
  uint64_t seed;
  bool corner_reduction;
  uint64_t max_cdh_calls;
} RnConfig;

/**
 * Placement of one piece: orientation in degrees and reference point in
 * pixels.
 */
typedef struct {
  int32_t degrees;
  int32_t x;
  int32_t y;
} RnPlacement;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *rn_last_error_message(void);

/**
 * Parses an instance document and rasterizes it at `width_px`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
RnStatus rn_problem_from_json(const char *json, int32_t width_px, RnProblem **out);

/**
 * # Safety
 * `problem` must come from [`rn_problem_from_json`] and not be freed yet.
 */
void rn_problem_free(RnProblem *problem);

/**
 * Number of pieces once counts are expanded; 0 for null.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t rn_problem_piece_count(const RnProblem *problem);

/**
 * Fills `out` with the default parameters.
 *
 * # Safety
 * `out` must be writable.
 */
RnStatus rn_config_default(RnConfig *out);

/**
 * Runs the solver once.
 *
 * # Safety
 * `problem` and `config` must be live; `out` must be writable.
 */
RnStatus rn_solve(const RnProblem *problem, const RnConfig *config, RnSolution **out);

/**
 * Container length of the best layout in pixels; -1 for null.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
int32_t rn_solution_length(const RnSolution *solution);

/**
 * Density in percent; NaN for null.
 *
 * # Safety
 * `solution` must be null or a live handle.
 */
double rn_solution_density(const RnSolution *solution);

/**
 * Placement of piece `index`.
 *
 * # Safety
 * `solution` must be live; `out` must be writable.
 */
RnStatus rn_solution_placement(const RnSolution *solution, size_t index, RnPlacement *out);

/**
 * The result document as JSON. Release it with [`rn_string_free`].
 *
 * # Safety
 * `solution` must be live; `out` must be writable.
 */
RnStatus rn_solution_to_json(const RnSolution *solution, char **out);

/**
 * # Safety
 * `solution` must come from [`rn_solve`] and not be freed yet.
 */
void rn_solution_free(RnSolution *solution);

/**
 * # Safety
 * `s` must come from this library and not be freed yet.
 */
void rn_string_free(char *s);

/**
 * NFP of shape `a` (fixed) and shape `b` (moving) at the given orientations.
 *
 * # Safety
 * `problem` must be live, the shape ids nul-terminated; `out` writable.
 */
RnStatus rn_nfp_build(const RnProblem *problem,
                      const char *shape_a,
                      int32_t degrees_a,
                      const char *shape_b,
                      int32_t degrees_b,
                      RnNfp **out);

/**
 * Whether the shapes overlap at relative offset `(x, y)`; false for null.
 *
 * # Safety
 * `nfp` must be null or a live handle.
 */
bool rn_nfp_contains(const RnNfp *nfp, int32_t x, int32_t y);

/**
 * Penetration depth at `(x, y)` along `axis` (an [`RnAxis`] value).
 *
 * # Safety
 * `nfp` must be live; `out` must be writable.
 */
RnStatus rn_nfp_penetration_depth(const RnNfp *nfp,
                                  int32_t x,
                                  int32_t y,
                                  uint32_t axis,
                                  uint32_t *out);

/**
 * # Safety
 * `nfp` must come from [`rn_nfp_build`] and not be freed yet.
 */
void rn_nfp_free(RnNfp *nfp);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RASTERNEST_H */
