#ifndef CUTPARAM_H
#define CUTPARAM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Report kinds for [`cp_analysis_report`].
typedef enum CpReport {
  CP_REPORT_CLASSIFICATION_JSON = 0,
  CP_REPORT_CHECK_TABLE = 1,
  CP_REPORT_CHECK_CSV = 2,
  CP_REPORT_LOOPS = 3,
  CP_REPORT_SAMPLES_CSV = 4,
  CP_REPORT_VERIFICATION = 5,
} CpReport;

// Result of every fallible call.
typedef enum CpStatus {
  CP_STATUS_OK = 0,
  // Null pointer, bad UTF-8 or an out-of-range argument.
  CP_STATUS_INVALID_ARGUMENT = 1,
  // Malformed curve or mesh text.
  CP_STATUS_PARSE = 2,
  // Invalid mesh.
  CP_STATUS_MESH = 3,
  // Curve evaluation failed (no convergence, outside the tube, ...).
  CP_STATUS_CURVE = 4,
  // The curve is not immersed or two triangles claim one positive edge.
  CP_STATUS_CLASSIFY = 5,
  // Positive edges do not form simple closed loops.
  CP_STATUS_TOPOLOGY = 6,
  CP_STATUS_IO = 7,
  // A panic was caught; the message says where.
  CP_STATUS_INTERNAL = 8,
} CpStatus;

typedef struct CpAnalysis CpAnalysis;

typedef struct CpCurve CpCurve;

typedef struct CpMesh CpMesh;

// A curve point with its frame.
typedef struct CpCurvePoint {
  double x;
  double y;
  double tx;
  double ty;
  double nx;
  double ny;
  double signed_curvature;
  uintptr_t component;
} CpCurvePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Description of the last failure on this thread; empty after a success.
// The pointer stays valid until the next call on this thread.
const char *cp_last_error(void);

// Frees a string returned by this library.
void cp_string_free(char *s);

// Builds a curve from the text curve description format.
enum CpStatus cp_curve_from_config(const char *config, struct CpCurve **out);

// Circle of radius `r` about `(cx, cy)`.
enum CpStatus cp_curve_circle(double cx, double cy, double r, struct CpCurve **out);

void cp_curve_free(struct CpCurve *c);

enum CpStatus cp_curve_num_components(const struct CpCurve *c, uintptr_t *out);

// Estimated tube radius.
enum CpStatus cp_curve_reach(const struct CpCurve *c, double *out);

// Signed distance, negative inside.
enum CpStatus cp_curve_signed_distance(const struct CpCurve *c, double x, double y, double *out);

// Closest point; fails with `Curve` outside the tube.
enum CpStatus cp_curve_closest_point(const struct CpCurve *c,
                                     double x,
                                     double y,
                                     struct CpCurvePoint *out);

// Parses the text mesh format.
enum CpStatus cp_mesh_from_text(const char *src, struct CpMesh **out);

// Equilateral grid over `[x0, x1] × [y0, y1]` with `margin` extra cells.
enum CpStatus cp_mesh_equilateral_grid(double x0,
                                       double y0,
                                       double x1,
                                       double y1,
                                       double h,
                                       uintptr_t margin,
                                       struct CpMesh **out);

// Builds a mesh from `nv` coordinate pairs and `nt` index triples.
enum CpStatus cp_mesh_new(const double *xy,
                          uintptr_t nv,
                          const uintptr_t *triangles,
                          uintptr_t nt,
                          struct CpMesh **out);

void cp_mesh_free(struct CpMesh *m);

enum CpStatus cp_mesh_num_vertices(const struct CpMesh *m, uintptr_t *out);

enum CpStatus cp_mesh_num_triangles(const struct CpMesh *m, uintptr_t *out);

// Mesh in the text format; free with [`cp_string_free`].
enum CpStatus cp_mesh_to_text(const struct CpMesh *m, char **out);

// Runs classification, the condition report, loop construction,
// sampling with `samples_per_edge` interior points and verification.
//
// A handle is produced whenever the inputs are valid, even if a later
// stage stops the run; query [`cp_analysis_exit_code`] for the outcome.
enum CpStatus cp_analyze(const struct CpCurve *curve,
                         const struct CpMesh *mesh,
                         bool negative,
                         uintptr_t samples_per_edge,
                         struct CpAnalysis **out);

void cp_analysis_free(struct CpAnalysis *a);

// 0 pass, 1 hypothesis or verification failure, 2 invalid input.
int32_t cp_analysis_exit_code(const struct CpAnalysis *a);

bool cp_analysis_conditions_pass(const struct CpAnalysis *a);

bool cp_analysis_global_pass(const struct CpAnalysis *a);

uintptr_t cp_analysis_num_cut_triangles(const struct CpAnalysis *a);

uintptr_t cp_analysis_num_positive_edges(const struct CpAnalysis *a);

uintptr_t cp_analysis_num_loops(const struct CpAnalysis *a);

// Copies the vertex cycle of loop `i` into `buf` (capacity `cap`) and
// stores its length in `len`. With `cap` too small only `len` is written.
enum CpStatus cp_analysis_loop_vertices(const struct CpAnalysis *a,
                                        uintptr_t i,
                                        uintptr_t *buf,
                                        uintptr_t cap,
                                        uintptr_t *len);

// One of the text reports; free with [`cp_string_free`]. Fails with
// `InvalidArgument` when the stage producing it did not run.
enum CpStatus cp_analysis_report(const struct CpAnalysis *a, enum CpReport kind, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CUTPARAM_H */
