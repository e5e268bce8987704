/* C interface to the mw library. */
#ifndef MW_H
#define MW_H

#include <stddef.h>

#if defined(MW_BUILDING_LIBRARY)
#define MW_API __attribute__((visibility("default")))
#else
#define MW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct mw_scenario mw_scenario;
typedef struct mw_report mw_report;
typedef struct mw_expr mw_expr;

typedef enum mw_status {
  MW_OK = 0,
  MW_E_ARGUMENT = 1,
  MW_E_DOMAIN = 2,
  MW_E_CONFIG = 3,
  MW_E_VALIDATION = 4,
  MW_E_QUADRATURE = 5,
  MW_E_PRECONDITION = 6,
  MW_E_ITERATION = 7,
  MW_E_IO = 8,
  MW_E_PARSE = 9,
  MW_E_NUMERIC = 10,
  MW_E_DOMINATION_LOST = 11,
  MW_E_INTERNAL = 99
} mw_status;

/* Library version, e.g. "1.0.0". */
MW_API const char* mw_version(void);
/* Message of the last failed call on this thread; "" if none. */
MW_API const char* mw_last_error(void);
/* Gallery names by index; NULL past the end. */
MW_API const char* mw_gallery_name(size_t index);

/* Scenarios. */
MW_API mw_status mw_scenario_from_gallery(const char* name, mw_scenario** out);
/* Config text (key = value lines) with optional overrides applied on top. */
MW_API mw_status mw_scenario_from_config(const char* text, const char* const* keys, const char* const* values,
                                         size_t n_overrides, mw_scenario** out);
/* Sets one key and rebuilds the scenario; the handle is unchanged on error. */
MW_API mw_status mw_scenario_set(mw_scenario* s, const char* key, const char* value);
MW_API void mw_scenario_free(mw_scenario* s);
MW_API int mw_scenario_dim(const mw_scenario* s);
MW_API const char* mw_scenario_name(const mw_scenario* s);
/* f(z): out receives dim interleaved (re, im) pairs. */
MW_API mw_status mw_scenario_eval_map(const mw_scenario* s, double re, double im, double* out);
/* X(z): out receives dim reals. */
MW_API mw_status mw_scenario_eval_immersion(mw_scenario* s, double re, double im, double* out);

/* Commands.  Each produces a report the caller frees. */
typedef void (*mw_log_fn)(const char* line, void* user);
MW_API mw_status mw_gallery_describe(const mw_scenario* s, mw_report** out);
MW_API mw_status mw_verify(const mw_scenario* s, mw_report** out);
MW_API mw_status mw_periods(const mw_scenario* s, mw_report** out);
MW_API mw_status mw_close_periods(const mw_scenario* s, mw_log_fn log, void* user, mw_report** out);
/* Writes the mesh to the configured output, or <name>-<nrho>x<ntheta>.<format>. */
MW_API mw_status mw_mesh_export(const mw_scenario* s, mw_report** out);
MW_API mw_status mw_curvature(const mw_scenario* s, mw_report** out);

/* Reports.  The JSON text is owned by the report. */
MW_API const char* mw_report_json(mw_report* r, int indent);
MW_API int mw_report_passed(const mw_report* r);
MW_API size_t mw_report_check_count(const mw_report* r);
MW_API void mw_report_free(mw_report* r);

/* Involution I(z) = -1/conj(z). */
MW_API mw_status mw_involution(double re, double im, double* out_re, double* out_im);

/* Expressions in z. */
MW_API mw_status mw_expr_parse(const char* text, mw_expr** out);
MW_API mw_status mw_expr_eval(const mw_expr* e, double re, double im, double* out_re, double* out_im);
MW_API mw_status mw_expr_derivative(const mw_expr* e, mw_expr** out);
/* Canonical text; owned by the expression. */
MW_API const char* mw_expr_str(const mw_expr* e);
MW_API void mw_expr_free(mw_expr* e);

#ifdef __cplusplus
}
#endif

#endif
