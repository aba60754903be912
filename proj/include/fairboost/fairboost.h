#ifndef FAIRBOOST_H
#define FAIRBOOST_H

/* C interface to libfairboost. Every handle is opaque and owned by the caller
 * until passed to the matching *_free function. Functions return a status
 * code; on failure fb_last_error() describes the problem for the calling
 * thread. JSON documents use the same schema as the command-line tool. */

#include <stddef.h>

#if defined(_WIN32)
#define FB_API __declspec(dllexport)
#else
#define FB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fb_status {
    FB_OK = 0,
    FB_ERR_INVALID_ARGUMENT = 1,
    FB_ERR_SCHEMA = 2,
    FB_ERR_DOMAIN_MISMATCH = 3,
    FB_ERR_EMPTY_CLASS = 4,
    FB_ERR_ITERATION_CAP = 5,
    FB_ERR_MEASURE_ZERO = 6,
    FB_ERR_BOUND_VIOLATION = 7,
    FB_ERR_IO = 8,
    FB_ERR_INTERNAL = 9
} fb_status;

typedef enum fb_metric {
    FB_METRIC_EAE = 0,
    FB_METRIC_ECE = 1,
    FB_METRIC_MA = 2,
    /* Weighted by w_Max(v) = 1 / max(v, 1 - v); needs deterministic labels. */
    FB_METRIC_WEIGHTED_MA = 3,
    FB_METRIC_MC = 4,
    FB_METRIC_OPT = 5,
    FB_METRIC_BEST_POSTPROCESSING = 6,
    /* E[(2y - 1)(2p(x) - 1)] */
    FB_METRIC_CORRELATION = 7
} fb_metric;

typedef struct fb_instance fb_instance;
typedef struct fb_predictor fb_predictor;
typedef struct fb_result fb_result;

FB_API const char* fb_version(void);
/* Verification suite names, newline-separated. Static storage. */
FB_API const char* fb_suite_names(void);
/* Message of the last failed call on this thread, "" when none. */
FB_API const char* fb_last_error(void);
FB_API const char* fb_status_name(fb_status status);
FB_API void fb_string_free(char* s);

/* Instance document: domain, labels and optionally class, predictor, measure. */
FB_API fb_status fb_instance_from_json(const char* json, fb_instance** out);
FB_API void fb_instance_free(fb_instance* inst);
FB_API fb_status fb_instance_size(const fb_instance* inst, size_t* out);
FB_API fb_status fb_instance_class_size(const fb_instance* inst, size_t* out);
/* Copies the document's predictor; FB_ERR_SCHEMA when it has none. */
FB_API fb_status fb_instance_predictor(const fb_instance* inst, fb_predictor** out);

/* grid <= 0 means no grid. */
FB_API fb_status fb_predictor_from_values(const double* values, size_t n, double grid, fb_predictor** out);
FB_API void fb_predictor_free(fb_predictor* p);
FB_API fb_status fb_predictor_size(const fb_predictor* p, size_t* out);
/* Copies min(n, size) values into out. */
FB_API fb_status fb_predictor_values(const fb_predictor* p, double* out, size_t n);

FB_API fb_status fb_metric_value(const fb_instance* inst, const fb_predictor* p, fb_metric metric, double* out);

/* tier is "ma", "calma", "wma" or "mc"; config_json may be NULL. The trace is
 * written as a JSON string to *trace_json when it is not NULL (free with
 * fb_string_free). */
FB_API fb_status fb_learn(const fb_instance* inst, const char* tier, const char* config_json, fb_predictor** out,
                          char** trace_json);

/* Runs a tool command ("audit", "learn", "hardcore", "verify", "gen", "gl").
 * input_json may be NULL for commands without input; options_json may be
 * NULL. Iteration-cap failures still produce a result, with exit code 2. */
FB_API fb_status fb_run(const char* command, const char* input_json, const char* options_json, fb_result** out);
FB_API void fb_result_free(fb_result* r);
/* 0 ok, 2 learner non-convergence, 3 bound violation. */
FB_API int fb_result_exit_code(const fb_result* r);
/* Owned by the result. */
FB_API const char* fb_result_report(const fb_result* r);
/* "predictor", "trace_csv", "measure", "instance" or "table_csv"; NULL when
 * the command did not produce it. Owned by the result. */
FB_API const char* fb_result_artifact(const fb_result* r, const char* name);

#ifdef __cplusplus
}
#endif

#endif
