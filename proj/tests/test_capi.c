#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fairboost/fairboost.h"

static int failures = 0;

#define EXPECT(cond)                                                        \
    do {                                                                    \
        if (!(cond)) {                                                      \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                     \
        }                                                                   \
    } while (0)

static const char* kInstance =
    "{\"points\": [\"a\", \"b\", \"c\", \"d\"],"
    " \"weights\": [0.25, 0.25, 0.25, 0.25],"
    " \"labels\": {\"kind\": \"deterministic\", \"values\": [1, 1, 0, 0]},"
    " \"class\": {\"kind\": \"pm1\", \"hypotheses\": ["
    "   {\"name\": \"first\", \"values\": [1, 1, -1, -1]},"
    "   {\"name\": \"odd\", \"values\": [1, -1, 1, -1]}]},"
    " \"predictor\": {\"values\": [0.75, 0.25, 0.75, 0.25]}}";

static void test_instance_and_metrics(void) {
    fb_instance* inst = NULL;
    size_t n = 0;
    fb_predictor* p = NULL;
    double v = -1.0;

    EXPECT(fb_instance_from_json(kInstance, &inst) == FB_OK);
    EXPECT(fb_instance_size(inst, &n) == FB_OK && n == 4);
    EXPECT(fb_instance_class_size(inst, &n) == FB_OK && n == 2);
    EXPECT(fb_instance_predictor(inst, &p) == FB_OK);

    /* Residual y - p is (0.25, 0.75, -0.75, -0.25). */
    EXPECT(fb_metric_value(inst, p, FB_METRIC_MA, &v) == FB_OK && fabs(v - 0.5) < 1e-12);
    EXPECT(fb_metric_value(inst, p, FB_METRIC_EAE, &v) == FB_OK && fabs(v) < 1e-12);
    EXPECT(fb_metric_value(inst, p, FB_METRIC_ECE, &v) == FB_OK && fabs(v - 0.25) < 1e-12);
    EXPECT(fb_metric_value(inst, p, FB_METRIC_OPT, &v) == FB_OK && fabs(v - 1.0) < 1e-12);
    fb_predictor_free(p);

    {
        const double short_values[2] = {0.5, 0.5};
        p = NULL;
        EXPECT(fb_predictor_from_values(short_values, 2, 0.0, &p) == FB_OK);
        EXPECT(fb_metric_value(inst, p, FB_METRIC_ECE, &v) == FB_ERR_DOMAIN_MISMATCH);
        EXPECT(strlen(fb_last_error()) > 0);
        fb_predictor_free(p);
    }
    {
        const double bad[1] = {1.5};
        p = NULL;
        EXPECT(fb_predictor_from_values(bad, 1, 0.0, &p) == FB_ERR_INVALID_ARGUMENT);
        EXPECT(p == NULL);
    }
    fb_instance_free(inst);

    inst = NULL;
    EXPECT(fb_instance_from_json("{\"points\": [", &inst) == FB_ERR_SCHEMA);
    EXPECT(inst == NULL);
    EXPECT(strstr(fb_last_error(), "not valid JSON") != NULL);
}

static void test_learn(void) {
    fb_instance* inst = NULL;
    fb_predictor* p = NULL;
    char* trace = NULL;
    double values[4];
    double ma = 1.0;
    size_t n = 0;

    EXPECT(fb_instance_from_json(kInstance, &inst) == FB_OK);
    EXPECT(fb_learn(inst, "calma", "{\"tau\": 0.02}", &p, &trace) == FB_OK);
    EXPECT(trace != NULL && strstr(trace, "sq_loss") != NULL);
    EXPECT(fb_predictor_size(p, &n) == FB_OK && n == 4);
    EXPECT(fb_predictor_values(p, values, 4) == FB_OK);
    EXPECT(values[0] >= 0.0 && values[0] <= 1.0);
    EXPECT(fb_metric_value(inst, p, FB_METRIC_MA, &ma) == FB_OK && ma <= 0.02 + 1e-9);
    fb_string_free(trace);
    fb_predictor_free(p);

    p = NULL;
    EXPECT(fb_learn(inst, "nonsense", NULL, &p, NULL) != FB_OK);
    EXPECT(fb_learn(inst, "ma", "{\"tau\": 0.1, \"bogus\": 1}", &p, NULL) == FB_ERR_SCHEMA);
    fb_instance_free(inst);
}

static void test_run(void) {
    fb_result* r = NULL;
    EXPECT(fb_run("gen", "{\"generator\": \"maj\"}", NULL, &r) == FB_OK);
    EXPECT(fb_result_exit_code(r) == 0);
    EXPECT(fb_result_artifact(r, "instance") != NULL);
    EXPECT(fb_result_artifact(r, "measure") == NULL);
    EXPECT(strstr(fb_result_report(r), "\"command\": \"gen\"") != NULL);
    fb_result_free(r);

    r = NULL;
    EXPECT(fb_run("learn", "{\"generator\": \"maj\"}", "{\"tier\": \"ma\", \"tau\": 0.001, \"max_iters\": 1}", &r) ==
           FB_OK);
    EXPECT(fb_result_exit_code(r) == 2);
    EXPECT(fb_result_artifact(r, "trace_csv") != NULL);
    fb_result_free(r);

    {
        fb_instance* maj = NULL;
        fb_predictor* p = NULL;
        r = NULL;
        EXPECT(fb_run("gen", "{\"generator\": \"maj\"}", NULL, &r) == FB_OK);
        EXPECT(fb_instance_from_json(fb_result_artifact(r, "instance"), &maj) == FB_OK);
        EXPECT(fb_learn(maj, "ma", "{\"tau\": 0.001, \"max_iters\": 1}", &p, NULL) == FB_ERR_ITERATION_CAP);
        EXPECT(p == NULL);
        fb_instance_free(maj);
        fb_result_free(r);
    }

    r = NULL;
    EXPECT(fb_run("nope", NULL, NULL, &r) == FB_ERR_INVALID_ARGUMENT);
    EXPECT(fb_run("verify", NULL, "{\"suite\": 3}", &r) == FB_ERR_SCHEMA);
    EXPECT(fb_run(NULL, NULL, NULL, &r) == FB_ERR_INVALID_ARGUMENT);
}

int main(void) {
    EXPECT(strcmp(fb_version(), "0.1.0") == 0);
    EXPECT(strlen(fb_status_name(FB_ERR_SCHEMA)) > 0);
    EXPECT(strstr(fb_suite_names(), "goldreich-levin\n") != NULL);
    test_instance_and_metrics();
    test_learn();
    test_run();
    if (failures) {
        fprintf(stderr, "%d C API check(s) failed\n", failures);
        return 1;
    }
    printf("C API checks passed\n");
    return 0;
}
