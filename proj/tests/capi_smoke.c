/* Compiled as plain C to prove the public header is C-clean and the shared
 * library round-trips models through parse, validate, execute, and kernels. */
#include <dmnkit.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond, label)                                     \
    do {                                                        \
        if (!(cond)) {                                          \
            fprintf(stderr, "FAIL %s: %s\n", label, #cond);     \
            ++failures;                                         \
        }                                                       \
    } while (0)

static const char* kModel =
    "{\"id\":\"smoke\",\"model_type\":\"Requirements\",\"output_node\":\"z\","
    "\"nodes\":["
    "{\"id\":\"a\",\"name\":\"a\",\"kind\":\"input\",\"value_type\":\"boolean\"},"
    "{\"id\":\"z\",\"name\":\"z\",\"kind\":\"output\",\"table\":{"
    "\"hit_policy\":\"UNIQUE\",\"inputs\":[\"a\"],\"output_name\":\"z\","
    "\"rules\":[{\"when\":[\"true\"],\"then\":\"true\"},"
    "{\"when\":[\"false\"],\"then\":\"false\"}]}}],"
    "\"edges\":[[\"a\",\"z\"]]}";

int main(void) {
    dmnkit_graph* g = NULL;
    dmnkit_graph* g2 = NULL;
    char* text = NULL;
    double value = -1.0;

    /* usage errors on null arguments */
    EXPECT(dmnkit_graph_parse(NULL, &g) == DMNKIT_E_USAGE, "null json");
    EXPECT(dmnkit_graph_parse(kModel, NULL) == DMNKIT_E_USAGE, "null out");

    /* data error with a populated message */
    EXPECT(dmnkit_graph_parse("{\"id\":1}", &g) == DMNKIT_E_DATA, "bad doc");
    EXPECT(strlen(dmnkit_last_error()) > 0, "error message set");

    /* parse, serialize, reparse */
    EXPECT(dmnkit_graph_parse(kModel, &g) == DMNKIT_OK, "parse");
    EXPECT(strlen(dmnkit_last_error()) == 0, "error cleared on success");
    EXPECT(dmnkit_graph_serialize(g, &text) == DMNKIT_OK, "serialize");
    EXPECT(text != NULL && strstr(text, "\"smoke\"") != NULL, "serialized id");
    EXPECT(dmnkit_graph_parse(text, &g2) == DMNKIT_OK, "reparse");
    dmnkit_string_free(text);
    text = NULL;

    /* validation */
    EXPECT(dmnkit_graph_validate(g, &text) == DMNKIT_OK, "validate");
    EXPECT(strstr(text, "\"ok\": true") != NULL, "valid model");
    dmnkit_string_free(text);
    text = NULL;

    /* execution, permissive then strict */
    EXPECT(dmnkit_graph_execute(g, "{\"a\": true}", 0, &text) == DMNKIT_OK, "exec");
    EXPECT(strstr(text, "\"output\": \"true\"") != NULL, "exec output");
    dmnkit_string_free(text);
    text = NULL;

    EXPECT(dmnkit_graph_execute(g, "{}", 1, &text) == DMNKIT_E_DATA, "strict exec");
    EXPECT(strstr(dmnkit_last_error(), "'a'") != NULL, "strict error names input");

    /* kernels */
    EXPECT(dmnkit_sp_similarity(g, g2, &value) == DMNKIT_OK, "sp kernel");
    EXPECT(value > 0.999999999 && value < 1.000000001, "self similarity");

    /* case generation */
    EXPECT(dmnkit_graph_cases(g, &text) == DMNKIT_OK, "cases");
    EXPECT(strstr(text, "\"case_count\": 2") != NULL, "two cases");
    dmnkit_string_free(text);
    text = NULL;

    /* equivalence of a model with itself */
    EXPECT(dmnkit_graph_equivalence(g, g2, NULL, &text) == DMNKIT_OK, "equivalence");
    EXPECT(strstr(text, "\"rate\": 1.0") != NULL, "self equivalence");
    dmnkit_string_free(text);
    text = NULL;

    dmnkit_string_free(NULL); /* no-op */
    dmnkit_graph_free(g);
    dmnkit_graph_free(g2);
    dmnkit_graph_free(NULL);

    if (failures) {
        fprintf(stderr, "%d smoke checks failed\n", failures);
        return 1;
    }
    printf("capi smoke: all checks passed\n");
    return 0;
}
