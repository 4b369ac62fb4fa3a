/* Exercises the shared library through its C header only. */

#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "cegbma/cegbma.h"

static int failures = 0;

#define EXPECT(cond)                                                    \
    do {                                                                \
        if (!(cond)) {                                                  \
            fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                 \
        }                                                               \
    } while (0)

static void write_file(const char* path, const char* text) {
    FILE* f = fopen(path, "w");
    if (!f) {
        perror(path);
        exit(1);
    }
    fputs(text, f);
    fclose(f);
}

static void test_scoring(void) {
    const double alpha[] = {1, 1};
    const uint64_t a[] = {2, 0}, b[] = {0, 2}, c[] = {1, 0};
    double out = 0;
    uint64_t bell = 0;
    EXPECT(ceg_stage_log_score(alpha, c, 2, &out) == CEG_OK);
    EXPECT(fabs(out + log(2.0)) < 1e-12);
    EXPECT(ceg_merge_log_bf(alpha, a, alpha, b, 2, &out) == CEG_OK);
    EXPECT(fabs(out - log(27.0 / 70.0)) < 1e-9);
    EXPECT(ceg_bell(14, &bell) == CEG_OK && bell == 190899322u);
    EXPECT(ceg_bell(26, &bell) == CEG_ERR_ARGUMENT);
    EXPECT(strlen(ceg_last_error()) > 0);
    EXPECT(ceg_stage_log_score(NULL, c, 2, &out) == CEG_ERR_ARGUMENT);
}

static void test_tree_and_hyperstage(const char* dir) {
    /* four_binary layout: a..d then x / y. */
    const char* labels[] = {"a", "x", "a", "x", "b", "x", "b", "y", "c", "y", "d", "y", "d", "y"};
    const size_t lengths[] = {2, 2, 2, 2, 2, 2, 2};
    ceg_tree* tree = NULL;
    ceg_hyperstage* hs = NULL;
    const char* label = NULL;
    size_t head = 0;
    uint64_t count = 0, size = 0;
    const char* violations = NULL;
    char path[512];

    EXPECT(ceg_tree_from_records(labels, lengths, 7, &tree) == CEG_OK);
    EXPECT(ceg_tree_vertex_count(tree) == 10);
    EXPECT(ceg_tree_situation_count(tree) == 5);
    EXPECT(ceg_tree_total_count(tree) == 7);
    EXPECT(ceg_tree_out_degree(tree, 1) == 1);
    EXPECT(ceg_tree_edge(tree, 0, 3, &label, &head, &count) == CEG_OK);
    EXPECT(strcmp(label, "d") == 0 && head == 4 && count == 2);
    EXPECT(ceg_tree_edge(tree, 0, 9, &label, &head, &count) == CEG_ERR_ARGUMENT);

    EXPECT(ceg_hyperstage_default(tree, &hs) == CEG_OK);
    EXPECT(ceg_hyperstage_validate(tree, hs, &violations) == CEG_OK);
    EXPECT(ceg_model_space_size(hs, &size) == CEG_OK);
    ceg_hyperstage_free(hs);

    snprintf(path, sizeof path, "%s/c_api_bad_hyperstage.json", dir);
    write_file(path, "[[\"s0\", \"s1\"], [\"s2\"], [\"s3\"], [\"s4\"]]");
    EXPECT(ceg_hyperstage_from_file(tree, path, &hs) == CEG_OK);
    EXPECT(ceg_hyperstage_block_count(hs) == 4);
    EXPECT(ceg_hyperstage_block_size(hs, 0) == 2);
    EXPECT(ceg_hyperstage_validate(tree, hs, &violations) == CEG_ERR_VALIDATION);
    EXPECT(violations && strstr(violations, "mixed out-degree"));
    {
        ceg_options o;
        ceg_result* r = NULL;
        ceg_options_init(&o);
        o.alpha_bar = 4;
        EXPECT(ceg_fit(tree, hs, &o, &r) == CEG_ERR_VALIDATION);
        EXPECT(r == NULL);
    }
    ceg_hyperstage_free(hs);
    ceg_tree_free(tree);

    EXPECT(ceg_tree_from_records(NULL, NULL, 0, &tree) == CEG_ERR_INPUT);
    EXPECT(strstr(ceg_last_error(), "empty record list") != NULL);
    snprintf(path, sizeof path, "%s/c_api_missing.csv", dir);
    EXPECT(ceg_tree_from_csv(path, 1, &tree) == CEG_ERR_INPUT);
    EXPECT(ceg_tree_from_csv(NULL, 1, &tree) == CEG_ERR_ARGUMENT);
    ceg_tree_free(NULL);
    ceg_hyperstage_free(NULL);
    ceg_result_free(NULL);
}

static void test_workflows(const char* dir) {
    char model_path[512], csv_path[512];
    ceg_result* sim = NULL;
    ceg_tree* tree = NULL;
    ceg_hyperstage* hs = NULL;
    ceg_result* r = NULL;
    ceg_options o;
    FILE* f;
    char* model;
    long size;

    snprintf(model_path, sizeof model_path, "%s/falls_generating_model.json", CEGBMA_DATA_DIR);
    f = fopen(model_path, "rb");
    if (!f) {
        perror(model_path);
        exit(1);
    }
    fseek(f, 0, SEEK_END);
    size = ftell(f);
    rewind(f);
    model = malloc((size_t)size + 1);
    if (fread(model, 1, (size_t)size, f) != (size_t)size) exit(1);
    model[size] = '\0';
    fclose(f);

    EXPECT(ceg_simulate(model, 0, 1, &sim) == CEG_OK);
    EXPECT(ceg_result_count(sim) == 1);
    EXPECT(strchr(ceg_result_text(sim, 0), '\n') == ceg_result_text(sim, 0) + strlen(ceg_result_text(sim, 0)) - 1);
    ceg_result_free(sim);

    EXPECT(ceg_simulate(model, 2000, 5, &sim) == CEG_OK);
    snprintf(csv_path, sizeof csv_path, "%s/c_api_falls.csv", dir);
    write_file(csv_path, ceg_result_find(sim, ".csv"));
    ceg_result_free(sim);
    EXPECT(ceg_simulate("{oops", 10, 5, &sim) == CEG_ERR_INPUT);
    free(model);

    EXPECT(ceg_tree_from_csv(csv_path, 1, &tree) == CEG_OK);
    EXPECT(ceg_tree_total_count(tree) == 2000);
    EXPECT(ceg_hyperstage_default(tree, &hs) == CEG_OK);
    EXPECT(ceg_hyperstage_block_count(hs) == 5);

    ceg_options_init(&o);
    EXPECT(o.beta == 20.0 && o.k == 100 && o.max_combined_models == 100000 && o.has_header == 1);
    EXPECT(ceg_fit(tree, hs, &o, &r) == CEG_ERR_ARGUMENT); /* alpha_bar is required */
    o.alpha_bar = 4;
    o.k = 10;
    o.seed = 3;
    o.threads = 2;
    o.run_id = "capi";
    EXPECT(ceg_fit(tree, hs, &o, &r) == CEG_OK);
    EXPECT(ceg_result_find(r, "capi.report.json") != NULL);
    EXPECT(ceg_result_find(r, "ceg.dot") != NULL);
    EXPECT(ceg_result_find(r, "nothing") == NULL);
    EXPECT(ceg_result_name(r, 99) == NULL);
    {
        ceg_result* exported = NULL;
        EXPECT(ceg_export(ceg_result_find(r, "report.json"), &exported) == CEG_OK);
        EXPECT(strcmp(ceg_result_find(exported, "staged_tree.dot"), ceg_result_find(r, "staged_tree.dot")) == 0);
        ceg_result_free(exported);
    }
    ceg_result_free(r);

    {
        ceg_result* again = NULL;
        EXPECT(ceg_average(tree, hs, &o, &r) == CEG_OK);
        o.threads = 1;
        EXPECT(ceg_average(tree, hs, &o, &again) == CEG_OK);
        EXPECT(strcmp(ceg_result_find(r, "report.json"), ceg_result_find(again, "report.json")) == 0);
        ceg_result_free(again);
        ceg_result_free(r);
    }

    o.hyperset = 1;
    EXPECT(ceg_enumerate(tree, hs, &o, &r) == CEG_OK);
    EXPECT(strstr(ceg_result_find(r, "stagings.csv"), "staging,log_score") != NULL);
    ceg_result_free(r);
    o.hyperset = 4;
    EXPECT(ceg_enumerate(tree, hs, &o, &r) == CEG_ERR_CAPACITY);

    EXPECT(ceg_run_manifest("{\"command\": \"fit\"}", 1, &r) == CEG_ERR_INPUT);
    EXPECT(ceg_run_manifest("not json", 1, &r) == CEG_ERR_INPUT);

    ceg_hyperstage_free(hs);
    ceg_tree_free(tree);
}

int main(int argc, char** argv) {
    const char* dir = argc > 1 ? argv[1] : ".";
    EXPECT(strcmp(ceg_version(), "0.1.0") == 0);
    test_scoring();
    test_tree_and_hyperstage(dir);
    test_workflows(dir);
    if (failures) {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("C API: all checks passed\n");
    return 0;
}
