/* Exercises the C interface end to end. argv[1]: scenarios dir, argv[2]: output dir. */
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "retrocarbon/retrocarbon.h"

static int failures = 0;

#define CHECK(cond)                                                      \
    do {                                                                 \
        if (!(cond)) {                                                   \
            fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                  \
        }                                                                \
    } while (0)

static void join(char* buf, size_t n, const char* dir, const char* file) { snprintf(buf, n, "%s/%s", dir, file); }

int main(int argc, char** argv) {
    if (argc < 3) {
        fprintf(stderr, "usage: capi_test <scenarios> <out>\n");
        return 2;
    }
    char path[1024];
    CHECK(strcmp(rc_version(), "1.0.0") == 0);
    CHECK(strcmp(rc_status_name(RC_ERR_AUDIT), "audit") == 0);

    rc_scenario* sc = NULL;
    CHECK(rc_scenario_load("/nonexistent/x.json", &sc) == RC_ERR_CONFIG);
    CHECK(strlen(rc_last_error()) > 0);
    CHECK(rc_scenario_load(NULL, &sc) == RC_ERR_INVALID_ARGUMENT);
    CHECK(rc_scenario_parse("{\"schema_version\": 1}", &sc) == RC_ERR_CONFIG);

    join(path, sizeof path, argv[1], "insured_recap.json");
    CHECK(rc_scenario_load(path, &sc) == RC_OK);
    const char* name = NULL;
    CHECK(rc_scenario_name(sc, &name) == RC_OK && strcmp(name, "insured-recap") == 0);

    char* text = NULL;
    CHECK(rc_scenario_serialize(sc, &text) == RC_OK);
    rc_scenario* again = NULL;
    CHECK(rc_scenario_parse(text, &again) == RC_OK);
    char* text2 = NULL;
    CHECK(rc_scenario_serialize(again, &text2) == RC_OK);
    CHECK(text && text2 && strcmp(text, text2) == 0);
    rc_string_free(text);
    rc_string_free(text2);
    rc_scenario_free(again);

    rc_run* run = NULL;
    CHECK(rc_run_scenario(sc, 7, &run) == RC_OK);
    int ok = 0;
    CHECK(rc_run_audit_ok(run, &ok) == RC_OK && ok == 1);
    const double* values = NULL;
    size_t len = 0;
    CHECK(rc_run_series(run, "initial_estimate", &values, &len) == RC_OK);
    CHECK(len == 40);
    CHECK(values && values[0] > 0.0);
    CHECK(rc_run_series(run, "nope", &values, &len) == RC_ERR_NOT_FOUND);
    double shortfall = -1.0;
    CHECK(rc_run_scalar(run, "government_shortfall", &shortfall) == RC_OK && shortfall >= 0.0);
    CHECK(rc_run_write(run, argv[2]) == RC_OK);
    rc_run_free(run);

    rc_audit_result audit;
    join(path, sizeof path, argv[2], "insured-recap_s7_ledger.csv");
    char balances[1024];
    join(balances, sizeof balances, argv[2], "insured-recap_s7_balances.csv");
    CHECK(rc_audit_ledger_csv(path, balances, &audit) == RC_OK);
    CHECK(audit.ok == 1 && audit.entries_checked > 0);
    CHECK(rc_audit_ledger_csv("/nonexistent.csv", NULL, &audit) == RC_ERR_IO);

    uint64_t seeds[] = {1, 2, 3};
    rc_sweep* sw = NULL;
    CHECK(rc_sweep_run(sc, seeds, 3, 2, &sw) == RC_OK);
    const double *mean = NULL, *var = NULL;
    CHECK(rc_sweep_series(sw, "initial_estimate", &mean, &var, &len) == RC_OK && len == 40);
    double m = 0.0, v = 0.0;
    CHECK(rc_sweep_scalar(sw, "ppp_gap", &m, &v) == RC_OK && m > 0.0 && v >= 0.0);
    CHECK(rc_sweep_write(sw, argv[2]) == RC_OK);
    rc_sweep_free(sw);
    rc_scenario_free(sc);

    char* cleared = NULL;
    CHECK(rc_exchange_clear_json("{\"orders\": [{\"side\": \"buyer-bid\", \"agent_id\": \"b\", \"price_micro\": 100000000, \"volume\": 1},"
                                 "{\"side\": \"supplier-ask\", \"agent_id\": \"s\", \"price_micro\": 80000000, \"volume\": 1},"
                                 "{\"side\": \"premium-ask\", \"agent_id\": \"i\", \"price_micro\": 15000000, \"volume\": 1}]}",
                                 &cleared) == RC_OK);
    CHECK(cleared && strstr(cleared, "\"price_micro\": 95000000") != NULL);
    rc_string_free(cleared);
    CHECK(rc_exchange_clear_json("not json", &cleared) == RC_ERR_CONFIG);

    if (failures) {
        fprintf(stderr, "%d failures\n", failures);
        return 1;
    }
    printf("capi ok\n");
    return 0;
}
