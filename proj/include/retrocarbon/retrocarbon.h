/* Plain C interface to the retrocarbon simulator. */
#ifndef RETROCARBON_H
#define RETROCARBON_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(RETROCARBON_BUILDING)
#    define RC_API __declspec(dllexport)
#  else
#    define RC_API __declspec(dllimport)
#  endif
#else
#  define RC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rc_status {
    RC_OK = 0,
    RC_ERR_DOMAIN = 1,
    RC_ERR_HORIZON = 2,
    RC_ERR_DATA_GAP = 3,
    RC_ERR_SEQUENCING = 4,
    RC_ERR_WINDOW = 5,
    RC_ERR_AGENCY_COVERAGE = 6,
    RC_ERR_LIFECYCLE = 7,
    RC_ERR_PURCHASABILITY = 8,
    RC_ERR_SINGULARITY = 9,
    RC_ERR_LEDGER = 10,
    RC_ERR_OVERFLOW = 11,
    RC_ERR_CONFIG = 12,
    RC_ERR_AUDIT = 13,
    RC_ERR_IO = 14,
    RC_ERR_INVALID_ARGUMENT = 15,
    RC_ERR_NOT_FOUND = 16,
    RC_ERR_INTERNAL = 17
} rc_status;

typedef struct rc_scenario rc_scenario;
typedef struct rc_run rc_run;
typedef struct rc_sweep rc_sweep;

typedef struct rc_audit_result {
    int ok;
    int has_bad_seq;
    uint64_t first_bad_seq;
    size_t entries_checked;
    char message[256];
} rc_audit_result;

RC_API const char* rc_version(void);
RC_API const char* rc_status_name(rc_status status);
/* Message of the last failure on the calling thread; "" if none. */
RC_API const char* rc_last_error(void);
/* Strings returned through char** out-parameters. */
RC_API void rc_string_free(char* s);

RC_API rc_status rc_scenario_load(const char* path, rc_scenario** out);
RC_API rc_status rc_scenario_parse(const char* json, rc_scenario** out);
RC_API rc_status rc_scenario_serialize(const rc_scenario* scenario, char** out_json);
RC_API rc_status rc_scenario_name(const rc_scenario* scenario, const char** out);
RC_API void rc_scenario_free(rc_scenario* scenario);

RC_API rc_status rc_run_scenario(const rc_scenario* scenario, uint64_t seed, rc_run** out);
/* Borrowed view valid until rc_run_free. */
RC_API rc_status rc_run_series(const rc_run* run, const char* name, const double** values, size_t* length);
RC_API rc_status rc_run_scalar(const rc_run* run, const char* name, double* out);
RC_API rc_status rc_run_audit_ok(const rc_run* run, int* ok);
RC_API rc_status rc_run_write(const rc_run* run, const char* dir);
RC_API void rc_run_free(rc_run* run);

/* threads = 0 uses every hardware thread. */
RC_API rc_status rc_sweep_run(const rc_scenario* scenario, const uint64_t* seeds, size_t seed_count,
                              unsigned threads, rc_sweep** out);
RC_API rc_status rc_sweep_series(const rc_sweep* sweep, const char* name, const double** mean,
                                 const double** variance, size_t* length);
RC_API rc_status rc_sweep_scalar(const rc_sweep* sweep, const char* name, double* mean, double* variance);
RC_API rc_status rc_sweep_write(const rc_sweep* sweep, const char* dir);
RC_API void rc_sweep_free(rc_sweep* sweep);

/* Replays an exported ledger; balances_path may be NULL. RC_OK means the
   audit ran; the verdict is in out->ok. */
RC_API rc_status rc_audit_ledger_csv(const char* ledger_path, const char* balances_path, rc_audit_result* out);

/* Clears one JSON exchange round; see the README for the format. */
RC_API rc_status rc_exchange_clear_json(const char* round_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
