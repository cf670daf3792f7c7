#include "retrocarbon/retrocarbon.h"

#include <cstring>
#include <fstream>
#include <string>

#include "retrocarbon/exchange.hpp"
#include "retrocarbon/ledger.hpp"
#include "retrocarbon/scenario.hpp"

struct rc_scenario {
    retrocarbon::ScenarioConfig config;
};

struct rc_run {
    retrocarbon::RunResult result;
};

struct rc_sweep {
    retrocarbon::SweepReport report;
};

namespace {

thread_local std::string last_error;

rc_status to_status(retrocarbon::ErrorCode code) {
    using retrocarbon::ErrorCode;
    switch (code) {
        case ErrorCode::domain: return RC_ERR_DOMAIN;
        case ErrorCode::horizon: return RC_ERR_HORIZON;
        case ErrorCode::data_gap: return RC_ERR_DATA_GAP;
        case ErrorCode::sequencing: return RC_ERR_SEQUENCING;
        case ErrorCode::window: return RC_ERR_WINDOW;
        case ErrorCode::agency_coverage: return RC_ERR_AGENCY_COVERAGE;
        case ErrorCode::lifecycle: return RC_ERR_LIFECYCLE;
        case ErrorCode::purchasability: return RC_ERR_PURCHASABILITY;
        case ErrorCode::singularity: return RC_ERR_SINGULARITY;
        case ErrorCode::ledger: return RC_ERR_LEDGER;
        case ErrorCode::overflow: return RC_ERR_OVERFLOW;
        case ErrorCode::config: return RC_ERR_CONFIG;
        case ErrorCode::audit: return RC_ERR_AUDIT;
        case ErrorCode::io: return RC_ERR_IO;
    }
    return RC_ERR_INTERNAL;
}

rc_status fail(rc_status status, std::string msg) {
    last_error = std::move(msg);
    return status;
}

template <class F>
rc_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const retrocarbon::Error& e) {
        return fail(to_status(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(RC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RC_ERR_INTERNAL, "unknown exception");
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* rc_version(void) { return "1.0.0"; }

const char* rc_status_name(rc_status status) {
    switch (status) {
        case RC_OK: return "ok";
        case RC_ERR_DOMAIN: return "domain";
        case RC_ERR_HORIZON: return "horizon";
        case RC_ERR_DATA_GAP: return "data-gap";
        case RC_ERR_SEQUENCING: return "sequencing";
        case RC_ERR_WINDOW: return "window";
        case RC_ERR_AGENCY_COVERAGE: return "agency-coverage";
        case RC_ERR_LIFECYCLE: return "lifecycle";
        case RC_ERR_PURCHASABILITY: return "purchasability";
        case RC_ERR_SINGULARITY: return "singularity";
        case RC_ERR_LEDGER: return "ledger";
        case RC_ERR_OVERFLOW: return "overflow";
        case RC_ERR_CONFIG: return "config";
        case RC_ERR_AUDIT: return "audit";
        case RC_ERR_IO: return "io";
        case RC_ERR_INVALID_ARGUMENT: return "invalid-argument";
        case RC_ERR_NOT_FOUND: return "not-found";
        case RC_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* rc_last_error(void) { return last_error.c_str(); }

void rc_string_free(char* s) { delete[] s; }

rc_status rc_scenario_load(const char* path, rc_scenario** out) {
    if (!path || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new rc_scenario{retrocarbon::load_scenario(path)};
        return RC_OK;
    });
}

rc_status rc_scenario_parse(const char* json, rc_scenario** out) {
    if (!json || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new rc_scenario{retrocarbon::parse_scenario(json)};
        return RC_OK;
    });
}

rc_status rc_scenario_serialize(const rc_scenario* scenario, char** out_json) {
    if (!scenario || !out_json) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_json = copy_string(retrocarbon::serialize_scenario(scenario->config));
        return RC_OK;
    });
}

rc_status rc_scenario_name(const rc_scenario* scenario, const char** out) {
    if (!scenario || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    *out = scenario->config.name.c_str();
    return RC_OK;
}

void rc_scenario_free(rc_scenario* scenario) { delete scenario; }

rc_status rc_run_scenario(const rc_scenario* scenario, uint64_t seed, rc_run** out) {
    if (!scenario || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = new rc_run{retrocarbon::run_scenario_detailed(scenario->config, seed)};
        return RC_OK;
    });
}

rc_status rc_run_series(const rc_run* run, const char* name, const double** values, size_t* length) {
    if (!run || !name || !values || !length) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    const auto& series = run->result.metrics.series;
    auto it = series.find(name);
    if (it == series.end()) return fail(RC_ERR_NOT_FOUND, std::string("no series '") + name + "'");
    *values = it->second.data();
    *length = it->second.size();
    return RC_OK;
}

rc_status rc_run_scalar(const rc_run* run, const char* name, double* out) {
    if (!run || !name || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    const auto& scalars = run->result.metrics.scalars;
    auto it = scalars.find(name);
    if (it == scalars.end()) return fail(RC_ERR_NOT_FOUND, std::string("no scalar '") + name + "'");
    *out = it->second;
    return RC_OK;
}

rc_status rc_run_audit_ok(const rc_run* run, int* ok) {
    if (!run || !ok) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    *ok = run->result.metrics.audit.ok ? 1 : 0;
    return RC_OK;
}

rc_status rc_run_write(const rc_run* run, const char* dir) {
    if (!run || !dir) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        retrocarbon::write_run_outputs(run->result, dir);
        return RC_OK;
    });
}

void rc_run_free(rc_run* run) { delete run; }

rc_status rc_sweep_run(const rc_scenario* scenario, const uint64_t* seeds, size_t seed_count, unsigned threads,
                       rc_sweep** out) {
    if (!scenario || !out || (!seeds && seed_count > 0)) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::vector<std::uint64_t> list(seeds, seeds + seed_count);
        *out = new rc_sweep{retrocarbon::sweep(scenario->config, list, threads)};
        return RC_OK;
    });
}

rc_status rc_sweep_series(const rc_sweep* sweep, const char* name, const double** mean, const double** variance,
                          size_t* length) {
    if (!sweep || !name || !mean || !variance || !length) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    auto it = sweep->report.series.find(name);
    if (it == sweep->report.series.end()) return fail(RC_ERR_NOT_FOUND, std::string("no series '") + name + "'");
    *mean = it->second.mean.data();
    *variance = it->second.variance.data();
    *length = it->second.mean.size();
    return RC_OK;
}

rc_status rc_sweep_scalar(const rc_sweep* sweep, const char* name, double* mean, double* variance) {
    if (!sweep || !name || !mean || !variance) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    auto it = sweep->report.scalars.find(name);
    if (it == sweep->report.scalars.end()) return fail(RC_ERR_NOT_FOUND, std::string("no scalar '") + name + "'");
    *mean = it->second.mean.at(0);
    *variance = it->second.variance.at(0);
    return RC_OK;
}

rc_status rc_sweep_write(const rc_sweep* sweep, const char* dir) {
    if (!sweep || !dir) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        retrocarbon::write_sweep_outputs(sweep->report, dir);
        return RC_OK;
    });
}

void rc_sweep_free(rc_sweep* sweep) { delete sweep; }

rc_status rc_audit_ledger_csv(const char* ledger_path, const char* balances_path, rc_audit_result* out) {
    if (!ledger_path || !out) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream ledger(ledger_path);
        if (!ledger) return fail(RC_ERR_IO, std::string("cannot read ") + ledger_path);
        std::ifstream balances;
        if (balances_path) {
            balances.open(balances_path);
            if (!balances) return fail(RC_ERR_IO, std::string("cannot read ") + balances_path);
        }
        const auto report = retrocarbon::audit_csv(ledger, balances_path ? &balances : nullptr);
        out->ok = report.ok ? 1 : 0;
        out->has_bad_seq = report.first_bad_seq ? 1 : 0;
        out->first_bad_seq = report.first_bad_seq.value_or(0);
        out->entries_checked = report.entries_checked;
        std::strncpy(out->message, report.message.c_str(), sizeof out->message - 1);
        out->message[sizeof out->message - 1] = '\0';
        return RC_OK;
    });
}

rc_status rc_exchange_clear_json(const char* round_json, char** out_json) {
    if (!round_json || !out_json) return fail(RC_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out_json = copy_string(retrocarbon::clear_round_json(round_json));
        return RC_OK;
    });
}

}  // extern "C"
