// retrocarbon command line: run, sweep, audit, clear.
//
// Exit codes: 0 success, 1 config or usage error, 2 audit failure,
// 3 any other runtime failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "retrocarbon/retrocarbon.h"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 1;
constexpr int exit_audit = 2;
constexpr int exit_runtime = 3;

int report(rc_status status, const char* what) {
    std::cerr << "error: " << what << ": " << rc_status_name(status) << ": " << rc_last_error() << '\n';
    if (status == RC_ERR_CONFIG) return exit_config;
    if (status == RC_ERR_AUDIT) return exit_audit;
    return exit_runtime;
}

struct Scenario {
    rc_scenario* handle = nullptr;
    ~Scenario() { rc_scenario_free(handle); }
};

int cmd_run(const std::string& config, std::uint64_t seed, const std::string& out) {
    Scenario s;
    if (auto st = rc_scenario_load(config.c_str(), &s.handle); st != RC_OK) return report(st, "loading config");
    rc_run* run = nullptr;
    if (auto st = rc_run_scenario(s.handle, seed, &run); st != RC_OK) return report(st, "run");
    const rc_status written = rc_run_write(run, out.c_str());
    double gap = 0.0, shortfall = 0.0;
    rc_run_scalar(run, "ppp_gap", &gap);
    rc_run_scalar(run, "government_shortfall", &shortfall);
    int ok = 0;
    rc_run_audit_ok(run, &ok);
    rc_run_free(run);
    if (written != RC_OK) return report(written, "writing outputs");
    const char* name = "";
    rc_scenario_name(s.handle, &name);
    std::printf("%s seed=%llu audit=%s ppp_gap=%.6f government_shortfall=%.6f out=%s\n", name,
                static_cast<unsigned long long>(seed), ok ? "ok" : "failed", gap, shortfall, out.c_str());
    return ok ? exit_ok : exit_audit;
}

int cmd_sweep(const std::string& config, std::uint64_t count, unsigned threads, const std::string& out) {
    if (count == 0) {
        std::cerr << "error: --seeds must be >= 1\n";
        return exit_config;
    }
    Scenario s;
    if (auto st = rc_scenario_load(config.c_str(), &s.handle); st != RC_OK) return report(st, "loading config");
    std::vector<std::uint64_t> seeds(count);
    for (std::uint64_t i = 0; i < count; ++i) seeds[i] = i + 1;
    rc_sweep* sw = nullptr;
    if (auto st = rc_sweep_run(s.handle, seeds.data(), seeds.size(), threads, &sw); st != RC_OK) return report(st, "sweep");
    const rc_status written = rc_sweep_write(sw, out.c_str());
    double mean = 0.0, var = 0.0;
    rc_sweep_scalar(sw, "government_shortfall", &mean, &var);
    rc_sweep_free(sw);
    if (written != RC_OK) return report(written, "writing outputs");
    const char* name = "";
    rc_scenario_name(s.handle, &name);
    std::printf("%s seeds=1..%llu government_shortfall mean=%.6f var=%.6f out=%s\n", name,
                static_cast<unsigned long long>(count), mean, var, out.c_str());
    return exit_ok;
}

int cmd_audit(const std::string& ledger, const std::string& balances) {
    rc_audit_result result{};
    const rc_status st = rc_audit_ledger_csv(ledger.c_str(), balances.empty() ? nullptr : balances.c_str(), &result);
    if (st != RC_OK) return report(st, "audit");
    if (result.ok) {
        std::printf("audit ok: %zu entries\n", result.entries_checked);
        return exit_ok;
    }
    if (result.has_bad_seq) {
        std::printf("audit FAILED at seq %llu: %s\n", static_cast<unsigned long long>(result.first_bad_seq), result.message);
    } else {
        std::printf("audit FAILED: %s\n", result.message);
    }
    return exit_audit;
}

int cmd_clear(const std::string& round, const std::string& out) {
    std::ifstream in(round);
    if (!in) {
        std::cerr << "error: cannot read " << round << '\n';
        return exit_config;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    char* result = nullptr;
    if (auto st = rc_exchange_clear_json(ss.str().c_str(), &result); st != RC_OK) return report(st, "clear");
    if (out.empty()) {
        std::cout << result << '\n';
    } else {
        std::ofstream(out) << result << '\n';
    }
    rc_string_free(result);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Retroactive carbon pricing simulator"};
    app.require_subcommand(1);

    std::string config, out, ledger, balances, round;
    std::uint64_t seed = 0, seeds = 0;
    unsigned threads = 0;

    auto* run = app.add_subcommand("run", "Run one scenario for one seed");
    run->add_option("--config", config, "Scenario JSON")->required();
    run->add_option("--seed", seed, "Seed")->required();
    run->add_option("--out", out, "Output directory")->required();

    auto* sw = app.add_subcommand("sweep", "Run seeds 1..n and aggregate");
    sw->add_option("--config", config, "Scenario JSON")->required();
    sw->add_option("--seeds", seeds, "Number of seeds")->required();
    sw->add_option("--out", out, "Output directory")->required();
    sw->add_option("--threads", threads, "Worker threads (0 = all cores)");

    auto* au = app.add_subcommand("audit", "Replay an exported ledger");
    au->add_option("--ledger", ledger, "Ledger CSV")->required();
    au->add_option("--balances", balances, "Balances CSV (initial and final)");

    auto* cl = app.add_subcommand("clear", "Clear one exchange round given as JSON");
    cl->add_option("--round", round, "Round JSON")->required();
    cl->add_option("--out", out, "Result file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }

    if (*run) return cmd_run(config, seed, out);
    if (*sw) return cmd_sweep(config, seeds, threads, out);
    if (*au) return cmd_audit(ledger, balances);
    return cmd_clear(round, out);
}
