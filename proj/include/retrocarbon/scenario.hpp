#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "retrocarbon/damage_world.hpp"
#include "retrocarbon/exchange.hpp"
#include "retrocarbon/ledger.hpp"
#include "retrocarbon/recap.hpp"
#include "retrocarbon/scc_estimation.hpp"

namespace retrocarbon {

enum class Mechanism { idealized_recap, insured_recap, precap, fixed_tax, reserves, vpdollar };

const char* to_string(Mechanism m);
std::optional<Mechanism> parse_mechanism(std::string_view text);

struct AgencyConfig {
    EstimatorModel model;
    InnovationSchedule innovation;
    std::int32_t window_n = 30;
    SettlementView view = SettlementView::present_value;
    friend bool operator==(const AgencyConfig&, const AgencyConfig&) = default;
};

struct BidStep {
    Money price;
    std::int64_t volume = 0;
    friend bool operator==(const BidStep&, const BidStep&) = default;
};

struct PolluterConfig {
    std::int32_t count = 1;
    std::int64_t tonnes_per_year = 1;
    double default_hazard = 0.0;
    Money initial_cash;
    std::vector<BidStep> bids;  // precap: posted by every polluter each year
    friend bool operator==(const PolluterConfig&, const PolluterConfig&) = default;
};

struct InsurerConfig {
    std::string id;
    EstimatorModel model;
    InnovationSchedule innovation;
    Money cost_margin;
    Money profit_margin;
    StepCurve supply;
    Money initial_cash;
    Money default_fund;
    friend bool operator==(const InsurerConfig&, const InsurerConfig&) = default;
};

// Supplier j asks ask + j * ask_step per credit; the first
// `breakthrough_count` suppliers issue breakthrough credits at breakthrough_ask.
struct SupplierConfig {
    std::int32_t count = 0;
    std::int64_t credits_per_year = 0;
    Money ask;
    Money ask_step;
    std::int32_t breakthrough_count = 0;
    Money breakthrough_ask;
    friend bool operator==(const SupplierConfig&, const SupplierConfig&) = default;
};

struct ExchangeConfig {
    Money initial_cash;
    std::optional<Money> adjustment_floor;
    double breakthrough_quota = 0.1;
    Money scc_cap = Money::units(100);
    std::vector<BidStep> sponsor_bids;  // subsidized demand, posted by "sponsor"
    Money sponsor_cash;
    friend bool operator==(const ExchangeConfig&, const ExchangeConfig&) = default;
};

struct BaselineConfig {
    Money fixed_tax_rate = Money::units(40);
    double reserve_rate = 0.5;
    std::int32_t reserve_window = 5;
    double gdp_initial = 1000.0;
    double gdp_growth = 0.02;
    Money vpdollar_revenue_per_tonne = Money::units(100);
    double vpdollar_bid_spread = 0.05;
    friend bool operator==(const BaselineConfig&, const BaselineConfig&) = default;
};

struct ScenarioConfig {
    int schema_version = 1;
    std::string name = "scenario";
    Mechanism mechanism = Mechanism::idealized_recap;
    DamageWorld world;
    AgencyConfig agency;
    std::int32_t years = 0;
    std::int32_t cap_horizon = 30;
    double solvency_k = 1.0;
    PolluterConfig polluters;
    std::vector<InsurerConfig> insurers;
    SupplierConfig suppliers;
    ExchangeConfig exchange;
    BaselineConfig baselines;
    std::vector<std::uint64_t> seeds;

    // Throws ErrorCode::config with the offending field.
    void validate() const;
    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

inline constexpr int scenario_schema_version = 1;

ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string serialize_scenario(const ScenarioConfig& config);

// Names of the per-year series, in output order.
std::vector<std::string> series_names();

struct RunMetrics {
    std::string scenario;
    std::uint64_t seed = 0;
    std::int32_t years = 0;
    std::map<std::string, std::vector<double>> series;
    std::map<std::string, double> scalars;
    AuditReport audit;
    // Bitwise on every value, so NaN entries compare equal to themselves.
    friend bool operator==(const RunMetrics&, const RunMetrics&);
};

// Everything a run produced, for tests and file output.
struct RunResult {
    RunMetrics metrics;
    Ledger ledger;
    EstimateTable estimates;
    std::vector<SettlementLine> settlements;
    std::vector<SwapContract> contracts;
    std::vector<Trade> trades;
    std::vector<SccSignal> signals;
    std::vector<std::int64_t> tonnes_by_vintage;
    std::int64_t conservation_checks = 0;
};

RunResult run_scenario_detailed(const ScenarioConfig& config, std::uint64_t seed);
RunMetrics run_scenario(const ScenarioConfig& config, std::uint64_t seed);

// <name>_s<seed>_<series>.csv, _summary.json, _ledger.csv, _balances.csv,
// _settlements.csv and _estimates.csv.
void write_run_outputs(const RunResult& result, const std::filesystem::path& dir);

struct SeriesStats {
    std::vector<double> mean;
    std::vector<double> variance;  // sample variance; 0 for a single seed
};

struct SweepReport {
    std::string scenario;
    std::vector<std::uint64_t> seeds;
    std::map<std::string, SeriesStats> series;
    std::map<std::string, SeriesStats> scalars;  // one-element vectors
    std::vector<RunMetrics> runs;                // in seed order
};

// Runs every seed on up to `threads` workers (0 = hardware concurrency). The
// first failing seed's error is rethrown with the seed id attached.
SweepReport sweep(const ScenarioConfig& config, const std::vector<std::uint64_t>& seeds, unsigned threads = 0);

void write_sweep_outputs(const SweepReport& report, const std::filesystem::path& dir);

}  // namespace retrocarbon
