#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "retrocarbon/damage_world.hpp"
#include "retrocarbon/money.hpp"

namespace retrocarbon {

// Estimated SCC of one tonne emitted in `vintage`, evaluated at `eval_time`.
struct SccEstimate {
    Year vintage = 0;
    Year eval_time = 0;
    Money value;
    friend bool operator==(const SccEstimate&, const SccEstimate&) = default;
};

struct Adjustment {
    Year vintage = 0;
    Year period = 0;
    Money delta;
    friend bool operator==(const Adjustment&, const Adjustment&) = default;
};

// Estimates published at `release_time`, newest vintage first.
struct RetroAgencyRelease {
    Year release_time = 0;
    std::int32_t window_n = 0;
    std::vector<SccEstimate> estimates;

    std::optional<Money> find(Year vintage) const;
};

// Discount factor (1 + r)^-k for k in [0, horizon].
class DiscountTable {
public:
    DiscountTable() = default;
    DiscountTable(double rate, Year horizon);
    double operator()(Year k) const { return factors_.at(static_cast<std::size_t>(k)); }

private:
    std::vector<double> factors_;
};

// Direct evaluation: discounted measured damages for periods up to eval_time
// plus discounted forecasts for the remaining periods up to the horizon.
// `measurements` may contain other vintages; only `vintage` is used.
SccEstimate estimate_scc(const DamageWorld& world, const EstimatorModel& model,
                         std::span<const MeasuredDamage> measurements, Year vintage, Year eval_time);

Adjustment compute_adjustment(const SccEstimate& prev, const SccEstimate& curr);

// The horizon estimate; requires measurements through horizon_T.
Money true_scc_oracle(const DamageWorld& world, std::span<const MeasuredDamage> measurements, Year vintage);

// Append-only table of estimates indexed by (vintage, eval_time). Row v holds
// eval_times v, v+1, ... contiguously.
class EstimateTable {
public:
    void record(const SccEstimate& estimate);
    std::optional<Money> find(Year vintage, Year eval_time) const;
    Money at(Year vintage, Year eval_time) const;
    Year vintage_count() const { return static_cast<Year>(rows_.size()); }
    // Latest eval_time recorded for the vintage, or nullopt.
    std::optional<Year> latest(Year vintage) const;
    Adjustment adjustment(Year vintage, Year period) const;

    void write_csv(std::ostream& out) const;

private:
    std::vector<std::vector<Money>> rows_;
};

RetroAgencyRelease retro_agency_release(const EstimateTable& table, Year t, std::int32_t n);

// Measured damages of every vintage, stored by lag, with running discounted
// sums so estimates are O(1) to update.
class MeasurementHistory {
public:
    explicit MeasurementHistory(const DamageWorld& world);

    void record(const MeasuredDamage& m);
    bool has(Year vintage, Year period) const;
    Money value(Year vintage, Year period) const;
    // Sum of measured(s) * discount(s - vintage) for s in [vintage, eval_time].
    double measured_pv(Year vintage, Year eval_time) const;
    Year vintage_count() const { return static_cast<Year>(values_.size()); }
    std::vector<MeasuredDamage> flatten() const;

    const DamageWorld& world() const { return *world_; }
    const DiscountTable& discount() const { return discount_; }

private:
    const DamageWorld* world_;
    DiscountTable discount_;
    std::vector<std::vector<Money>> values_;
    std::vector<std::vector<double>> cumulative_pv_;
};

// Prefix sums of tau * D(tau) and g(tau) * D(tau) so that the forecast tail of
// any mixture model is a closed-form combination.
class ForecastBasis {
public:
    explicit ForecastBasis(const DamageWorld& world);
    // Sum over s in (eval_time, horizon] of forecast(s) * D(s - vintage).
    double tail_pv(const EstimatorModel& model, Year vintage, Year eval_time) const;

private:
    const DamageWorld* world_;
    std::vector<double> linear_;
    std::vector<double> onset_;
};

// Estimate of (vintage, eval_time) from the running history and the basis.
// Matches estimate_scc up to one micro unit of rounding.
Money model_estimate(const MeasurementHistory& history, const ForecastBasis& basis, const EstimatorModel& model,
                     Year vintage, Year eval_time);

// Refits the model coefficients by least squares over the measurements of the
// last `calibration_window` periods ending at `t`. A rank-deficient window
// leaves the model unchanged.
EstimatorModel refit_model(const EstimatorModel& model, const MeasurementHistory& history, Year t);

// The RetroAgency: advances its model each year and appends estimates of all
// vintages up to the current year to its table.
class RetroAgency {
public:
    RetroAgency(const MeasurementHistory& history, EstimatorModel model, InnovationSchedule innovation,
                std::int32_t window_n);

    // Innovate (if scheduled), refit (if enabled), then estimate vintages 0..t at t.
    void advance(Year t);
    // Release at t with window min(n, t).
    RetroAgencyRelease release(Year t) const;

    const EstimateTable& table() const { return table_; }
    const EstimatorModel& model() const { return model_; }
    const ForecastBasis& basis() const { return basis_; }
    std::int32_t window() const { return window_n_; }

private:
    const MeasurementHistory* history_;
    ForecastBasis basis_;
    EstimatorModel model_;
    InnovationSchedule innovation_;
    std::int32_t window_n_;
    EstimateTable table_;
};

enum class SettlementView { present_value, nominal };

// Adjustments between two consecutive releases. Throws agency_coverage for a
// vintage either release is missing.
class AdjustmentFeed {
public:
    AdjustmentFeed(const RetroAgencyRelease& current, const RetroAgencyRelease* previous,
                   SettlementView view = SettlementView::present_value, double discount_r = 0.0);

    Year time() const { return current_->release_time; }
    // Estimate of the vintage released this year.
    Money initial() const;
    Money estimate(Year vintage) const;
    bool covers(Year vintage) const;
    // Per-tonne adjustment for `vintage` at time(), in the settlement view.
    Money delta(Year vintage) const;

private:
    const RetroAgencyRelease* current_;
    const RetroAgencyRelease* previous_;
    SettlementView view_;
    double discount_r_;
};

}  // namespace retrocarbon
