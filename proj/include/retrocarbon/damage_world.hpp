#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "retrocarbon/money.hpp"
#include "retrocarbon/rng.hpp"

namespace retrocarbon {

// Ground-truth marginal damage process. The mean damage of one tonne emitted
// in `vintage`, realised in `period`, is
//     a2 * tau + a4 * max(0, tau - onset_delay)^3,   tau = period - vintage
// plus i.i.d. Gaussian noise with standard deviation `sigma`.
struct DamageWorld {
    double a2 = 0.0;
    double a4 = 0.0;
    double onset_delay = 0.0;
    double sigma = 0.0;
    Year horizon_T = 1;
    double discount_r = 0.0;

    void validate() const;
    friend bool operator==(const DamageWorld&, const DamageWorld&) = default;
};

// An agent's predictive model of the same process.
struct EstimatorModel {
    double b2 = 0.0;
    double b4 = 0.0;
    double anneal_alpha = 0.0;  // mixture weight toward the true mean, in [0, 1]
    std::int32_t calibration_window = 1;
    bool refit = false;        // least-squares refit of b2 (and b4) before forecasting
    bool fit_quartic = false;  // whether b4 is a free parameter of the refit

    void validate() const;
    friend bool operator==(const EstimatorModel&, const EstimatorModel&) = default;
};

struct MeasuredDamage {
    Year vintage = 0;
    Year period = 0;
    Money value;  // per tonne
    friend bool operator==(const MeasuredDamage&, const MeasuredDamage&) = default;
};

// Shape of the slow-onset term: max(0, tau - onset)^3.
double onset_shape(double tau, double onset_delay);

double true_mean_damage(const DamageWorld& world, double tau);

// One noisy draw from `rng`. Throws domain / horizon errors.
MeasuredDamage true_marginal_damage(const DamageWorld& world, Year vintage, Year period, std::mt19937_64& rng);

// Noise-free mixture forecast (1 - alpha) * [b2 tau + b4 g(tau)] + alpha * true mean.
double forecast_marginal_damage(const EstimatorModel& model, const DamageWorld& world, Year vintage, Year period);

EstimatorModel innovate_model(const EstimatorModel& model, Year step, double anneal_rate);

// Linear annealing schedule: starting in year `start`, alpha grows by `rate`
// per year.
struct InnovationSchedule {
    Year start = 0;
    double rate = 0.0;
    friend bool operator==(const InnovationSchedule&, const InnovationSchedule&) = default;
};

// Per-vintage noise streams. Each vintage owns an independent generator so that
// the draws for one vintage do not depend on how many other vintages (or
// agents) exist.
class DamageStreams {
public:
    DamageStreams(const DamageWorld& world, std::uint64_t seed);

    // Draws the damage of `vintage` in `period`. Periods of one vintage must be
    // requested in increasing order.
    MeasuredDamage draw(Year vintage, Year period);

private:
    const DamageWorld* world_;
    std::uint64_t seed_;
    std::vector<std::mt19937_64> streams_;
};

// Aleatoric / epistemic split of a linear regression (see README).
struct UncertaintySplit {
    double epistemic = 0.0;
    double aleatoric = 0.0;
};

struct RegressionSamples {
    std::vector<std::vector<double>> inputs;  // one row per sample
    std::vector<double> responses;
};

// Fits ordinary least squares on `train` and evaluates it on `holdout`.
// aleatoric: mean squared residual of `true_coefficients` on the holdout set
// when given, otherwise the unbiased residual variance of the fit on `train`.
// epistemic: holdout mean squared residual of the fit minus aleatoric.
UncertaintySplit decompose_uncertainty(const RegressionSamples& train, const RegressionSamples& holdout,
                                       std::optional<std::span<const double>> true_coefficients = std::nullopt);

// Least-squares coefficients; throws ErrorCode::singularity on rank deficiency.
std::vector<double> least_squares(const RegressionSamples& samples);

}  // namespace retrocarbon
