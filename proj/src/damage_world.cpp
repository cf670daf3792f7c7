#include "retrocarbon/damage_world.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace retrocarbon {

void DamageWorld::validate() const {
    auto bad = [](const std::string& msg) { return Error(ErrorCode::config, "damage world: " + msg); };
    if (!(sigma >= 0.0)) throw bad("sigma must be >= 0");
    if (horizon_T <= 0) throw bad("horizon_T must be > 0");
    if (!(a2 >= 0.0)) throw bad("a2 must be >= 0");
    if (!(a4 >= 0.0)) throw bad("a4 must be >= 0");
    if (!(onset_delay >= 0.0)) throw bad("onset_delay must be >= 0");
    if (!(discount_r >= 0.0 && discount_r < 1.0)) throw bad("discount_r must lie in [0, 1)");
}

void EstimatorModel::validate() const {
    if (!(anneal_alpha >= 0.0 && anneal_alpha <= 1.0)) {
        throw Error(ErrorCode::config, "estimator: anneal_alpha must lie in [0, 1]");
    }
    if (calibration_window < 1) throw Error(ErrorCode::config, "estimator: calibration_window must be >= 1");
}

double onset_shape(double tau, double onset_delay) {
    const double x = std::max(0.0, tau - onset_delay);
    return x * x * x;
}

double true_mean_damage(const DamageWorld& world, double tau) {
    return world.a2 * tau + world.a4 * onset_shape(tau, world.onset_delay);
}

namespace {

void check_period(Year vintage, Year period) {
    if (period < vintage) {
        throw Error(ErrorCode::domain, "period " + std::to_string(period) + " precedes vintage " + std::to_string(vintage));
    }
}

}  // namespace

MeasuredDamage true_marginal_damage(const DamageWorld& world, Year vintage, Year period, std::mt19937_64& rng) {
    check_period(vintage, period);
    if (period > world.horizon_T) {
        throw Error(ErrorCode::horizon, "period " + std::to_string(period) + " beyond horizon");
    }
    const double tau = period - vintage;
    double value = true_mean_damage(world, tau);
    if (world.sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, world.sigma);
        value += noise(rng);
    }
    return MeasuredDamage{vintage, period, Money::from_double(value)};
}

double forecast_marginal_damage(const EstimatorModel& model, const DamageWorld& world, Year vintage, Year period) {
    check_period(vintage, period);
    const double tau = period - vintage;
    const double own = model.b2 * tau + model.b4 * onset_shape(tau, world.onset_delay);
    return (1.0 - model.anneal_alpha) * own + model.anneal_alpha * true_mean_damage(world, tau);
}

EstimatorModel innovate_model(const EstimatorModel& model, Year /*step*/, double anneal_rate) {
    EstimatorModel next = model;
    next.anneal_alpha = std::min(1.0, model.anneal_alpha + std::max(0.0, anneal_rate));
    return next;
}

DamageStreams::DamageStreams(const DamageWorld& world, std::uint64_t seed) : world_(&world), seed_(seed) {}

MeasuredDamage DamageStreams::draw(Year vintage, Year period) {
    if (vintage < 0) throw Error(ErrorCode::domain, "negative vintage");
    while (streams_.size() <= static_cast<std::size_t>(vintage)) {
        streams_.push_back(make_stream(seed_, StreamFamily::damage, streams_.size()));
    }
    return true_marginal_damage(*world_, vintage, period, streams_[static_cast<std::size_t>(vintage)]);
}

std::vector<double> least_squares(const RegressionSamples& samples) {
    const auto n = static_cast<Eigen::Index>(samples.inputs.size());
    if (n == 0 || samples.responses.size() != samples.inputs.size()) {
        throw Error(ErrorCode::domain, "least squares needs matching, non-empty inputs and responses");
    }
    const auto p = static_cast<Eigen::Index>(samples.inputs.front().size());
    Eigen::MatrixXd x(n, p);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = samples.inputs[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.size()) != p) throw Error(ErrorCode::domain, "ragged design matrix");
        for (Eigen::Index j = 0; j < p; ++j) x(i, j) = row[static_cast<std::size_t>(j)];
        y(i) = samples.responses[static_cast<std::size_t>(i)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < p) throw Error(ErrorCode::singularity, "rank-deficient design matrix");
    const Eigen::VectorXd b = qr.solve(y);
    return {b.data(), b.data() + b.size()};
}

namespace {

double mean_squared_residual(const RegressionSamples& s, std::span<const double> coef) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.inputs.size(); ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < coef.size(); ++j) fit += s.inputs[i][j] * coef[j];
        const double e = s.responses[i] - fit;
        acc += e * e;
    }
    return acc / static_cast<double>(s.inputs.size());
}

}  // namespace

UncertaintySplit decompose_uncertainty(const RegressionSamples& train, const RegressionSamples& holdout,
                                       std::optional<std::span<const double>> true_coefficients) {
    if (train.inputs.empty()) throw Error(ErrorCode::domain, "empty training set");
    const std::size_t p = train.inputs.front().size();
    if (train.inputs.size() < p + 2) {
        throw Error(ErrorCode::domain, "need at least two more samples than input dimensions");
    }
    if (holdout.inputs.empty()) throw Error(ErrorCode::domain, "empty holdout set");
    const std::vector<double> fitted = least_squares(train);

    UncertaintySplit out;
    if (true_coefficients) {
        if (true_coefficients->size() != p) throw Error(ErrorCode::domain, "true coefficient dimension mismatch");
        out.aleatoric = mean_squared_residual(holdout, *true_coefficients);
    } else {
        const double n = static_cast<double>(train.inputs.size());
        out.aleatoric = mean_squared_residual(train, fitted) * n / (n - static_cast<double>(p));
    }
    out.epistemic = mean_squared_residual(holdout, fitted) - out.aleatoric;
    return out;
}

}  // namespace retrocarbon
