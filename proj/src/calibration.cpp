#include "tiadc/calibration.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace tiadc {
namespace {

const double kSqrt12 = std::sqrt(12.0);

double kind_constant(MismatchKind kind) { return kind == MismatchKind::Offset ? 4.0 : 1.0; }

// Skew is solved in the gain-equivalent domain sigma_g = 2 pi f sigma_s and
// mapped back at the end, so the skew/gain duality holds exactly.
MismatchKind solve_kind(MismatchKind kind) { return kind == MismatchKind::Skew ? MismatchKind::Gain : kind; }

double to_kind_sigma(MismatchKind kind, double sigma_eq, std::optional<double> f_sig) {
    if (kind != MismatchKind::Skew)
        return sigma_eq;
    return sigma_eq / (2.0 * std::numbers::pi * *f_sig);
}

} // namespace

double StepSizeResult::display_step() const {
    switch (query.kind) {
    case MismatchKind::Offset: return step_in_lsb.value_or(step);
    case MismatchKind::Gain: return 100.0 * step;
    case MismatchKind::Skew: break;
    }
    return 1e15 * step;
}

std::string StepSizeResult::display_unit() const {
    switch (query.kind) {
    case MismatchKind::Offset: return "LSB";
    case MismatchKind::Gain: return "%";
    case MismatchKind::Skew: break;
    }
    return "fs";
}

SpurInclusion inclusion_for(const YieldQuery& query, Index n) {
    if (query.kind == MismatchKind::Offset)
        return SpurInclusion::offset(n, query.include_dc, query.include_nyquist);
    return SpurInclusion::replicas(n, query.include_nyquist);
}

double circ_only_sigma(MismatchKind kind, double target_power, double yield, Index n, int m,
                       std::optional<double> f_sig) {
    if (m < 1)
        throw ValidationError("closed form needs at least one circularly-symmetric term");
    if (!(target_power > 0.0) || !(yield > 0.0 && yield < 1.0))
        throw ValidationError("closed form needs p0 > 0 and 0 < yield < 1");
    if (kind == MismatchKind::Skew && !(f_sig && *f_sig > 0.0))
        throw ValidationError("skew closed form needs a positive signal frequency");
    // 1 - y^(1/m) evaluated without cancellation.
    const double miss = -std::expm1(std::log(yield) / m);
    const double sigma_eq =
        std::sqrt(static_cast<double>(n) * target_power / (kind_constant(kind) * -std::log(miss)));
    return to_kind_sigma(kind, sigma_eq, f_sig);
}

StepSizeResult invert_yield(const YieldQuery& query, const AdcConfig& config) {
    return invert_yield(query, config, inclusion_for(query, config.interleave_factor));
}

StepSizeResult invert_yield(const YieldQuery& query, const AdcConfig& config, const SpurInclusion& inclusion) {
    query.validate();
    config.validate();
    const Index n = config.interleave_factor;
    inclusion.validate(query.kind, n);

    const MismatchKind kind = solve_kind(query.kind);
    const double p0 = from_db(query.target_db);
    const double y = query.yield;
    auto cdf = [&](double sigma) { return combined_cdf(kind, p0, sigma, n, inclusion); };

    double guess = std::sqrt(static_cast<double>(n) * p0 / kind_constant(kind));
    if (inclusion.n_circ > 0)
        guess = circ_only_sigma(kind, p0, y, n, inclusion.n_circ);
    double lo = guess / 4.0;
    double hi = guess * 4.0;
    for (int i = 0; cdf(lo) < y; ++i) {
        if (i == 200)
            throw ConvergenceError("yield inversion: could not bracket the root from below");
        lo /= 4.0;
    }
    for (int i = 0; cdf(hi) > y; ++i) {
        if (i == 200)
            throw ConvergenceError("yield inversion: could not bracket the root from above");
        hi *= 4.0;
    }

    // Invariant: cdf(lo) >= y >= cdf(hi).
    for (int i = 0; i < 400 && hi - lo > kBisectionTolerance * lo; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        (cdf(mid) >= y ? lo : hi) = mid;
    }
    if (hi - lo > 1e-9 * lo)
        throw ConvergenceError("yield inversion did not converge");

    StepSizeResult result;
    result.query = query;
    result.inclusion = inclusion;
    result.achieved_yield = cdf(lo);
    result.sigma = to_kind_sigma(query.kind, lo, query.signal_frequency);
    result.step = result.sigma * kSqrt12;
    if (query.kind == MismatchKind::Offset)
        result.step_in_lsb = result.step / config.lsb();
    return result;
}

std::vector<SweepPoint> sweep_step_vs_target(MismatchKind kind, const AdcConfig& config,
                                             std::span<const double> targets_db, double yield,
                                             const SpurInclusion& inclusion, std::optional<double> f_sig) {
    for (std::size_t i = 1; i < targets_db.size(); ++i)
        if (!(targets_db[i] > targets_db[i - 1]))
            throw ValidationError("sweep targets must be strictly ascending");

    std::vector<SweepPoint> curve;
    curve.reserve(targets_db.size());
    for (double target : targets_db) {
        YieldQuery query;
        query.kind = kind;
        query.target_db = target;
        query.yield = yield;
        query.include_dc = inclusion.include_dc;
        query.include_nyquist = inclusion.include_nyquist;
        query.signal_frequency = f_sig;
        const auto result = invert_yield(query, config, inclusion);
        curve.push_back({target, result.sigma, result.step, result.display_step()});
    }
    return curve;
}

} // namespace tiadc
