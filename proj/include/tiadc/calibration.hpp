// Yield-driven calibration step sizing.
//
// For a target spur level p0 and yield y, find the largest mismatch sigma for
// which the strongest included spur stays below p0 with probability y. The
// residual of a calibration with step Delta is uniform on [-Delta/2, Delta/2]
// and is modelled as Gaussian with the same variance, so Delta = sigma sqrt(12).
#ifndef TIADC_CALIBRATION_HPP
#define TIADC_CALIBRATION_HPP

#include "tiadc/core.hpp"
#include "tiadc/statistics.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tiadc {

struct StepSizeResult {
    double sigma = 0.0;
    double step = 0.0;  // sigma * sqrt(12)
    std::optional<double> step_in_lsb;  // offsets only
    double achieved_yield = 0.0;        // combined CDF at (target, sigma)
    YieldQuery query;
    SpurInclusion inclusion;

    /// Step in the unit used for reporting: LSB, percent or femtoseconds.
    double display_step() const;
    std::string display_unit() const;
};

/// The inclusion a query implies for an N-way converter.
SpurInclusion inclusion_for(const YieldQuery& query, Index n);

/// Relative tolerance of the sigma bisection.
inline constexpr double kBisectionTolerance = 1e-13;

StepSizeResult invert_yield(const YieldQuery& query, const AdcConfig& config);
StepSizeResult invert_yield(const YieldQuery& query, const AdcConfig& config, const SpurInclusion& inclusion);

/// Closed-form sigma when only m circularly-symmetric terms are included:
/// sigma^2 = N p0 / (c ln(1 / (1 - y^(1/m)))) with c = 4 (offset) or 1 (gain).
double circ_only_sigma(MismatchKind kind, double target_power, double yield, Index n, int m,
                       std::optional<double> f_sig = std::nullopt);

struct SweepPoint {
    double target_db = 0.0;
    double sigma = 0.0;
    double step = 0.0;
    double display_step = 0.0;
};

/// Step size versus target for ascending targets.
std::vector<SweepPoint> sweep_step_vs_target(MismatchKind kind, const AdcConfig& config,
                                             std::span<const double> targets_db, double yield,
                                             const SpurInclusion& inclusion,
                                             std::optional<double> f_sig = std::nullopt);

} // namespace tiadc

#endif // TIADC_CALIBRATION_HPP
