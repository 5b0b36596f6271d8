// Closed-form spur and replica prediction from the DFT of a concrete
// mismatch sequence.
//
// Offsets produce input-independent spurs on the k f_s/N grid with amplitude
// o~_k. Gain and skew mismatches replicate the input at k f_s/N + f_sig with
// amplitudes g~_k and -j 2 pi f_sig s~_k (first order), reported in dBc.
#ifndef TIADC_ANALYTIC_HPP
#define TIADC_ANALYTIC_HPP

#include "tiadc/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tiadc {

struct SpurReport {
    std::vector<SpurPrediction> spurs;
    std::optional<SpurPrediction> worst;
    double total_power = 0.0;  // linear sum of spur powers, in the spurs' reference units

    // Per tone, carrier power after mismatch relative to the nominal tone
    // (e.g. |1 + g~_0|^2 for gain). Empty for offsets.
    std::vector<double> carrier_shift;
    // Replicas that fold exactly onto a tone and are indistinguishable from it.
    int carrier_collisions = 0;
    std::vector<std::string> warnings;
};

/// First-order skew validity bound on 2 pi f_max max|s_n|; larger values
/// produce a warning in the report.
inline constexpr double kSkewFirstOrderLimit = 0.01;

SpurReport predict_offset_spurs(const Eigen::VectorXd& offsets, const AdcConfig& config);

SpurReport predict_gain_replicas(const Eigen::VectorXd& gains, std::span<const ToneSpec> tones,
                                 const AdcConfig& config);

SpurReport predict_skew_replicas(const Eigen::VectorXd& skews, std::span<const ToneSpec> tones,
                                 const AdcConfig& config);

/// Dispatches on `kind`, taking the matching sequence out of `mismatch`.
SpurReport predict(MismatchKind kind, const MismatchSet& mismatch, std::span<const ToneSpec> tones,
                   const AdcConfig& config);

} // namespace tiadc

#endif // TIADC_ANALYTIC_HPP
