// Time-domain reference model of an N-way interleaved ADC.
//
// Every sub-ADC samples the exact continuous-time multitone at its skewed
// instants; the interleaver multiplexes the sub-ADC streams back to rate f_s.
// No first-order approximation is made, so the analytic predictions can be
// checked against it.
#ifndef TIADC_SIMULATOR_HPP
#define TIADC_SIMULATOR_HPP

#include "tiadc/analytic.hpp"
#include "tiadc/core.hpp"

#include <span>
#include <string>
#include <vector>

namespace tiadc {

struct CaptureConfig {
    Index num_samples = 0;  // M, multiple of N
    // Coherent captures evaluate tones on the exact rational grid J/M.
    bool coherent = true;

    /// M = 4096 N.
    static CaptureConfig defaults(const AdcConfig& config);
    void validate(const AdcConfig& config) const;
};

struct CoherentTone {
    double frequency = 0.0;
    long long cycles = 0;  // J, integer number of periods in M samples
    bool on_spur_grid = false;
    std::string warning;
};

/// Nearest frequency J f_s / M to `requested`. Flags tones whose replicas
/// collide with each other, the carrier or the offset grid (J a multiple of
/// M / 2N).
CoherentTone snap_coherent(const AdcConfig& config, double requested, Index num_samples);

/// Samples of sub-ADC `n`: x(((q N + n) / f_s) - s_n) (1 + g_n) + o_n for
/// q = 0 .. M/N - 1.
Eigen::VectorXd sub_adc_capture(const AdcConfig& config, const MismatchSet& mismatch,
                                std::span<const ToneSpec> tones, const CaptureConfig& capture, int n);

/// Interleaved output y[k] = (1 + g_{k%N}) x(k/f_s - s_{k%N}) + o_{k%N}.
Eigen::VectorXd sample(const AdcConfig& config, const MismatchSet& mismatch, std::span<const ToneSpec> tones,
                       const CaptureConfig& capture);

/// Single-sided, full-scale-sine-relative periodogram of a coherent capture
/// (no window): 4 |y~_k|^2 inside the band, 2 |y~_k|^2 at DC and f_s/2.
Spectrum measure_spectrum(const Eigen::VectorXd& y, const AdcConfig& config);

/// Largest non-signal bin (dBFS) of a mismatch-free interleaved capture.
/// Tones must sit on the coherent grid of `num_samples`.
double recombination_residual(const AdcConfig& config, std::span<const ToneSpec> tones, Index num_samples);

struct SpurComparison {
    double frequency = 0.0;
    double predicted_db = 0.0;
    double measured_db = 0.0;
    MismatchKind kind = MismatchKind::Offset;
    PowerReference reference = PowerReference::FullScale;

    double delta_db() const { return measured_db - predicted_db; }
};

/// Pairs every predicted spur with the measured power in its bin, in the
/// prediction's reference (dBFS or dBc).
std::vector<SpurComparison> extract_spurs(const Spectrum& spectrum, const SpurReport& predicted);

} // namespace tiadc

#endif // TIADC_SIMULATOR_HPP
