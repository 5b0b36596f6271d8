#include "tiadc/simulator.hpp"
#include "tiadc/dft.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <numbers>
#include <sstream>

namespace tiadc {
namespace {

constexpr double kGridTolerance = 1e-6;  // cycles

// Integer number of periods of `tone` in the capture, if it is coherent.
std::optional<long long> coherent_cycles(const ToneSpec& tone, const AdcConfig& config, Index num_samples) {
    const double cycles = tone.frequency * static_cast<double>(num_samples) / config.sample_rate;
    const double nearest = std::round(cycles);
    if (std::abs(cycles - nearest) > kGridTolerance)
        return std::nullopt;
    return static_cast<long long>(nearest);
}

} // namespace

CaptureConfig CaptureConfig::defaults(const AdcConfig& config) {
    return {static_cast<Index>(4096) * config.interleave_factor, true};
}

void CaptureConfig::validate(const AdcConfig& config) const {
    if (num_samples <= 0 || num_samples % config.interleave_factor != 0) {
        std::ostringstream msg;
        msg << "capture length M=" << num_samples << " must be a positive multiple of N=" << config.interleave_factor;
        throw ValidationError(msg.str());
    }
}

CoherentTone snap_coherent(const AdcConfig& config, double requested, Index num_samples) {
    config.validate();
    if (!(requested > 0.0 && requested < config.nyquist()))
        throw ValidationError("requested tone frequency outside (0, f_s/2)");
    if (num_samples < 4)
        throw ValidationError("capture too short for coherent snapping");

    const auto m = static_cast<long long>(num_samples);
    long long j = std::llround(requested * static_cast<double>(m) / config.sample_rate);
    j = std::clamp(j, 1LL, (m - 1) / 2);

    CoherentTone result;
    result.cycles = j;
    result.frequency = static_cast<double>(j) * config.sample_rate / static_cast<double>(m);
    const long long two_n = 2LL * config.interleave_factor;
    if ((two_n * j) % m == 0) {
        result.on_spur_grid = true;
        std::ostringstream msg;
        msg << "tone at " << result.frequency << " Hz (J=" << j
            << ") is a multiple of f_s/(2N): replicas collide with the carrier, each other or offset spurs";
        result.warning = msg.str();
    }
    return result;
}

Eigen::VectorXd sub_adc_capture(const AdcConfig& config, const MismatchSet& mismatch,
                                std::span<const ToneSpec> tones, const CaptureConfig& capture, int n) {
    const Index big_n = config.interleave_factor;
    const Index m = capture.num_samples;
    const Index per_adc = m / big_n;
    const double fs = config.sample_rate;
    const double skew = mismatch.skews(n);

    std::vector<std::optional<long long>> cycles;
    for (const auto& tone : tones) {
        auto j = coherent_cycles(tone, config, m);
        if (capture.coherent && !j) {
            std::ostringstream msg;
            msg << "tone at " << tone.frequency << " Hz is not on the coherent grid of M=" << m
                << " (use snap_coherent)";
            throw ValidationError(msg.str());
        }
        cycles.push_back(capture.coherent ? j : std::nullopt);
    }

    Eigen::VectorXd out(per_adc);
    for (Index q = 0; q < per_adc; ++q) {
        const Index idx = q * big_n + n;
        double x = 0.0;
        for (std::size_t t = 0; t < tones.size(); ++t) {
            const ToneSpec& tone = tones[t];
            const double delay_phase = 2.0 * std::numbers::pi * tone.frequency * skew;
            double phase;
            if (cycles[t]) {
                const long long wrapped = (*cycles[t] * static_cast<long long>(idx)) % static_cast<long long>(m);
                phase = 2.0 * std::numbers::pi * static_cast<double>(wrapped) / static_cast<double>(m);
            } else {
                long double cyc = static_cast<long double>(tone.frequency) * static_cast<long double>(idx) /
                                  static_cast<long double>(fs);
                cyc -= std::floor(cyc);
                phase = static_cast<double>(2.0L * std::numbers::pi_v<long double> * cyc);
            }
            x += tone.amplitude * std::cos(phase + tone.phase - delay_phase);
        }
        out(q) = (1.0 + mismatch.gains(n)) * x + mismatch.offsets(n);
    }
    return out;
}

Eigen::VectorXd sample(const AdcConfig& config, const MismatchSet& mismatch, std::span<const ToneSpec> tones,
                       const CaptureConfig& capture) {
    config.validate();
    mismatch.validate(config);
    capture.validate(config);
    for (const auto& tone : tones)
        tone.validate(config);

    const Index big_n = config.interleave_factor;
    const Index m = capture.num_samples;
    Eigen::VectorXd y(m);
    for (int n = 0; n < big_n; ++n) {
        Eigen::Map<Eigen::VectorXd, 0, Eigen::InnerStride<>> lane(y.data() + n, m / big_n,
                                                                  Eigen::InnerStride<>(big_n));
        lane = sub_adc_capture(config, mismatch, tones, capture, n);
    }
    return y;
}

Spectrum measure_spectrum(const Eigen::VectorXd& y, const AdcConfig& config) {
    if (y.size() == 0)
        throw ValidationError("measure_spectrum: empty capture");
    const Index m = y.size();
    const ComplexSequence coeffs = dft(y);
    const Index bins = m / 2 + 1;

    Spectrum spectrum;
    spectrum.bin_width = config.sample_rate / static_cast<double>(m);
    spectrum.power = 4.0 * coeffs.head(bins).cwiseAbs2();
    spectrum.power(0) *= 0.5;
    if (m % 2 == 0)
        spectrum.power(bins - 1) *= 0.5;
    return spectrum;
}

double recombination_residual(const AdcConfig& config, std::span<const ToneSpec> tones, Index num_samples) {
    const CaptureConfig capture{num_samples, true};
    const Eigen::VectorXd y =
        sample(config, MismatchSet::zeros(config.interleave_factor), tones, capture);
    Spectrum spectrum = measure_spectrum(y, config);
    for (const auto& tone : tones)
        spectrum.power(*coherent_cycles(tone, config, num_samples)) = 0.0;
    return db_or_floor(spectrum.power.maxCoeff());
}

std::vector<SpurComparison> extract_spurs(const Spectrum& spectrum, const SpurReport& predicted) {
    std::vector<SpurComparison> pairs;
    pairs.reserve(predicted.spurs.size());
    for (const auto& spur : predicted.spurs) {
        const double position = spur.frequency / spectrum.bin_width;
        const double bin = std::round(position);
        if (std::abs(position - bin) > kGridTolerance || bin < 0 || bin >= static_cast<double>(spectrum.size())) {
            std::ostringstream msg;
            msg << "predicted spur at " << spur.frequency << " Hz is not on the measurement bin grid "
                << "(incoherent capture)";
            throw ValidationError(msg.str());
        }
        const double measured = spectrum.power(static_cast<Index>(bin)) / spur.carrier_power;
        pairs.push_back({spur.frequency, spur.power_db(), db_or_floor(measured), spur.kind, spur.reference});
    }
    return pairs;
}

} // namespace tiadc
