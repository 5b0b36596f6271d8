#include "tiadc/analytic.hpp"
#include "tiadc/dft.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace tiadc {
namespace {

using cplx = std::complex<double>;

// DFT coefficients at the round-off level of the sequence are treated as
// exact zeros (a constant sequence has no non-DC content).
double negligible_amplitude(const Eigen::VectorXd& seq) {
    return 64.0 * std::numeric_limits<double>::epsilon() * seq.cwiseAbs().maxCoeff();
}

void check_length(const Eigen::VectorXd& seq, const AdcConfig& config, MismatchKind kind) {
    config.validate();
    if (seq.size() != config.interleave_factor) {
        std::ostringstream msg;
        msg << "mismatch length " << seq.size() << " ≠ N=" << config.interleave_factor << " ("
            << to_string(kind) << ")";
        throw ValidationError(msg.str());
    }
    if (!seq.allFinite())
        throw ValidationError("mismatch sequence contains non-finite entries");
}

void finalize(SpurReport& report) {
    report.total_power = 0.0;
    for (const auto& spur : report.spurs)
        report.total_power += spur.power;
    auto it = std::max_element(report.spurs.begin(), report.spurs.end(),
                               [](const auto& a, const auto& b) { return a.power < b.power; });
    if (it != report.spurs.end())
        report.worst = *it;
}

struct FoldedComponent {
    double frequency;
    cplx amplitude;  // accumulated single-sided complex amplitude
    int bin_index;
    bool edge;  // at DC or f_s/2
};

// Replica engine shared by gain and skew. `coefficient(k, tone)` returns the
// two-sided amplitude factor multiplying (A/2) e^{j phi} for the component at
// f_sig + k f_s/N.
SpurReport predict_replicas(MismatchKind kind, const Eigen::VectorXd& seq, std::span<const ToneSpec> tones,
                            const AdcConfig& config,
                            const std::function<cplx(Index, const ToneSpec&, const ComplexSequence&)>& coefficient) {
    check_length(seq, config, kind);
    for (const auto& tone : tones)
        tone.validate(config);

    const Index n = config.interleave_factor;
    const double fs = config.sample_rate;
    const double tol = 1e-9 * fs;
    const ComplexSequence spectrum = dft(seq);
    const double floor_amp = negligible_amplitude(seq);

    SpurReport report;
    for (std::size_t t = 0; t < tones.size(); ++t) {
        const ToneSpec& tone = tones[t];
        const cplx carrier_phase = std::polar(0.5 * tone.amplitude, tone.phase);
        report.carrier_shift.push_back(std::norm(1.0 + coefficient(0, tone, spectrum)));

        std::vector<FoldedComponent> folded;
        for (Index k = 1; k < n; ++k) {
            if (std::abs(spectrum(k)) <= floor_amp)
                continue;
            const cplx a = carrier_phase * coefficient(k, tone, spectrum);
            double nu = std::fmod(tone.frequency + static_cast<double>(k) * fs / static_cast<double>(n), fs);
            double f = nu <= 0.5 * fs ? nu : fs - nu;
            cplx c = nu <= 0.5 * fs ? a : std::conj(a);
            const bool edge = f < tol || std::abs(f - 0.5 * fs) < tol;
            if (edge) {
                f = f < tol ? 0.0 : 0.5 * fs;
                c += std::conj(c);
            }
            auto same = std::find_if(folded.begin(), folded.end(),
                                     [&](const auto& fc) { return std::abs(fc.frequency - f) < tol; });
            if (same != folded.end())
                same->amplitude += c;
            else
                folded.push_back({f, c, static_cast<int>(k), edge});
        }

        const double carrier_power_half = 0.5 * tone.amplitude * tone.amplitude;
        for (const auto& fc : folded) {
            const bool on_tone = std::any_of(tones.begin(), tones.end(), [&](const ToneSpec& other) {
                return std::abs(other.frequency - fc.frequency) < tol;
            });
            if (on_tone) {
                ++report.carrier_collisions;
                continue;
            }
            const double two_sided = std::norm(fc.amplitude);
            const double single_sided = fc.edge ? two_sided : 2.0 * two_sided;
            SpurPrediction spur;
            spur.frequency = fc.frequency;
            spur.power = single_sided / carrier_power_half;
            spur.reference = PowerReference::Carrier;
            spur.kind = kind;
            spur.bin_index = fc.bin_index;
            spur.tone_index = static_cast<int>(t);
            spur.carrier_power = tone.power_fs();
            report.spurs.push_back(spur);
        }
    }
    if (report.carrier_collisions > 0)
        report.warnings.push_back(std::to_string(report.carrier_collisions) +
                                  " replica(s) fold onto a carrier and are not reported as spurs");
    finalize(report);
    return report;
}

} // namespace

SpurReport predict_offset_spurs(const Eigen::VectorXd& offsets, const AdcConfig& config) {
    check_length(offsets, config, MismatchKind::Offset);
    const Index n = config.interleave_factor;
    const ComplexSequence spectrum = dft(offsets);
    const double floor_amp = negligible_amplitude(offsets);

    SpurReport report;
    for (Index k = 0; k <= n / 2; ++k) {
        const bool real_bin = k == 0 || 2 * k == n;
        const double amp = std::abs(spectrum(k)) <= floor_amp ? 0.0 : std::norm(spectrum(k));
        SpurPrediction spur;
        spur.frequency = static_cast<double>(k) * config.grid_spacing();
        spur.power = (real_bin ? 2.0 : 4.0) * amp;
        spur.reference = PowerReference::FullScale;
        spur.kind = MismatchKind::Offset;
        spur.bin_index = static_cast<int>(k);
        report.spurs.push_back(spur);
    }
    finalize(report);
    return report;
}

SpurReport predict_gain_replicas(const Eigen::VectorXd& gains, std::span<const ToneSpec> tones,
                                 const AdcConfig& config) {
    return predict_replicas(MismatchKind::Gain, gains, tones, config,
                            [](Index k, const ToneSpec&, const ComplexSequence& g) { return g(k); });
}

SpurReport predict_skew_replicas(const Eigen::VectorXd& skews, std::span<const ToneSpec> tones,
                                 const AdcConfig& config) {
    auto report = predict_replicas(MismatchKind::Skew, skews, tones, config,
                                   [](Index k, const ToneSpec& tone, const ComplexSequence& s) {
                                       const double omega = 2.0 * std::numbers::pi * tone.frequency;
                                       return cplx(0.0, -omega) * s(k);
                                   });
    double f_max = 0.0;
    for (const auto& tone : tones)
        f_max = std::max(f_max, tone.frequency);
    const double phase_error = 2.0 * std::numbers::pi * f_max * skews.cwiseAbs().maxCoeff();
    if (phase_error > kSkewFirstOrderLimit) {
        std::ostringstream msg;
        msg << "first-order skew model questionable: 2*pi*f_max*max|s| = " << phase_error << " > "
            << kSkewFirstOrderLimit;
        report.warnings.push_back(msg.str());
    }
    return report;
}

SpurReport predict(MismatchKind kind, const MismatchSet& mismatch, std::span<const ToneSpec> tones,
                   const AdcConfig& config) {
    switch (kind) {
    case MismatchKind::Offset: return predict_offset_spurs(mismatch.offsets, config);
    case MismatchKind::Gain: return predict_gain_replicas(mismatch.gains, tones, config);
    case MismatchKind::Skew: break;
    }
    return predict_skew_replicas(mismatch.skews, tones, config);
}

} // namespace tiadc
