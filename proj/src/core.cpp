#include "tiadc/core.hpp"

#include <sstream>
#include <utility>

namespace tiadc {

std::string_view to_string(MismatchKind kind) {
    switch (kind) {
    case MismatchKind::Offset: return "offset";
    case MismatchKind::Gain: return "gain";
    case MismatchKind::Skew: return "skew";
    }
    return "unknown";
}

MismatchKind parse_mismatch_kind(std::string_view text) {
    if (text == "offset") return MismatchKind::Offset;
    if (text == "gain") return MismatchKind::Gain;
    if (text == "skew") return MismatchKind::Skew;
    throw ValidationError("unknown mismatch kind '" + std::string(text) + "' (expected offset|gain|skew)");
}

AdcConfig AdcConfig::make(int interleave_factor, double sample_rate, int resolution_bits) {
    AdcConfig config{interleave_factor, sample_rate, resolution_bits};
    config.validate();
    return config;
}

void AdcConfig::validate() const {
    if (interleave_factor < 2)
        throw ValidationError("interleave factor N must be >= 2, got " + std::to_string(interleave_factor));
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate))
        throw ValidationError("sample rate must be positive and finite");
    if (resolution_bits < 1)
        throw ValidationError("resolution must be at least 1 bit");
}

MismatchSet MismatchSet::zeros(int n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

void MismatchSet::validate(const AdcConfig& config) const {
    const Index n = config.interleave_factor;
    for (auto kind : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew}) {
        const auto& seq = of(kind);
        if (seq.size() != n) {
            std::ostringstream msg;
            msg << to_string(kind) << " mismatch length " << seq.size() << " ≠ N=" << n;
            throw ValidationError(msg.str());
        }
        if (!seq.allFinite())
            throw ValidationError(std::string(to_string(kind)) + " mismatch contains non-finite entries");
    }
    if ((gains.array().abs() >= 1.0).any())
        throw ValidationError("relative gain mismatch must satisfy |g_n| < 1");
}

bool MismatchSet::is_zero() const {
    return offsets.isZero(0.0) && gains.isZero(0.0) && skews.isZero(0.0);
}

const Eigen::VectorXd& MismatchSet::of(MismatchKind kind) const {
    switch (kind) {
    case MismatchKind::Offset: return offsets;
    case MismatchKind::Gain: return gains;
    case MismatchKind::Skew: break;
    }
    return skews;
}

Eigen::VectorXd& MismatchSet::of(MismatchKind kind) {
    return const_cast<Eigen::VectorXd&>(std::as_const(*this).of(kind));
}

void ToneSpec::validate(const AdcConfig& config) const {
    if (!(frequency > 0.0) || !(frequency < config.nyquist())) {
        std::ostringstream msg;
        msg << "tone frequency " << frequency << " Hz outside the first Nyquist zone (0, " << config.nyquist()
            << ")";
        throw ValidationError(msg.str());
    }
    if (!(amplitude > 0.0) || amplitude > 1.0)
        throw ValidationError("tone amplitude must lie in (0, 1]");
    if (!std::isfinite(phase))
        throw ValidationError("tone phase must be finite");
}

Eigen::VectorXd Spectrum::frequencies() const {
    return Eigen::VectorXd::LinSpaced(size(), 0.0, static_cast<double>(size() - 1)) * bin_width;
}

double SpurPrediction::power_db() const { return db_or_floor(power); }

DistributionSpec DistributionSpec::gaussian(double sigma) {
    if (!(sigma > 0.0))
        throw ValidationError("Gaussian sigma must be positive");
    return {Kind::Gaussian, sigma};
}

DistributionSpec DistributionSpec::uniform(double step) {
    if (!(step > 0.0))
        throw ValidationError("uniform calibration step must be positive");
    return {Kind::Uniform, step};
}

std::string DistributionSpec::describe() const {
    std::ostringstream out;
    out.precision(17);
    if (kind == Kind::Gaussian)
        out << "gaussian(sigma=" << width << ")";
    else
        out << "uniform(step=" << width << ")";
    return out.str();
}

void YieldQuery::validate() const {
    if (!(yield > 0.0 && yield < 1.0))
        throw ValidationError("yield must lie strictly between 0 and 1");
    if (!std::isfinite(target_db))
        throw ValidationError("target power must be finite");
    if (kind == MismatchKind::Skew && !(signal_frequency && *signal_frequency > 0.0))
        throw ValidationError("skew queries need a positive signal frequency");
    if (kind != MismatchKind::Offset && include_dc)
        throw ValidationError("the DC term is never a gain/skew replica");
}

double fold_frequency(double f, double sample_rate) {
    const double half = 0.5 * sample_rate;
    double wrapped = std::fmod(f + half, sample_rate);
    if (wrapped < 0.0)
        wrapped += sample_rate;
    return std::abs(wrapped - half);
}

} // namespace tiadc
