// Domain types shared by every tiadc module.
//
// Conventions used throughout the library:
//   * the converter full-scale range is [-1, 1]; offsets and tone amplitudes
//     are expressed in these units,
//   * 0 dBFS is the power of a full-scale sine (amplitude 1),
//   * powers are carried as linear ratios; dB only appears at I/O boundaries.
#ifndef TIADC_CORE_HPP
#define TIADC_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <concepts>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tiadc {

template <typename Scalar> using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar> using ComplexVector = Vector<std::complex<Scalar>>;

using Index = Eigen::Index;

/// Raised for invalid user input (bad lengths, out-of-range parameters).
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical search cannot bracket or converge.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class MismatchKind { Offset, Gain, Skew };

std::string_view to_string(MismatchKind kind);
MismatchKind parse_mismatch_kind(std::string_view text);

struct AdcConfig {
    int interleave_factor = 2;  // N
    double sample_rate = 1.0;   // f_s in Hz
    int resolution_bits = 12;   // B

    /// Builds a validated configuration; throws ValidationError otherwise.
    static AdcConfig make(int interleave_factor, double sample_rate, int resolution_bits = 12);

    void validate() const;

    double lsb() const { return std::ldexp(1.0, 1 - resolution_bits); }
    double nyquist() const { return 0.5 * sample_rate; }
    /// Spacing of the offset-spur grid, f_s / N.
    double grid_spacing() const { return sample_rate / interleave_factor; }
};

/// LSB size of a B-bit converter on the [-1, 1] range: 2^(1-B).
inline double lsb(const AdcConfig& config) { return config.lsb(); }

/// One fabricated device: per-sub-ADC offsets (FS units), relative gains and
/// skews (seconds).
struct MismatchSet {
    Eigen::VectorXd offsets;
    Eigen::VectorXd gains;
    Eigen::VectorXd skews;

    static MismatchSet zeros(int n);

    void validate(const AdcConfig& config) const;
    bool is_zero() const;
    const Eigen::VectorXd& of(MismatchKind kind) const;
    Eigen::VectorXd& of(MismatchKind kind);
};

struct ToneSpec {
    double frequency = 0.0;  // Hz
    double amplitude = 1.0;  // FS units, (0, 1]
    double phase = 0.0;      // radians

    void validate(const AdcConfig& config) const;
    /// Carrier power relative to a full-scale sine.
    double power_fs() const { return amplitude * amplitude; }
};

/// Single-sided power spectrum in full-scale-sine units. A coherent
/// full-scale sine measures exactly 1 in its bin.
struct Spectrum {
    double bin_width = 0.0;
    Eigen::VectorXd power;

    Index size() const { return power.size(); }
    double frequency(Index bin) const { return static_cast<double>(bin) * bin_width; }
    Eigen::VectorXd frequencies() const;
};

enum class PowerReference { FullScale, Carrier };

struct SpurPrediction {
    double frequency = 0.0;  // folded into [0, f_s/2]
    double power = 0.0;      // linear, relative to `reference`
    PowerReference reference = PowerReference::FullScale;
    MismatchKind kind = MismatchKind::Offset;
    int bin_index = 0;  // originating DFT bin k of the mismatch sequence
    int tone_index = -1;
    // Power of the reference carrier relative to a full-scale sine; 1 for
    // FullScale spurs.
    double carrier_power = 1.0;

    double power_db() const;
    /// Power relative to a full-scale sine regardless of reference.
    double power_fs() const { return power * carrier_power; }
};

/// Statistical model of residual mismatch. Uniform support is
/// [-step/2, step/2].
struct DistributionSpec {
    enum class Kind { Gaussian, Uniform };

    Kind kind = Kind::Gaussian;
    double width = 1.0;  // sigma for Gaussian, step for Uniform

    static DistributionSpec gaussian(double sigma);
    static DistributionSpec uniform(double step);

    double variance() const { return kind == Kind::Gaussian ? width * width : width * width / 12.0; }
    double sigma() const { return std::sqrt(variance()); }
    std::string describe() const;
};

struct YieldQuery {
    MismatchKind kind = MismatchKind::Offset;
    double target_db = -80.0;  // dBFS for offset, dBc otherwise
    double yield = 0.99;
    bool include_dc = false;
    bool include_nyquist = true;
    std::optional<double> signal_frequency;  // Hz, skew only

    void validate() const;
};

template <std::floating_point T> T db(T p) {
    if (!(p > T(0)))
        throw std::domain_error("db: power ratio must be positive");
    return T(10) * std::log10(p);
}

/// As db() but maps zero power to -inf instead of raising.
template <std::floating_point T> T db_or_floor(T p) {
    if (p == T(0))
        return -std::numeric_limits<T>::infinity();
    return db(p);
}

template <std::floating_point T> T from_db(T level) { return std::pow(T(10), level / T(10)); }

/// Alias of frequency `f` into the first Nyquist zone [0, f_s/2].
double fold_frequency(double f, double sample_rate);

} // namespace tiadc

#endif // TIADC_CORE_HPP
