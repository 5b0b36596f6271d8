// Distribution of spur and replica powers for i.i.d. zero-mean Gaussian
// mismatch of standard deviation sigma across N sub-ADCs.
//
// The DFT of such a sequence has independent entries: real N(0, sigma^2/N)
// at DC (and at N/2 for even N), circularly-symmetric CN(0, sigma^2/N)
// elsewhere, mirrored as conjugate pairs. Squared magnitudes therefore follow
// chi-squared (one degree of freedom) and exponential laws; the strongest of
// several independent spurs has the product CDF.
//
// All powers `p` are linear ratios: FS-relative for offsets, carrier-relative
// for gain and skew.
#ifndef TIADC_STATISTICS_HPP
#define TIADC_STATISTICS_HPP

#include "tiadc/core.hpp"

#include <cmath>
#include <concepts>
#include <numbers>
#include <optional>

namespace tiadc {

enum class BinKind { RealGaussian, CircularlySymmetric };

struct BinDistribution {
    BinKind kind = BinKind::RealGaussian;
    double variance = 0.0;  // sigma^2 / N
    bool conjugate_mirror = false;  // k > N/2: determined by bin N-k
    Index mirror_of = -1;
};

BinDistribution bin_distribution(Index n, double sigma, Index k);

/// Which spurs enter a max-spur constraint.
struct SpurInclusion {
    bool include_dc = false;
    bool include_nyquist = false;
    int n_circ = 0;  // independent circularly-symmetric contributors

    /// Largest meaningful n_circ: N/2 - 1 (even N) or (N - 1)/2 (odd N).
    static int max_circ(Index n) { return static_cast<int>(n % 2 == 0 ? n / 2 - 1 : (n - 1) / 2); }

    /// Offset default: DC and Nyquist as requested, every circular bin.
    static SpurInclusion offset(Index n, bool dc = true, bool nyquist = true);
    /// Gain/skew default: no DC term, Nyquist replica for even N.
    static SpurInclusion replicas(Index n, bool nyquist = true);
    static SpurInclusion defaults(MismatchKind kind, Index n);

    void validate(MismatchKind kind, Index n) const;
    int real_terms(Index n) const { return (include_dc ? 1 : 0) + (include_nyquist && n % 2 == 0 ? 1 : 0); }
};

namespace detail {

template <std::floating_point T> void check_cdf_args(T p, T sigma, Index n) {
    if (!(p >= T(0)))
        throw ValidationError("power must be non-negative");
    if (!(sigma > T(0)))
        throw ValidationError("sigma must be positive");
    if (n < 1)
        throw ValidationError("N must be positive");
}

// P(X^2 <= p) for X ~ N(0, s2): erf(sqrt(p / (2 s2))).
template <std::floating_point T> T chi2_1_cdf(T p, T scale) { return std::erf(std::sqrt(p / scale)); }

// 1 - exp(-p / mean), accurate for small arguments.
template <std::floating_point T> T exponential_cdf(T p, T mean) { return -std::expm1(-p / mean); }

} // namespace detail

/// DC/Nyquist offset spur at single-sided FS power p = 2 o~^2.
template <std::floating_point T> T cdf_offset_real(T p, T sigma, Index n) {
    detail::check_cdf_args(p, sigma, n);
    return detail::chi2_1_cdf(p, T(4) * sigma * sigma / static_cast<T>(n));
}

/// In-band offset spur at p = 4 |o~_k|^2.
template <std::floating_point T> T cdf_offset_circ(T p, T sigma, Index n) {
    detail::check_cdf_args(p, sigma, n);
    return detail::exponential_cdf(p, T(4) * sigma * sigma / static_cast<T>(n));
}

/// Nyquist gain replica, p = g~_{N/2}^2 in dBc terms.
template <std::floating_point T> T cdf_gain_real(T p, T sigma, Index n) {
    detail::check_cdf_args(p, sigma, n);
    return detail::chi2_1_cdf(p, T(2) * sigma * sigma / static_cast<T>(n));
}

template <std::floating_point T> T cdf_gain_circ(T p, T sigma, Index n) {
    detail::check_cdf_args(p, sigma, n);
    return detail::exponential_cdf(p, sigma * sigma / static_cast<T>(n));
}

/// Skew is gain with sigma_g = 2 pi f_sig sigma_s.
template <std::floating_point T> T skew_equivalent_sigma(T sigma_s, T f_sig) {
    if (!(f_sig > T(0)))
        throw ValidationError("skew CDFs need a positive signal frequency");
    return T(2) * std::numbers::pi_v<T> * f_sig * sigma_s;
}

template <std::floating_point T> T cdf_skew_real(T p, T sigma_s, Index n, T f_sig) {
    return cdf_gain_real(p, skew_equivalent_sigma(sigma_s, f_sig), n);
}

template <std::floating_point T> T cdf_skew_circ(T p, T sigma_s, Index n, T f_sig) {
    return cdf_gain_circ(p, skew_equivalent_sigma(sigma_s, f_sig), n);
}

/// Per-spur CDF of `kind` for a real-Gaussian (DC/Nyquist) or circular bin.
double cdf_single(MismatchKind kind, BinKind bin, double p, double sigma, Index n,
                  std::optional<double> f_sig = std::nullopt);

/// Probability that every included spur stays at or below p: the product of
/// the included per-spur CDFs.
double combined_cdf(MismatchKind kind, double p, double sigma, Index n, const SpurInclusion& inclusion,
                    std::optional<double> f_sig = std::nullopt);

} // namespace tiadc

#endif // TIADC_STATISTICS_HPP
