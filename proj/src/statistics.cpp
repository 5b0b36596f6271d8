#include "tiadc/statistics.hpp"

#include <sstream>

namespace tiadc {

BinDistribution bin_distribution(Index n, double sigma, Index k) {
    if (n < 1)
        throw ValidationError("N must be positive");
    if (k < 0 || k >= n) {
        std::ostringstream msg;
        msg << "bin index " << k << " out of range [0, " << n << ")";
        throw ValidationError(msg.str());
    }
    if (!(sigma > 0.0))
        throw ValidationError("sigma must be positive");

    BinDistribution dist;
    dist.variance = sigma * sigma / static_cast<double>(n);
    const bool real = k == 0 || (n % 2 == 0 && 2 * k == n);
    dist.kind = real ? BinKind::RealGaussian : BinKind::CircularlySymmetric;
    if (!real && 2 * k > n) {
        dist.conjugate_mirror = true;
        dist.mirror_of = n - k;
    }
    return dist;
}

SpurInclusion SpurInclusion::offset(Index n, bool dc, bool nyquist) {
    return {dc, nyquist && n % 2 == 0, max_circ(n)};
}

SpurInclusion SpurInclusion::replicas(Index n, bool nyquist) { return {false, nyquist && n % 2 == 0, max_circ(n)}; }

SpurInclusion SpurInclusion::defaults(MismatchKind kind, Index n) {
    return kind == MismatchKind::Offset ? offset(n) : replicas(n);
}

void SpurInclusion::validate(MismatchKind kind, Index n) const {
    if (n < 2)
        throw ValidationError("N must be >= 2");
    if (include_dc && kind != MismatchKind::Offset)
        throw ValidationError("the DC bin is carrier scaling, not a gain/skew replica");
    if (include_nyquist && n % 2 != 0)
        throw ValidationError("odd N has no Nyquist bin");
    if (n_circ < 0 || n_circ > max_circ(n)) {
        std::ostringstream msg;
        msg << "n_circ=" << n_circ << " outside [0, " << max_circ(n) << "] for N=" << n;
        throw ValidationError(msg.str());
    }
    if (real_terms(n) == 0 && n_circ == 0)
        throw ValidationError("spur inclusion selects no terms");
}

double cdf_single(MismatchKind kind, BinKind bin, double p, double sigma, Index n, std::optional<double> f_sig) {
    const bool real = bin == BinKind::RealGaussian;
    switch (kind) {
    case MismatchKind::Offset: return real ? cdf_offset_real(p, sigma, n) : cdf_offset_circ(p, sigma, n);
    case MismatchKind::Gain: return real ? cdf_gain_real(p, sigma, n) : cdf_gain_circ(p, sigma, n);
    case MismatchKind::Skew: break;
    }
    if (!f_sig)
        throw ValidationError("skew CDFs need a signal frequency");
    return real ? cdf_skew_real(p, sigma, n, *f_sig) : cdf_skew_circ(p, sigma, n, *f_sig);
}

double combined_cdf(MismatchKind kind, double p, double sigma, Index n, const SpurInclusion& inclusion,
                    std::optional<double> f_sig) {
    inclusion.validate(kind, n);
    if (kind == MismatchKind::Skew && !f_sig)
        throw ValidationError("skew CDFs need a signal frequency");

    const double real = cdf_single(kind, BinKind::RealGaussian, p, sigma, n, f_sig);
    const double circ = cdf_single(kind, BinKind::CircularlySymmetric, p, sigma, n, f_sig);
    return std::pow(real, inclusion.real_terms(n)) * std::pow(circ, inclusion.n_circ);
}

} // namespace tiadc
