// Empirical distribution engine: draws mismatch sequences, transforms them
// and tallies DFT-bin or strongest-spur powers.
//
// Trials are split into fixed-size chunks; chunk c draws from its own stream
// derived from (seed, c). Results are merged by summing counts, so they do
// not depend on the number of worker threads.
#ifndef TIADC_MONTECARLO_HPP
#define TIADC_MONTECARLO_HPP

#include "tiadc/core.hpp"
#include "tiadc/statistics.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace tiadc {

/// mt19937_64 seeded through splitmix64 from (seed, stream), with explicit
/// uniform and polar-method normal conversions so draws are identical across
/// standard libraries.
class RandomStream {
  public:
    static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64(seed,stream)+polar-normal";

    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double normal();
    double draw(const DistributionSpec& dist);

  private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

Eigen::VectorXd sample_mismatch(const DistributionSpec& dist, Index n, std::uint64_t seed);

/// Fills every entry of `out` with an i.i.d. draw of `dist`.
void fill_mismatch(RandomStream& rng, const DistributionSpec& dist, Eigen::Ref<Eigen::MatrixXd> out);

/// One circularly-symmetric bin, or all of them pooled (bins 1 .. max_circ).
struct BinSelector {
    bool pooled = true;
    Index bin = 1;

    static BinSelector all_circular() { return {true, 0}; }
    static BinSelector single(Index k) { return {false, k}; }
    void validate(Index n) const;
};

struct CcdfTable {
    Eigen::VectorXd thresholds;     // ascending, linear
    Eigen::VectorXd probabilities;  // P(power > threshold)
    std::uint64_t trials = 0;
    std::uint64_t samples = 0;      // trials x bins per trial
    std::uint64_t seed = 0;
};

/// The default CCDF grid: 400 log-spaced points on [1e-2, 1e2].
Eigen::VectorXd default_ccdf_grid();

struct MonteCarloOptions {
    std::uint64_t chunk_trials = 1 << 14;
    unsigned threads = 0;  // 0: hardware concurrency
};

/// Tally of |x~_k|^2 / (sigma^2 / N) over the selected bins, on a fine log
/// histogram aligned with default_ccdf_grid().
class NormalizedPowerTally {
  public:
    NormalizedPowerTally();

    void add(double normalized_power);
    void merge(const NormalizedPowerTally& other);

    std::uint64_t samples() const { return total_; }
    double mean() const { return total_ ? sum_ / static_cast<double>(total_) : 0.0; }
    /// Fraction of samples above a default-grid threshold.
    CcdfTable table() const;
    /// Threshold exceeded with probability `q`.
    double upper_quantile(double q) const;

    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

  private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t underflow_ = 0;
    std::uint64_t overflow_ = 0;
    std::uint64_t total_ = 0;
    double sum_ = 0.0;
};

NormalizedPowerTally tally_bin_powers(const DistributionSpec& dist, Index n, BinSelector selector,
                                      std::uint64_t trials, std::uint64_t seed, MonteCarloOptions options = {});

/// CCDF of the normalized squared magnitude of DFT entries; converges to
/// exp(-t) for Gaussian mismatch.
CcdfTable empirical_ccdf(const DistributionSpec& dist, Index n, BinSelector selector, std::uint64_t trials,
                         std::uint64_t seed, MonteCarloOptions options = {});

/// 10 log10(t_gauss(q) / t_unif(q)) for the normalized bin power at CCDF
/// level q. The Gaussian threshold is exact (-ln q); the uniform one is
/// estimated from pooled circular bins. Positive means the Gaussian model is
/// the pessimistic one.
double gaussian_gap_db(Index n, double prob_level, std::uint64_t trials, std::uint64_t seed,
                       MonteCarloOptions options = {});
/// Same gap from an existing tally of uniform-mismatch bin powers.
double gaussian_gap_db(const NormalizedPowerTally& uniform_tally, double prob_level);

/// Sorted sample with empirical CDF and KS distance helpers.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);

    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }

    /// Fraction of samples <= t.
    double operator()(double t) const;
    double quantile(double q) const;

    template <typename Cdf> double ks_distance(Cdf&& cdf) const {
        const double n = static_cast<double>(samples_.size());
        double d = 0.0;
        for (std::size_t i = 0; i < samples_.size(); ++i) {
            const double f = cdf(samples_[i]);
            d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
        }
        return d;
    }

    /// P(X > t) on `thresholds`.
    CcdfTable ccdf_table(const Eigen::VectorXd& thresholds) const;

    std::uint64_t trials = 0;
    std::uint64_t seed = 0;

  private:
    std::vector<double> samples_;
};

/// Per-device power of the strongest included spur (FS-relative for offset,
/// carrier-relative for gain/skew).
EmpiricalCdf empirical_max_spur_cdf(MismatchKind kind, const DistributionSpec& dist, const AdcConfig& config,
                                    const SpurInclusion& inclusion, std::optional<double> f_sig,
                                    std::uint64_t trials, std::uint64_t seed, MonteCarloOptions options = {});

/// Powers of DFT bins 0 .. N/2 for each column of `draws`, scaled per kind
/// the same way as the analytic spur predictions.
Eigen::MatrixXd spur_powers(MismatchKind kind, const Eigen::MatrixXd& draws, std::optional<double> f_sig);

} // namespace tiadc

#endif // TIADC_MONTECARLO_HPP
