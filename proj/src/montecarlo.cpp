#include "tiadc/montecarlo.hpp"
#include "tiadc/dft.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace tiadc {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Histogram geometry: the CCDF grid spans [-20, 20] dB in 399 steps; the fine
// histogram subdivides each step 100 times and extends 400 steps below and
// 100 steps above the grid.
constexpr int kGridPoints = 400;
constexpr double kGridStepDb = 40.0 / (kGridPoints - 1);
constexpr int kSubdivision = 100;
constexpr int kStepsBelow = 400;
constexpr int kStepsAbove = 100;
constexpr double kFineWidthDb = kGridStepDb / kSubdivision;
constexpr double kLowDb = -20.0 - kStepsBelow * kGridStepDb;
constexpr std::size_t kFineBins = static_cast<std::size_t>(kStepsBelow + kGridPoints - 1 + kStepsAbove) * kSubdivision;

// Runs `work(chunk, first_trial, count, partial)` over all chunks on a small
// worker pool and merges the per-worker partials.
template <typename Partial, typename Work, typename Merge>
Partial run_chunks(std::uint64_t trials, const MonteCarloOptions& options, Partial init, Work&& work,
                   Merge&& merge) {
    if (trials == 0)
        throw ValidationError("Monte-Carlo needs at least one trial");
    const std::uint64_t chunk = std::max<std::uint64_t>(options.chunk_trials, 1);
    const std::uint64_t chunks = (trials + chunk - 1) / chunk;
    unsigned workers = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

    std::atomic<std::uint64_t> next{0};
    std::vector<Partial> partials(workers, init);
    auto body = [&](unsigned w) {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            const std::uint64_t first = c * chunk;
            work(c, first, std::min(chunk, trials - first), partials[w]);
        }
    };
    if (workers == 1) {
        body(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(body, w);
    }
    for (unsigned w = 1; w < workers; ++w)
        merge(partials[0], partials[w]);
    return std::move(partials[0]);
}

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ULL))) {}

double RandomStream::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (spare_) {
        const double v = *spare_;
        spare_.reset();
        return v;
    }
    double u, v, s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    return u * factor;
}

double RandomStream::draw(const DistributionSpec& dist) {
    if (dist.kind == DistributionSpec::Kind::Gaussian)
        return dist.width * normal();
    return dist.width * (uniform() - 0.5);
}

void fill_mismatch(RandomStream& rng, const DistributionSpec& dist, Eigen::Ref<Eigen::MatrixXd> out) {
    for (Index c = 0; c < out.cols(); ++c)
        for (Index r = 0; r < out.rows(); ++r)
            out(r, c) = rng.draw(dist);
}

Eigen::VectorXd sample_mismatch(const DistributionSpec& dist, Index n, std::uint64_t seed) {
    if (n < 1)
        throw ValidationError("mismatch length must be positive");
    RandomStream rng(seed);
    Eigen::VectorXd out(n);
    fill_mismatch(rng, dist, out);
    return out;
}

void BinSelector::validate(Index n) const {
    if (pooled) {
        if (SpurInclusion::max_circ(n) < 1)
            throw ValidationError("no circularly-symmetric bins for N=" + std::to_string(n));
        return;
    }
    if (bin <= 0 || bin >= n || 2 * bin == n) {
        std::ostringstream msg;
        msg << "bin " << bin << " is not a circularly-symmetric bin for N=" << n << " (DC/Nyquist are real)";
        throw ValidationError(msg.str());
    }
}

Eigen::VectorXd default_ccdf_grid() {
    return Eigen::VectorXd::LinSpaced(kGridPoints, -2.0, 2.0).unaryExpr([](double e) { return std::pow(10.0, e); });
}

NormalizedPowerTally::NormalizedPowerTally() : counts_(kFineBins, 0) {}

void NormalizedPowerTally::add(double normalized_power) {
    ++total_;
    sum_ += normalized_power;
    if (!(normalized_power > 0.0)) {
        ++underflow_;
        return;
    }
    const double pos = (10.0 * std::log10(normalized_power) - kLowDb) / kFineWidthDb;
    if (pos < 0.0)
        ++underflow_;
    else if (pos >= static_cast<double>(kFineBins))
        ++overflow_;
    else
        ++counts_[static_cast<std::size_t>(pos)];
}

void NormalizedPowerTally::merge(const NormalizedPowerTally& other) {
    for (std::size_t i = 0; i < kFineBins; ++i)
        counts_[i] += other.counts_[i];
    underflow_ += other.underflow_;
    overflow_ += other.overflow_;
    total_ += other.total_;
    sum_ += other.sum_;
}

CcdfTable NormalizedPowerTally::table() const {
    CcdfTable table;
    table.thresholds = default_ccdf_grid();
    table.probabilities.resize(kGridPoints);
    table.trials = trials;
    table.samples = total_;
    table.seed = seed;

    std::uint64_t above = overflow_;
    std::size_t j = kFineBins;
    for (int i = kGridPoints - 1; i >= 0; --i) {
        const std::size_t edge = static_cast<std::size_t>(kStepsBelow + i) * kSubdivision;
        while (j > edge)
            above += counts_[--j];
        table.probabilities(i) = total_ ? static_cast<double>(above) / static_cast<double>(total_) : 0.0;
    }
    return table;
}

double NormalizedPowerTally::upper_quantile(double q) const {
    if (!(q > 0.0 && q < 1.0))
        throw ValidationError("quantile level must lie in (0, 1)");
    const double target = q * static_cast<double>(total_);
    double cum = static_cast<double>(overflow_);
    if (cum >= target)
        throw ConvergenceError("requested tail lies beyond the tally histogram");
    for (std::size_t j = kFineBins; j-- > 0;) {
        const double c = static_cast<double>(counts_[j]);
        if (cum + c >= target) {
            const double fraction = (target - cum) / c;
            const double level = kLowDb + (static_cast<double>(j) + 1.0 - fraction) * kFineWidthDb;
            return std::pow(10.0, level / 10.0);
        }
        cum += c;
    }
    throw ConvergenceError("requested tail lies below the tally histogram");
}

NormalizedPowerTally tally_bin_powers(const DistributionSpec& dist, Index n, BinSelector selector,
                                      std::uint64_t trials, std::uint64_t seed, MonteCarloOptions options) {
    selector.validate(n);
    const Index first = selector.pooled ? 1 : selector.bin;
    const Index count = selector.pooled ? SpurInclusion::max_circ(n) : 1;
    const auto rows = dft_matrix<double>(n, first, count);
    const Eigen::MatrixXd wr = rows.real();
    const Eigen::MatrixXd wi = rows.imag();
    const double bin_variance = dist.variance() / static_cast<double>(n);

    NormalizedPowerTally init;
    init.trials = trials;
    init.seed = seed;
    return run_chunks(
        trials, options, init,
        [&](std::uint64_t chunk, std::uint64_t, std::uint64_t chunk_trials, NormalizedPowerTally& acc) {
            RandomStream rng(seed, chunk);
            Eigen::MatrixXd draws(n, static_cast<Index>(chunk_trials));
            fill_mismatch(rng, dist, draws);
            const Eigen::MatrixXd power =
                ((wr * draws).array().square() + (wi * draws).array().square()) / bin_variance;
            for (Index c = 0; c < power.cols(); ++c)
                for (Index r = 0; r < power.rows(); ++r)
                    acc.add(power(r, c));
        },
        [](NormalizedPowerTally& a, const NormalizedPowerTally& b) { a.merge(b); });
}

CcdfTable empirical_ccdf(const DistributionSpec& dist, Index n, BinSelector selector, std::uint64_t trials,
                         std::uint64_t seed, MonteCarloOptions options) {
    if (trials < 10000)
        throw ValidationError("empirical CCDF needs at least 1e4 trials");
    return tally_bin_powers(dist, n, selector, trials, seed, options).table();
}

double gaussian_gap_db(Index n, double prob_level, std::uint64_t trials, std::uint64_t seed,
                       MonteCarloOptions options) {
    if (!(prob_level > 0.0 && prob_level < 1.0))
        throw ValidationError("probability level must lie in (0, 1)");
    if (prob_level * static_cast<double>(trials) < 100.0) {
        std::ostringstream msg;
        msg << "insufficient trials for the requested tail: " << trials << " x " << prob_level << " < 100";
        throw ValidationError(msg.str());
    }
    const auto tally =
        tally_bin_powers(DistributionSpec::uniform(1.0), n, BinSelector::all_circular(), trials, seed, options);
    return gaussian_gap_db(tally, prob_level);
}

double gaussian_gap_db(const NormalizedPowerTally& uniform_tally, double prob_level) {
    const double t_gauss = -std::log(prob_level);
    return 10.0 * std::log10(t_gauss / uniform_tally.upper_quantile(prob_level));
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : samples_(std::move(samples)) {
    if (samples_.empty())
        throw ValidationError("empirical CDF needs samples");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalCdf::operator()(double t) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), t);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double EmpiricalCdf::quantile(double q) const {
    if (!(q >= 0.0 && q <= 1.0))
        throw ValidationError("quantile level must lie in [0, 1]");
    const double pos = q * static_cast<double>(samples_.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, samples_.size() - 1);
    return samples_[lo] + (pos - static_cast<double>(lo)) * (samples_[hi] - samples_[lo]);
}

CcdfTable EmpiricalCdf::ccdf_table(const Eigen::VectorXd& thresholds) const {
    CcdfTable table;
    table.thresholds = thresholds;
    table.probabilities = thresholds.unaryExpr([this](double t) { return 1.0 - (*this)(t); });
    table.trials = trials;
    table.samples = samples_.size();
    table.seed = seed;
    return table;
}

Eigen::MatrixXd spur_powers(MismatchKind kind, const Eigen::MatrixXd& draws, std::optional<double> f_sig) {
    const Index n = draws.rows();
    const Index half = n / 2;
    const auto rows = dft_matrix<double>(n, 0, half + 1);
    Eigen::MatrixXd power =
        (rows.real() * draws).array().square() + (rows.imag() * draws).array().square();
    switch (kind) {
    case MismatchKind::Offset:
        power *= 4.0;
        power.row(0) *= 0.5;
        if (n % 2 == 0)
            power.row(half) *= 0.5;
        break;
    case MismatchKind::Gain: break;
    case MismatchKind::Skew: {
        if (!f_sig || !(*f_sig > 0.0))
            throw ValidationError("skew spur powers need a positive signal frequency");
        const double omega = 2.0 * std::numbers::pi * *f_sig;
        power *= omega * omega;
        break;
    }
    }
    return power;
}

EmpiricalCdf empirical_max_spur_cdf(MismatchKind kind, const DistributionSpec& dist, const AdcConfig& config,
                                    const SpurInclusion& inclusion, std::optional<double> f_sig,
                                    std::uint64_t trials, std::uint64_t seed, MonteCarloOptions options) {
    config.validate();
    const Index n = config.interleave_factor;
    inclusion.validate(kind, n);
    if (kind == MismatchKind::Skew && !f_sig)
        throw ValidationError("skew max-spur CDF needs a signal frequency");

    std::vector<double> maxima(trials);
    run_chunks(
        trials, options, 0,
        [&](std::uint64_t chunk, std::uint64_t first, std::uint64_t chunk_trials, int&) {
            RandomStream rng(seed, chunk);
            Eigen::MatrixXd draws(n, static_cast<Index>(chunk_trials));
            fill_mismatch(rng, dist, draws);
            const Eigen::MatrixXd power = spur_powers(kind, draws, f_sig);
            for (Index c = 0; c < power.cols(); ++c) {
                double worst = 0.0;
                if (inclusion.include_dc)
                    worst = std::max(worst, power(0, c));
                if (inclusion.include_nyquist && n % 2 == 0)
                    worst = std::max(worst, power(n / 2, c));
                if (inclusion.n_circ > 0)
                    worst = std::max(worst, power.col(c).segment(1, inclusion.n_circ).maxCoeff());
                maxima[first + static_cast<std::uint64_t>(c)] = worst;
            }
        },
        [](int&, const int&) {});

    EmpiricalCdf cdf(std::move(maxima));
    cdf.trials = trials;
    cdf.seed = seed;
    return cdf;
}

} // namespace tiadc
