// Acceptance gate. Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.
#include "oracles.hpp"
#include "tiadc/tiadc.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace tiadc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

// Step-size reproduction with a one-second budget.
Outcome step_in_range(const YieldQuery& query, const AdcConfig& config, double lo, double hi) {
    const auto t0 = Clock::now();
    const StepSizeResult r = invert_yield(query, config);
    const double elapsed = seconds_since(t0);
    const double v = r.display_step();
    Outcome o;
    o.pass = v >= lo && v <= hi && elapsed < 1.0;
    o.detail = fmt("step %.4f %s, range [%.2f, %.2f], %.3f ms", v, r.display_unit().c_str(), lo, hi, elapsed * 1e3);
    return o;
}

Outcome criterion_1() {
    YieldQuery q;
    q.kind = MismatchKind::Offset;
    q.target_db = -80.0;
    q.yield = 0.99;
    q.include_dc = false;
    q.include_nyquist = false;
    return step_in_range(q, AdcConfig::make(16, 1e9, 12), 0.50, 0.60);
}

Outcome criterion_2() {
    YieldQuery q;
    q.kind = MismatchKind::Gain;
    q.target_db = -65.0;
    q.yield = 0.99;
    q.include_nyquist = true;
    return step_in_range(q, AdcConfig::make(16, 1e9, 12), 0.25, 0.29);
}

Outcome criterion_3() {
    YieldQuery q;
    q.kind = MismatchKind::Skew;
    q.target_db = -65.0;
    q.yield = 0.99;
    q.signal_frequency = 12e9;
    return step_in_range(q, AdcConfig::make(16, 64e9, 12), 32.0, 38.0);
}

Outcome criterion_4() {
    const std::uint64_t trials = 10'000'000;
    const double level = 1e-4;
    Outcome o;
    const std::pair<int, double> cases[] = {{8, 2.0}, {16, 1.0}, {32, 0.5}};
    for (auto [n, bound] : cases) {
        const auto t0 = Clock::now();
        const double gap = gaussian_gap_db(n, level, trials, 20240 + static_cast<std::uint64_t>(n));
        const bool ok = gap > 0.0 && gap <= bound;
        o.pass = o.pass && ok;
        o.detail += fmt("N=%d gap %.3f dB (0, %.1f] %.0f s; ", n, gap, bound, seconds_since(t0));
    }
    return o;
}

MismatchSet draw_single_kind(RandomStream& rng, MismatchKind kind, int n, double sigma) {
    MismatchSet set = MismatchSet::zeros(n);
    for (int i = 0; i < n; ++i)
        set.of(kind)(i) = sigma * rng.normal();
    return set;
}

Outcome criterion_5() {
    constexpr double kFloorDbfs = -200.0;
    constexpr double kExactTol = 0.01;
    constexpr double kSkewTol = 0.1;
    constexpr double kSkewPhase = 1e-3;
    RandomStream rng(555);
    double worst[3] = {0.0, 0.0, 0.0};
    long compared[3] = {0, 0, 0};
    for (int n : {2, 4, 8, 16, 32}) {
        const auto config = AdcConfig::make(n, 1e9, 12);
        const CaptureConfig capture = CaptureConfig::defaults(config);
        for (int draw = 0; draw < 20; ++draw) {
            // tone off the spur grid, somewhere in (0.05, 0.45) f_s
            CoherentTone snapped;
            do
                snapped = snap_coherent(config, config.sample_rate * (0.05 + 0.4 * rng.uniform()), capture.num_samples);
            while (snapped.on_spur_grid);
            const ToneSpec tone{snapped.frequency, 0.5 + 0.5 * rng.uniform(), 2.0 * std::numbers::pi * rng.uniform()};

            for (auto kind : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew}) {
                MismatchSet set = draw_single_kind(rng, kind, n, 1e-3);
                if (kind == MismatchKind::Skew)
                    set.skews *= kSkewPhase / (2.0 * std::numbers::pi * tone.frequency * set.skews.cwiseAbs().maxCoeff());
                const Spectrum s = measure_spectrum(sample(config, set, std::span(&tone, 1), capture), config);
                const SpurReport r = predict(kind, set, std::span(&tone, 1), config);
                const auto pairs = extract_spurs(s, r);
                const int idx = static_cast<int>(kind);
                for (std::size_t i = 0; i < pairs.size(); ++i) {
                    const double p = r.spurs[i].power_fs();
                    if (!(p > 0.0) || db(p) <= kFloorDbfs)
                        continue;
                    worst[idx] = std::max(worst[idx], std::abs(pairs[i].delta_db()));
                    ++compared[idx];
                }
            }
        }
    }
    Outcome o;
    o.pass = worst[0] < kExactTol && worst[1] < kExactTol && worst[2] < kSkewTol && compared[0] > 0 &&
             compared[1] > 0 && compared[2] > 0;
    o.detail = fmt("max |delta| offset %.2e dB (%ld spurs), gain %.2e dB (%ld), skew %.2e dB (%ld)", worst[0],
                   compared[0], worst[1], compared[1], worst[2], compared[2]);
    return o;
}

Outcome criterion_6() {
    Outcome o;
    double worst = -std::numeric_limits<double>::infinity();
    for (int n : {2, 4, 7, 16}) {
        const auto config = AdcConfig::make(n, 1e9, 12);
        const Index m = CaptureConfig::defaults(config).num_samples;
        const ToneSpec one{snap_coherent(config, 0.123e9, m).frequency, 1.0, 0.3};
        const std::vector<ToneSpec> two{{snap_coherent(config, 0.071e9, m).frequency, 0.5, 0.0},
                                        {snap_coherent(config, 0.391e9, m).frequency, 0.45, 1.2}};
        const double r1 = recombination_residual(config, std::span(&one, 1), m);
        const double r2 = recombination_residual(config, two, m);
        worst = std::max({worst, r1, r2});
        o.pass = o.pass && r1 < -250.0 && r2 < -250.0;
    }
    o.detail = fmt("worst residual %.1f dBFS (limit -250)", worst);
    return o;
}

Outcome criterion_7() {
    constexpr int n = 16;
    constexpr long trials = 100000;
    constexpr double sigma = 1.0;
    RandomStream rng(777);

    std::vector<std::vector<oracle::cplx>> bins(trials);
    std::vector<double> seq(n);
    for (long t = 0; t < trials; ++t) {
        for (auto& v : seq)
            v = sigma * rng.normal();
        bins[t] = oracle::direct_dft(seq);
    }

    Outcome o;
    // variances: E|x_k|^2 = sigma^2 / N
    int variance_fail = 0;
    for (int k = 0; k < n; ++k) {
        double sum = 0.0, sum2 = 0.0;
        for (const auto& b : bins) {
            const double v = std::norm(b[k]);
            sum += v;
            sum2 += v * v;
        }
        const double mean = sum / trials;
        const double se = std::sqrt((sum2 / trials - mean * mean) / (trials - 1));
        variance_fail += std::abs(mean - sigma * sigma / n) > 3.0 * se;
    }

    // pseudo-covariance E[x_k x_l]: sigma^2/N on (k+l) mod N = 0, zero elsewhere
    int pseudo_fail = 0;
    for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l) {
            oracle::cplx sum = 0.0;
            double sr2 = 0.0, si2 = 0.0;
            for (const auto& b : bins) {
                const oracle::cplx z = b[k] * b[l];
                sum += z;
                sr2 += z.real() * z.real();
                si2 += z.imag() * z.imag();
            }
            const oracle::cplx mean = sum / static_cast<double>(trials);
            const double var_re = sr2 / trials - mean.real() * mean.real();
            const double var_im = si2 / trials - mean.imag() * mean.imag();
            const double se = std::sqrt((var_re + var_im) / (trials - 1));
            const double expected = (k + l) % n == 0 ? sigma * sigma / n : 0.0;
            pseudo_fail += std::abs(mean - expected) > 3.0 * se;
        }

    // KS distance of each per-bin spur power against its closed-form CDF
    double ks_max = 0.0;
    const double f_sig = 1e9;
    const double sigma_s = sigma / (2.0 * std::numbers::pi * f_sig);
    for (auto kind : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew}) {
        const double kind_sigma = kind == MismatchKind::Skew ? sigma_s : sigma;
        for (int k = 0; k <= n / 2; ++k) {
            if (kind != MismatchKind::Offset && k == 0)
                continue;
            const bool real = k == 0 || 2 * k == n;
            std::vector<double> powers(trials);
            for (long t = 0; t < trials; ++t) {
                const double mag2 = std::norm(bins[t][k]);
                powers[t] = kind == MismatchKind::Offset ? (real ? 2.0 : 4.0) * mag2 : mag2;
            }
            const EmpiricalCdf ecdf(std::move(powers));
            const BinKind bk = real ? BinKind::RealGaussian : BinKind::CircularlySymmetric;
            const double ks = ecdf.ks_distance([&](double p) {
                return cdf_single(kind, bk, p, kind_sigma, n, kind == MismatchKind::Skew ? std::optional(f_sig) : std::nullopt);
            });
            ks_max = std::max(ks_max, ks);
        }
    }

    o.pass = variance_fail == 0 && pseudo_fail == 0 && ks_max < 0.006;
    o.detail = fmt("variance outliers %d/16, pseudo-covariance outliers %d/136, max KS %.4f (< 0.006)",
                   variance_fail, pseudo_fail, ks_max);
    return o;
}

Outcome criterion_8() {
    Outcome o;
    double worst_sqrt10 = 0.0;
    bool skew_exact = true;
    double worst_6db = 0.0;

    for (auto kind : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew})
        for (int n : {4, 15, 16}) {
            const auto config = AdcConfig::make(n, 64e9, 12);
            YieldQuery q;
            q.kind = kind;
            q.yield = 0.99;
            q.include_nyquist = n % 2 == 0;
            if (kind == MismatchKind::Skew)
                q.signal_frequency = 6e9;
            for (double target : {-100.0, -80.0, -65.0}) {
                q.target_db = target;
                const double a = invert_yield(q, config).step;
                q.target_db = target + 10.0;
                const double b = invert_yield(q, config).step;
                worst_sqrt10 = std::max(worst_sqrt10, std::abs(b / a / std::sqrt(10.0) - 1.0));
                if (kind == MismatchKind::Skew) {
                    q.target_db = target;
                    YieldQuery fast = q;
                    fast.signal_frequency = 12e9;
                    skew_exact = skew_exact && invert_yield(fast, config).step == 0.5 * a;
                }
            }
        }

    RandomStream rng(888);
    for (int n : {2, 3, 8, 16, 32}) {
        const auto config = AdcConfig::make(n, 1e9, 12);
        const std::vector<ToneSpec> tones{{0.1234e9, 1.0, 0.0}, {0.3111e9, 0.25, 0.7}};
        for (auto kind : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew}) {
            MismatchSet set = draw_single_kind(rng, kind, n, kind == MismatchKind::Skew ? 1e-13 : 1e-3);
            MismatchSet twice = set;
            twice.of(kind) *= 2.0;
            const SpurReport a = predict(kind, set, tones, config);
            const SpurReport b = predict(kind, twice, tones, config);
            if (a.spurs.size() != b.spurs.size()) {
                o.pass = false;
                continue;
            }
            for (std::size_t i = 0; i < a.spurs.size(); ++i) {
                if (!(a.spurs[i].power > 0.0))
                    continue;
                worst_6db = std::max(worst_6db, std::abs(b.spurs[i].power_db() - a.spurs[i].power_db() - 6.0206));
            }
        }
    }

    o.pass = o.pass && worst_sqrt10 <= 1e-6 && skew_exact && worst_6db <= 1e-6;
    o.detail = fmt("+10 dB rel. err %.1e (<= 1e-6), skew f doubling exact: %s, 2x mismatch |dB - 6.0206| %.1e (<= 1e-6)",
                   worst_sqrt10, skew_exact ? "yes" : "no", worst_6db);
    return o;
}

} // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"offset calibration step, N=16, -80 dBFS, 99 %", criterion_1},
        {"gain calibration step, N=16, -65 dBc, 99 %", criterion_2},
        {"skew calibration step, N=16, -65 dBc at 12 GHz, 99 %", criterion_3},
        {"uniform vs Gaussian bin-power CCDF gap at 1e-4, 1e7 trials", criterion_4},
        {"analytic spurs vs simulated spectrum", criterion_5},
        {"ideal recombination residual", criterion_6},
        {"DFT bin statistics of Gaussian sequences", criterion_7},
        {"scale laws", criterion_8},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failures += !o.pass;
        std::printf("criterion %d %s: %s (%s)\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
