#include <doctest.h>

#include "oracles.hpp"
#include "tiadc/analytic.hpp"
#include "tiadc/simulator.hpp"

#include <random>

using namespace tiadc;

namespace {

MismatchSet random_set(std::mt19937_64& rng, int n, double so, double sg, double ss) {
    MismatchSet set = MismatchSet::zeros(n);
    std::normal_distribution<double> normal;
    for (int i = 0; i < n; ++i) {
        set.offsets(i) = so * normal(rng);
        set.gains(i) = sg * normal(rng);
        set.skews(i) = ss * normal(rng);
    }
    return set;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

} // namespace

TEST_CASE("ideal sampling reproduces the tone exactly") {
    const auto config = AdcConfig::make(4, 1e9);
    const CaptureConfig capture{400, true};
    const ToneSpec tone{config.sample_rate * 37.0 / 400.0, 0.8, 0.25};
    const Eigen::VectorXd y = sample(config, MismatchSet::zeros(4), std::span(&tone, 1), capture);
    for (Index k = 0; k < 400; ++k) {
        const double expected = 0.8 * std::cos(2.0 * std::numbers::pi * tone.frequency * static_cast<double>(k) / 1e9 + 0.25);
        CHECK(std::abs(y(k) - expected) < 1e-13);
    }
}

TEST_CASE("offsets alone give the periodic extension") {
    const auto config = AdcConfig::make(4, 1e9);
    auto set = MismatchSet::zeros(4);
    set.offsets << 0.1, -0.2, 0.3, 0.05;
    const Eigen::VectorXd y = sample(config, set, {}, CaptureConfig{40, true});
    for (Index k = 0; k < 40; ++k)
        CHECK(y(k) == set.offsets(k % 4));
}

TEST_CASE("sub-ADC capture matches the strided lane") {
    const auto config = AdcConfig::make(3, 3e9);
    std::mt19937_64 rng(2);
    const auto set = random_set(rng, 3, 1e-3, 1e-3, 1e-13);
    const ToneSpec tone{3e9 * 11.0 / 300.0, 1.0, 0.0};
    const CaptureConfig capture{300, true};
    const Eigen::VectorXd y = sample(config, set, std::span(&tone, 1), capture);
    for (int n = 0; n < 3; ++n) {
        const Eigen::VectorXd lane = sub_adc_capture(config, set, std::span(&tone, 1), capture, n);
        for (Index q = 0; q < 100; ++q)
            CHECK(lane(q) == y(3 * q + n));
    }
}

TEST_CASE("simulator agrees with direct evaluation") {
    std::mt19937_64 rng(6);
    for (int n : {2, 5, 8}) {
        const auto config = AdcConfig::make(n, 1e9);
        const auto set = random_set(rng, n, 1e-3, 1e-3, 1e-13);
        const Index m = 128 * n;
        const std::vector<ToneSpec> tones{{1e9 * 17.0 / static_cast<double>(m), 0.5, 0.1},
                                          {1e9 * 41.0 / static_cast<double>(m), 0.3, -1.0}};
        const Eigen::VectorXd y = sample(config, set, tones, CaptureConfig{m, true});
        const auto ref = oracle::interleaved_capture(to_std(set.offsets), to_std(set.gains), to_std(set.skews),
                                                     {{tones[0].frequency, 0.5, 0.1}, {tones[1].frequency, 0.3, -1.0}},
                                                     1e9, m);
        for (Index k = 0; k < m; ++k)
            CHECK(std::abs(y(k) - ref[k]) < 1e-12);
    }
}

TEST_CASE("capture validation") {
    const auto config = AdcConfig::make(4, 1e9);
    CHECK_THROWS_AS(CaptureConfig({10, true}).validate(config), ValidationError);
    CHECK(CaptureConfig::defaults(config).num_samples == 4096 * 4);
    const ToneSpec off_grid{1.234567e8, 1.0, 0.0};
    CHECK_THROWS_AS(sample(config, MismatchSet::zeros(4), std::span(&off_grid, 1), CaptureConfig{4096, true}),
                    ValidationError);
    CHECK_NOTHROW(sample(config, MismatchSet::zeros(4), std::span(&off_grid, 1), CaptureConfig{4096, false}));
}

TEST_CASE("coherent snapping") {
    const auto config = AdcConfig::make(4, 1.0);
    auto t = snap_coherent(config, 0.3, 1000);
    CHECK(t.frequency == 0.3);
    CHECK(t.cycles == 300);
    CHECK_FALSE(t.on_spur_grid);
    t = snap_coherent(config, 0.3001, 1000);
    CHECK(t.frequency == 0.3);
    t = snap_coherent(config, 0.25, 1024);
    CHECK(t.on_spur_grid);
    CHECK_FALSE(t.warning.empty());
    CHECK_THROWS_AS(snap_coherent(config, 0.7, 1024), ValidationError);
}

TEST_CASE("spur grid flag matches enumeration of collisions") {
    // J is flagged iff some replica f + k fs/N folds onto the carrier, another
    // replica, or DC/Nyquist.
    const int n = 4;
    const long m = 64;
    const auto config = AdcConfig::make(n, 1.0);
    for (long j = 1; j < m / 2; ++j) {
        std::vector<long> bins;
        for (long k = 0; k < n; ++k) {
            long b = (j + k * m / n) % m;
            bins.push_back(std::min(b, m - b));
        }
        bool collide = false;
        for (std::size_t a = 0; a < bins.size(); ++a) {
            if (bins[a] == 0 || 2 * bins[a] == m)
                collide = true;
            for (std::size_t b = a + 1; b < bins.size(); ++b)
                collide |= bins[a] == bins[b];
        }
        CAPTURE(j);
        CHECK(snap_coherent(config, static_cast<double>(j) / m, m).on_spur_grid == collide);
    }
}

TEST_CASE("spectrum anchors") {
    const auto config = AdcConfig::make(4, 1.0);
    Eigen::VectorXd y(256);
    for (Index k = 0; k < 256; ++k)
        y(k) = std::cos(2.0 * std::numbers::pi * 9.0 * static_cast<double>(k) / 256.0);
    Spectrum s = measure_spectrum(y, config);
    CHECK(s.size() == 129);
    CHECK(db(s.power(9)) == doctest::Approx(0.0).epsilon(1e-12));
    s.power(9) = 0.0;
    CHECK(s.power.maxCoeff() < 1e-28);

    s = measure_spectrum(Eigen::VectorXd::Constant(64, 0.01), config);
    CHECK(db(s.power(0)) == doctest::Approx(-36.99).epsilon(1e-3));
    CHECK(s.frequency(32) == 0.5);
}

TEST_CASE("offset capture matches the offset prediction") {
    const auto config = AdcConfig::make(4, 1e9);
    auto set = MismatchSet::zeros(4);
    set.offsets(0) = 0.01;
    const Spectrum s = measure_spectrum(sample(config, set, {}, CaptureConfig{4096, true}), config);
    const auto pairs = extract_spurs(s, predict_offset_spurs(set.offsets, config));
    REQUIRE(pairs.size() == 3);
    for (const auto& p : pairs)
        CHECK(std::abs(p.delta_db()) < 0.01);
}

TEST_CASE("gain example: carrier plus three replicas") {
    const auto config = AdcConfig::make(4, 1.0);
    auto set = MismatchSet::zeros(4);
    set.gains(0) = 0.01;
    const auto snapped = snap_coherent(config, 0.3, 4096);
    const ToneSpec tone{snapped.frequency, 1.0, 0.0};
    const Spectrum s = measure_spectrum(sample(config, set, std::span(&tone, 1), CaptureConfig{4096, true}), config);
    const SpurReport r = predict_gain_replicas(set.gains, std::span(&tone, 1), config);
    const auto pairs = extract_spurs(s, r);
    REQUIRE(pairs.size() == 3);
    Spectrum rest = s;
    rest.power(snapped.cycles) = 0.0;
    for (const auto& p : pairs) {
        CHECK(std::abs(p.delta_db()) < 0.01);
        rest.power(std::lround(p.frequency * 4096.0)) = 0.0;
    }
    CHECK(db_or_floor(rest.power.maxCoeff()) < -250.0);
}

TEST_CASE("skew with 1e-3 phase error stays within 0.1 dB") {
    const auto config = AdcConfig::make(8, 8e9);
    std::mt19937_64 rng(17);
    auto set = MismatchSet::zeros(8);
    const auto snapped = snap_coherent(config, 2.9e9, 8 * 1024);
    const double f = snapped.frequency;
    set.skews = Eigen::Map<const Eigen::VectorXd>(oracle::gaussian_sequence(rng, 8, 1.0).data(), 8);
    set.skews *= 1e-3 / (2.0 * std::numbers::pi * f * set.skews.cwiseAbs().maxCoeff());
    const ToneSpec tone{f, 1.0, 0.0};
    const Spectrum s =
        measure_spectrum(sample(config, set, std::span(&tone, 1), CaptureConfig{8 * 1024, true}), config);
    for (const auto& p : extract_spurs(s, predict_skew_replicas(set.skews, std::span(&tone, 1), config)))
        CHECK(std::abs(p.delta_db()) < 0.1);
}

TEST_CASE("ideal recombination residual") {
    const auto c4 = AdcConfig::make(4, 1.0);
    const ToneSpec t4{snap_coherent(c4, 0.21, 4096).frequency, 1.0, 0.0};
    CHECK(recombination_residual(c4, std::span(&t4, 1), 4096) < -250.0);

    const auto c16 = AdcConfig::make(16, 1.0);
    const std::vector<ToneSpec> two{{snap_coherent(c16, 0.11, 16 * 4096).frequency, 0.5, 0.0},
                                    {snap_coherent(c16, 0.37, 16 * 4096).frequency, 0.5, 1.0}};
    CHECK(recombination_residual(c16, two, 16 * 4096) < -250.0);

    const auto c7 = AdcConfig::make(7, 1.0);
    const ToneSpec t7{snap_coherent(c7, 0.3, 7 * 4096).frequency, 1.0, 0.0};
    CHECK(recombination_residual(c7, std::span(&t7, 1), 7 * 4096) < -250.0);
}

TEST_CASE("extract_spurs refuses predictions off the bin grid") {
    Spectrum s;
    s.bin_width = 1.0 / 100.0;
    s.power = Eigen::VectorXd::Zero(51);
    SpurReport r;
    SpurPrediction p;
    p.frequency = 0.1234567;
    r.spurs.push_back(p);
    CHECK_THROWS_AS(extract_spurs(s, r), ValidationError);
}
