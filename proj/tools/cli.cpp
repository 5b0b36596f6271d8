#include "cli.hpp"

#include "tiadc/io.hpp"
#include "tiadc/tiadc.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace tiadc::cli {
namespace {

using io::json;

// JSON config reader. Top-level keys name subcommands and hold objects whose
// keys are long option names without dashes, e.g.
//   {"yield": {"kind": "offset", "n": 16, "exclude-dc": true}}
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json root;
        try {
            root = json::parse(input);
        } catch (const json::parse_error& e) {
            throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
        }
        std::vector<CLI::ConfigItem> items;
        flatten(root, {}, items);
        return items;
    }

  private:
    static std::string scalar(const json& value) {
        if (value.is_string())
            return value.get<std::string>();
        return value.dump();
    }

    static void flatten(const json& node, const std::vector<std::string>& parents,
                        std::vector<CLI::ConfigItem>& items) {
        for (const auto& [key, value] : node.items()) {
            if (value.is_object()) {
                auto next = parents;
                next.push_back(key);
                flatten(value, next, items);
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array())
                for (const auto& v : value)
                    item.inputs.push_back(scalar(v));
            else
                item.inputs.push_back(scalar(value));
            items.push_back(std::move(item));
        }
    }
};

struct AdcOptions {
    int n = 4;
    double fs = 1e9;
    int bits = 12;
    bool fs_given = false;

    AdcConfig config() const { return AdcConfig::make(n, fs, bits); }
};

struct MismatchSource {
    std::string offsets;
    std::string gains;
    std::string skews;
    std::string file;
    std::string dist;
    std::uint64_t seed = 1;
};

struct Output {
    std::string format;
    std::string path;
};

void add_adc_options(CLI::App* sub, AdcOptions& adc) {
    sub->add_option("--n", adc.n, "Interleave factor N")->capture_default_str();
    sub->add_option("--fs", adc.fs, "Sample rate in Hz")->capture_default_str();
    sub->add_option("--bits", adc.bits, "Resolution in bits")->capture_default_str();
}

void add_mismatch_options(CLI::App* sub, MismatchSource& src) {
    sub->add_option("--offsets", src.offsets, "Inline offsets, full-scale units (comma separated)");
    sub->add_option("--gains", src.gains, "Inline relative gains, 0.01 = 1 % (comma separated)");
    sub->add_option("--skews", src.skews, "Inline skews in seconds (comma separated)");
    sub->add_option("--mismatch-file", src.file, "Mismatch file: 1 column (selected kind) or offset,gain,skew");
    sub->add_option("--dist", src.dist, "Draw the selected kind from gaussian:SIGMA or uniform:STEP");
    sub->add_option("--seed", src.seed, "Seed for --dist draws")->capture_default_str();
}

void add_output_options(CLI::App* sub, Output& out, const std::string& default_format,
                        const std::string& formats) {
    out.format = default_format;
    sub->add_option("--format", out.format, "Output format (" + formats + ")")->capture_default_str();
    sub->add_option("--output,-o", out.path, "Write to this file instead of stdout");
}

std::uint64_t parse_count(const std::string& text, const char* what) {
    const Eigen::VectorXd v = io::parse_list(text);
    if (v.size() != 1 || !(v(0) >= 1.0) || v(0) != std::floor(v(0)) || v(0) > 1e15)
        throw ValidationError(std::string(what) + " must be a positive integer (scientific notation allowed)");
    return static_cast<std::uint64_t>(v(0));
}

DistributionSpec parse_distribution(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ValidationError("--dist expects gaussian:SIGMA or uniform:STEP, got '" + text + "'");
    const std::string name = text.substr(0, colon);
    const Eigen::VectorXd width = io::parse_list(text.substr(colon + 1));
    if (width.size() != 1)
        throw ValidationError("--dist takes a single width");
    if (name == "gaussian")
        return DistributionSpec::gaussian(width(0));
    if (name == "uniform")
        return DistributionSpec::uniform(width(0));
    throw ValidationError("unknown distribution '" + name + "'");
}

std::vector<ToneSpec> parse_tones(const std::vector<std::string>& specs) {
    std::vector<ToneSpec> tones;
    for (const auto& spec : specs) {
        std::string normalized = spec;
        std::replace(normalized.begin(), normalized.end(), ':', ',');
        const Eigen::VectorXd fields = io::parse_list(normalized);
        if (fields.size() < 1 || fields.size() > 3)
            throw ValidationError("--tone expects FREQ[:AMPLITUDE[:PHASE]], got '" + spec + "'");
        ToneSpec tone;
        tone.frequency = fields(0);
        if (fields.size() > 1)
            tone.amplitude = fields(1);
        if (fields.size() > 2)
            tone.phase = fields(2);
        tones.push_back(tone);
    }
    return tones;
}

void check_length(const Eigen::VectorXd& v, int n) {
    if (v.size() != n)
        throw ValidationError("mismatch length " + std::to_string(v.size()) + " ≠ N=" + std::to_string(n));
}

// Exactly one source: inline lists, a file, or a distribution draw.
MismatchSet resolve_mismatch(const MismatchSource& src, int n, std::optional<MismatchKind> kind) {
    const bool inline_given = !src.offsets.empty() || !src.gains.empty() || !src.skews.empty();
    const int sources = (inline_given ? 1 : 0) + (src.file.empty() ? 0 : 1) + (src.dist.empty() ? 0 : 1);
    if (sources != 1)
        throw ValidationError("give exactly one mismatch source: inline lists, --mismatch-file, or --dist");

    MismatchSet set = MismatchSet::zeros(n);
    if (inline_given) {
        const std::pair<const std::string*, MismatchKind> lists[] = {
            {&src.offsets, MismatchKind::Offset}, {&src.gains, MismatchKind::Gain}, {&src.skews, MismatchKind::Skew}};
        for (const auto& [text, k] : lists) {
            if (text->empty())
                continue;
            Eigen::VectorXd v = io::parse_list(*text);
            check_length(v, n);
            set.of(k) = v;
        }
    } else if (!src.file.empty()) {
        const auto contents = io::read_mismatch_file(src.file);
        if (contents.full) {
            check_length(contents.full->offsets, n);
            set = *contents.full;
        } else {
            if (!kind)
                throw ValidationError("a one-column mismatch file needs --kind");
            check_length(*contents.single, n);
            set.of(*kind) = *contents.single;
        }
    } else {
        if (!kind)
            throw ValidationError("--dist needs --kind to select the mismatch it applies to");
        set.of(*kind) = sample_mismatch(parse_distribution(src.dist), n, src.seed);
    }
    set.validate(AdcConfig{n, 1.0, 12});
    return set;
}

json source_json(const MismatchSource& src) {
    json j = json::object();
    if (!src.offsets.empty()) j["offsets"] = src.offsets;
    if (!src.gains.empty()) j["gains"] = src.gains;
    if (!src.skews.empty()) j["skews"] = src.skews;
    if (!src.file.empty()) j["mismatch_file"] = src.file;
    if (!src.dist.empty()) {
        j["dist"] = src.dist;
        j["seed"] = src.seed;
    }
    return j;
}

json adc_json(const AdcOptions& adc) { return json{{"n", adc.n}, {"fs_hz", adc.fs}, {"bits", adc.bits}}; }

void check_format(const Output& output, std::initializer_list<std::string_view> allowed) {
    for (auto a : allowed)
        if (output.format == a)
            return;
    throw ValidationError("unsupported --format '" + output.format + "'");
}

// Pending output: everything is rendered before any file is touched.
struct Emission {
    std::string path;
    std::string contents;
};

void flush(const std::vector<Emission>& emissions, std::ostream& out) {
    for (const auto& e : emissions) {
        if (e.path.empty())
            out << e.contents;
        else
            io::write_file_atomic(e.path, e.contents);
    }
}

std::string csv_header(const json& meta) { return "# " + meta.dump() + "\n"; }

// ---------------------------------------------------------------- predict

struct PredictArgs {
    AdcOptions adc;
    MismatchSource src;
    std::string kind;
    std::vector<std::string> tones;
    Output output;
};

std::vector<Emission> cmd_predict(const PredictArgs& a) {
    check_format(a.output, {"csv", "json"});
    if (a.kind.empty())
        throw ValidationError("--kind is required");
    const MismatchKind kind = parse_mismatch_kind(a.kind);
    const AdcConfig config = a.adc.config();
    const MismatchSet set = resolve_mismatch(a.src, config.interleave_factor, kind);
    const auto tones = parse_tones(a.tones);
    if (kind != MismatchKind::Offset && tones.empty())
        throw ValidationError("gain and skew predictions need at least one --tone");

    SpurReport report = predict(kind, set, tones, config);
    std::erase_if(report.spurs, [](const SpurPrediction& s) { return !(s.power > 0.0); });

    json params = adc_json(a.adc);
    params["kind"] = a.kind;
    params["source"] = source_json(a.src);
    params["tones"] = a.tones;
    const json meta = io::metadata("predict", params, a.src.dist.empty() ? std::nullopt : std::optional(a.src.seed));

    std::ostringstream body;
    if (a.output.format == "json") {
        json out{{"metadata", meta}, {"report", io::to_json(report)}};
        body << out.dump(2) << '\n';
    } else {
        body << csv_header(meta);
        io::write_spur_table_csv(body, report);
    }
    return {{a.output.path, body.str()}};
}

// --------------------------------------------------------------- simulate

struct SimulateArgs {
    AdcOptions adc;
    MismatchSource src;
    std::string kind;
    std::vector<std::string> tones;
    std::string samples;
    std::string spectrum_out;
    std::string spurs_out;
    Output output;
};

constexpr double kResidualLimitDbfs = -250.0;
constexpr double kComparisonFloorDbfs = -200.0;

std::vector<Emission> cmd_simulate(const SimulateArgs& a, std::ostream& err) {
    check_format(a.output, {"json", "text"});
    const AdcConfig config = a.adc.config();
    std::optional<MismatchKind> kind;
    if (!a.kind.empty())
        kind = parse_mismatch_kind(a.kind);
    const MismatchSet set = resolve_mismatch(a.src, config.interleave_factor, kind);
    CaptureConfig capture = CaptureConfig::defaults(config);
    if (!a.samples.empty())
        capture.num_samples = static_cast<Index>(parse_count(a.samples, "--samples"));
    capture.validate(config);

    const auto requested = parse_tones(a.tones);
    if (requested.empty())
        throw ValidationError("simulate needs at least one --tone");
    std::vector<ToneSpec> tones;
    std::vector<std::string> warnings;
    json tone_json = json::array();
    for (const auto& r : requested) {
        r.validate(config);
        const CoherentTone snapped = snap_coherent(config, r.frequency, capture.num_samples);
        tones.push_back({snapped.frequency, r.amplitude, r.phase});
        if (snapped.on_spur_grid)
            warnings.push_back(snapped.warning);
        tone_json.push_back({{"requested_hz", r.frequency},
                             {"frequency_hz", snapped.frequency},
                             {"cycles", snapped.cycles},
                             {"amplitude", r.amplitude},
                             {"on_spur_grid", snapped.on_spur_grid}});
    }

    const Eigen::VectorXd y = sample(config, set, tones, capture);
    const Spectrum spectrum = measure_spectrum(y, config);

    std::vector<SpurComparison> pairs;
    double max_delta = 0.0;
    int active_kinds = 0;
    std::map<Index, double> predicted_fs;  // bin -> summed per-kind predictions
    for (auto k : {MismatchKind::Offset, MismatchKind::Gain, MismatchKind::Skew}) {
        if (set.of(k).isZero(0.0))
            continue;
        ++active_kinds;
        const SpurReport report = predict(k, set, tones, config);
        for (const auto& spur : report.spurs)
            predicted_fs[std::llround(spur.frequency / spectrum.bin_width)] += spur.power_fs();
        for (const auto& w : report.warnings)
            warnings.push_back(w);
        const auto kind_pairs = extract_spurs(spectrum, report);
        for (std::size_t i = 0; i < kind_pairs.size(); ++i) {
            const auto& spur = report.spurs[i];
            const auto& pair = kind_pairs[i];
            pairs.push_back(pair);
            if (spur.power_fs() > 0.0 && db(spur.power_fs()) > kComparisonFloorDbfs)
                max_delta = std::max(max_delta, std::abs(pair.delta_db()));
        }
    }
    for (const auto& w : warnings)
        err << "warning: " << w << '\n';

    json params = adc_json(a.adc);
    params["samples"] = capture.num_samples;
    params["source"] = source_json(a.src);
    params["tones"] = a.tones;
    const json meta = io::metadata("simulate", params, a.src.dist.empty() ? std::nullopt : std::optional(a.src.seed));

    json summary{{"metadata", meta}, {"tones", tone_json}, {"warnings", warnings}, {"warning_count", warnings.size()}};
    json comparisons = json::array();
    for (const auto& p : pairs)
        comparisons.push_back(io::to_json(p));
    summary["comparisons"] = comparisons;
    summary["max_abs_delta_db"] = max_delta;
    if (active_kinds > 1) {
        // Per-kind predictions are not summed coherently, so where kinds share a
        // bin the difference is the interaction the analytic model leaves out.
        double cross = 0.0;
        for (const auto& [bin, predicted] : predicted_fs)
            cross = std::max(cross, std::abs(spectrum.power(bin) - predicted));
        summary["interaction"] = {{"kinds", active_kinds},
                                  {"max_cross_term_dbfs", std::isfinite(db_or_floor(cross)) ? json(db_or_floor(cross)) : json(nullptr)}};
    }

    std::optional<double> residual;
    if (set.is_zero()) {
        residual = recombination_residual(config, tones, capture.num_samples);
        summary["recombination"] = {
            {"residual_dbfs", std::isfinite(*residual) ? json(*residual) : json(nullptr)},
            {"limit_dbfs", kResidualLimitDbfs},
            {"below_limit", *residual < kResidualLimitDbfs}};
    }

    std::ostringstream body;
    if (a.output.format == "json") {
        body << summary.dump(2) << '\n';
    } else {
        for (const auto& t : tone_json)
            body << "tone " << io::format_number(t["frequency_hz"].get<double>()) << " Hz (J=" << t["cycles"]
                 << ")\n";
        body << "kind,frequency_hz,predicted_db,measured_db,delta_db\n";
        for (const auto& p : pairs)
            body << to_string(p.kind) << ',' << io::format_number(p.frequency) << ','
                 << io::format_number(p.predicted_db) << ',' << io::format_number(p.measured_db) << ','
                 << io::format_number(p.delta_db()) << '\n';
        body << "max |delta| = " << io::format_number(max_delta) << " dB\n";
        if (summary.contains("interaction"))
            body << "cross-term (measured - summed per-kind predictions): "
                 << summary["interaction"]["max_cross_term_dbfs"].dump() << " dBFS\n";
        if (residual)
            body << "recombination residual: " << io::format_number(*residual) << " dBFS ("
                 << (*residual < kResidualLimitDbfs ? "< -250 dBFS" : ">= -250 dBFS") << ")\n";
        body << "warnings: " << warnings.size() << '\n';
    }

    std::vector<Emission> emissions{{a.output.path, body.str()}};
    if (!a.spectrum_out.empty()) {
        std::ostringstream csv;
        csv << csv_header(meta);
        io::write_spectrum_csv(csv, spectrum);
        emissions.push_back({a.spectrum_out, csv.str()});
    }
    if (!a.spurs_out.empty()) {
        std::ostringstream csv;
        csv << csv_header(meta);
        io::write_spur_pairs_csv(csv, pairs);
        emissions.push_back({a.spurs_out, csv.str()});
    }
    return emissions;
}

// -------------------------------------------------------------------- cdf

struct CdfArgs {
    AdcOptions adc;
    std::string kind;
    double sigma = 0.0;
    std::optional<double> fsig;
    bool exclude_dc = false;
    bool exclude_nyquist = false;
    double from = -120.0;
    double to = -40.0;
    double step = 1.0;
    Output output;
};

std::vector<Emission> cmd_cdf(const CdfArgs& a) {
    check_format(a.output, {"csv"});
    if (a.kind.empty())
        throw ValidationError("--kind is required");
    const MismatchKind kind = parse_mismatch_kind(a.kind);
    const Index n = a.adc.n;
    if (!(a.sigma > 0.0))
        throw ValidationError("--sigma must be positive");
    if (!(a.step > 0.0) || !(a.to >= a.from))
        throw ValidationError("need --from <= --to and --step > 0");
    const SpurInclusion inclusion = kind == MismatchKind::Offset
                                        ? SpurInclusion::offset(n, !a.exclude_dc, !a.exclude_nyquist)
                                        : SpurInclusion::replicas(n, !a.exclude_nyquist);

    json params = adc_json(a.adc);
    params["kind"] = a.kind;
    params["sigma"] = a.sigma;
    params["include_dc"] = inclusion.include_dc;
    params["include_nyquist"] = inclusion.include_nyquist;
    params["n_circ"] = inclusion.n_circ;
    if (a.fsig)
        params["fsig_hz"] = *a.fsig;

    std::ostringstream body;
    body << csv_header(io::metadata("cdf", params));
    body << "power_db,cdf_real,cdf_circ,combined\n";
    const auto points = static_cast<int>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
    for (int i = 0; i < points; ++i) {
        const double level = a.from + i * a.step;
        const double p = from_db(level);
        body << io::format_number(level) << ','
             << io::format_number(cdf_single(kind, BinKind::RealGaussian, p, a.sigma, n, a.fsig)) << ','
             << io::format_number(cdf_single(kind, BinKind::CircularlySymmetric, p, a.sigma, n, a.fsig)) << ','
             << io::format_number(combined_cdf(kind, p, a.sigma, n, inclusion, a.fsig)) << '\n';
    }
    return {{a.output.path, body.str()}};
}

// ----------------------------------------------------------- ccdf-compare

struct CcdfArgs {
    int n = 16;
    std::string trials = "1e7";
    double level = 1e-4;
    std::uint64_t seed = 1;
    int bin = 0;
    Output output;
};

constexpr double kMinExceedances = 1000.0;

std::vector<Emission> cmd_ccdf_compare(const CcdfArgs& a, std::ostream& err) {
    check_format(a.output, {"json", "csv"});
    const std::uint64_t trials = parse_count(a.trials, "--trials");
    const BinSelector selector = a.bin == 0 ? BinSelector::all_circular() : BinSelector::single(a.bin);
    selector.validate(a.n);
    if (a.level * static_cast<double>(trials) < kMinExceedances)
        err << "warning: " << trials << " trials give fewer than " << kMinExceedances
            << " expected exceedances at probability " << a.level << "\n";

    const auto tally = tally_bin_powers(DistributionSpec::uniform(1.0), a.n, selector, trials, a.seed);
    if (a.level * static_cast<double>(trials) < 100.0)
        throw ValidationError("insufficient trials for the requested tail (need level * trials >= 100)");
    const double gap = gaussian_gap_db(tally, a.level);
    const double t_uniform = tally.upper_quantile(a.level);

    json params{{"n", a.n},
                {"trials", trials},
                {"level", a.level},
                {"bins", a.bin == 0 ? json("pooled") : json(a.bin)},
                {"distribution", "uniform vs gaussian"}};
    json meta = io::metadata("ccdf-compare", params, a.seed);
    meta["gap_db"] = gap;
    meta["samples"] = tally.samples();

    std::ostringstream body;
    if (a.output.format == "json") {
        const CcdfTable table = tally.table();
        json out{{"metadata", meta},
                 {"gap_db", gap},
                 {"threshold_gaussian", -std::log(a.level)},
                 {"threshold_uniform", t_uniform},
                 {"gaussian_is_worst_case", gap > 0.0},
                 {"normalized_mean", tally.mean()}};
        json rows = json::array();
        for (Index i = 0; i < table.thresholds.size(); ++i)
            rows.push_back({{"threshold_db", db(table.thresholds(i))},
                            {"probability", table.probabilities(i)},
                            {"gaussian_probability", std::exp(-table.thresholds(i))}});
        out["ccdf"] = rows;
        body << out.dump(2) << '\n';
    } else {
        io::write_ccdf_csv(body, tally.table(), meta);
    }
    return {{a.output.path, body.str()}};
}

// ------------------------------------------------------------ yield/sweep

struct YieldArgs {
    AdcOptions adc;
    std::string kind;
    double target = -80.0;
    double yield = 0.99;
    std::optional<double> fsig;
    bool exclude_dc = false;
    bool exclude_nyquist = false;
    bool verbose = false;
    Output output;
};

YieldQuery make_query(const YieldArgs& a, double target) {
    if (a.kind.empty())
        throw ValidationError("--kind is required");
    YieldQuery q;
    q.kind = parse_mismatch_kind(a.kind);
    q.target_db = target;
    q.yield = a.yield;
    q.include_dc = q.kind == MismatchKind::Offset && !a.exclude_dc;
    q.include_nyquist = !a.exclude_nyquist && a.adc.n % 2 == 0;
    q.signal_frequency = a.fsig;
    if (a.fsig && a.adc.fs_given && !(*a.fsig < 0.5 * a.adc.fs))
        throw ValidationError("--fsig must lie below f_s/2");
    q.validate();
    return q;
}

std::vector<Emission> cmd_yield(const YieldArgs& a) {
    check_format(a.output, {"json", "text"});
    const AdcConfig config = a.adc.config();
    const YieldQuery query = make_query(a, a.target);
    const StepSizeResult result = invert_yield(query, config);

    json out{{"metadata", io::metadata("yield", adc_json(a.adc))}, {"result", io::to_json(result)}};
    if (a.verbose && query.kind != MismatchKind::Offset && config.interleave_factor % 2 == 0) {
        json variants = json::array();
        for (bool nyq : {true, false}) {
            YieldQuery variant = query;
            variant.include_nyquist = nyq;
            variants.push_back(io::to_json(invert_yield(variant, config)));
        }
        out["nyquist_variants"] = variants;
    }

    std::ostringstream body;
    if (a.output.format == "json") {
        body << out.dump(2) << '\n';
    } else {
        body << "step = " << io::format_number(result.display_step()) << ' ' << result.display_unit()
             << " (sigma = " << io::format_number(result.sigma) << ", step = " << io::format_number(result.step)
             << ")\n";
    }
    return {{a.output.path, body.str()}};
}

struct SweepArgs {
    YieldArgs base;
    double from = -90.0;
    double to = -70.0;
    double step = 1.0;
};

std::vector<Emission> cmd_sweep(const SweepArgs& a) {
    check_format(a.base.output, {"csv", "json"});
    const AdcConfig config = a.base.adc.config();
    if (!(a.step > 0.0) || !(a.to >= a.from))
        throw ValidationError("need --from <= --to and --step > 0");
    std::vector<double> targets;
    const auto points = static_cast<int>(std::floor((a.to - a.from) / a.step + 1e-9)) + 1;
    for (int i = 0; i < points; ++i)
        targets.push_back(a.from + i * a.step);

    const YieldQuery query = make_query(a.base, targets.front());
    const SpurInclusion inclusion = inclusion_for(query, config.interleave_factor);
    const auto curve =
        sweep_step_vs_target(query.kind, config, targets, query.yield, inclusion, query.signal_frequency);
    StepSizeResult unit_probe;
    unit_probe.query = query;
    const std::string unit = unit_probe.display_unit();

    json params = adc_json(a.base.adc);
    params["kind"] = a.base.kind;
    params["yield"] = query.yield;
    params["include_dc"] = inclusion.include_dc;
    params["include_nyquist"] = inclusion.include_nyquist;
    if (query.signal_frequency)
        params["fsig_hz"] = *query.signal_frequency;
    const json meta = io::metadata("sweep", params);

    std::ostringstream body;
    if (a.base.output.format == "json") {
        json records = json::array();
        for (const auto& p : curve)
            records.push_back({{"target_db", p.target_db},
                               {"sigma", p.sigma},
                               {"step", p.step},
                               {"step_display", p.display_step},
                               {"unit", unit}});
        body << json{{"metadata", meta}, {"curve", records}}.dump(2) << '\n';
    } else {
        body << csv_header(meta);
        io::write_curve_csv(body, curve, unit);
    }
    return {{a.base.output.path, body.str()}};
}

void add_yield_options(CLI::App* sub, YieldArgs& a) {
    add_adc_options(sub, a.adc);
    sub->add_option("--kind", a.kind, "offset|gain|skew");
    sub->add_option("--yield", a.yield, "Target yield in (0, 1)")->capture_default_str();
    sub->add_option("--fsig", a.fsig, "Signal frequency in Hz (skew)");
    sub->add_flag("--exclude-dc", a.exclude_dc, "Exclude the DC offset spur");
    sub->add_flag("--exclude-nyquist", a.exclude_nyquist, "Exclude the f_s/2 spur or replica");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"tiadc: mismatch spur prediction, statistics and calibration sizing for interleaved ADCs",
                 "tiadc"};
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file; command-line flags take precedence");
    app.require_subcommand(1);

    PredictArgs predict_args;
    auto* predict_cmd = app.add_subcommand("predict", "Analytic spur/replica table for a concrete mismatch set");
    add_adc_options(predict_cmd, predict_args.adc);
    add_mismatch_options(predict_cmd, predict_args.src);
    predict_cmd->add_option("--kind", predict_args.kind, "offset|gain|skew");
    predict_cmd->add_option("--tone", predict_args.tones, "FREQ[:AMPLITUDE[:PHASE]] (repeatable)");
    add_output_options(predict_cmd, predict_args.output, "csv", "csv|json");

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Time-domain capture, measured spectrum and spur comparison");
    add_adc_options(sim_cmd, sim_args.adc);
    add_mismatch_options(sim_cmd, sim_args.src);
    sim_cmd->add_option("--kind", sim_args.kind, "Mismatch kind receiving --dist or a 1-column file");
    sim_cmd->add_option("--tone", sim_args.tones, "FREQ[:AMPLITUDE[:PHASE]] (repeatable, snapped coherent)");
    sim_cmd->add_option("--samples", sim_args.samples, "Capture length M (default 4096 N)");
    sim_cmd->add_option("--spectrum-out", sim_args.spectrum_out, "CSV: frequency_hz,power_dbfs");
    sim_cmd->add_option("--spurs-out", sim_args.spurs_out, "CSV: frequency_hz,predicted_db,measured_db,kind");
    add_output_options(sim_cmd, sim_args.output, "json", "json|text");

    CdfArgs cdf_args;
    auto* cdf_cmd = app.add_subcommand("cdf", "Closed-form spur power CDFs");
    add_adc_options(cdf_cmd, cdf_args.adc);
    cdf_cmd->add_option("--kind", cdf_args.kind, "offset|gain|skew");
    cdf_cmd->add_option("--sigma", cdf_args.sigma, "Mismatch standard deviation");
    cdf_cmd->add_option("--fsig", cdf_args.fsig, "Signal frequency in Hz (skew)");
    cdf_cmd->add_flag("--exclude-dc", cdf_args.exclude_dc, "Exclude the DC offset spur");
    cdf_cmd->add_flag("--exclude-nyquist", cdf_args.exclude_nyquist, "Exclude the f_s/2 term");
    cdf_cmd->add_option("--from", cdf_args.from, "First power level in dB")->capture_default_str();
    cdf_cmd->add_option("--to", cdf_args.to, "Last power level in dB")->capture_default_str();
    cdf_cmd->add_option("--step", cdf_args.step, "Level step in dB")->capture_default_str();
    add_output_options(cdf_cmd, cdf_args.output, "csv", "csv");

    CcdfArgs ccdf_args;
    auto* ccdf_cmd = app.add_subcommand("ccdf-compare", "Uniform vs Gaussian CCDF of DFT bin power");
    ccdf_cmd->add_option("--n", ccdf_args.n, "Sequence length N")->capture_default_str();
    ccdf_cmd->add_option("--trials", ccdf_args.trials, "Monte-Carlo trials")->capture_default_str();
    ccdf_cmd->add_option("--level", ccdf_args.level, "CCDF probability level")->capture_default_str();
    ccdf_cmd->add_option("--seed", ccdf_args.seed, "Master seed")->capture_default_str();
    ccdf_cmd->add_option("--bin", ccdf_args.bin, "Single circular bin (0: pool all)")->capture_default_str();
    add_output_options(ccdf_cmd, ccdf_args.output, "json", "json|csv");

    YieldArgs yield_args;
    auto* yield_cmd = app.add_subcommand("yield", "Calibration step meeting a spur target at a yield");
    add_yield_options(yield_cmd, yield_args);
    yield_cmd->add_option("--target", yield_args.target, "Target power, dBFS (offset) or dBc")->capture_default_str();
    yield_cmd->add_flag("--verbose", yield_args.verbose, "Report Nyquist-included and -excluded variants");
    add_output_options(yield_cmd, yield_args.output, "json", "json|text");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Calibration step versus target curve");
    add_yield_options(sweep_cmd, sweep_args.base);
    sweep_cmd->add_option("--from", sweep_args.from, "First target in dB")->capture_default_str();
    sweep_cmd->add_option("--to", sweep_args.to, "Last target in dB")->capture_default_str();
    sweep_cmd->add_option("--step", sweep_args.step, "Target step in dB")->capture_default_str();
    add_output_options(sweep_cmd, sweep_args.base.output, "csv", "csv|json");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }

    for (auto* sub : {yield_cmd, sweep_cmd})
        if (sub->parsed())
            (sub == yield_cmd ? yield_args : sweep_args.base).adc.fs_given = sub->count("--fs") > 0;

    try {
        std::vector<Emission> emissions;
        if (predict_cmd->parsed())
            emissions = cmd_predict(predict_args);
        else if (sim_cmd->parsed())
            emissions = cmd_simulate(sim_args, err);
        else if (cdf_cmd->parsed())
            emissions = cmd_cdf(cdf_args);
        else if (ccdf_cmd->parsed())
            emissions = cmd_ccdf_compare(ccdf_args, err);
        else if (yield_cmd->parsed())
            emissions = cmd_yield(yield_args);
        else
            emissions = cmd_sweep(sweep_args);
        flush(emissions, out);
    } catch (const ConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kNonConvergence;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationError;
    }
    return kSuccess;
}

} // namespace tiadc::cli
