#include "tiadc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace tiadc::io {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty())
        return std::nullopt;
    if (s.front() == '+')
        s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
        return std::nullopt;
    return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

} // namespace

std::string format_number(double value) {
    if (std::isinf(value))
        return value < 0 ? "-inf" : "inf";
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

Eigen::VectorXd parse_list(std::string_view text) {
    const auto parts = split(text, ',');
    Eigen::VectorXd out(static_cast<Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto value = parse_double(parts[i]);
        if (!value)
            throw ValidationError("cannot parse list item " + std::to_string(i + 1) + " '" +
                                  std::string(trim(parts[i])) + "' as a number");
        out(static_cast<Index>(i)) = *value;
    }
    return out;
}

MismatchFileContents parse_mismatch_file(std::istream& in, std::string_view name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        if (rows.empty() && view.find("offset") != std::string_view::npos)
            continue;  // header

        std::vector<double> row;
        for (auto field : split(view, ',')) {
            const auto value = parse_double(field);
            if (!value) {
                std::ostringstream msg;
                msg << name << ":" << line_no << ": cannot parse '" << trim(field) << "' as a number";
                throw ValidationError(msg.str());
            }
            row.push_back(*value);
        }
        if (row.size() != 1 && row.size() != 3) {
            std::ostringstream msg;
            msg << name << ":" << line_no << ": expected 1 or 3 values, found " << row.size();
            throw ValidationError(msg.str());
        }
        if (columns != 0 && row.size() != columns) {
            std::ostringstream msg;
            msg << name << ":" << line_no << ": inconsistent column count (" << row.size() << " vs " << columns
                << ")";
            throw ValidationError(msg.str());
        }
        columns = row.size();
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw ValidationError(std::string(name) + ": no mismatch values found");

    const auto n = static_cast<Index>(rows.size());
    MismatchFileContents contents;
    if (columns == 1) {
        Eigen::VectorXd v(n);
        for (Index i = 0; i < n; ++i)
            v(i) = rows[static_cast<std::size_t>(i)][0];
        contents.single = v;
    } else {
        MismatchSet set = MismatchSet::zeros(static_cast<int>(n));
        for (Index i = 0; i < n; ++i) {
            const auto& r = rows[static_cast<std::size_t>(i)];
            set.offsets(i) = r[0];
            set.gains(i) = r[1];
            set.skews(i) = r[2];
        }
        contents.full = set;
    }
    return contents;
}

MismatchFileContents read_mismatch_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open mismatch file '" + path.string() + "'");
    return parse_mismatch_file(in, path.string());
}

std::string power_reference_name(PowerReference reference) {
    return reference == PowerReference::FullScale ? "dBFS" : "dBc";
}

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum) {
    out << "frequency_hz,power_dbfs\n";
    for (Index k = 0; k < spectrum.size(); ++k)
        out << format_number(spectrum.frequency(k)) << ',' << format_number(db_or_floor(spectrum.power(k))) << '\n';
}

void write_spur_pairs_csv(std::ostream& out, const std::vector<SpurComparison>& pairs) {
    out << "frequency_hz,predicted_db,measured_db,kind\n";
    for (const auto& p : pairs)
        out << format_number(p.frequency) << ',' << format_number(p.predicted_db) << ','
            << format_number(p.measured_db) << ',' << to_string(p.kind) << '\n';
}

void write_spur_table_csv(std::ostream& out, const SpurReport& report) {
    out << "frequency_hz,power_db,reference,kind,bin,tone\n";
    for (const auto& s : report.spurs)
        out << format_number(s.frequency) << ',' << format_number(s.power_db()) << ','
            << power_reference_name(s.reference) << ',' << to_string(s.kind) << ',' << s.bin_index << ','
            << s.tone_index << '\n';
}

void write_ccdf_csv(std::ostream& out, const CcdfTable& table, const json& meta) {
    out << "# " << meta.dump() << '\n';
    out << "threshold_db,probability\n";
    for (Index i = 0; i < table.thresholds.size(); ++i)
        out << format_number(db(table.thresholds(i))) << ',' << format_number(table.probabilities(i)) << '\n';
}

void write_curve_csv(std::ostream& out, const std::vector<SweepPoint>& curve, std::string_view unit) {
    out << "target_db,step_size,unit\n";
    for (const auto& p : curve)
        out << format_number(p.target_db) << ',' << format_number(p.display_step) << ',' << unit << '\n';
}

json to_json(const SpurPrediction& spur) {
    return json{{"frequency_hz", spur.frequency},
                {"power_db", number_or_null(spur.power_db())},
                {"power_linear", spur.power},
                {"reference", power_reference_name(spur.reference)},
                {"kind", to_string(spur.kind)},
                {"bin", spur.bin_index},
                {"tone", spur.tone_index}};
}

json to_json(const SpurReport& report) {
    json spurs = json::array();
    for (const auto& s : report.spurs)
        spurs.push_back(to_json(s));
    json out{{"spurs", spurs},
             {"total_power_linear", report.total_power},
             {"worst", report.worst ? to_json(*report.worst) : json(nullptr)},
             {"carrier_shift", report.carrier_shift},
             {"carrier_collisions", report.carrier_collisions},
             {"warnings", report.warnings}};
    return out;
}

json to_json(const StepSizeResult& result) {
    json query{{"kind", to_string(result.query.kind)},
               {"target_db", result.query.target_db},
               {"yield", result.query.yield},
               {"include_dc", result.inclusion.include_dc},
               {"include_nyquist", result.inclusion.include_nyquist},
               {"n_circ", result.inclusion.n_circ}};
    if (result.query.signal_frequency)
        query["signal_frequency_hz"] = *result.query.signal_frequency;
    json out{{"sigma", result.sigma},
             {"step", result.step},
             {"step_display", result.display_step()},
             {"unit", result.display_unit()},
             {"achieved_yield", result.achieved_yield},
             {"query", query}};
    if (result.step_in_lsb)
        out["step_in_lsb"] = *result.step_in_lsb;
    return out;
}

json to_json(const SpurComparison& pair) {
    return json{{"frequency_hz", pair.frequency},
                {"predicted_db", number_or_null(pair.predicted_db)},
                {"measured_db", number_or_null(pair.measured_db)},
                {"delta_db", number_or_null(pair.delta_db())},
                {"kind", to_string(pair.kind)},
                {"reference", power_reference_name(pair.reference)}};
}

json metadata(std::string_view command, const json& parameters, std::optional<std::uint64_t> seed) {
    json meta{{"tool", "tiadc"}, {"version", kVersion}, {"command", command}, {"parameters", parameters}};
    if (seed) {
        meta["seed"] = *seed;
        meta["rng"] = RandomStream::kAlgorithm;
    }
    return meta;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ValidationError("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw ValidationError("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace tiadc::io
