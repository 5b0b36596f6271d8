// File formats: CSV for curves and spectra, JSON for scalar results, and the
// plain-text mismatch file.
//
// Mismatch file: one sub-ADC per line, either a single value (the mismatch of
// the requested kind) or three comma-separated values "offset,gain,skew".
// Blank lines, '#' comments and an optional "offset,gain,skew" header are
// accepted.
#ifndef TIADC_IO_HPP
#define TIADC_IO_HPP

#include "tiadc/analytic.hpp"
#include "tiadc/calibration.hpp"
#include "tiadc/montecarlo.hpp"
#include "tiadc/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tiadc::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view kVersion = "1.0.0";

/// "0.01,0,-2e-3" -> vector. Throws ValidationError naming the bad item.
Eigen::VectorXd parse_list(std::string_view text);

struct MismatchFileContents {
    std::optional<Eigen::VectorXd> single;  // one column
    std::optional<MismatchSet> full;        // three columns
};

MismatchFileContents parse_mismatch_file(std::istream& in, std::string_view name = "<stream>");
MismatchFileContents read_mismatch_file(const std::filesystem::path& path);

std::string power_reference_name(PowerReference reference);

void write_spectrum_csv(std::ostream& out, const Spectrum& spectrum);
void write_spur_pairs_csv(std::ostream& out, const std::vector<SpurComparison>& pairs);
void write_spur_table_csv(std::ostream& out, const SpurReport& report);
/// "# <metadata json>" line followed by threshold_db,probability rows.
void write_ccdf_csv(std::ostream& out, const CcdfTable& table, const json& metadata);
void write_curve_csv(std::ostream& out, const std::vector<SweepPoint>& curve, std::string_view unit);

json to_json(const SpurPrediction& spur);
json to_json(const SpurReport& report);
json to_json(const StepSizeResult& result);
json to_json(const SpurComparison& pair);

/// Standard metadata block attached to every output.
json metadata(std::string_view command, const json& parameters, std::optional<std::uint64_t> seed = std::nullopt);

/// Writes `contents` to `path` through a temporary file and rename, so a
/// failure never leaves a partial file behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// Number formatting used by every CSV writer (17 significant digits, -inf
/// spelled out).
std::string format_number(double value);

} // namespace tiadc::io

#endif // TIADC_IO_HPP
