#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyatm/config.hpp"
#include "levyatm/pricing.hpp"
#include "levyatm/verify.hpp"

namespace levyatm {

/// Non-finite measurements are written as the strings "inf", "-inf" and "nan".
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json to_json(const std::vector<VerificationReport>& reports);
void print_report_table(std::ostream& os, const std::vector<VerificationReport>& reports);

/// Config echo, its hash, the library version, wall time and a UTC timestamp.
nlohmann::json run_manifest(const RunConfig& cfg, double wall_seconds, const std::vector<std::string>& outputs);

/// Writes text to dir/name, creating dir, and returns the path.
std::string write_output(const std::string& dir, const std::string& name, const std::string& text);

struct CsvCurve {
    std::string config_hash;
    PriceCurve curve;
};
CsvCurve read_curve_csv(std::istream& in);

/// Largest relative difference of the exact-price columns. Throws ConfigError when the
/// config hashes differ or the maturities do not line up.
double compare_curves(const CsvCurve& a, const CsvCurve& b);

}  // namespace levyatm
