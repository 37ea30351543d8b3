#include "levyatm/io.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "levyatm/errors.hpp"

namespace levyatm {

using nlohmann::json;

namespace {

json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

double cell(const std::string& s) {
    if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw ConfigError("malformed CSV number '" + s + "'");
    }
}

}  // namespace

json to_json(const VerificationReport& r) {
    json measured = json::object();
    for (const auto& [k, v] : r.measured) measured[k] = number(v);
    return {{"check_name", r.check_name}, {"inputs", r.inputs}, {"measured", measured},
            {"threshold", number(r.threshold)}, {"pass", r.pass}, {"notes", r.notes}};
}

json to_json(const std::vector<VerificationReport>& reports) {
    json a = json::array();
    for (const auto& r : reports) a.push_back(to_json(r));
    return a;
}

void print_report_table(std::ostream& os, const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports) {
        os << std::left << std::setw(30) << r.check_name << (r.pass ? "PASS" : "FAIL");
        for (const auto& [k, v] : r.measured) os << "  " << k << '=' << std::setprecision(6) << v;
        os << '\n';
    }
}

json run_manifest(const RunConfig& cfg, double wall_seconds, const std::vector<std::string>& outputs) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::ostringstream ts;
    ts << std::put_time(std::gmtime(&now), "%Y-%m-%dT%H:%M:%SZ");
    return {{"config", to_json(cfg)},          {"config_hash", config_hash(cfg)},
            {"library_version", kLibraryVersion}, {"wall_time_seconds", wall_seconds},
            {"timestamp", ts.str()},            {"outputs", outputs}};
}

std::string write_output(const std::string& dir, const std::string& name, const std::string& text) {
    std::filesystem::create_directories(dir);
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
    return path;
}

CsvCurve read_curve_csv(std::istream& in) {
    CsvCurve c;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind("# config_hash ", 0) == 0) {
            c.config_hash = line.substr(14);
            continue;
        }
        if (!header) {
            if (line != "t,exact,mc,mc_se,prediction,B_t,ratio,ivol,ivol_prediction")
                throw ConfigError("unexpected CSV header '" + line + "'");
            header = true;
            continue;
        }
        const auto f = split(line, ',');
        if (f.size() != 9) throw ConfigError("CSV row with " + std::to_string(f.size()) + " fields");
        auto& p = c.curve;
        p.maturities.push_back(cell(f[0]));
        p.exact_price.push_back(cell(f[1]));
        if (f[2].empty()) p.mc.emplace_back(std::nullopt);
        else p.mc.emplace_back(McEstimate{cell(f[2]), cell(f[3])});
        p.prediction_first_order.push_back(cell(f[4]));
        p.B_t.push_back(cell(f[5]));
        p.ratio.push_back(cell(f[6]));
        p.implied_vol.push_back(cell(f[7]));
        p.ivol_prediction.push_back(cell(f[8]));
    }
    if (!header) throw ConfigError("CSV has no header");
    return c;
}

double compare_curves(const CsvCurve& a, const CsvCurve& b) {
    if (a.config_hash.empty() || a.config_hash != b.config_hash)
        throw ConfigError("curves carry different config hashes ('" + a.config_hash + "' vs '" + b.config_hash + "')");
    const auto& x = a.curve;
    const auto& y = b.curve;
    if (x.maturities != y.maturities) throw ConfigError("curves have different maturities");
    double worst = 0.0;
    for (std::size_t i = 0; i < x.maturities.size(); ++i)
        worst = std::max(worst, std::abs(x.exact_price[i] / y.exact_price[i] - 1.0));
    return worst;
}

}  // namespace levyatm
