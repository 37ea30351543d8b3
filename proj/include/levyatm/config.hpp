#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "levyatm/levy_model.hpp"

namespace levyatm {

inline constexpr const char* kLibraryVersion = "0.1.0";

/// {"preset": "black_scholes" | "toy_log" | "symmetric_stable" | "oscillatory" | "custom",
///  "sigma", "alpha", "truncation", "density": {"pieces": [...]}, "tolerances": {"abs", "rel"}}
struct ModelSpec {
    std::string preset = "toy_log";
    double sigma = 0.0;
    double alpha = 1.5;
    double truncation = 1.0;
    std::vector<PieceSpec> pieces;  ///< custom only
    Tolerance tol;
};

struct GridSpec {
    double lo = 1e-8;
    double hi = 1e-2;
    int per_decade = 4;
};

struct RunConfig {
    ModelSpec model;
    std::string command;
    GridSpec grid;
    std::uint64_t seed = 1;
    std::size_t mc_paths = 0;
    /// "closed_form", "maller_mason" or "debruijn"; empty picks closed_form for toy_log.
    std::string scaling;
    /// Absent means the default set; present and empty runs nothing.
    std::optional<std::vector<std::string>> checks;
    double vratio_lo = 0.01;
    double vratio_hi = 0.99;
    std::size_t concentration_pairs = 100;
    std::size_t concentration_paths = 20000;
    std::string out_dir = ".";
    bool force = false;
};

/// Throws ConfigError on unknown presets, bad types or violated ranges.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Canonical form: every field written, so equal configs dump to equal text.
nlohmann::json to_json(const RunConfig& cfg);
/// FNV-1a of the canonical dump without out_dir, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);
/// Re-checks the invariants after command-line overrides.
void validate(const RunConfig& cfg);

LevyModel build_model(const ModelSpec& spec);

}  // namespace levyatm
