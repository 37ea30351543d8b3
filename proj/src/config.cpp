#include "levyatm/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "levyatm/errors.hpp"
#include "levyatm/presets.hpp"

namespace levyatm {

using nlohmann::json;

namespace {

const std::vector<std::string> kPresets = {"black_scholes", "toy_log", "symmetric_stable", "oscillatory", "custom"};
const std::vector<std::string> kScalings = {"", "closed_form", "maller_mason", "debruijn"};

// Infinite piece ends are written as the strings "inf" / "-inf".
double read_end(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j == "inf") return quad::kInf;
    if (j == "-inf") return -quad::kInf;
    throw ConfigError("piece ends must be numbers, \"inf\" or \"-inf\"");
}

json write_end(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

template <class T>
void read(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

bool listed(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

RunConfig parse_config(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    RunConfig c;
    const json& m = j.contains("model") ? j.at("model") : j;
    read(m, "preset", c.model.preset);
    read(m, "sigma", c.model.sigma);
    read(m, "alpha", c.model.alpha);
    if (m.contains("truncation")) c.model.truncation = read_end(m.at("truncation"));
    if (m.contains("density")) {
        const json& d = m.at("density");
        if (!d.contains("pieces") || !d.at("pieces").is_array()) throw ConfigError("density needs a 'pieces' array");
        for (const auto& p : d.at("pieces")) {
            PieceSpec s;
            if (!p.contains("lo") || !p.contains("hi")) throw ConfigError("each piece needs 'lo' and 'hi'");
            s.lo = read_end(p.at("lo"));
            s.hi = read_end(p.at("hi"));
            read(p, "coef", s.coef);
            read(p, "power", s.power);
            read(p, "exp_rate", s.exp_rate);
            read(p, "log_power", s.log_power);
            read(p, "osc_amp", s.osc_amp);
            read(p, "osc_freq", s.osc_freq);
            c.model.pieces.push_back(s);
        }
    }
    if (m.contains("tolerances")) {
        read(m.at("tolerances"), "abs", c.model.tol.abs);
        read(m.at("tolerances"), "rel", c.model.tol.rel);
    }
    read(j, "command", c.command);
    if (j.contains("t_grid")) {
        read(j.at("t_grid"), "lo", c.grid.lo);
        read(j.at("t_grid"), "hi", c.grid.hi);
        read(j.at("t_grid"), "per_decade", c.grid.per_decade);
    }
    read(j, "seed", c.seed);
    read(j, "mc_paths", c.mc_paths);
    read(j, "scaling", c.scaling);
    if (j.contains("checks")) {
        std::vector<std::string> v;
        read(j, "checks", v);
        c.checks = v;
    }
    if (j.contains("vratio")) {
        read(j.at("vratio"), "lo", c.vratio_lo);
        read(j.at("vratio"), "hi", c.vratio_hi);
    }
    if (j.contains("concentration")) {
        read(j.at("concentration"), "pairs", c.concentration_pairs);
        read(j.at("concentration"), "paths", c.concentration_paths);
    }
    read(j, "out", c.out_dir);
    read(j, "force", c.force);
    validate(c);
    return c;
}

void validate(const RunConfig& c) {
    if (!listed(kPresets, c.model.preset)) throw ConfigError("unknown preset '" + c.model.preset + "'");
    if (!listed(kScalings, c.scaling)) throw ConfigError("unknown scaling '" + c.scaling + "'");
    if (!(c.model.sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    if (c.model.preset == "black_scholes" && !(c.model.sigma > 0.0))
        throw ConfigError("black_scholes needs sigma > 0");
    if (c.model.preset != "black_scholes" && c.model.preset != "custom" &&
        !(c.model.alpha > 1.0 && c.model.alpha < 2.0))
        throw ConfigError("alpha must lie in (1, 2)");
    if (c.model.preset == "custom" && c.model.pieces.empty()) throw ConfigError("custom preset needs density pieces");
    if (!(c.model.truncation > 0.0)) throw ConfigError("truncation must be positive");
    if (!(c.model.tol.abs > 0.0) || !(c.model.tol.rel > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(c.grid.lo > 0.0) || !(c.grid.hi > c.grid.lo)) throw ConfigError("t_grid needs 0 < lo < hi");
    if (c.grid.per_decade < 1) throw ConfigError("t_grid per_decade must be at least 1");
    if (!(c.vratio_lo > 0.0) || !(c.vratio_hi > c.vratio_lo)) throw ConfigError("vratio needs 0 < lo < hi");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c) {
    json pieces = json::array();
    for (const auto& p : c.model.pieces)
        pieces.push_back({{"lo", write_end(p.lo)}, {"hi", write_end(p.hi)}, {"coef", p.coef}, {"power", p.power},
                          {"exp_rate", p.exp_rate}, {"log_power", p.log_power}, {"osc_amp", p.osc_amp},
                          {"osc_freq", p.osc_freq}});
    json model = {{"preset", c.model.preset},
                  {"sigma", c.model.sigma},
                  {"alpha", c.model.alpha},
                  {"truncation", write_end(c.model.truncation)},
                  {"density", {{"pieces", pieces}}},
                  {"tolerances", {{"abs", c.model.tol.abs}, {"rel", c.model.tol.rel}}}};
    json j = {{"model", model},
              {"command", c.command},
              {"t_grid", {{"lo", c.grid.lo}, {"hi", c.grid.hi}, {"per_decade", c.grid.per_decade}}},
              {"seed", c.seed},
              {"mc_paths", c.mc_paths},
              {"scaling", c.scaling},
              {"vratio", {{"lo", c.vratio_lo}, {"hi", c.vratio_hi}}},
              {"concentration", {{"pairs", c.concentration_pairs}, {"paths", c.concentration_paths}}},
              {"out", c.out_dir},
              {"force", c.force}};
    if (c.checks) j["checks"] = *c.checks;
    return j;
}

std::string config_hash(const RunConfig& c) {
    json j = to_json(c);
    j.erase("out");
    const std::string text = j.dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LevyModel build_model(const ModelSpec& s) {
    const auto& p = s.preset;
    if (p == "black_scholes") return black_scholes_model(s.sigma, s.tol);
    if (p == "toy_log") return toy_model(s.alpha, s.sigma, s.tol);
    if (p == "symmetric_stable") return symmetric_stable_model(s.alpha, s.truncation, s.sigma, s.tol);
    if (p == "oscillatory") return oscillatory_model(s.alpha, s.tol);
    if (p == "custom") return make_martingale_model(s.sigma, JumpDensity(s.pieces), s.tol);
    throw ConfigError("unknown preset '" + p + "'");
}

}  // namespace levyatm
