#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "levyatm/config.hpp"
#include "levyatm/errors.hpp"
#include "levyatm/io.hpp"
#include "levyatm/presets.hpp"

using namespace levyatm;
using nlohmann::json;

namespace {

PriceCurve small_curve() {
    PriceCurve c;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    c.maturities = {1e-4, 1e-3};
    c.exact_price = {0.0123456789012345678, 0.0456};
    c.mc = {McEstimate{0.0124, 1e-4}, std::nullopt};
    c.prediction_first_order = {0.012, nan};
    c.B_t = {0.01, nan};
    c.ratio = {1.23456789012345678, nan};
    c.implied_vol = {0.3, 0.31};
    c.ivol_prediction = {0.29, nan};
    return c;
}

}  // namespace

TEST(Config, DefaultsAndNestedModel) {
    const auto c = parse_config(json::parse(R"({"model": {"preset": "toy_log", "alpha": 1.4}, "seed": 5})"));
    EXPECT_EQ(c.model.preset, "toy_log");
    EXPECT_EQ(c.model.alpha, 1.4);
    EXPECT_EQ(c.seed, 5u);
    EXPECT_EQ(c.grid.lo, 1e-8);
    EXPECT_FALSE(c.checks.has_value());
    const auto flat = parse_config(json::parse(R"({"preset": "toy_log", "alpha": 1.4, "seed": 5})"));
    EXPECT_EQ(config_hash(flat), config_hash(c));
}

TEST(Config, ParseErrors) {
    for (const char* text : {R"([1, 2])",
                             R"({"preset": "heston"})",
                             R"({"preset": "toy_log", "alpha": 2.5})",
                             R"({"preset": "black_scholes", "sigma": 0})",
                             R"({"preset": "toy_log", "alpha": "x"})",
                             R"({"preset": "custom"})",
                             R"({"preset": "custom", "density": {"pieces": [{"lo": 0}]}})",
                             R"({"preset": "custom", "density": {"pieces": [{"lo": 0, "hi": "big"}]}})",
                             R"({"t_grid": {"lo": 1e-2, "hi": 1e-4}})",
                             R"({"t_grid": {"per_decade": 0}})",
                             R"({"scaling": "hill"})",
                             R"({"vratio": {"lo": 0.5, "hi": 0.1}})"}) {
        EXPECT_THROW(parse_config(json::parse(text)), ConfigError) << text;
    }
    EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, InvalidJsonFile) {
    const auto path = std::filesystem::temp_directory_path() / "levyatm_bad_config.json";
    std::ofstream(path) << "{ not json";
    EXPECT_THROW(load_config(path.string()), ConfigError);
    std::filesystem::remove(path);
}

TEST(Config, HashIgnoresOutputDirAndKeyOrder) {
    const auto a = parse_config(json::parse(R"({"seed": 3, "preset": "toy_log", "out": "/tmp/a"})"));
    const auto b = parse_config(json::parse(R"({"out": "/tmp/b", "preset": "toy_log", "seed": 3})"));
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_EQ(config_hash(a).size(), 16u);
    auto c = a;
    c.seed = 4;
    EXPECT_NE(config_hash(a), config_hash(c));
}

// Canonical JSON parses back to a config with the same hash.
TEST(ConfigProperty, CanonicalRoundTrip) {
    for (const char* name : {"toy.json", "oscillatory.json", "black_scholes.json", "symmetric_stable.json", "tempered_custom.json"}) {
        const auto c = load_config(std::string(LEVYATM_CONFIG_DIR) + "/" + name);
        const auto back = parse_config(to_json(c));
        EXPECT_EQ(config_hash(back), config_hash(c)) << name;
        EXPECT_EQ(to_json(back), to_json(c)) << name;
        EXPECT_NO_THROW(build_model(c.model)) << name;
    }
}

TEST(Config, InfinitePieceEnds) {
    const auto c = load_config(std::string(LEVYATM_CONFIG_DIR) + "/tempered_custom.json");
    ASSERT_EQ(c.model.pieces.size(), 2u);
    EXPECT_TRUE(std::isinf(c.model.pieces[0].hi));
    EXPECT_EQ(to_json(c)["model"]["density"]["pieces"][1]["lo"], "-inf");
    const auto m = build_model(c.model);
    EXPECT_TRUE(m.martingale);
}

TEST(Config, BuildModelPresets) {
    ModelSpec s;
    s.preset = "black_scholes";
    s.sigma = 0.2;
    EXPECT_TRUE(build_model(s).jumps.empty());
    s.preset = "symmetric_stable";
    EXPECT_TRUE(build_model(s).martingale);
}

TEST(Csv, RoundTripIsExact) {
    const auto c = small_curve();
    std::ostringstream os;
    write_csv(os, c, "0123456789abcdef");
    std::istringstream is(os.str());
    const auto back = read_curve_csv(is);
    EXPECT_EQ(back.config_hash, "0123456789abcdef");
    EXPECT_EQ(back.curve.maturities, c.maturities);
    EXPECT_EQ(back.curve.exact_price, c.exact_price);
    EXPECT_EQ(back.curve.ratio[0], c.ratio[0]);
    EXPECT_TRUE(std::isnan(back.curve.ratio[1]));
    ASSERT_TRUE(back.curve.mc[0].has_value());
    EXPECT_EQ(back.curve.mc[0]->std_error, 1e-4);
    EXPECT_FALSE(back.curve.mc[1].has_value());
    std::ostringstream again;
    write_csv(again, back.curve, back.config_hash);
    EXPECT_EQ(again.str(), os.str());
}

TEST(Csv, MalformedInput) {
    std::istringstream no_header("# config_hash 00\n");
    EXPECT_THROW(read_curve_csv(no_header), ConfigError);
    std::istringstream bad_header("a,b\n1,2\n");
    EXPECT_THROW(read_curve_csv(bad_header), ConfigError);
    std::istringstream short_row("t,exact,mc,mc_se,prediction,B_t,ratio,ivol,ivol_prediction\n1,2,3\n");
    EXPECT_THROW(read_curve_csv(short_row), ConfigError);
}

TEST(Compare, RefusesDifferentHashes) {
    CsvCurve a{"aaaa", small_curve()}, b{"bbbb", small_curve()};
    EXPECT_THROW(compare_curves(a, b), ConfigError);
    b.config_hash = "aaaa";
    EXPECT_EQ(compare_curves(a, b), 0.0);
    b.curve.exact_price[1] *= 1.01;
    EXPECT_NEAR(compare_curves(a, b), 1.0 - 1.0 / 1.01, 1e-12);
    b.curve.maturities[0] = 2e-4;
    EXPECT_THROW(compare_curves(a, b), ConfigError);
    CsvCurve none{"", small_curve()};
    EXPECT_THROW(compare_curves(none, none), ConfigError);
}

TEST(Reports, JsonWritesNonFiniteAsStrings) {
    VerificationReport r;
    r.check_name = "x";
    r.measured = {{"C", std::numeric_limits<double>::infinity()}, {"v", 1.5}, {"n", std::nan("")}};
    r.threshold = 0.1;
    r.pass = true;
    const auto j = to_json(r);
    EXPECT_EQ(j["measured"]["C"], "inf");
    EXPECT_EQ(j["measured"]["v"], 1.5);
    EXPECT_EQ(j["measured"]["n"], "nan");
    EXPECT_EQ(j["pass"], true);
    std::ostringstream os;
    print_report_table(os, {r});
    EXPECT_NE(os.str().find("PASS"), std::string::npos);
}

TEST(Manifest, Fields) {
    RunConfig c;
    const auto m = run_manifest(c, 1.25, {"a.csv"});
    EXPECT_EQ(m["config_hash"], config_hash(c));
    EXPECT_EQ(m["library_version"], kLibraryVersion);
    EXPECT_EQ(m["wall_time_seconds"], 1.25);
    EXPECT_EQ(m["outputs"][0], "a.csv");
    EXPECT_EQ(m["timestamp"].get<std::string>().size(), 20u);
}

TEST(Output, WritesIntoNewDirectory) {
    const auto dir = std::filesystem::temp_directory_path() / "levyatm_out_test" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto path = write_output(dir.string(), "f.txt", "hello\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "hello");
    std::filesystem::remove_all(dir.parent_path());
}
